#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "error.hpp"
#include "patterns.hpp"
#include "rng.hpp"

namespace cdam {

namespace detail {

inline std::vector<unsigned char> read_bytes(const std::string& path)
{
    std::ifstream f(path, std::ios::binary);
    if (!f) fail(ErrorKind::io, "cannot open " + path);
    return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

inline std::uint32_t be32(const std::vector<unsigned char>& b, std::size_t off)
{
    return (std::uint32_t(b[off]) << 24) | (std::uint32_t(b[off + 1]) << 16) | (std::uint32_t(b[off + 2]) << 8) |
           std::uint32_t(b[off + 3]);
}

}  // namespace detail

struct IdxImages {
    std::size_t rows = 0;
    std::size_t cols = 0;
    Eigen::MatrixXd images;  // one column per image, values / 255
    std::vector<int> labels;
};

// `limit` caps how many items are decoded (0 = all).
inline IdxImages load_idx(const std::string& images_file, const std::string& labels_file = {},
                          std::size_t limit = 0)
{
    auto b = detail::read_bytes(images_file);
    if (b.size() < 16) fail(ErrorKind::length, images_file + ": truncated IDX header");
    if (detail::be32(b, 0) != 0x00000803u) fail(ErrorKind::format, images_file + ": bad IDX image magic");
    std::size_t count = detail::be32(b, 4), rows = detail::be32(b, 8), cols = detail::be32(b, 12);
    std::size_t len = rows * cols;
    if (b.size() < 16 + count * len) fail(ErrorKind::length, images_file + ": truncated IDX image payload");
    std::size_t take = limit ? std::min(limit, count) : count;
    IdxImages out;
    out.rows = rows;
    out.cols = cols;
    out.images.resize(static_cast<Eigen::Index>(len), static_cast<Eigen::Index>(take));
    for (std::size_t k = 0; k < take; ++k)
        for (std::size_t i = 0; i < len; ++i)
            out.images(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = b[16 + k * len + i] / 255.0;
    if (!labels_file.empty()) {
        auto l = detail::read_bytes(labels_file);
        if (l.size() < 8) fail(ErrorKind::length, labels_file + ": truncated IDX header");
        if (detail::be32(l, 0) != 0x00000801u) fail(ErrorKind::format, labels_file + ": bad IDX label magic");
        std::size_t lc = detail::be32(l, 4);
        if (l.size() < 8 + lc) fail(ErrorKind::length, labels_file + ": truncated IDX label payload");
        if (lc != count) fail(ErrorKind::format, "label count does not match image count");
        for (std::size_t k = 0; k < take; ++k) out.labels.push_back(l[8 + k]);
    }
    return out;
}

// Netpbm greyscale/colour image, samples row-major with channels minor.
struct Raster {
    std::size_t width = 0;
    std::size_t height = 0;
    std::size_t channels = 1;
    unsigned maxval = 255;
    std::vector<double> samples;
};

inline Raster read_pnm(const std::string& path)
{
    auto b = detail::read_bytes(path);
    std::size_t pos = 0;
    auto skip_ws = [&] {
        while (pos < b.size()) {
            if (b[pos] == '#')
                while (pos < b.size() && b[pos] != '\n') ++pos;
            else if (std::isspace(b[pos]))
                ++pos;
            else
                break;
        }
    };
    auto number = [&]() -> unsigned long {
        skip_ws();
        if (pos >= b.size() || !std::isdigit(b[pos])) fail(ErrorKind::format, path + ": malformed netpbm header");
        unsigned long v = 0;
        while (pos < b.size() && std::isdigit(b[pos])) v = v * 10 + (b[pos++] - '0');
        return v;
    };
    if (b.size() < 2 || b[0] != 'P') fail(ErrorKind::format, path + ": not a netpbm file");
    char kind = static_cast<char>(b[1]);
    if (kind != '2' && kind != '3' && kind != '5' && kind != '6')
        fail(ErrorKind::format, path + ": unsupported netpbm type P" + std::string(1, kind));
    pos = 2;
    Raster r;
    r.width = number();
    r.height = number();
    r.maxval = static_cast<unsigned>(number());
    if (r.maxval == 0 || r.maxval > 65535) fail(ErrorKind::format, path + ": maxval out of range");
    r.channels = (kind == '3' || kind == '6') ? 3 : 1;
    std::size_t total = r.width * r.height * r.channels;
    r.samples.reserve(total);
    if (kind == '2' || kind == '3') {
        for (std::size_t i = 0; i < total; ++i) {
            skip_ws();
            if (pos >= b.size()) fail(ErrorKind::length, path + ": truncated pixel data");
            r.samples.push_back(static_cast<double>(number()));
        }
    } else {
        ++pos;  // single whitespace after maxval
        std::size_t bps = r.maxval > 255 ? 2 : 1;
        if (b.size() < pos + total * bps) fail(ErrorKind::length, path + ": truncated pixel data");
        for (std::size_t i = 0; i < total; ++i) {
            unsigned v = bps == 2 ? (unsigned(b[pos]) << 8) | b[pos + 1] : b[pos];
            pos += bps;
            r.samples.push_back(v);
        }
    }
    return r;
}

inline void write_pgm(const std::string& path, std::size_t width, std::size_t height,
                      const std::vector<unsigned char>& pixels)
{
    std::ofstream f(path, std::ios::binary);
    if (!f) fail(ErrorKind::io, "cannot write " + path);
    f << "P5\n" << width << " " << height << "\n255\n";
    f.write(reinterpret_cast<const char*>(pixels.data()), static_cast<std::streamsize>(pixels.size()));
}

// Numeric CSV matrix read row-major; values are taken as-is.
inline std::vector<double> read_csv_matrix(const std::string& path, std::size_t& rows, std::size_t& cols)
{
    std::ifstream f(path);
    if (!f) fail(ErrorKind::io, "cannot open " + path);
    std::vector<double> v;
    std::string line;
    rows = 0;
    cols = 0;
    while (std::getline(f, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ls(line);
        std::size_t c = 0;
        double x;
        while (ls >> x) {
            v.push_back(x);
            ++c;
        }
        if (!ls.eof()) fail(ErrorKind::format, path + ": non-numeric CSV entry");
        if (rows == 0) cols = c;
        else if (c != cols) fail(ErrorKind::format, path + ": ragged CSV rows");
        ++rows;
    }
    return v;
}

struct FrameSampler {
    std::size_t flattened_length = 0;
    std::vector<std::size_t> indices;
    double normalizer = 1.0;
};

struct FrameOptions {
    // Divisor for pixel values; unset means the file's own maxval (1 for CSV).
    std::optional<double> normalizer;
};

struct FrameSet {
    PatternMatrix patterns;
    FrameSampler sampler;
    std::vector<std::string> files;
};

inline FrameSet ingest_frames(const std::string& dir, std::size_t n, std::uint64_t seed, const FrameOptions& opt = {})
{
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir)) fail(ErrorKind::io, "frame directory " + dir + " not found");
    std::vector<std::string> files;
    for (const auto& e : fs::directory_iterator(dir)) {
        if (!e.is_regular_file()) continue;
        std::string ext = e.path().extension().string();
        std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
        if (ext == ".pgm" || ext == ".ppm" || ext == ".pnm" || ext == ".csv") files.push_back(e.path().string());
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) fail(ErrorKind::ingest, "no frames in " + dir);

    FrameSet out;
    out.files = files;
    Eigen::MatrixXd x;
    std::size_t w0 = 0, h0 = 0, c0 = 0;
    for (std::size_t k = 0; k < files.size(); ++k) {
        std::vector<double> flat;
        std::size_t w, h, c;
        double norm;
        if (files[k].ends_with(".csv") || files[k].ends_with(".CSV")) {
            flat = read_csv_matrix(files[k], h, w);
            c = 1;
            norm = opt.normalizer.value_or(1.0);
        } else {
            Raster r = read_pnm(files[k]);
            flat = std::move(r.samples);
            w = r.width;
            h = r.height;
            c = r.channels;
            norm = opt.normalizer.value_or(static_cast<double>(r.maxval));
        }
        if (k == 0) {
            w0 = w;
            h0 = h;
            c0 = c;
            std::size_t len = w * h * c;
            if (n < 1 || n > len)
                fail(ErrorKind::ingest, "cannot sample " + std::to_string(n) + " of " + std::to_string(len) + " values");
            Rng rng(seed);
            auto perm = rng.permutation(len);
            out.sampler.flattened_length = len;
            out.sampler.indices.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n));
            out.sampler.normalizer = norm;
            x.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(files.size()));
        } else if (w != w0 || h != h0 || c != c0) {
            fail(ErrorKind::ingest, files[k] + ": frame dimensions differ from " + files[0]);
        }
        for (std::size_t i = 0; i < n; ++i)
            x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = flat[out.sampler.indices[i]] / norm;
    }
    out.patterns = PatternMatrix(std::move(x));
    return out;
}

// Fits a raw vector to `length` by truncation or cyclic tiling and min-max
// scales it to [0, 1]; a constant vector maps to 0.5.
inline Eigen::VectorXd fit_unit_interval(const std::vector<double>& raw, std::size_t length)
{
    if (raw.empty()) fail(ErrorKind::contract, "cannot fit an empty vector");
    Eigen::VectorXd v(static_cast<Eigen::Index>(length));
    for (std::size_t i = 0; i < length; ++i) v(static_cast<Eigen::Index>(i)) = raw[i % raw.size()];
    if (length == 0) return v;
    double lo = v.minCoeff(), hi = v.maxCoeff();
    if (!(hi > lo)) return Eigen::VectorXd::Constant(static_cast<Eigen::Index>(length), 0.5);
    return (v.array() - lo) / (hi - lo);
}

class WordVectors {
public:
    WordVectors() = default;

    static WordVectors load(const std::string& path)
    {
        std::ifstream f(path);
        if (!f) fail(ErrorKind::io, "cannot open word vectors " + path);
        return parse(f, path);
    }

    static WordVectors parse(std::istream& is, const std::string& origin = "<stream>")
    {
        WordVectors wv;
        std::string line;
        int lineno = 0;
        while (std::getline(is, line)) {
            ++lineno;
            std::istringstream ls(line);
            std::string token;
            if (!(ls >> token)) continue;
            std::vector<double> v;
            double x;
            while (ls >> x) v.push_back(x);
            if (!ls.eof() || v.empty())
                fail(ErrorKind::format, origin + ":" + std::to_string(lineno) + ": malformed vector");
            if (wv.dim_ == 0) wv.dim_ = v.size();
            else if (v.size() != wv.dim_)
                fail(ErrorKind::format, origin + ":" + std::to_string(lineno) + ": dimension " +
                                            std::to_string(v.size()) + " != " + std::to_string(wv.dim_));
            wv.table_[token] = std::move(v);
        }
        return wv;
    }

    std::size_t dim() const { return dim_; }
    std::size_t size() const { return table_.size(); }
    bool contains(const std::string& label) const { return table_.count(label) != 0; }

    const std::vector<double>& raw(const std::string& label) const
    {
        auto it = table_.find(label);
        if (it == table_.end()) fail(ErrorKind::lookup, "no vector for label '" + label + "'");
        return it->second;
    }

private:
    std::map<std::string, std::vector<double>> table_;
    std::size_t dim_ = 0;
};

// Label vector of the given length. Unknown labels fall back to a uniform
// vector seeded by a hash of the label text, or fail when fallback is off.
inline Eigen::VectorXd embed_label(const WordVectors* table, const std::string& label, std::size_t length,
                                   bool fallback = true)
{
    if (table && table->contains(label)) return fit_unit_interval(table->raw(label), length);
    if (!fallback) fail(ErrorKind::lookup, "no embedding for label '" + label + "'");
    Rng rng(stable_hash(label));
    Eigen::VectorXd v(static_cast<Eigen::Index>(length));
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = rng.uniform();
    return v;
}

}  // namespace cdam
