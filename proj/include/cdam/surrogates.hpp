#pragma once

// Seeded stand-ins for external media: correlated video frames, clothing
// silhouettes at 28x28, and character portraits.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "patterns.hpp"
#include "rng.hpp"

namespace cdam {

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// Separable Gaussian blur of a row-major image, reflecting at the borders
// (d c b a | a b c d), kernel truncated at 4 sigma.
inline std::vector<double> gaussian_blur(const std::vector<double>& img, std::size_t w, std::size_t h, double sigma)
{
    const int radius = static_cast<int>(4.0 * sigma + 0.5);
    std::vector<double> k(static_cast<std::size_t>(2 * radius + 1));
    double ks = 0.0;
    for (int i = -radius; i <= radius; ++i) ks += k[static_cast<std::size_t>(i + radius)] = std::exp(-0.5 * i * i / (sigma * sigma));
    for (double& v : k) v /= ks;
    auto reflect = [](int i, int n) {
        while (i < 0 || i >= n) i = i < 0 ? -i - 1 : 2 * n - i - 1;
        return i;
    };
    const int W = static_cast<int>(w), H = static_cast<int>(h);
    std::vector<double> tmp(img.size()), out(img.size());
    for (int y = 0; y < H; ++y)
        for (int x = 0; x < W; ++x) {
            double s = 0.0;
            for (int i = -radius; i <= radius; ++i) s += k[static_cast<std::size_t>(i + radius)] * img[static_cast<std::size_t>(y * W + reflect(x + i, W))];
            tmp[static_cast<std::size_t>(y * W + x)] = s;
        }
    for (int y = 0; y < H; ++y)
        for (int x = 0; x < W; ++x) {
            double s = 0.0;
            for (int i = -radius; i <= radius; ++i) s += k[static_cast<std::size_t>(i + radius)] * tmp[static_cast<std::size_t>(reflect(y + i, H) * W + x)];
            out[static_cast<std::size_t>(y * W + x)] = s;
        }
    return out;
}

struct FrameSurrogateOptions {
    std::size_t frames = 50;
    double rho = 0.8;                          // lag-one correlation of the latent drift
    std::vector<std::size_t> switches{17, 34};  // frames that start a fresh scene
};

// Each neuron follows a Gaussian AR(1) across frames, mapped through the
// normal CDF so entries are uniform on [0, 1].
inline PatternMatrix surrogate_frames(std::size_t n, std::uint64_t seed, const FrameSurrogateOptions& opt = {})
{
    Rng rng(seed);
    Eigen::VectorXd g(static_cast<Eigen::Index>(n));
    for (auto& v : g) v = rng.normal();
    const double keep = std::sqrt(opt.rho), fresh = std::sqrt(1.0 - opt.rho);
    Eigen::MatrixXd x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(opt.frames));
    for (std::size_t k = 0; k < opt.frames; ++k) {
        bool sw = std::find(opt.switches.begin(), opt.switches.end(), k) != opt.switches.end();
        if (sw)
            for (auto& v : g) v = rng.normal();
        else if (k > 0)
            for (auto& v : g) v = keep * v + fresh * rng.normal();
        x.col(static_cast<Eigen::Index>(k)) = g.unaryExpr([](double v) { return normal_cdf(v); });
    }
    return PatternMatrix(std::move(x));
}

namespace detail {

inline bool garment_mask(int cls, double X, double Y)
{
    auto box = [&](double x0, double x1, double y0, double y1) { return X >= x0 && X <= x1 && Y >= y0 && Y <= y1; };
    switch (cls) {
    case 0: return box(-6, 6, -8, 11) || box(-11, 11, -8, -3);                                  // tee
    case 1: return box(-6, -1, -11, 12) || box(1, 6, -11, 12) || box(-6, 6, -11, -7);            // trousers
    case 2: return box(-6, 6, -8, 11) || box(-11, -6, -8, 10) || box(6, 11, -8, 10);             // pullover
    case 3: return std::fabs(X) <= 3 + 0.35 * (Y + 10) && Y >= -10 && Y <= 12;                  // dress
    case 4: return box(-7, 7, -10, 12) || box(-12, -7, -10, 11) || box(7, 12, -10, 11);          // coat
    case 5: return box(-11, 11, 4, 6) || box(-11, 11, 9, 11) || box(-9, -5, 0, 11);              // sandal
    case 6: return (box(-6, 6, -8, 11) || box(-11, 11, -8, -4)) && !box(-1, 1, -8, 2);           // shirt
    case 7: return box(-12, 12, 3, 9) || box(-4, 12, -1, 3);                                     // sneaker
    case 8: return box(-9, 9, -4, 11) || (box(-6, 6, -10, -4) && !box(-4, 4, -8, -4));           // bag
    default: return box(-10, 10, 5, 11) || box(2, 10, -10, 5);                                   // boot
    }
}

}  // namespace detail

// 784-pixel garment-like images: ten silhouettes with random scale, shift,
// brightness and smooth texture. Column labels are returned via `classes`.
inline PatternMatrix surrogate_garments(std::size_t count, std::uint64_t seed, std::vector<int>* classes = nullptr)
{
    constexpr std::size_t side = 28;
    Rng rng(seed);
    Eigen::MatrixXd x(static_cast<Eigen::Index>(side * side), static_cast<Eigen::Index>(count));
    if (classes) classes->clear();
    for (std::size_t k = 0; k < count; ++k) {
        int cls = static_cast<int>(rng.below(10));
        double s = rng.uniform(0.85, 1.1), dx = rng.uniform(-2, 2), dy = rng.uniform(-2, 2);
        std::vector<double> mask(side * side), tex(side * side);
        for (std::size_t yy = 0; yy < side; ++yy)
            for (std::size_t xx = 0; xx < side; ++xx)
                mask[yy * side + xx] =
                    detail::garment_mask(cls, (static_cast<double>(xx) - 13.5 - dx) / s, (static_cast<double>(yy) - 13.5 - dy) / s);
        mask = gaussian_blur(mask, side, side, 0.7);
        for (double& v : tex) v = rng.normal();
        tex = gaussian_blur(tex, side, side, 2.0);
        double m = 0.0, sq = 0.0;
        for (double v : tex) m += v;
        m /= static_cast<double>(tex.size());
        for (double v : tex) sq += (v - m) * (v - m);
        double sd = std::sqrt(sq / static_cast<double>(tex.size())) + 1e-12;
        double b = rng.uniform(0.3, 1.0);
        for (std::size_t i = 0; i < side * side; ++i)
            x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
                std::clamp(mask[i] * b * (0.8 + 0.2 * tex[i] / sd), 0.0, 1.0);
        if (classes) classes->push_back(cls);
    }
    return PatternMatrix(std::move(x));
}

}  // namespace cdam
