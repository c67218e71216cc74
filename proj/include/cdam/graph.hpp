#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "rng.hpp"

namespace cdam {

struct Edge {
    std::size_t src = 0;
    std::size_t dst = 0;
    double weight = 1.0;

    friend bool operator==(const Edge&, const Edge&) = default;
};

// Vertices are pattern indices. Undirected edges are stored once with
// src <= dst and expanded on demand.
class MemoryGraph {
public:
    MemoryGraph() = default;
    MemoryGraph(std::size_t p, bool directed, bool loops_allowed = true)
        : p_(p), directed_(directed), loops_(loops_allowed)
    {
    }

    std::size_t size() const { return p_; }
    bool directed() const { return directed_; }
    bool loops_allowed() const { return loops_; }
    const std::vector<Edge>& edges() const { return edges_; }

    void add_edge(std::size_t src, std::size_t dst, double weight = 1.0)
    {
        if (src >= p_ || dst >= p_)
            fail(ErrorKind::contract, "edge (" + std::to_string(src) + "," + std::to_string(dst) +
                                          ") outside [0," + std::to_string(p_) + ")");
        if (!std::isfinite(weight)) fail(ErrorKind::contract, "non-finite edge weight");
        if (src == dst && !loops_) fail(ErrorKind::contract, "self-loop on a loop-free graph");
        if (!directed_ && src > dst) std::swap(src, dst);
        edges_.push_back({src, dst, weight});
    }

    // Both orientations of every undirected edge; a self-loop appears once.
    std::vector<Edge> expanded_edges() const
    {
        if (directed_) return edges_;
        std::vector<Edge> out;
        out.reserve(2 * edges_.size());
        for (const Edge& e : edges_) {
            out.push_back(e);
            if (e.src != e.dst) out.push_back({e.dst, e.src, e.weight});
        }
        return out;
    }

    // A(i,j) is the summed weight of edges i -> j.
    Eigen::MatrixXd adjacency() const
    {
        Eigen::MatrixXd a = Eigen::MatrixXd::Zero(p_, p_);
        for (const Edge& e : expanded_edges()) a(e.src, e.dst) += e.weight;
        return a;
    }

    // Neighbours on the undirected support, self excluded, sorted.
    std::vector<std::vector<std::size_t>> neighbors() const
    {
        std::vector<std::set<std::size_t>> s(p_);
        for (const Edge& e : edges_) {
            if (e.src == e.dst) continue;
            s[e.src].insert(e.dst);
            s[e.dst].insert(e.src);
        }
        std::vector<std::vector<std::size_t>> out(p_);
        for (std::size_t i = 0; i < p_; ++i) out[i].assign(s[i].begin(), s[i].end());
        return out;
    }

    std::uint64_t fingerprint() const;

private:
    std::size_t p_ = 0;
    bool directed_ = false;
    bool loops_ = true;
    std::vector<Edge> edges_;
};

struct NormalizedAdjacency {
    Eigen::MatrixXd entries;
    std::uint64_t source_fingerprint = 0;

    std::size_t size() const { return static_cast<std::size_t>(entries.rows()); }
};

// M = D^{-1/2} A D^{-1/2}. Directed graphs use out-degree on the row side and
// in-degree on the column side, so a directed cycle gives M = A.
inline NormalizedAdjacency normalize(const MemoryGraph& g)
{
    Eigen::MatrixXd a = g.adjacency();
    Eigen::VectorXd out = a.rowwise().sum();
    Eigen::VectorXd in = g.directed() ? Eigen::VectorXd(a.colwise().sum().transpose()) : out;
    auto inv_sqrt = [](double d) { return d > 0.0 ? 1.0 / std::sqrt(d) : 0.0; };
    Eigen::VectorXd r = out.unaryExpr(inv_sqrt);
    Eigen::VectorXd c = in.unaryExpr(inv_sqrt);
    return {r.asDiagonal() * a * c.asDiagonal(), g.fingerprint()};
}

// M = A, used by the quiescence-threshold analysis.
inline NormalizedAdjacency unnormalized(const MemoryGraph& g) { return {g.adjacency(), g.fingerprint()}; }

inline MemoryGraph build_cycle(std::size_t p, bool directed)
{
    if (p < 3) fail(ErrorKind::invalid_size, "cycle needs p >= 3, got " + std::to_string(p));
    MemoryGraph g(p, directed, false);
    for (std::size_t i = 0; i < p; ++i) g.add_edge(i, (i + 1) % p);
    return g;
}

// Clique 1 is [0, n), the path [n, n+m), clique 2 [n+m, 2n+m). The path hangs
// off vertex n-1 of clique 1 and vertex n+m of clique 2.
inline MemoryGraph build_barbell(std::size_t n, std::size_t m)
{
    if (n < 2) fail(ErrorKind::invalid_size, "barbell clique size must be >= 2");
    MemoryGraph g(2 * n + m, false, false);
    auto clique = [&](std::size_t base) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) g.add_edge(base + i, base + j);
    };
    clique(0);
    clique(n + m);
    for (std::size_t v = n - 1; v < n + m; ++v) g.add_edge(v, v + 1);
    return g;
}

inline MemoryGraph build_random_regular(std::size_t p, std::size_t k, std::uint64_t seed,
                                        int max_attempts = 1000)
{
    if (k >= p) fail(ErrorKind::invalid_size, "regular graph needs k < p");
    if ((p * k) % 2 != 0) fail(ErrorKind::invalid_size, "p*k must be even");
    Rng rng(seed);
    std::vector<std::size_t> points(p * k);
    for (std::size_t i = 0; i < points.size(); ++i) points[i] = i / k;
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        rng.shuffle(points);
        std::set<std::pair<std::size_t, std::size_t>> seen;
        bool ok = true;
        for (std::size_t i = 0; ok && i < points.size(); i += 2) {
            std::size_t u = std::min(points[i], points[i + 1]);
            std::size_t v = std::max(points[i], points[i + 1]);
            ok = u != v && seen.insert({u, v}).second;
        }
        if (!ok) continue;
        MemoryGraph g(p, false, false);
        for (auto [u, v] : seen) g.add_edge(u, v);
        return g;
    }
    fail(ErrorKind::retry_exhausted, "no simple " + std::to_string(k) + "-regular pairing after " +
                                         std::to_string(max_attempts) + " attempts");
}

// One undirected edge from every column to its Euclidean nearest neighbour,
// duplicates collapsed, ties to the lowest index.
template <typename Derived>
MemoryGraph build_nn_scaffold(const Eigen::MatrixBase<Derived>& x)
{
    const std::size_t p = static_cast<std::size_t>(x.cols());
    if (p < 2) fail(ErrorKind::invalid_size, "nearest-neighbour scaffold needs p >= 2");
    std::set<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < p; ++i) {
        std::size_t best = p;
        double best_d = 0.0;
        for (std::size_t j = 0; j < p; ++j) {
            if (j == i) continue;
            double d = (x.col(i) - x.col(j)).squaredNorm();
            if (best == p || d < best_d) {
                best = j;
                best_d = d;
            }
        }
        pairs.insert({std::min(i, best), std::max(i, best)});
    }
    MemoryGraph g(p, false, false);
    for (auto [u, v] : pairs) g.add_edge(u, v);
    return g;
}

// BFS hop distances on the undirected support; -1 when unreachable.
inline std::vector<std::vector<int>> hop_distances(const MemoryGraph& g)
{
    auto nb = g.neighbors();
    const std::size_t p = g.size();
    std::vector<std::vector<int>> d(p, std::vector<int>(p, -1));
    for (std::size_t s = 0; s < p; ++s) {
        std::deque<std::size_t> q{s};
        d[s][s] = 0;
        while (!q.empty()) {
            std::size_t u = q.front();
            q.pop_front();
            for (std::size_t v : nb[u])
                if (d[s][v] < 0) {
                    d[s][v] = d[s][u] + 1;
                    q.push_back(v);
                }
        }
    }
    return d;
}

inline std::vector<int> components(const MemoryGraph& g)
{
    auto d = hop_distances(g);
    std::vector<int> label(g.size(), -1);
    int next = 0;
    for (std::size_t s = 0; s < g.size(); ++s) {
        if (label[s] >= 0) continue;
        for (std::size_t v = 0; v < g.size(); ++v)
            if (d[s][v] >= 0) label[v] = next;
        ++next;
    }
    return label;
}

// Text format: `directed` or `undirected`, an optional `vertices N` line,
// then `src dst [weight]` per line. `#` starts a comment.
inline void write_graph(std::ostream& os, const MemoryGraph& g)
{
    os << (g.directed() ? "directed" : "undirected") << "\n";
    os << "vertices " << g.size() << "\n";
    std::ostringstream w;
    w.precision(17);
    for (const Edge& e : g.edges()) {
        os << e.src << " " << e.dst;
        if (e.weight != 1.0) {
            w.str("");
            w << e.weight;
            os << " " << w.str();
        }
        os << "\n";
    }
}

inline MemoryGraph read_graph(std::istream& is)
{
    std::string line;
    int lineno = 0;
    int directed = -1;
    std::size_t declared = 0;
    bool have_declared = false;
    std::vector<Edge> edges;
    std::size_t max_index = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        std::istringstream ls(line);
        std::string first;
        if (!(ls >> first)) continue;
        auto bad = [&](const std::string& why) {
            fail(ErrorKind::format, "graph line " + std::to_string(lineno) + ": " + why);
        };
        if (directed < 0) {
            if (first == "directed") directed = 1;
            else if (first == "undirected") directed = 0;
            else bad("expected 'directed' or 'undirected' header");
            continue;
        }
        if (first == "vertices") {
            if (!(ls >> declared)) bad("bad vertex count");
            have_declared = true;
            continue;
        }
        Edge e;
        try {
            std::size_t pos = 0;
            long long s = std::stoll(first, &pos);
            if (pos != first.size() || s < 0) bad("bad source index");
            e.src = static_cast<std::size_t>(s);
        } catch (const std::logic_error&) {
            bad("bad source index");
        }
        long long d;
        if (!(ls >> d) || d < 0) bad("bad target index");
        e.dst = static_cast<std::size_t>(d);
        double w;
        if (ls >> w) e.weight = w;
        else if (!ls.eof()) bad("bad weight");
        std::string extra;
        if (ls.clear(), ls >> extra) bad("trailing tokens");
        max_index = std::max({max_index, e.src + 1, e.dst + 1});
        edges.push_back(e);
    }
    if (directed < 0) fail(ErrorKind::format, "graph file has no header");
    std::size_t p = have_declared ? declared : max_index;
    if (p < max_index) fail(ErrorKind::format, "edge index exceeds declared vertex count");
    MemoryGraph g(p, directed == 1, true);
    for (const Edge& e : edges) g.add_edge(e.src, e.dst, e.weight);
    return g;
}

inline MemoryGraph load_graph_file(const std::string& path)
{
    std::ifstream f(path);
    if (!f) fail(ErrorKind::io, "cannot open graph file " + path);
    return read_graph(f);
}

inline void save_graph_file(const std::string& path, const MemoryGraph& g)
{
    std::ofstream f(path);
    if (!f) fail(ErrorKind::io, "cannot write graph file " + path);
    write_graph(f, g);
}

inline std::uint64_t MemoryGraph::fingerprint() const
{
    std::ostringstream os;
    write_graph(os, *this);
    return stable_hash(os.str());
}

}  // namespace cdam
