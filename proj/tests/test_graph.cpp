#include <catch_amalgamated.hpp>

#include <cdam/graph.hpp>
#include <cdam/named_graphs.hpp>

#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

using namespace cdam;
using Catch::Matchers::WithinAbs;

namespace {

std::multiset<std::tuple<std::size_t, std::size_t, double>> edge_multiset(const MemoryGraph& g)
{
    std::multiset<std::tuple<std::size_t, std::size_t, double>> s;
    for (const Edge& e : g.edges()) s.insert({e.src, e.dst, e.weight});
    return s;
}

std::vector<std::size_t> degrees(const MemoryGraph& g)
{
    std::vector<std::size_t> d(g.size(), 0);
    for (const Edge& e : g.expanded_edges()) ++d[e.src];
    return d;
}

}  // namespace

TEST_CASE("cycle construction")
{
    MemoryGraph c30 = build_cycle(30, false);
    CHECK(c30.size() == 30);
    CHECK(c30.edges().size() == 30);
    for (auto d : degrees(c30)) CHECK(d == 2);

    MemoryGraph d50 = build_cycle(50, true);
    Eigen::MatrixXd a = d50.adjacency();
    for (Eigen::Index i = 0; i < 50; ++i) {
        CHECK(a.row(i).sum() == 1.0);
        CHECK(a.col(i).sum() == 1.0);
        CHECK(a(i, i) == 0.0);
    }
    CHECK(a(49, 0) == 1.0);

    CHECK_THROWS_AS(build_cycle(2, false), Error);
    try {
        build_cycle(2, true);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::invalid_size);
    }
}

TEST_CASE("triangle normalizes to one half")
{
    NormalizedAdjacency m = normalize(build_cycle(3, false));
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK_THAT(m.entries(i, j), WithinAbs(i == j ? 0.0 : 0.5, 1e-15));
}

TEST_CASE("barbell construction")
{
    MemoryGraph b = build_barbell(10, 10);
    CHECK(b.size() == 30);
    CHECK(b.edges().size() == 45 + 45 + 11);

    // Hand enumeration for n=2, m=0: clique {0,1}, clique {2,3}, bridge 1-2.
    MemoryGraph b20 = build_barbell(2, 0);
    CHECK(b20.size() == 4);
    CHECK(edge_multiset(b20) == std::multiset<std::tuple<std::size_t, std::size_t, double>>{
                                    {0, 1, 1.0}, {1, 2, 1.0}, {2, 3, 1.0}});

    // n=3, m=1: cliques {0,1,2} and {4,5,6}, path vertex 3 between 2 and 4.
    MemoryGraph b31 = build_barbell(3, 1);
    CHECK(b31.size() == 7);
    auto d = degrees(b31);
    CHECK(d[3] == 2);
    CHECK(d[2] == 3);
    CHECK(d[4] == 3);
    CHECK(d[0] == 2);

    CHECK_THROWS_AS(build_barbell(1, 3), Error);
}

TEST_CASE("named graphs")
{
    MemoryGraph k = build_named("karate");
    CHECK(k.size() == 34);
    CHECK(k.edges().size() == 78);
    CHECK(karate_factions().size() == 34);

    MemoryGraph t = build_named("tutte");
    CHECK(t.size() == 46);
    CHECK(t.edges().size() == 69);
    for (auto d : degrees(t)) CHECK(d == 3);

    NormalizedAdjacency m = normalize(t);
    for (Eigen::Index i = 0; i < 46; ++i)
        for (Eigen::Index j = 0; j < 46; ++j)
            if (m.entries(i, j) != 0.0) CHECK_THAT(m.entries(i, j), WithinAbs(1.0 / 3.0, 1e-15));

    auto frag = tutte_fragments();
    std::map<int, int> sizes;
    for (int v : frag) ++sizes[v];
    CHECK(sizes[-1] == 1);
    CHECK(sizes[0] == 15);
    CHECK(sizes[1] == 15);
    CHECK(sizes[2] == 15);
    // Fragments touch each other through exactly one edge per pair.
    std::map<std::pair<int, int>, int> cross;
    for (const Edge& e : t.edges()) {
        int a = frag[e.src], b = frag[e.dst];
        if (a >= 0 && b >= 0 && a != b) ++cross[{std::min(a, b), std::max(a, b)}];
    }
    CHECK(cross.size() == 3);
    for (auto [k2, v] : cross) CHECK(v == 1);

    try {
        build_named("petersen");
        FAIL("expected lookup error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::lookup);
    }
}

TEST_CASE("bundled graph files match the embedded edge lists")
{
    for (std::string name : {"karate", "tutte"}) {
        MemoryGraph f = load_graph_file(std::string(CDAM_DEFAULT_DATA_DIR) + "/graphs/" + name + ".txt");
        MemoryGraph e = build_named(name);
        CHECK(f.size() == e.size());
        CHECK(f.directed() == e.directed());
        CHECK(edge_multiset(f) == edge_multiset(e));
    }
}

TEST_CASE("random regular graphs")
{
    MemoryGraph g = build_random_regular(46, 3, 17);
    for (auto d : degrees(g)) CHECK(d == 3);
    std::set<std::pair<std::size_t, std::size_t>> uniq;
    for (const Edge& e : g.edges()) {
        CHECK(e.src != e.dst);
        CHECK(uniq.insert({e.src, e.dst}).second);
    }

    MemoryGraph k4 = build_random_regular(4, 3, 5);
    CHECK(k4.edges().size() == 6);
    MemoryGraph complete(4, false, false);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = i + 1; j < 4; ++j) complete.add_edge(i, j);
    CHECK(edge_multiset(k4) == edge_multiset(complete));

    CHECK(edge_multiset(build_random_regular(46, 3, 99)) == edge_multiset(build_random_regular(46, 3, 99)));

    try {
        build_random_regular(5, 3, 1);
        FAIL("expected invalid-size");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::invalid_size);
    }
    try {
        build_random_regular(40, 30, 1, 1);
        FAIL("expected retry exhaustion");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::retry_exhausted);
    }
}

TEST_CASE("nearest-neighbour scaffold")
{
    Eigen::MatrixXd two(1, 2);
    two << 0.0, 5.0;
    MemoryGraph g2 = build_nn_scaffold(two);
    CHECK(g2.edges().size() == 1);

    // Positions 0, 1, 3: 0->1, 1->0 (collapsed), 3->1.
    Eigen::MatrixXd line(1, 3);
    line << 0.0, 1.0, 3.0;
    CHECK(edge_multiset(build_nn_scaffold(line)) ==
          std::multiset<std::tuple<std::size_t, std::size_t, double>>{{0, 1, 1.0}, {1, 2, 1.0}});

    // Equidistant: vertex 1 at 0 between -1 and 1 picks the lower index.
    Eigen::MatrixXd tie(1, 3);
    tie << -1.0, 0.0, 1.0;
    auto t = edge_multiset(build_nn_scaffold(tie));
    CHECK(t.count({0, 1, 1.0}) == 1);
    CHECK(t.count({1, 2, 1.0}) == 1);

    Eigen::MatrixXd pts = Eigen::MatrixXd::Random(4, 25);
    MemoryGraph g = build_nn_scaffold(pts);
    CHECK(g.edges().size() <= 25);
    for (auto d : degrees(g)) CHECK(d >= 1);
}

TEST_CASE("normalization")
{
    CHECK(normalize(build_cycle(50, true)).entries == build_cycle(50, true).adjacency());

    MemoryGraph star(4, false, false);
    for (std::size_t leaf = 1; leaf < 4; ++leaf) star.add_edge(0, leaf);
    NormalizedAdjacency m = normalize(star);
    for (Eigen::Index leaf = 1; leaf < 4; ++leaf) {
        CHECK_THAT(m.entries(0, leaf), WithinAbs(1.0 / std::sqrt(3.0), 1e-15));
        CHECK_THAT(m.entries(leaf, 0), WithinAbs(1.0 / std::sqrt(3.0), 1e-15));
    }

    MemoryGraph iso(3, false, false);
    iso.add_edge(0, 1);
    NormalizedAdjacency mi = normalize(iso);
    CHECK(mi.entries.row(2).isZero());
    CHECK(mi.entries.col(2).isZero());
    CHECK(mi.entries.allFinite());

    // Parallel edges add up.
    MemoryGraph multi(2, false, false);
    multi.add_edge(0, 1);
    multi.add_edge(1, 0, 2.0);
    CHECK(multi.adjacency()(0, 1) == 3.0);
    CHECK(multi.adjacency()(1, 0) == 3.0);

    // Directed: out-degree on rows, in-degree on columns.
    MemoryGraph d(3, true, false);
    d.add_edge(0, 1);
    d.add_edge(0, 2);
    d.add_edge(1, 2);
    NormalizedAdjacency md = normalize(d);
    CHECK_THAT(md.entries(0, 1), WithinAbs(1.0 / std::sqrt(2.0 * 1.0), 1e-15));
    CHECK_THAT(md.entries(0, 2), WithinAbs(1.0 / std::sqrt(2.0 * 2.0), 1e-15));
    CHECK_THAT(md.entries(1, 2), WithinAbs(1.0 / std::sqrt(1.0 * 2.0), 1e-15));
}

TEST_CASE("normalization properties")
{
    Rng rng(4);
    for (int trial = 0; trial < 20; ++trial) {
        std::size_t p = 3 + rng.below(10);
        MemoryGraph g(p, rng.below(2) == 1, false);
        for (std::size_t i = 0; i < p; ++i)
            for (std::size_t j = 0; j < p; ++j)
                if (i != j && rng.uniform() < 0.3) g.add_edge(i, j, 0.5 + rng.uniform());
        Eigen::MatrixXd a = g.adjacency();
        Eigen::MatrixXd m = normalize(g).entries;
        CHECK(((a.array() != 0.0) == (m.array() != 0.0)).all());
        if (!g.directed()) CHECK((m - m.transpose()).cwiseAbs().maxCoeff() < 1e-15);
    }

    for (std::size_t k : {2u, 3u, 4u}) {
        MemoryGraph g = build_random_regular(12, k, 3 + k);
        CHECK((normalize(g).entries - g.adjacency() / static_cast<double>(k)).cwiseAbs().maxCoeff() < 1e-15);
    }

    for (std::size_t p : {3u, 4u, 7u, 12u}) {
        Eigen::MatrixXd m = normalize(build_cycle(p, false)).entries;
        Eigen::VectorXd v = Eigen::VectorXd::LinSpaced(static_cast<Eigen::Index>(p), 1.0, 2.0);
        double lambda = 0.0;
        for (int it = 0; it < 500; ++it) {
            Eigen::VectorXd w = m * v;
            lambda = w.norm() / v.norm();
            v = w / w.norm();
        }
        CHECK(lambda <= 1.0 + 1e-12);
    }
}

TEST_CASE("graph text round trip")
{
    MemoryGraph g(6, true, true);
    g.add_edge(0, 1);
    g.add_edge(1, 1, 0.25);
    g.add_edge(2, 4, -1.5);
    g.add_edge(2, 4, 1.0 / 3.0);
    std::stringstream ss;
    write_graph(ss, g);
    MemoryGraph back = read_graph(ss);
    CHECK(back.size() == 6);
    CHECK(back.directed());
    CHECK(edge_multiset(back) == edge_multiset(g));
    CHECK(back.fingerprint() == g.fingerprint());

    std::istringstream text("# comment\n\nundirected\n0 1\n1 2 2.5  # trailing\n");
    MemoryGraph u = read_graph(text);
    CHECK(u.size() == 3);
    CHECK(!u.directed());
    CHECK(u.adjacency()(2, 1) == 2.5);

    std::istringstream bad("sideways\n0 1\n");
    CHECK_THROWS_AS(read_graph(bad), Error);
    std::istringstream bad2("directed\n0 x\n");
    CHECK_THROWS_AS(read_graph(bad2), Error);
}

TEST_CASE("hop distances and components")
{
    auto d = hop_distances(build_cycle(30, false));
    CHECK(d[0][15] == 15);
    CHECK(d[3][29] == 4);
    MemoryGraph two(4, false, false);
    two.add_edge(0, 1);
    two.add_edge(2, 3);
    auto c = components(two);
    CHECK(c[0] == c[1]);
    CHECK(c[2] == c[3]);
    CHECK(c[0] != c[2]);
    CHECK(hop_distances(two)[0][3] == -1);
}
