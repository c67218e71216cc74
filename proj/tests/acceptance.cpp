// Acceptance run: one PASS/FAIL line per criterion with the measured values.

#include <cdam/cdam.hpp>

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

using namespace cdam;

namespace {

struct Verdict {
    bool pass = false;
    std::string detail;
};

std::string fmt(double v, int digits = 3)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

// ---------------------------------------------------------------------------
// Scalar-loop oracles for one update and for the energy.

std::vector<double> oracle_step(const std::vector<double>& sigma, const Eigen::MatrixXd& xi, const Eigen::MatrixXd& m,
                                const ModelParams& prm)
{
    const std::size_t n = static_cast<std::size_t>(xi.rows()), p = static_cast<std::size_t>(xi.cols());
    std::vector<double> z(p, 0.0), s(p);
    for (std::size_t mu = 0; mu < p; ++mu)
        for (std::size_t i = 0; i < n; ++i) z[mu] += xi(i, mu) * sigma[i];
    double zmax = *std::max_element(z.begin(), z.end()), tot = 0.0;
    for (std::size_t mu = 0; mu < p; ++mu) tot += s[mu] = std::exp(prm.beta * (z[mu] - zmax));
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        double load = 0.0;
        for (std::size_t mu = 0; mu < p; ++mu) load += xi(i, mu) / static_cast<double>(p);
        double bias = prm.inhibition == Inhibition::mean_load ? load : load / static_cast<double>(n);
        double drive = 0.0;
        for (std::size_t mu = 0; mu < p; ++mu) {
            double q = prm.a * xi(i, mu);
            for (std::size_t nu = 0; nu < p; ++nu) q += prm.h * xi(i, nu) * m(mu, nu);
            drive += q * s[mu] / tot;
        }
        out[i] = sigma[i] + prm.eta * (drive - bias - sigma[i]);
    }
    return out;
}

// NaN when a logarithm's argument is not positive.
double oracle_energy(const std::vector<double>& sigma, const Eigen::MatrixXd& xi, const MemoryGraph& g,
                     const Eigen::MatrixXd& m, const ModelParams& prm)
{
    const std::size_t n = static_cast<std::size_t>(xi.rows()), p = static_cast<std::size_t>(xi.cols());
    std::vector<double> ov(p, 0.0);
    for (std::size_t mu = 0; mu < p; ++mu) {
        for (std::size_t i = 0; i < n; ++i) ov[mu] += sigma[i] * xi(i, mu);
        ov[mu] /= static_cast<double>(n);
    }
    const double b = prm.beta;
    if (g.directed()) {
        double s = 0.0;
        for (std::size_t mu = 0; mu < p; ++mu) s += prm.a * std::exp(b * ov[mu] * ov[mu]);
        for (const Edge& e : g.edges()) s += prm.h * e.weight * std::exp(b * ov[e.src] * ov[e.dst]);
        return s > 0.0 ? -std::log(s) / b : std::nan("");
    }
    double sa = 0.0, sh = 0.0;
    for (std::size_t mu = 0; mu < p; ++mu) sa += std::exp(b * ov[mu] * ov[mu]);
    for (std::size_t mu = 0; mu < p; ++mu)
        for (std::size_t nu = 0; nu < p; ++nu)
            if (m(mu, nu) != 0.0) sh += m(mu, nu) * std::exp(b * ov[mu] * ov[nu]);
    double e = -(prm.a / b) * std::log(sa);
    if (!g.edges().empty()) e -= (prm.h / b) * std::log(sh);
    return e;
}

Verdict criterion_oracles()
{
    double worst_step = 0.0, worst_energy = 0.0;
    int undefined_agree = 0, mismatches = 0;
    for (std::uint64_t inst = 0; inst < 100; ++inst) {
        Rng rng(derive_seed(2024, inst));
        const std::size_t n = 2 + rng.below(19), p = 1 + rng.below(5);
        const bool directed = rng.below(2) == 1;
        MemoryGraph g(p, directed, true);
        for (std::size_t i = 0; i < p; ++i)
            for (std::size_t j = directed ? 0 : i; j < p; ++j)
                if (rng.uniform() < 0.4) g.add_edge(i, j, rng.uniform(0.2, 2.0));
        PatternMatrix xi = random_patterns(n, p, derive_seed(7, inst));
        ModelParams prm{rng.uniform(-2, 2), rng.uniform(-1, 2), rng.uniform(0.1, 50), rng.uniform(0, 1),
                        rng.below(2) ? Inhibition::mean_load : Inhibition::mean_load_per_neuron};
        NormalizedAdjacency m = rng.below(4) == 0 ? unnormalized(g) : normalize(g);
        std::vector<double> sig(n);
        for (double& v : sig) v = rng.uniform(-1, 2);
        Eigen::VectorXd sv = Eigen::Map<Eigen::VectorXd>(sig.data(), static_cast<Eigen::Index>(n));

        NetworkState out = update_step({sv, 0}, xi, m, prm);
        auto ref = oracle_step(sig, xi.values(), m.entries, prm);
        for (std::size_t i = 0; i < n; ++i)
            worst_step = std::max(worst_step, std::fabs(out.sigma(static_cast<Eigen::Index>(i)) - ref[i]));

        double expect = oracle_energy(sig, xi.values(), g, m.entries, prm);
        try {
            double got = energy(sv, xi, g, m, prm);
            if (std::isnan(expect)) ++mismatches;
            else worst_energy = std::max(worst_energy, std::fabs(got - expect) / std::max(1.0, std::fabs(expect)));
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::energy_undefined && std::isnan(expect)) ++undefined_agree;
            else ++mismatches;
        }
    }
    bool pass = worst_step <= 1e-10 && worst_energy <= 1e-10 && mismatches == 0;
    std::ostringstream os;
    os << "100 instances: max |update diff| " << worst_step << ", max energy diff " << worst_energy
       << ", undefined energies agreed " << undefined_agree << ", disagreements " << mismatches;
    return {pass, os.str()};
}

// ---------------------------------------------------------------------------

Verdict criterion_balance()
{
    SimConfig cfg;
    ModesResult r = four_modes(build_cycle(30, false), canonical_sweep(), cfg);
    double worst = 0.0;
    std::ostringstream os;
    os << "max |mean sigma(101)| per setting:";
    for (const auto& c : r.cells) {
        worst = std::max(worst, c.max_abs_final_mean);
        os << " " << c.setting.label() << "=" << fmt(c.max_abs_final_mean, 4);
    }
    os << " (limit 0.02)";
    return {worst <= 0.02, os.str()};
}

std::vector<std::pair<std::string, MemoryGraph>> mode_graphs()
{
    return {{"cycle:30", build_cycle(30, false)}, {"tutte", build_named("tutte")},
            {"regular:46,3,7", build_random_regular(46, 3, 7)}};
}

Verdict criterion_four_modes()
{
    SimConfig cfg;
    bool pass = true;
    std::ostringstream os;
    for (const auto& [name, g] : mode_graphs()) {
        ModesResult r = four_modes(g, mode_settings(), cfg);
        const ModeCell &auto_c = r.cells[0], &narrow = r.cells[1], &wide = r.cells[2], &quiet = r.cells[3];
        bool ok_auto = auto_c.min_trigger_r >= 0.9 && auto_c.max_other_r <= 0.2;
        bool ok_narrow = narrow.min_best_neighbor_r > 0.2;
        bool ok_wide = wide.min_component_fraction > 0.5;
        bool ok_quiet = quiet.max_abs_r <= 0.1;
        pass = pass && ok_auto && ok_narrow && ok_wide && ok_quiet;
        os << name << ": retrieval " << (ok_auto ? "ok" : "NO") << " (trigger>=" << fmt(auto_c.min_trigger_r)
           << ", others<=" << fmt(auto_c.max_other_r) << "), neighbour " << (ok_narrow ? "ok" : "NO") << " (min best "
           << fmt(narrow.min_best_neighbor_r) << "), component " << (ok_wide ? "ok" : "NO") << " (min fraction "
           << fmt(wide.min_component_fraction) << "), quiescence " << (ok_quiet ? "ok" : "NO") << " (max|r| "
           << fmt(quiet.max_abs_r) << "); ";
    }
    return {pass, os.str()};
}

Verdict criterion_miyashita()
{
    SimConfig cfg;
    MiyashitaResult r = miyashita_fit(build_cycle(30, false), {-2.45, 3.45}, cfg, {1, 2, 3, 4, 5});
    std::ostringstream os;
    os << "mean R2 over seeds 1-5 = " << fmt(r.mean_r2, 4) << " (per seed";
    for (double v : r.seed_r2) os << " " << fmt(v, 4);
    os << "), limit 0.98";
    return {r.mean_r2 >= 0.98, os.str()};
}

Verdict criterion_range()
{
    SimConfig cfg;
    HopRangeResult r = hop_range(build_cycle(30, false), canonical_sweep(), cfg, {1});
    bool monotone = true;
    int max_range = -1;
    std::ostringstream os;
    os << "ranges";
    for (std::size_t i = 0; i < r.cells.size(); ++i) {
        os << " " << r.cells[i].setting.label() << "=" << r.cells[i].range;
        if (i && r.cells[i].range < r.cells[i - 1].range) monotone = false;
        max_range = std::max(max_range, r.cells[i].range);
    }
    bool sig = r.anova_defined && r.anova.p < 0.05;
    os << "; monotone " << (monotone ? "yes" : "no") << ", max " << max_range << " (want 4-8), ANOVA F("
       << r.anova.df_between << "," << r.anova.df_within << ") = " << fmt(r.anova.f, 2) << ", p = " << r.anova.p;
    return {monotone && max_range >= 4 && max_range <= 8 && sig, os.str()};
}

Verdict criterion_community()
{
    SimConfig cfg;
    const Setting wide{-0.5, 1.5};
    double k = community_matrices(build_named("karate"), {wide}, cfg, karate_factions())[0].contrast;
    double t = community_matrices(build_named("tutte"), {wide}, cfg, tutte_fragments())[0].contrast;
    std::ostringstream os;
    os << "block contrast at " << wide.label() << ": karate " << fmt(k) << ", tutte (3 fragments) " << fmt(t)
       << " (limit 0.3)";
    return {k > 0.3 && t > 0.3, os.str()};
}

Verdict criterion_sequence()
{
    SimConfig cfg;
    cfg.n = 2000;
    cfg.steps = 1500;
    PatternMatrix xi = surrogate_frames(cfg.n, derive_seed(cfg.seed, 7));
    MemoryGraph g = build_cycle(50, true);
    SequenceCell seq = sequence_recall(xi, g, {-2, 3}, cfg);
    SequenceCell stuck = sequence_recall(xi, g, {1, 0}, cfg);
    bool ok_seq = seq.metrics.visited_in_order && seq.metrics.skips == 0;
    bool ok_stuck = stuck.metrics.distinct == 1 && stuck.schedule.front() == 0 && stuck.metrics.stalls >= 1;
    std::ostringstream os;
    os << "(-2,3): distinct " << seq.metrics.distinct << ", skips " << seq.metrics.skips << ", stalls "
       << seq.metrics.stalls << ", full cycle at step " << seq.metrics.first_full_cycle_step << "; (1,0): distinct "
       << stuck.metrics.distinct << ", stalls " << stuck.metrics.stalls << ", held pattern " << stuck.schedule.back();
    return {ok_seq && ok_stuck, os.str()};
}

Verdict criterion_automaton()
{
    bool pass = true;
    std::ostringstream os;
    for (const char* file : {"family_tree.txt", "family_tree_portraits.txt"}) {
        AutomatonSpec spec = load_automaton_spec(data_dir() + "/automata/" + file);
        auto composed = std::make_shared<const ComposedAutomaton>(compose_automaton_patterns(spec, 4000, 1));
        Automaton fsm(composed);
        AutomatonSweep s = automaton_sweep(fsm);
        int scripts_ok = 0;
        auto scripts = family_tree_scripts();
        for (const auto& sc : scripts) {
            auto ans = run_script(fsm, sc.start, sc.labels);
            bool match = true;
            for (std::size_t k = 0; k < ans.size(); ++k) match = match && ans[k].after == sc.expected[k];
            scripts_ok += match;
        }
        bool ok = s.defined_ok == s.defined_total && s.undefined_ok == s.undefined_total &&
                  scripts_ok == static_cast<int>(scripts.size());
        pass = pass && ok;
        os << file << ": defined " << s.defined_ok << "/" << s.defined_total << ", undefined " << s.undefined_ok << "/"
           << s.undefined_total << ", scripts " << scripts_ok << "/" << scripts.size() << "; ";
    }
    return {pass, os.str()};
}

Verdict criterion_retrieval()
{
    SimConfig cfg;
    std::vector<std::size_t> levels{10, 20, 30, 40, 50, 75, 100, 150, 200, 500};
    RetrievalPool pool = retrieval_pool(levels.back(), cfg.seed);
    cfg.n = pool.patterns.n();
    std::vector<Setting> settings{{1, 0}, {0.5, 0.5}, {0.1, 0.9}};
    RetrievalResult r = retrieval_sweep(pool.patterns, levels, settings, 5, cfg);
    const Eigen::Index at100 = 6;
    double low_a = r.accuracy(at100, 2), equal = r.accuracy(at100, 1), drop = largest_drop(r, 0);
    std::ostringstream os;
    os << pool.source << "; p=100 accuracy (0.1,0.9) " << fmt(low_a) << " vs (0.5,0.5) " << fmt(equal)
       << " (chance 0.010); (1,0) curve";
    for (Eigen::Index i = 0; i < r.accuracy.rows(); ++i) os << " " << fmt(r.accuracy(i, 0), 2);
    os << ", largest drop " << fmt(drop);
    return {low_a > equal && drop >= 0.2, os.str()};
}

Verdict criterion_theory()
{
    std::ostringstream os;
    // Pure hetero-association with out-degree one moves to the successor in one step.
    MemoryGraph dc = build_cycle(30, true);
    PatternMatrix xi = random_patterns(1000, 30, 5);
    NormalizedAdjacency m = normalize(dc);
    Correlator corr(xi);
    int succ = 0;
    for (std::size_t mu = 0; mu < 30; ++mu) {
        NetworkState next = update_step({xi.column(mu), 0}, xi, m, {0, 1, 50, 1});
        Eigen::Index best;
        corr(next.sigma).maxCoeff(&best);
        succ += static_cast<std::size_t>(best) == (mu + 1) % 30;
    }
    bool ok_succ = succ == 30;
    os << "successor step " << succ << "/30";

    // Quiescence below a = -k h with M = A.
    SimConfig raw;
    raw.normalized = false;
    bool ok_quiet = true;
    std::vector<std::tuple<std::string, MemoryGraph, double>> regular{{"cycle:30", build_cycle(30, false), 2.0},
                                                                      {"tutte", build_named("tutte"), 3.0}};
    for (const auto& [name, g, k] : regular) {
        Setting s{-(k + 0.5), 1.0};
        double mx = four_modes(g, {s}, raw).cells[0].max_abs_r;
        ok_quiet = ok_quiet && mx <= 0.1;
        os << "; quiescence " << name << " at a=" << s.a << ": max|r| " << fmt(mx);
    }

    // Mixed a, h > 0 never yields pure retrieval for non-isolated triggers.
    SimConfig cfg;
    bool ok_mixed = true;
    for (const auto& [name, g] : mode_graphs()) {
        double worst = four_modes(g, {{0.5, 0.5}}, cfg).cells[0].min_best_neighbor_r;
        ok_mixed = ok_mixed && worst > 0.2;
        os << "; " << name << " (0.5,0.5) min best neighbour r " << fmt(worst);
    }
    return {ok_succ && ok_quiet && ok_mixed, os.str()};
}

}  // namespace

int main()
{
    const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria{
        {"oracle equivalence", criterion_oracles}, {"E-I balance", criterion_balance},
        {"four modes", criterion_four_modes},      {"Miyashita replication", criterion_miyashita},
        {"range control", criterion_range},        {"community structure", criterion_community},
        {"sequence recall", criterion_sequence},   {"automaton fidelity", criterion_automaton},
        {"retrieval sweep", criterion_retrieval},  {"theory checks", criterion_theory},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        auto t0 = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = criteria[i].second();
        } catch (const std::exception& e) {
            v = {false, std::string("error: ") + e.what()};
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        failed += !v.pass;
        std::printf("[%s] %2zu %s: %s [%.1fs]\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, v.detail.c_str(),
                    secs);
        std::fflush(stdout);
    }
    std::printf("%zu/%zu criteria passed\n", criteria.size() - static_cast<std::size_t>(failed), criteria.size());
    return failed ? 1 : 0;
}
