#pragma once

#include <Eigen/Dense>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <limits>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "automaton.hpp"
#include "dynamics.hpp"
#include "graph.hpp"
#include "named_graphs.hpp"
#include "patterns.hpp"
#include "stats.hpp"
#include "surrogates.hpp"

namespace cdam {

using json = nlohmann::ordered_json;

struct Setting {
    double a = 1.0;
    double h = 0.0;

    std::string label() const
    {
        std::ostringstream os;
        os << "a" << a << "_h" << h;
        return os.str();
    }
};

inline std::vector<Setting> canonical_sweep() { return {{1, 0}, {0.5, 0.5}, {-0.5, 1.5}, {-2, 3}}; }
inline std::vector<Setting> mode_settings() { return {{1, 0}, {0.5, 0.5}, {-0.5, 1.5}, {-2.5, 1}}; }

struct SimConfig {
    std::size_t n = 1000;
    double beta = 1.0;
    double eta = 0.1;
    double noise_c = 1.0;
    std::size_t steps = 101;
    std::uint64_t seed = 1;
    Inhibition inhibition = Inhibition::mean_load;
    bool normalized = true;  // false: couple through the raw adjacency

    ModelParams params(const Setting& s) const { return {s.a, s.h, beta, eta, inhibition}; }

    NormalizedAdjacency coupling(const MemoryGraph& g) const { return normalized ? normalize(g) : unnormalized(g); }

    json to_json() const
    {
        return {{"n", n},         {"beta", beta},  {"eta", eta},
                {"noise_c", noise_c}, {"steps", steps}, {"seed", seed},
                {"inhibition", inhibition == Inhibition::mean_load ? "mean-load" : "mean-load/n"},
                {"coupling", normalized ? "normalized" : "adjacency"}};
    }
};

struct NamedMatrix {
    std::string name;
    Eigen::MatrixXd values;
    bool heatmap = false;
};

struct NamedTable {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

struct ExperimentReport {
    std::string name;
    json params = json::object();
    json inputs = json::object();
    json stats = json::object();
    std::vector<NamedMatrix> matrices;
    std::vector<NamedTable> traces;
};

inline std::string hex64(std::uint64_t v)
{
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << v;
    return os.str();
}

// Initial states for every trigger, one column each.
inline Eigen::MatrixXd triggered_states(const PatternMatrix& xi, double c, std::uint64_t seed)
{
    Eigen::MatrixXd s(static_cast<Eigen::Index>(xi.n()), static_cast<Eigen::Index>(xi.p()));
    for (std::size_t mu = 0; mu < xi.p(); ++mu)
        s.col(static_cast<Eigen::Index>(mu)) = init_state(xi, mu, c, derive_seed(seed, mu)).sigma;
    return s;
}

// Pearson correlations between state columns.
inline Eigen::MatrixXd state_correlations(const Eigen::MatrixXd& states)
{
    Eigen::MatrixXd z = states;
    z.rowwise() -= z.colwise().mean();
    for (Eigen::Index j = 0; j < z.cols(); ++j) {
        double nrm = z.col(j).norm();
        if (!(nrm > 0.0)) fail(ErrorKind::undefined_correlation, "constant final state in column " + std::to_string(j));
        z.col(j) /= nrm;
    }
    Eigen::MatrixXd c = z.transpose() * z;
    c.diagonal().setOnes();
    return c.cwiseMax(-1.0).cwiseMin(1.0);
}

// Mean of within-block entries minus mean of cross-block entries, diagonal
// and unlabelled (negative) vertices excluded.
inline double block_contrast(const Eigen::MatrixXd& c, const std::vector<int>& labels)
{
    double w = 0.0, x = 0.0;
    std::size_t nw = 0, nx = 0;
    for (std::size_t i = 0; i < labels.size(); ++i)
        for (std::size_t j = 0; j < labels.size(); ++j) {
            if (i == j || labels[i] < 0 || labels[j] < 0) continue;
            double v = c(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
            if (labels[i] == labels[j]) {
                w += v;
                ++nw;
            } else {
                x += v;
                ++nx;
            }
        }
    if (nw == 0 || nx == 0) fail(ErrorKind::contract, "block contrast needs at least two non-empty blocks");
    return w / static_cast<double>(nw) - x / static_cast<double>(nx);
}

// --------------------------------------------------------------------------
// Four dynamical modes

struct ModeCell {
    Setting setting;
    // Rows are triggers, columns patterns.
    std::map<std::size_t, Eigen::MatrixXd> snapshots;
    Eigen::MatrixXd final_r;
    Eigen::MatrixXd mean_activity;  // trigger x (steps + 1)
    Eigen::MatrixXd final_states;

    double min_trigger_r = 0.0;
    double max_other_r = 0.0;
    double min_best_neighbor_r = 0.0;
    double min_component_fraction = 0.0;
    double mean_component_fraction = 0.0;
    double max_abs_r = 0.0;
    double max_positive_r = 0.0;
    double max_abs_final_mean = 0.0;
};

struct ModesResult {
    std::vector<ModeCell> cells;
    std::uint64_t pattern_fingerprint = 0;
};

inline ModeCell simulate_modes_cell(const MemoryGraph& g, const PatternMatrix& xi, const NormalizedAdjacency& m,
                                    const Setting& s, const SimConfig& cfg,
                                    const std::vector<std::size_t>& snapshot_times = {1, 11, 26, 101})
{
    const std::size_t p = xi.p();
    const Dynamics dyn(xi, m, cfg.params(s));
    const Correlator corr(xi);
    ModeCell cell;
    cell.setting = s;
    Eigen::MatrixXd states = triggered_states(xi, cfg.noise_c, derive_seed(cfg.seed, 1));
    cell.mean_activity.resize(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(cfg.steps + 1));
    cell.mean_activity.col(0) = states.colwise().mean().transpose();
    run_batch(dyn, states, cfg.steps, [&](std::size_t t, const Eigen::MatrixXd& st) {
        cell.mean_activity.col(static_cast<Eigen::Index>(t)) = st.colwise().mean().transpose();
        if (std::find(snapshot_times.begin(), snapshot_times.end(), t) != snapshot_times.end())
            cell.snapshots[t] = corr.batch(st).transpose();
    });
    cell.final_states = states;
    cell.final_r = corr.batch(states).transpose();

    const auto nb = g.neighbors();
    const auto comp = components(g);
    cell.min_trigger_r = std::numeric_limits<double>::infinity();
    cell.max_other_r = -std::numeric_limits<double>::infinity();
    cell.min_best_neighbor_r = std::numeric_limits<double>::infinity();
    cell.min_component_fraction = std::numeric_limits<double>::infinity();
    cell.max_abs_r = 0.0;
    cell.max_positive_r = -std::numeric_limits<double>::infinity();
    double frac_sum = 0.0;
    for (std::size_t mu = 0; mu < p; ++mu) {
        auto r = cell.final_r.row(static_cast<Eigen::Index>(mu));
        cell.min_trigger_r = std::min(cell.min_trigger_r, r(static_cast<Eigen::Index>(mu)));
        std::size_t in_comp = 0, active = 0;
        for (std::size_t nu = 0; nu < p; ++nu) {
            double v = r(static_cast<Eigen::Index>(nu));
            if (nu != mu) cell.max_other_r = std::max(cell.max_other_r, v);
            cell.max_abs_r = std::max(cell.max_abs_r, std::fabs(v));
            cell.max_positive_r = std::max(cell.max_positive_r, v);
            if (comp[nu] == comp[mu]) {
                ++in_comp;
                if (std::fabs(v) > 0.1) ++active;
            }
        }
        double best_nb = -std::numeric_limits<double>::infinity();
        for (std::size_t v : nb[mu]) best_nb = std::max(best_nb, r(static_cast<Eigen::Index>(v)));
        if (!nb[mu].empty()) cell.min_best_neighbor_r = std::min(cell.min_best_neighbor_r, best_nb);
        double frac = static_cast<double>(active) / static_cast<double>(in_comp);
        cell.min_component_fraction = std::min(cell.min_component_fraction, frac);
        frac_sum += frac;
        cell.max_abs_final_mean =
            std::max(cell.max_abs_final_mean, std::fabs(cell.mean_activity(static_cast<Eigen::Index>(mu), cell.mean_activity.cols() - 1)));
    }
    cell.mean_component_fraction = frac_sum / static_cast<double>(p);
    return cell;
}

inline ModesResult four_modes(const MemoryGraph& g, const std::vector<Setting>& settings, const SimConfig& cfg)
{
    ModesResult out;
    const PatternMatrix xi = random_patterns(cfg.n, g.size(), derive_seed(cfg.seed, 0));
    out.pattern_fingerprint = fingerprint(xi);
    const NormalizedAdjacency m = cfg.coupling(g);
    for (const auto& s : settings) out.cells.push_back(simulate_modes_cell(g, xi, m, s, cfg));
    return out;
}

// --------------------------------------------------------------------------
// Hop profiles and range control

struct HopProfile {
    std::vector<double> mean;
    std::vector<double> sd;
};

// Per trigger, the mean of c(mu, nu) over vertices nu at exactly hop k
// (`cumulative` = false) or within k hops. NaN where no vertex qualifies.
inline Eigen::MatrixXd per_trigger_hop_means(const Eigen::MatrixXd& c, const std::vector<std::vector<int>>& dist,
                                             std::size_t max_hop, bool cumulative)
{
    const std::size_t p = dist.size();
    Eigen::MatrixXd out(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(max_hop + 1));
    for (std::size_t mu = 0; mu < p; ++mu)
        for (std::size_t k = 0; k <= max_hop; ++k) {
            double s = 0.0;
            std::size_t cnt = 0;
            for (std::size_t nu = 0; nu < p; ++nu) {
                int d = dist[mu][nu];
                if (d < 0) continue;
                bool hit = cumulative ? static_cast<std::size_t>(d) <= k : static_cast<std::size_t>(d) == k;
                if (!hit) continue;
                s += c(static_cast<Eigen::Index>(mu), static_cast<Eigen::Index>(nu));
                ++cnt;
            }
            out(static_cast<Eigen::Index>(mu), static_cast<Eigen::Index>(k)) =
                cnt ? s / static_cast<double>(cnt) : std::numeric_limits<double>::quiet_NaN();
        }
    return out;
}

inline HopProfile summarize_hops(const Eigen::MatrixXd& per_trigger)
{
    HopProfile hp;
    for (Eigen::Index k = 0; k < per_trigger.cols(); ++k) {
        std::vector<double> v;
        for (Eigen::Index i = 0; i < per_trigger.rows(); ++i)
            if (std::isfinite(per_trigger(i, k))) v.push_back(per_trigger(i, k));
        hp.mean.push_back(mean(v));
        hp.sd.push_back(stddev(v));
    }
    return hp;
}

// Largest hop whose value exceeds the threshold.
template <typename Values>
int effective_range(const Values& v, double threshold = 0.1)
{
    int r = -1;
    for (int k = 0; k < static_cast<int>(v.size()); ++k)
        if (std::isfinite(v[k]) && v[k] > threshold) r = k;
    return r;
}

struct HopRangeCell {
    Setting setting;
    HopProfile attractor_profile;  // correlations between final states
    HopProfile pattern_profile;    // final-state correlation with stored patterns
    int range = -1;
    std::vector<double> trigger_ranges;
    Eigen::MatrixXd attractor_correlations;
};

struct HopRangeResult {
    std::vector<HopRangeCell> cells;
    AnovaResult anova;
    bool anova_defined = true;
    std::size_t max_hop = 10;
};

inline HopRangeResult hop_range(const MemoryGraph& g, const std::vector<Setting>& settings, const SimConfig& cfg,
                                const std::vector<std::uint64_t>& seeds, std::size_t max_hop = 10,
                                double threshold = 0.1)
{
    HopRangeResult out;
    out.max_hop = max_hop;
    const auto dist = hop_distances(g);
    const NormalizedAdjacency m = cfg.coupling(g);
    for (const auto& s : settings) {
        HopRangeCell cell;
        cell.setting = s;
        Eigen::MatrixXd att_all, pat_all;
        for (std::uint64_t seed : seeds) {
            SimConfig c = cfg;
            c.seed = seed;
            const PatternMatrix xi = random_patterns(c.n, g.size(), derive_seed(seed, 0));
            const Dynamics dyn(xi, m, c.params(s));
            Eigen::MatrixXd states = triggered_states(xi, c.noise_c, derive_seed(seed, 1));
            run_batch(dyn, states, c.steps);
            Eigen::MatrixXd cc = state_correlations(states);
            Eigen::MatrixXd rr = Correlator(xi).batch(states).transpose();
            Eigen::MatrixXd att = per_trigger_hop_means(cc, dist, max_hop, false);
            Eigen::MatrixXd pat = per_trigger_hop_means(rr, dist, max_hop, false);
            auto stack = [](Eigen::MatrixXd& acc, const Eigen::MatrixXd& add) {
                Eigen::MatrixXd next(acc.rows() + add.rows(), add.cols());
                if (acc.rows()) next.topRows(acc.rows()) = acc;
                next.bottomRows(add.rows()) = add;
                acc = std::move(next);
            };
            stack(att_all, att);
            stack(pat_all, pat);
            if (cell.attractor_correlations.size() == 0) cell.attractor_correlations = cc;
        }
        cell.attractor_profile = summarize_hops(att_all);
        cell.pattern_profile = summarize_hops(pat_all);
        cell.range = effective_range(cell.attractor_profile.mean, threshold);
        for (Eigen::Index i = 0; i < att_all.rows(); ++i) {
            std::vector<double> row(att_all.cols());
            for (Eigen::Index k = 0; k < att_all.cols(); ++k) row[static_cast<std::size_t>(k)] = att_all(i, k);
            cell.trigger_ranges.push_back(effective_range(row, threshold));
        }
        out.cells.push_back(std::move(cell));
    }
    std::vector<std::vector<double>> groups;
    for (const auto& c : out.cells) groups.push_back(c.trigger_ranges);
    if (groups.size() >= 2) out.anova = one_way_anova(groups);
    else out.anova_defined = false;
    return out;
}

// --------------------------------------------------------------------------
// Miyashita profile

inline const std::vector<double>& miyashita_table_means()
{
    static const std::vector<double> v{1.0, 0.33810, 0.19700, 0.11940, 0.08806, 0.07015, 0.06493};
    return v;
}

inline const std::vector<double>& miyashita_table_sems()
{
    static const std::vector<double> v{0.0, 0.03731, 0.03582, 0.02985, 0.02388, 0.02015, 0.02239};
    return v;
}

struct MiyashitaResult {
    Setting setting;
    std::vector<double> means;  // hops 0..6, averaged over seeds
    std::vector<double> sems;
    std::vector<double> seed_r2;
    double mean_r2 = 0.0;
    double pooled_r2 = 0.0;
};

// Profile: correlation between final states of triggers within k hops,
// averaged over triggers.
inline MiyashitaResult miyashita_fit(const MemoryGraph& g, const Setting& s, const SimConfig& cfg,
                                     const std::vector<std::uint64_t>& seeds)
{
    constexpr std::size_t hops = 6;
    MiyashitaResult out;
    out.setting = s;
    const auto dist = hop_distances(g);
    const NormalizedAdjacency m = cfg.coupling(g);
    std::vector<std::vector<double>> per_hop(hops + 1);
    for (std::uint64_t seed : seeds) {
        const PatternMatrix xi = random_patterns(cfg.n, g.size(), derive_seed(seed, 0));
        const Dynamics dyn(xi, m, cfg.params(s));
        Eigen::MatrixXd states = triggered_states(xi, cfg.noise_c, derive_seed(seed, 1));
        run_batch(dyn, states, cfg.steps);
        Eigen::MatrixXd ball = per_trigger_hop_means(state_correlations(states), dist, hops, true);
        std::vector<double> prof;
        for (std::size_t k = 0; k <= hops; ++k) {
            std::vector<double> col;
            for (Eigen::Index i = 0; i < ball.rows(); ++i) col.push_back(ball(i, static_cast<Eigen::Index>(k)));
            prof.push_back(mean(col));
            per_hop[k].insert(per_hop[k].end(), col.begin(), col.end());
        }
        out.seed_r2.push_back(r_squared(prof, miyashita_table_means()));
    }
    for (std::size_t k = 0; k <= hops; ++k) {
        out.means.push_back(mean(per_hop[k]));
        out.sems.push_back(sem(per_hop[k]));
    }
    out.mean_r2 = mean(out.seed_r2);
    out.pooled_r2 = r_squared(out.means, miyashita_table_means());
    return out;
}

// --------------------------------------------------------------------------
// Community structure

struct CommunityCell {
    Setting setting;
    Eigen::MatrixXd correlations;
    double contrast = std::numeric_limits<double>::quiet_NaN();
};

inline std::vector<CommunityCell> community_matrices(const MemoryGraph& g, const std::vector<Setting>& settings,
                                                     const SimConfig& cfg, const std::vector<int>& blocks = {})
{
    std::vector<CommunityCell> out;
    const PatternMatrix xi = random_patterns(cfg.n, g.size(), derive_seed(cfg.seed, 0));
    const NormalizedAdjacency m = cfg.coupling(g);
    for (const auto& s : settings) {
        const Dynamics dyn(xi, m, cfg.params(s));
        Eigen::MatrixXd states = triggered_states(xi, cfg.noise_c, derive_seed(cfg.seed, 1));
        run_batch(dyn, states, cfg.steps);
        CommunityCell cell{s, state_correlations(states)};
        if (!blocks.empty()) cell.contrast = block_contrast(cell.correlations, blocks);
        out.push_back(std::move(cell));
    }
    return out;
}

// --------------------------------------------------------------------------
// Sequence recall

struct ScheduleMetrics {
    bool visited_in_order = false;
    std::size_t stalls = 0;
    std::size_t skips = 0;
    std::size_t distinct = 0;
    std::size_t longest_dwell = 0;
    std::size_t first_full_cycle_step = 0;  // 0 if never completed
};

// A stall is a dwell on one pattern longer than `patience` steps; a skip is a
// change by anything other than one step forward around the cycle.
inline ScheduleMetrics schedule_metrics(const std::vector<std::size_t>& schedule, std::size_t p, std::size_t patience = 40)
{
    ScheduleMetrics m;
    if (schedule.empty()) return m;
    std::set<std::size_t> seen{schedule[0]};
    std::size_t dwell = 1;
    auto close_dwell = [&] {
        if (dwell > patience) ++m.stalls;
        m.longest_dwell = std::max(m.longest_dwell, dwell);
    };
    for (std::size_t i = 1; i < schedule.size(); ++i) {
        if (schedule[i] == schedule[i - 1]) {
            ++dwell;
            continue;
        }
        close_dwell();
        dwell = 1;
        std::size_t d = (schedule[i] + p - schedule[i - 1]) % p;
        if (d != 1) ++m.skips;
        seen.insert(schedule[i]);
        if (m.first_full_cycle_step == 0 && seen.size() == p) m.first_full_cycle_step = i;
    }
    close_dwell();
    m.distinct = seen.size();
    m.visited_in_order = m.skips == 0 && m.distinct == p;
    return m;
}

struct SequenceCell {
    Setting setting;
    std::vector<std::size_t> schedule;  // argmax pattern after each step
    ScheduleMetrics metrics;
};

inline SequenceCell sequence_recall(const PatternMatrix& xi, const MemoryGraph& g, const Setting& s, const SimConfig& cfg,
                                    std::size_t trigger = 0, std::size_t patience = 40)
{
    if (!g.directed()) fail(ErrorKind::contract, "sequence recall runs on a directed graph");
    const Dynamics dyn(xi, cfg.coupling(g), cfg.params(s));
    const Correlator corr(xi);
    SequenceCell cell;
    cell.setting = s;
    Eigen::VectorXd sigma = init_state(xi, trigger, cfg.noise_c, derive_seed(cfg.seed, 1)).sigma;
    for (std::size_t t = 0; t < cfg.steps; ++t) {
        dyn.advance(sigma);
        if (!sigma.allFinite()) fail(ErrorKind::numeric_divergence, "non-finite state at step " + std::to_string(t + 1));
        Eigen::VectorXd r = corr(sigma);
        Eigen::Index best;
        r.maxCoeff(&best);
        cell.schedule.push_back(static_cast<std::size_t>(best));
    }
    cell.metrics = schedule_metrics(cell.schedule, xi.p(), patience);
    return cell;
}

// --------------------------------------------------------------------------
// Finite automaton

struct AutomatonOutcome {
    std::string state;
    std::string label;
    std::string expected;
    std::string got;
    double r = 0.0;
    bool defined = false;
};

struct AutomatonSweep {
    std::vector<AutomatonOutcome> outcomes;
    std::size_t defined_ok = 0;
    std::size_t defined_total = 0;
    std::size_t undefined_ok = 0;
    std::size_t undefined_total = 0;
};

// Every state against every label used anywhere in the spec.
inline AutomatonSweep automaton_sweep(Automaton& fsm)
{
    const AutomatonSpec& spec = fsm.composed().spec;
    AutomatonSweep out;
    for (const auto& st : spec.states)
        for (const auto& label : spec.labels()) {
            fsm.reset(st.name);
            AutomatonAnswer a = fsm.query(label);
            AutomatonOutcome o;
            o.state = st.name;
            o.label = label;
            auto t = spec.transition_index(st.name, label);
            o.defined = t.has_value();
            o.expected = t ? spec.transitions[*t].target : st.name;
            o.got = a.after;
            o.r = a.r;
            bool ok = o.got == o.expected;
            (o.defined ? out.defined_ok : out.undefined_ok) += ok;
            (o.defined ? out.defined_total : out.undefined_total) += 1;
            out.outcomes.push_back(o);
        }
    return out;
}

struct Script {
    std::string start;
    std::vector<std::string> labels;
    std::vector<std::string> expected;
};

// Scripted queries of the family-tree demonstration; the first token of each
// row is the starting person.
inline std::vector<Script> family_tree_scripts()
{
    return {
        {"Marge", {"husband", "brother", "daughter"}, {"Homer", "Homer", "Lisa"}},
        {"Bart", {"father", "wife", "daughter"}, {"Homer", "Marge", "Lisa"}},
        {"Homer", {"son", "father", "wife"}, {"Bart", "Homer", "Marge"}},
    };
}

inline std::vector<AutomatonAnswer> run_script(Automaton& fsm, const std::string& start,
                                               const std::vector<std::string>& labels)
{
    fsm.reset(start);
    std::vector<AutomatonAnswer> out;
    for (const auto& l : labels) out.push_back(fsm.query(l));
    return out;
}

// --------------------------------------------------------------------------
// Retrieval under load

struct RetrievalResult {
    std::vector<std::size_t> p_levels;
    std::vector<Setting> settings;
    Eigen::MatrixXd accuracy;  // p-level x setting
    std::size_t trials = 0;
};

inline RetrievalResult retrieval_sweep(const PatternMatrix& pool, const std::vector<std::size_t>& p_levels,
                                       const std::vector<Setting>& settings, std::size_t trials, const SimConfig& cfg)
{
    RetrievalResult out{p_levels, settings,
                        Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(p_levels.size()),
                                              static_cast<Eigen::Index>(settings.size())),
                        trials};
    for (std::size_t li = 0; li < p_levels.size(); ++li) {
        const std::size_t p = p_levels[li];
        const PatternMatrix xi = pool.head(p);
        const MemoryGraph g = p >= 2 ? build_nn_scaffold(xi.values()) : MemoryGraph(1, false, false);
        const NormalizedAdjacency m = normalize(g);
        for (std::size_t si = 0; si < settings.size(); ++si) {
            const Dynamics dyn(xi, m, cfg.params(settings[si]));
            std::size_t hits = 0;
            for (std::size_t trial = 0; trial < trials; ++trial) {
                Rng rng(derive_seed(cfg.seed, p * 1000 + trial));
                Eigen::MatrixXd states = xi.values();
                for (Eigen::Index j = 0; j < states.cols(); ++j)
                    for (Eigen::Index i = 0; i < states.rows(); ++i) states(i, j) += cfg.noise_c * (rng.uniform() - 0.5);
                run_batch(dyn, states, cfg.steps);
                Eigen::MatrixXd ov = xi.values().transpose() * states;
                for (Eigen::Index j = 0; j < ov.cols(); ++j) {
                    Eigen::Index best;
                    ov.col(j).maxCoeff(&best);
                    hits += best == j;
                }
            }
            out.accuracy(static_cast<Eigen::Index>(li), static_cast<Eigen::Index>(si)) =
                static_cast<double>(hits) / static_cast<double>(trials * p);
        }
    }
    return out;
}

// Largest fall in accuracy between consecutive p-levels for one setting.
inline double largest_drop(const RetrievalResult& r, std::size_t setting)
{
    double d = 0.0;
    for (Eigen::Index i = 1; i < r.accuracy.rows(); ++i)
        d = std::max(d, r.accuracy(i - 1, static_cast<Eigen::Index>(setting)) - r.accuracy(i, static_cast<Eigen::Index>(setting)));
    return d;
}

}  // namespace cdam
