#pragma once

#include <Eigen/Dense>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include "dynamics.hpp"
#include "experiments.hpp"
#include "ingest.hpp"

namespace cdam {

inline std::string format_number(double v)
{
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

inline void write_trace_csv(std::ostream& os, const SimulationTrace& trace)
{
    const std::size_t p = trace.records.empty() ? 0 : static_cast<std::size_t>(trace.records.front().r.size());
    os << "t,mean_activity,sd_activity,energy";
    for (std::size_t i = 0; i < p; ++i) os << ",r_" << i;
    os << "\n";
    for (const auto& rec : trace.records) {
        os << rec.t << "," << format_number(rec.mean_activity) << "," << format_number(rec.sd_activity) << ","
           << format_number(rec.energy);
        for (Eigen::Index i = 0; i < rec.r.size(); ++i) os << "," << format_number(rec.r(i));
        os << "\n";
    }
}

inline void write_matrix_csv(std::ostream& os, const Eigen::MatrixXd& m)
{
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) os << (j ? "," : "") << format_number(m(i, j));
        os << "\n";
    }
}

inline void write_table_csv(std::ostream& os, const NamedTable& t)
{
    for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
    os << "\n";
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_number(row[i]);
        os << "\n";
    }
}

// Linear map of [-1, 1] onto [0, maxval]; values outside are clipped.
inline std::vector<unsigned char> heatmap_pixels(const Eigen::MatrixXd& m, unsigned maxval = 255)
{
    std::vector<unsigned char> px;
    px.reserve(static_cast<std::size_t>(m.size()));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            double v = std::isfinite(m(i, j)) ? std::clamp(m(i, j), -1.0, 1.0) : 0.0;
            px.push_back(static_cast<unsigned char>(std::lround((v + 1.0) / 2.0 * maxval)));
        }
    return px;
}

inline void write_report(const std::string& dir, const ExperimentReport& r)
{
    namespace fs = std::filesystem;
    fs::create_directories(fs::path(dir) / "traces");
    fs::create_directories(fs::path(dir) / "matrices");
    fs::create_directories(fs::path(dir) / "heatmaps");
    json files = json::array();
    for (const auto& t : r.traces) {
        std::string rel = "traces/" + t.name + ".csv";
        std::ofstream f(fs::path(dir) / rel);
        if (!f) fail(ErrorKind::io, "cannot write " + rel);
        write_table_csv(f, t);
        files.push_back(rel);
    }
    for (const auto& m : r.matrices) {
        std::string rel = "matrices/" + m.name + ".csv";
        std::ofstream f(fs::path(dir) / rel);
        if (!f) fail(ErrorKind::io, "cannot write " + rel);
        write_matrix_csv(f, m.values);
        files.push_back(rel);
        if (m.heatmap) {
            std::string hrel = "heatmaps/" + m.name + ".pgm";
            write_pgm((fs::path(dir) / hrel).string(), static_cast<std::size_t>(m.values.cols()),
                      static_cast<std::size_t>(m.values.rows()), heatmap_pixels(m.values));
            files.push_back(hrel);
        }
    }
    json doc = {{"experiment", r.name}, {"params", r.params}, {"inputs", r.inputs}, {"stats", r.stats}, {"files", files}};
    std::ofstream f(fs::path(dir) / "report.json");
    if (!f) fail(ErrorKind::io, "cannot write report.json");
    f << doc.dump(2) << "\n";
}

// --------------------------------------------------------------------------
// Result -> report

inline json settings_json(const std::vector<Setting>& s)
{
    json a = json::array();
    for (const auto& x : s) a.push_back({{"a", x.a}, {"h", x.h}});
    return a;
}

inline json safe_number(double v) { return std::isfinite(v) ? json(v) : json(format_number(v)); }

inline json vector_json(const std::vector<double>& v)
{
    json a = json::array();
    for (double x : v) a.push_back(safe_number(x));
    return a;
}

inline ExperimentReport report_four_modes(const std::string& graph_name, const MemoryGraph& g, const ModesResult& res,
                                          const SimConfig& cfg)
{
    ExperimentReport r;
    r.name = "four-modes";
    r.params = {{"graph", graph_name}, {"config", cfg.to_json()}};
    r.inputs = {{"graph_fingerprint", hex64(g.fingerprint())}, {"pattern_fingerprint", hex64(res.pattern_fingerprint)}};
    json cells = json::array();
    for (const auto& c : res.cells) {
        cells.push_back({{"a", c.setting.a},
                         {"h", c.setting.h},
                         {"min_trigger_r", c.min_trigger_r},
                         {"max_other_r", c.max_other_r},
                         {"min_best_neighbor_r", safe_number(c.min_best_neighbor_r)},
                         {"min_component_fraction_abs_r_gt_0.1", c.min_component_fraction},
                         {"mean_component_fraction_abs_r_gt_0.1", c.mean_component_fraction},
                         {"max_abs_r", c.max_abs_r},
                         {"max_positive_r", c.max_positive_r},
                         {"max_abs_final_mean_activity", c.max_abs_final_mean}});
        for (const auto& [t, snap] : c.snapshots)
            r.matrices.push_back({c.setting.label() + "_r_t" + std::to_string(t), snap, true});
        NamedTable tab{c.setting.label() + "_mean_activity", {"t"}, {}};
        for (Eigen::Index mu = 0; mu < c.mean_activity.rows(); ++mu) tab.columns.push_back("trigger_" + std::to_string(mu));
        for (Eigen::Index t = 0; t < c.mean_activity.cols(); ++t) {
            std::vector<double> row{static_cast<double>(t)};
            for (Eigen::Index mu = 0; mu < c.mean_activity.rows(); ++mu) row.push_back(c.mean_activity(mu, t));
            tab.rows.push_back(std::move(row));
        }
        r.traces.push_back(std::move(tab));
    }
    r.stats = {{"cells", cells}};
    return r;
}

inline ExperimentReport report_hop_range(const MemoryGraph& g, const HopRangeResult& res, const SimConfig& cfg,
                                         const std::vector<std::uint64_t>& seeds)
{
    ExperimentReport r;
    r.name = "hop-range";
    r.params = {{"config", cfg.to_json()}, {"seeds", seeds}, {"max_hop", res.max_hop},
                {"range_threshold", 0.1},
                {"range_definition", "largest hop whose mean final-state correlation exceeds the threshold"},
                {"anova_groups", "per-trigger effective ranges, one group per setting"}};
    r.inputs = {{"graph_fingerprint", hex64(g.fingerprint())}};
    json cells = json::array();
    NamedTable prof{"hop_profiles", {"hop"}, {}};
    for (const auto& c : res.cells) {
        prof.columns.push_back(c.setting.label() + "_mean");
        prof.columns.push_back(c.setting.label() + "_sd");
        cells.push_back({{"a", c.setting.a},
                         {"h", c.setting.h},
                         {"effective_range", c.range},
                         {"attractor_profile_mean", vector_json(c.attractor_profile.mean)},
                         {"attractor_profile_sd", vector_json(c.attractor_profile.sd)},
                         {"pattern_profile_mean", vector_json(c.pattern_profile.mean)},
                         {"pattern_profile_sd", vector_json(c.pattern_profile.sd)},
                         {"trigger_ranges", c.trigger_ranges}});
        r.matrices.push_back({c.setting.label() + "_final_state_correlations", c.attractor_correlations, true});
    }
    for (std::size_t k = 0; k <= res.max_hop; ++k) {
        std::vector<double> row{static_cast<double>(k)};
        for (const auto& c : res.cells) {
            row.push_back(c.attractor_profile.mean[k]);
            row.push_back(c.attractor_profile.sd[k]);
        }
        prof.rows.push_back(std::move(row));
    }
    r.traces.push_back(std::move(prof));
    json anova = json::object();
    if (res.anova_defined)
        anova = {{"F", safe_number(res.anova.f)}, {"p", res.anova.p}, {"df_between", res.anova.df_between},
                 {"df_within", res.anova.df_within}};
    r.stats = {{"cells", cells}, {"anova", anova}};
    return r;
}

inline ExperimentReport report_miyashita(const MiyashitaResult& res, const SimConfig& cfg,
                                         const std::vector<std::uint64_t>& seeds)
{
    ExperimentReport r;
    r.name = "miyashita";
    r.params = {{"a", res.setting.a}, {"h", res.setting.h}, {"config", cfg.to_json()}, {"seeds", seeds},
                {"profile", "mean final-state correlation within k hops of the trigger"}};
    r.inputs = {{"graph", "cycle:30"}, {"target_means", miyashita_table_means()}, {"target_sems", miyashita_table_sems()}};
    r.stats = {{"means", res.means}, {"sems", res.sems}, {"seed_r2", res.seed_r2}, {"R2", res.mean_r2},
               {"R2_of_pooled_profile", res.pooled_r2}};
    NamedTable t{"profile", {"hop", "model_mean", "model_sem", "target_mean", "target_sem"}, {}};
    for (std::size_t k = 0; k < res.means.size(); ++k)
        t.rows.push_back({static_cast<double>(k), res.means[k], res.sems[k], miyashita_table_means()[k],
                          miyashita_table_sems()[k]});
    r.traces.push_back(std::move(t));
    return r;
}

inline ExperimentReport report_community(const std::string& name, const MemoryGraph& g,
                                         const std::vector<CommunityCell>& cells, const SimConfig& cfg,
                                         const std::vector<int>& blocks)
{
    ExperimentReport r;
    r.name = name;
    r.params = {{"config", cfg.to_json()}, {"blocks", blocks}};
    r.inputs = {{"graph_fingerprint", hex64(g.fingerprint())}};
    json out = json::array();
    for (const auto& c : cells) {
        out.push_back({{"a", c.setting.a}, {"h", c.setting.h}, {"block_contrast", safe_number(c.contrast)}});
        r.matrices.push_back({c.setting.label() + "_final_state_correlations", c.correlations, true});
    }
    r.stats = {{"cells", out}};
    return r;
}

inline ExperimentReport report_sequence(const std::vector<SequenceCell>& cells, const SimConfig& cfg,
                                        std::size_t patience, std::uint64_t pattern_fp, const std::string& source)
{
    ExperimentReport r;
    r.name = "sequence";
    r.params = {{"graph", "dicycle:50"}, {"config", cfg.to_json()}, {"stall_patience", patience},
                {"skip_definition", "argmax moves by anything other than +1 around the cycle"},
                {"pattern_source", source}};
    r.inputs = {{"pattern_fingerprint", hex64(pattern_fp)}};
    json out = json::array();
    NamedTable t{"schedules", {"step"}, {}};
    for (const auto& c : cells) {
        t.columns.push_back(c.setting.label());
        out.push_back({{"a", c.setting.a},
                       {"h", c.setting.h},
                       {"visited_in_order", c.metrics.visited_in_order},
                       {"stalls", c.metrics.stalls},
                       {"skips", c.metrics.skips},
                       {"distinct", c.metrics.distinct},
                       {"longest_dwell", c.metrics.longest_dwell},
                       {"first_full_cycle_step", c.metrics.first_full_cycle_step}});
    }
    if (!cells.empty())
        for (std::size_t i = 0; i < cells.front().schedule.size(); ++i) {
            std::vector<double> row{static_cast<double>(i + 1)};
            for (const auto& c : cells) row.push_back(static_cast<double>(c.schedule[i]));
            t.rows.push_back(std::move(row));
        }
    r.traces.push_back(std::move(t));
    r.stats = {{"cells", out}};
    return r;
}

inline json sweep_json(const AutomatonSweep& s)
{
    json rows = json::array();
    for (const auto& o : s.outcomes)
        rows.push_back({{"state", o.state}, {"label", o.label}, {"defined", o.defined}, {"expected", o.expected},
                        {"got", o.got}, {"r", o.r}});
    return {{"defined_ok", s.defined_ok}, {"defined_total", s.defined_total}, {"undefined_ok", s.undefined_ok},
            {"undefined_total", s.undefined_total}, {"outcomes", rows}};
}

inline ExperimentReport report_retrieval(const RetrievalResult& res, const SimConfig& cfg, const std::string& source,
                                         std::uint64_t pool_fp)
{
    ExperimentReport r;
    r.name = "retrieval-sweep";
    r.params = {{"config", cfg.to_json()}, {"settings", settings_json(res.settings)}, {"p_levels", res.p_levels},
                {"trials", res.trials}, {"prediction", "argmax overlap"}, {"dataset", source}};
    r.inputs = {{"pool_fingerprint", hex64(pool_fp)}};
    NamedTable t{"accuracy", {"p"}, {}};
    json drops = json::array();
    for (std::size_t s = 0; s < res.settings.size(); ++s) {
        t.columns.push_back(res.settings[s].label());
        drops.push_back({{"a", res.settings[s].a}, {"h", res.settings[s].h}, {"largest_drop", largest_drop(res, s)}});
    }
    json acc = json::array();
    for (Eigen::Index i = 0; i < res.accuracy.rows(); ++i) {
        std::vector<double> row{static_cast<double>(res.p_levels[static_cast<std::size_t>(i)])};
        json cell = json::array();
        for (Eigen::Index j = 0; j < res.accuracy.cols(); ++j) {
            row.push_back(res.accuracy(i, j));
            cell.push_back(res.accuracy(i, j));
        }
        acc.push_back({{"p", res.p_levels[static_cast<std::size_t>(i)]}, {"accuracy", cell}});
        t.rows.push_back(std::move(row));
    }
    r.traces.push_back(std::move(t));
    r.stats = {{"accuracy", acc}, {"drops", drops}};
    return r;
}

}  // namespace cdam
