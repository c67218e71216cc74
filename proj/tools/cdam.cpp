#include <CLI11.hpp>
#include <cdam/cdam.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

using namespace cdam;
namespace fs = std::filesystem;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_usage = 2;
constexpr int exit_numeric = 3;

const std::vector<std::string> experiment_names{"four-modes", "hop-range", "miyashita",      "karate",         "tutte",
                                                "barbell",    "sequence",  "retrieval-sweep", "automaton-sweep"};

int exit_code(const Error& e)
{
    switch (e.kind()) {
    case ErrorKind::numeric_divergence:
    case ErrorKind::undefined_correlation:
    case ErrorKind::energy_undefined: return exit_numeric;
    default: return exit_usage;
    }
}

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::string item;
    std::istringstream is(s);
    while (std::getline(is, item, sep)) out.push_back(item);
    return out;
}

std::size_t to_size(const std::string& s, const std::string& what)
{
    std::size_t pos = 0;
    unsigned long long v = 0;
    try {
        v = std::stoull(s, &pos);
    } catch (const std::logic_error&) {
        pos = 0;
    }
    if (pos != s.size() || s.empty() || s[0] == '-') fail(ErrorKind::contract, "bad " + what + " '" + s + "'");
    return static_cast<std::size_t>(v);
}

struct GraphSource {
    std::string spec;
    MemoryGraph graph;
    std::vector<int> blocks;  // known community labels, empty if none
};

// cycle:N dicycle:N barbell:n,m karate tutte regular:p,k,seed or a file path.
GraphSource parse_graph(const std::string& spec)
{
    GraphSource out{spec, {}, {}};
    auto colon = spec.find(':');
    std::string kind = spec.substr(0, colon);
    std::vector<std::string> args = colon == std::string::npos ? std::vector<std::string>{} : split(spec.substr(colon + 1), ',');
    auto want = [&](std::size_t k) {
        if (args.size() != k) fail(ErrorKind::contract, "graph spec '" + spec + "' expects " + std::to_string(k) + " argument(s)");
    };
    if (kind == "cycle" || kind == "dicycle") {
        want(1);
        out.graph = build_cycle(to_size(args[0], "cycle length"), kind == "dicycle");
    } else if (kind == "barbell") {
        want(2);
        std::size_t n = to_size(args[0], "clique size"), m = to_size(args[1], "path length");
        out.graph = build_barbell(n, m);
        out.blocks.assign(2 * n + m, -1);
        for (std::size_t v = 0; v < n; ++v) {
            out.blocks[v] = 0;
            out.blocks[n + m + v] = 1;
        }
    } else if (kind == "regular") {
        want(3);
        out.graph = build_random_regular(to_size(args[0], "vertex count"), to_size(args[1], "degree"), to_size(args[2], "seed"));
    } else if ((kind == "karate" || kind == "tutte") && args.empty()) {
        fs::path file = fs::path(data_dir()) / "graphs" / (kind + ".txt");
        out.graph = fs::is_regular_file(file) ? load_graph_file(file.string()) : build_named(kind);
        out.blocks = kind == "karate" ? karate_factions() : tutte_fragments();
    } else if (fs::is_regular_file(spec)) {
        out.graph = load_graph_file(spec);
    } else {
        fail(ErrorKind::lookup, "unknown graph '" + spec +
                                    "' (cycle:N, dicycle:N, barbell:n,m, karate, tutte, regular:p,k,seed or a file)");
    }
    return out;
}

struct PatternSource {
    std::string spec;
    PatternMatrix patterns;
};

// random:N, idx:PATH (first p images), frames:DIR[,N] (N sampled values, default all).
PatternSource parse_patterns(const std::string& spec, std::size_t p, std::uint64_t seed)
{
    auto colon = spec.find(':');
    if (colon == std::string::npos) fail(ErrorKind::contract, "pattern spec '" + spec + "' needs a kind prefix");
    std::string kind = spec.substr(0, colon), arg = spec.substr(colon + 1);
    PatternSource out{spec, {}};
    if (kind == "random") {
        out.patterns = random_patterns(to_size(arg, "neuron count"), p, derive_seed(seed, 0));
    } else if (kind == "idx") {
        IdxImages img = load_idx(arg, {}, p);
        if (static_cast<std::size_t>(img.images.cols()) < p)
            fail(ErrorKind::contract, arg + " holds fewer images than graph vertices");
        out.patterns = PatternMatrix(std::move(img.images));
    } else if (kind == "frames") {
        auto parts = split(arg, ',');
        std::string dir = parts.empty() ? std::string{} : parts[0];
        std::size_t n = parts.size() > 1 ? to_size(parts[1], "sample size") : 0;
        if (n == 0) {
            std::vector<fs::path> files;
            if (fs::is_directory(dir))
                for (const auto& e : fs::directory_iterator(dir))
                    if (e.is_regular_file() && e.path().extension() != ".csv" && e.path().extension() != ".txt")
                        files.push_back(e.path());
            if (files.empty()) fail(ErrorKind::ingest, "no frames in " + dir);
            Raster r = read_pnm(std::min_element(files.begin(), files.end())->string());
            n = r.width * r.height * r.channels;
        }
        out.patterns = ingest_frames(dir, n, derive_seed(seed, 2)).patterns;
        if (out.patterns.p() != p)
            fail(ErrorKind::contract, std::to_string(out.patterns.p()) + " frames but the graph has " + std::to_string(p) +
                                          " vertices");
    } else {
        fail(ErrorKind::contract, "unknown pattern source '" + kind + "' (random:N, idx:PATH, frames:DIR[,N])");
    }
    return out;
}

Inhibition parse_inhibition(const std::string& s)
{
    if (s == "mean-load") return Inhibition::mean_load;
    if (s == "per-neuron") return Inhibition::mean_load_per_neuron;
    fail(ErrorKind::contract, "inhibition must be mean-load or per-neuron");
}

void write_text(const fs::path& p, const std::string& s)
{
    std::ofstream f(p);
    if (!f) fail(ErrorKind::io, "cannot write " + p.string());
    f << s;
}

// ---------------------------------------------------------------------------

struct Common {
    double a = 1.0, h = 0.0, beta = 1.0, eta = 0.1, noise_c = 1.0;
    std::size_t steps = 101;
    std::uint64_t seed = 1;
    std::string inhibition = "mean-load";
    bool adjacency = false;
    std::string out;
};

void add_model_flags(CLI::App* cmd, Common& c, bool with_ah)
{
    if (with_ah) {
        cmd->add_option("--a", c.a, "auto-association strength");
        cmd->add_option("--h", c.h, "hetero-association strength");
    }
    cmd->add_option("--beta", c.beta, "inverse temperature");
    cmd->add_option("--eta", c.eta, "step size");
    cmd->add_option("--noise-c", c.noise_c, "trigger noise amplitude");
    cmd->add_option("--seed", c.seed, "random seed");
    cmd->add_option("--inhibition", c.inhibition, "mean-load or per-neuron");
    cmd->add_flag("--adjacency", c.adjacency, "couple through the raw adjacency instead of the normalized one");
}

struct SimulateOpts {
    Common c;
    std::string graph = "cycle:30";
    std::string patterns = "random:1000";
    std::size_t trigger = 0;
    double tol = 1e-9;
};

int cmd_simulate(const SimulateOpts& o)
{
    GraphSource gs = parse_graph(o.graph);
    PatternSource ps = parse_patterns(o.patterns, gs.graph.size(), o.c.seed);
    if (ps.patterns.p() != gs.graph.size()) fail(ErrorKind::contract, "pattern count does not match graph vertices");
    if (o.trigger >= gs.graph.size())
        fail(ErrorKind::contract, "trigger " + std::to_string(o.trigger) + " out of range for " +
                                      std::to_string(gs.graph.size()) + " patterns");
    ModelParams prm{o.c.a, o.c.h, o.c.beta, o.c.eta, parse_inhibition(o.c.inhibition)};
    prm.validate();
    if (o.c.steps < 1) fail(ErrorKind::contract, "steps must be >= 1");
    if (!(o.tol >= 0.0)) fail(ErrorKind::contract, "tol must be >= 0");
    if (!(o.c.noise_c >= 0.0)) fail(ErrorKind::contract, "noise-c must be >= 0");

    NormalizedAdjacency m = o.c.adjacency ? unnormalized(gs.graph) : normalize(gs.graph);
    NetworkState init = init_state(ps.patterns, o.trigger, o.c.noise_c, derive_seed(derive_seed(o.c.seed, 1), o.trigger));
    SimulationTrace tr = run(init, ps.patterns, m, prm, {o.c.steps, o.tol}, {true, &gs.graph});

    fs::create_directories(o.c.out);
    std::ostringstream csv;
    write_trace_csv(csv, tr);
    write_text(fs::path(o.c.out) / "trace.csv", csv.str());
    Eigen::Index best = 0;
    const Eigen::VectorXd& r = tr.records.back().r;
    for (Eigen::Index i = 1; i < r.size(); ++i)
        if (std::isfinite(r(i)) && (!std::isfinite(r(best)) || r(i) > r(best))) best = i;
    json manifest = {{"command", "simulate"},
                     {"config",
                      {{"a", o.c.a}, {"h", o.c.h}, {"beta", o.c.beta}, {"eta", o.c.eta}, {"steps", o.c.steps},
                       {"tol", o.tol}, {"noise_c", o.c.noise_c}, {"seed", o.c.seed}, {"trigger", o.trigger},
                       {"graph", o.graph}, {"patterns", o.patterns}, {"inhibition", o.c.inhibition},
                       {"coupling", o.c.adjacency ? "adjacency" : "normalized"}}},
                     {"inputs",
                      {{"graph_fingerprint", hex64(gs.graph.fingerprint())},
                       {"pattern_fingerprint", hex64(fingerprint(ps.patterns))},
                       {"n", ps.patterns.n()},
                       {"p", ps.patterns.p()}}},
                     {"result",
                      {{"termination", to_string(tr.reason)},
                       {"steps", tr.steps()},
                       {"argmax_r", best},
                       {"max_r", safe_number(r(best))}}},
                     {"files", {"trace.csv"}}};
    write_text(fs::path(o.c.out) / "manifest.json", manifest.dump(2) + "\n");
    std::cout << "simulate: " << tr.steps() << " steps (" << to_string(tr.reason) << "), argmax r = pattern " << best
              << " (" << format_number(r(best)) << "), wrote " << o.c.out << "\n";
    return exit_ok;
}

// ---------------------------------------------------------------------------

struct ExperimentOpts {
    Common c;
    std::string name;
    std::optional<std::string> graph;
    std::optional<std::string> patterns;
    std::optional<std::size_t> n;
    std::optional<std::size_t> steps;
    std::optional<double> a, h;
    std::size_t seeds = 0;
    std::size_t trials = 5;
    std::string spec;
};

SimConfig base_config(const ExperimentOpts& o, std::size_t n, std::size_t steps)
{
    SimConfig cfg;
    cfg.n = o.n.value_or(n);
    cfg.steps = o.steps.value_or(steps);
    cfg.beta = o.c.beta;
    cfg.eta = o.c.eta;
    cfg.noise_c = o.c.noise_c;
    cfg.seed = o.c.seed;
    cfg.inhibition = parse_inhibition(o.c.inhibition);
    cfg.normalized = !o.c.adjacency;
    cfg.params({}).validate();
    if (cfg.n < 1 || cfg.steps < 1) fail(ErrorKind::contract, "n and steps must be >= 1");
    if (!(cfg.noise_c >= 0.0)) fail(ErrorKind::contract, "noise-c must be >= 0");
    return cfg;
}

std::vector<std::uint64_t> seed_list(const ExperimentOpts& o, std::size_t dflt)
{
    std::vector<std::uint64_t> s;
    for (std::size_t k = 0; k < (o.seeds ? o.seeds : dflt); ++k) s.push_back(o.c.seed + k);
    return s;
}

std::vector<Setting> settings_or(const ExperimentOpts& o, std::vector<Setting> dflt)
{
    if (o.a.has_value() != o.h.has_value()) fail(ErrorKind::contract, "--a and --h must be given together");
    if (o.a) return {{*o.a, *o.h}};
    return dflt;
}

AutomatonSpec automaton_spec_or_default(const std::string& path)
{
    return load_automaton_spec(path.empty() ? (fs::path(data_dir()) / "automata" / "family_tree.txt").string() : path);
}

int cmd_experiment(const ExperimentOpts& o)
{
    if (std::find(experiment_names.begin(), experiment_names.end(), o.name) == experiment_names.end()) {
        std::cerr << "unknown experiment '" << o.name << "'; valid names:";
        for (const auto& n : experiment_names) std::cerr << " " << n;
        std::cerr << "\n";
        return exit_usage;
    }
    const std::string out = o.c.out.empty() ? "reports/" + o.name : o.c.out;
    ExperimentReport report;
    std::string summary;

    if (o.name == "four-modes") {
        GraphSource gs = parse_graph(o.graph.value_or("cycle:30"));
        SimConfig cfg = base_config(o, 1000, 101);
        auto settings = settings_or(o, mode_settings());
        ModesResult res = four_modes(gs.graph, settings, cfg);
        report = report_four_modes(gs.spec, gs.graph, res, cfg);
        report.params["settings"] = settings_json(settings);
        summary = std::to_string(settings.size()) + " settings x " + std::to_string(gs.graph.size()) + " triggers";
    } else if (o.name == "hop-range") {
        GraphSource gs = parse_graph(o.graph.value_or("cycle:30"));
        SimConfig cfg = base_config(o, 1000, 101);
        auto seeds = seed_list(o, 1);
        auto settings = settings_or(o, canonical_sweep());
        HopRangeResult res = hop_range(gs.graph, settings, cfg, seeds);
        report = report_hop_range(gs.graph, res, cfg, seeds);
        report.params["settings"] = settings_json(settings);
        std::ostringstream s;
        s << "ranges";
        for (const auto& c : res.cells) s << " " << c.range;
        if (res.anova_defined) s << ", F = " << format_number(res.anova.f) << ", p = " << format_number(res.anova.p);
        summary = s.str();
    } else if (o.name == "miyashita") {
        GraphSource gs = parse_graph(o.graph.value_or("cycle:30"));
        SimConfig cfg = base_config(o, 1000, 101);
        auto seeds = seed_list(o, 5);
        Setting s = settings_or(o, {{-2.45, 3.45}}).front();
        MiyashitaResult res = miyashita_fit(gs.graph, s, cfg, seeds);
        report = report_miyashita(res, cfg, seeds);
        report.inputs["graph"] = gs.spec;
        summary = "R2 = " + format_number(res.mean_r2);
    } else if (o.name == "karate" || o.name == "tutte" || o.name == "barbell") {
        GraphSource gs = parse_graph(o.graph.value_or(o.name == "barbell" ? "barbell:10,10" : o.name));
        SimConfig cfg = base_config(o, 1000, 101);
        auto settings = settings_or(o, canonical_sweep());
        auto cells = community_matrices(gs.graph, settings, cfg, gs.blocks);
        report = report_community(o.name, gs.graph, cells, cfg, gs.blocks);
        report.params["graph"] = gs.spec;
        report.params["settings"] = settings_json(settings);
        std::ostringstream s;
        s << "block contrast";
        for (const auto& c : cells) s << " " << c.setting.label() << "=" << format_number(c.contrast);
        summary = s.str();
    } else if (o.name == "sequence") {
        SimConfig cfg = base_config(o, 2000, 1500);
        GraphSource gs = parse_graph(o.graph.value_or("dicycle:50"));
        if (!gs.graph.directed()) fail(ErrorKind::contract, "sequence recall needs a directed graph");
        PatternMatrix xi;
        std::string source;
        if (o.patterns) {
            xi = parse_patterns(*o.patterns, gs.graph.size(), cfg.seed).patterns;
            source = *o.patterns;
        } else {
            FrameSurrogateOptions fo;
            fo.frames = gs.graph.size();
            xi = surrogate_frames(cfg.n, derive_seed(cfg.seed, 7), fo);
            source = "surrogate-frames";
        }
        cfg.n = xi.n();
        auto settings = settings_or(o, canonical_sweep());
        std::vector<SequenceCell> cells;
        for (const auto& s : settings) cells.push_back(sequence_recall(xi, gs.graph, s, cfg));
        report = report_sequence(cells, cfg, 40, fingerprint(xi), source);
        std::ostringstream s;
        for (const auto& c : cells)
            s << c.setting.label() << ": in_order=" << c.metrics.visited_in_order << " skips=" << c.metrics.skips
              << " stalls=" << c.metrics.stalls << "; ";
        summary = s.str();
    } else if (o.name == "retrieval-sweep") {
        SimConfig cfg = base_config(o, 784, 101);
        std::vector<std::size_t> levels{10, 20, 30, 40, 50, 75, 100, 150, 200, 500};
        RetrievalPool pool = retrieval_pool(levels.back(), cfg.seed);
        cfg.n = pool.patterns.n();
        auto settings = settings_or(o, {{1, 0}, {0.5, 0.5}, {0.1, 0.9}, {0, 1}});
        RetrievalResult res = retrieval_sweep(pool.patterns, levels, settings, o.trials, cfg);
        report = report_retrieval(res, cfg, pool.source, fingerprint(pool.patterns));
        std::ostringstream s;
        s << "accuracy at p=100:";
        for (std::size_t j = 0; j < settings.size(); ++j) s << " " << settings[j].label() << "=" << format_number(res.accuracy(6, static_cast<Eigen::Index>(j)));
        summary = s.str();
    } else {  // automaton-sweep
        AutomatonSpec spec = automaton_spec_or_default(o.spec);
        std::size_t n = o.n.value_or(4000);
        AutomatonParams prm;
        prm.model.beta = o.c.beta;
        prm.model.eta = o.c.eta;
        prm.model.inhibition = parse_inhibition(o.c.inhibition);
        if (o.a.has_value() != o.h.has_value()) fail(ErrorKind::contract, "--a and --h must be given together");
        if (o.a) {
            prm.model.a = *o.a;
            prm.model.h = *o.h;
        }
        if (o.steps) prm.settle_steps = *o.steps;
        prm.model.validate();
        auto composed = std::make_shared<const ComposedAutomaton>(compose_automaton_patterns(spec, n, o.c.seed));
        Automaton fsm(composed, prm);
        AutomatonSweep sweep = automaton_sweep(fsm);
        json scripts = json::array();
        for (const auto& sc : family_tree_scripts()) {
            if (!spec.state_index(sc.start)) continue;
            auto answers = run_script(fsm, sc.start, sc.labels);
            json steps = json::array();
            bool match = true;
            for (std::size_t k = 0; k < answers.size(); ++k) {
                steps.push_back({{"label", answers[k].label}, {"state", answers[k].after}, {"r", answers[k].r}});
                match = match && answers[k].after == sc.expected[k];
            }
            scripts.push_back({{"start", sc.start}, {"expected", sc.expected}, {"steps", steps}, {"matches", match}});
        }
        report.name = "automaton-sweep";
        report.params = {{"n", n},           {"seed", o.c.seed},     {"a", prm.model.a},
                         {"h", prm.model.h}, {"beta", prm.model.beta}, {"eta", prm.model.eta},
                         {"settle_steps", prm.settle_steps}, {"blend", prm.blend},
                         {"reserve_fraction", spec.reserve_fraction}};
        report.inputs = {{"pattern_fingerprint", hex64(fingerprint(composed->patterns))},
                         {"graph_fingerprint", hex64(composed->graph.fingerprint())}};
        report.stats = {{"sweep", sweep_json(sweep)}, {"scripts", scripts}};
        report.matrices.push_back({"pattern_correlations", state_correlations(composed->patterns.values()), true});
        summary = "defined " + std::to_string(sweep.defined_ok) + "/" + std::to_string(sweep.defined_total) +
                  ", undefined " + std::to_string(sweep.undefined_ok) + "/" + std::to_string(sweep.undefined_total);
    }

    write_report(out, report);
    std::cout << o.name << ": " << summary << "\nwrote " << out << "\n";
    return exit_ok;
}

// ---------------------------------------------------------------------------

struct AutomatonOpts {
    Common c;
    std::string spec;
    std::string start;
    std::vector<std::string> script;
    std::size_t n = 4000;
    std::size_t settle = 101;
    double blend = 0.5;
};

int cmd_automaton(const AutomatonOpts& o, std::istream& in)
{
    AutomatonSpec spec = automaton_spec_or_default(o.spec);
    if (!o.start.empty() && !spec.state_index(o.start)) fail(ErrorKind::lookup, "unknown start state '" + o.start + "'");
    AutomatonParams prm;
    prm.model = {o.c.a, o.c.h, o.c.beta, o.c.eta, parse_inhibition(o.c.inhibition)};
    prm.model.validate();
    prm.settle_steps = o.settle;
    prm.blend = o.blend;
    const std::string out = o.c.out.empty() ? "automaton-out" : o.c.out;

    auto composed = std::make_shared<const ComposedAutomaton>(compose_automaton_patterns(spec, o.n, o.c.seed));
    Automaton fsm(composed, prm);
    if (!o.start.empty()) fsm.reset(o.start);

    fs::create_directories(out);
    std::ofstream log(fs::path(out) / "transcript.txt");
    if (!log) fail(ErrorKind::io, "cannot write transcript in " + out);
    auto say = [&](const std::string& line) {
        std::cout << line << "\n" << std::flush;
        log << line << "\n" << std::flush;
    };
    auto state_line = [&] {
        auto [name, r] = fsm.current();
        return "state " + name + " (r=" + format_number(r) + ")";
    };
    auto answer = [&](const std::string& label) {
        AutomatonAnswer a = fsm.query(label);
        if (!a.error.empty()) say("warning: " + a.error + "; state unchanged");
        say(a.before + " + " + label + " -> " + a.after + " (r=" + format_number(a.r) + ")");
    };

    say(state_line());
    if (!o.script.empty()) {
        for (const auto& label : o.script) answer(label);
        return exit_ok;
    }
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string word;
        if (!(ls >> word)) continue;
        if (word == ":quit" || word == ":q") break;
        if (word == ":state") {
            std::string name;
            ls >> name;
            if (!spec.state_index(name)) {
                say("warning: unknown state '" + name + "'");
                continue;
            }
            fsm.reset(name);
            say(state_line());
        } else if (word == ":help") {
            say("labels:" + [&] {
                std::string s;
                for (const auto& l : spec.labels()) s += " " + l;
                return s;
            }());
            say("commands: :state <name>, :quit");
        } else if (word.front() == ':') {
            say("warning: unknown command '" + word + "'");
        } else {
            answer(word);
        }
    }
    return exit_ok;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Correlated dense associative memory simulator"};
    app.set_help_flag("--help", "print this help message and exit");
    app.require_subcommand(1);

    SimulateOpts sim;
    sim.c.out = "simulate-out";
    auto* simulate = app.add_subcommand("simulate", "run one triggered simulation and write its trace");
    simulate->set_help_flag("--help", "print this help message and exit");
    add_model_flags(simulate, sim.c, true);
    simulate->add_option("--steps", sim.c.steps, "maximum number of steps");
    simulate->add_option("--graph", sim.graph, "cycle:N, dicycle:N, barbell:n,m, karate, tutte, regular:p,k,seed or a file");
    simulate->add_option("--patterns", sim.patterns, "random:N, idx:PATH or frames:DIR[,N]");
    simulate->add_option("--trigger", sim.trigger, "index of the trigger pattern");
    simulate->add_option("--tol", sim.tol, "fixed-point tolerance on the max-norm step");
    simulate->add_option("--out", sim.c.out, "output directory");

    ExperimentOpts exp;
    auto* experiment = app.add_subcommand("experiment", "reproduce a named experiment");
    experiment->set_help_flag("--help", "print this help message and exit");
    experiment->add_option("name", exp.name, "experiment name")->required();
    add_model_flags(experiment, exp.c, false);
    experiment->add_option("--a", exp.a, "override auto-association strength (with --h)");
    experiment->add_option("--h", exp.h, "override hetero-association strength (with --a)");
    experiment->add_option("--steps", exp.steps, "number of steps");
    experiment->add_option("--n", exp.n, "neurons per pattern");
    experiment->add_option("--graph", exp.graph, "graph override");
    experiment->add_option("--patterns", exp.patterns, "pattern source override (sequence)");
    experiment->add_option("--seeds", exp.seeds, "number of consecutive seeds for multi-seed experiments");
    experiment->add_option("--trials", exp.trials, "trials per cell (retrieval-sweep)");
    experiment->add_option("--spec", exp.spec, "automaton specification (automaton-sweep)");
    experiment->add_option("--out", exp.c.out, "report directory (default reports/<name>)");

    AutomatonOpts fa;
    fa.c.a = 0.0;
    fa.c.h = 1.0;
    auto* automaton = app.add_subcommand("automaton", "drive the finite automaton from a script or a prompt");
    automaton->set_help_flag("--help", "print this help message and exit");
    automaton->add_option("spec", fa.spec, "automaton specification file (default: bundled family tree)");
    add_model_flags(automaton, fa.c, true);
    automaton->add_option("--start", fa.start, "initial state (default: first state)");
    automaton->add_option("--script", fa.script, "labels to apply in order, comma separated")->delimiter(',');
    automaton->add_option("--n", fa.n, "neurons per pattern");
    automaton->add_option("--settle", fa.settle, "steps to settle after each stimulus");
    automaton->add_option("--blend", fa.blend, "weight of the label embedding on free slots");
    automaton->add_option("--out", fa.c.out, "directory for transcript.txt");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_usage;
    }

    try {
        if (simulate->parsed()) return cmd_simulate(sim);
        if (experiment->parsed()) return cmd_experiment(exp);
        return cmd_automaton(fa, std::cin);
    } catch (const Error& e) {
        std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
        return exit_code(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
