#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <sstream>
#include <tuple>
#include <string>
#include <vector>

#include "dynamics.hpp"
#include "error.hpp"
#include "graph.hpp"
#include "ingest.hpp"
#include "patterns.hpp"
#include "rng.hpp"

namespace cdam {

struct AutomatonState {
    std::string name;
    std::string content;  // image path; empty = seeded random content
};

struct AutomatonTransition {
    std::string source;
    std::string label;
    std::string target;
};

struct AutomatonSpec {
    std::vector<AutomatonState> states;
    std::vector<AutomatonTransition> transitions;
    double reserve_fraction = 0.75;
    std::string embeddings;  // word-vector file; empty = hashed fallback only
    bool fallback = true;

    std::optional<std::size_t> state_index(const std::string& name) const
    {
        for (std::size_t i = 0; i < states.size(); ++i)
            if (states[i].name == name) return i;
        return std::nullopt;
    }

    std::optional<std::size_t> transition_index(const std::string& source, const std::string& label) const
    {
        for (std::size_t i = 0; i < transitions.size(); ++i)
            if (transitions[i].source == source && transitions[i].label == label) return i;
        return std::nullopt;
    }

    void validate() const
    {
        if (states.empty()) fail(ErrorKind::spec, "automaton has no states");
        for (std::size_t i = 0; i < states.size(); ++i)
            for (std::size_t j = i + 1; j < states.size(); ++j)
                if (states[i].name == states[j].name) fail(ErrorKind::spec, "duplicate state " + states[i].name);
        for (const auto& t : transitions) {
            if (!state_index(t.source)) fail(ErrorKind::spec, "transition from unknown state " + t.source);
            if (!state_index(t.target)) fail(ErrorKind::spec, "transition to unknown state " + t.target);
        }
        for (std::size_t i = 0; i < transitions.size(); ++i)
            for (std::size_t j = i + 1; j < transitions.size(); ++j)
                if (transitions[i].source == transitions[j].source && transitions[i].label == transitions[j].label)
                    fail(ErrorKind::spec, "duplicate transition " + transitions[i].source + "+" + transitions[i].label);
        if (!(reserve_fraction > 0.0 && reserve_fraction < 1.0))
            fail(ErrorKind::spec, "reserve fraction must lie in (0, 1)");
    }

    std::vector<std::string> labels() const
    {
        std::vector<std::string> out;
        for (const auto& t : transitions)
            if (std::find(out.begin(), out.end(), t.label) == out.end()) out.push_back(t.label);
        std::sort(out.begin(), out.end());
        return out;
    }
};

// Line format:
//   reserve 0.75
//   embeddings vectors.txt
//   state Homer [portrait.pgm]
//   transition Homer wife Marge
// Relative paths resolve against `base_dir`.
inline AutomatonSpec parse_automaton_spec(std::istream& is, const std::string& base_dir = {})
{
    namespace fs = std::filesystem;
    auto resolve = [&](const std::string& p) {
        if (p.empty() || base_dir.empty() || fs::path(p).is_absolute()) return p;
        return (fs::path(base_dir) / p).string();
    };
    AutomatonSpec spec;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        std::istringstream ls(line);
        std::string key;
        if (!(ls >> key)) continue;
        auto bad = [&](const std::string& why) {
            fail(ErrorKind::spec, "automaton line " + std::to_string(lineno) + ": " + why);
        };
        std::vector<std::string> args;
        for (std::string a; ls >> a;) args.push_back(a);
        if (key == "reserve") {
            if (args.size() != 1) bad("reserve takes one value");
            try {
                spec.reserve_fraction = std::stod(args[0]);
            } catch (const std::logic_error&) {
                bad("bad reserve fraction");
            }
        } else if (key == "embeddings") {
            if (args.size() != 1) bad("embeddings takes one path");
            spec.embeddings = resolve(args[0]);
        } else if (key == "fallback") {
            if (args.size() != 1 || (args[0] != "on" && args[0] != "off")) bad("fallback takes on|off");
            spec.fallback = args[0] == "on";
        } else if (key == "state") {
            if (args.empty() || args.size() > 2) bad("state takes a name and an optional content path");
            spec.states.push_back({args[0], args.size() == 2 ? resolve(args[1]) : std::string{}});
        } else if (key == "transition") {
            if (args.size() != 3) bad("transition takes source label target");
            spec.transitions.push_back({args[0], args[1], args[2]});
        } else {
            bad("unknown directive '" + key + "'");
        }
    }
    spec.validate();
    return spec;
}

inline AutomatonSpec load_automaton_spec(const std::string& path)
{
    std::ifstream f(path);
    if (!f) fail(ErrorKind::io, "cannot open automaton spec " + path);
    return parse_automaton_spec(f, std::filesystem::path(path).parent_path().string());
}

// States are vertices [0, S) with self-loops; transition k is vertex S + k
// with a single edge to its target state.
inline MemoryGraph build_automaton_graph(const AutomatonSpec& spec)
{
    spec.validate();
    const std::size_t s = spec.states.size();
    MemoryGraph g(s + spec.transitions.size(), true, true);
    for (std::size_t i = 0; i < s; ++i) g.add_edge(i, i);
    for (std::size_t k = 0; k < spec.transitions.size(); ++k)
        g.add_edge(s + k, *spec.state_index(spec.transitions[k].target));
    return g;
}

struct SlotMap {
    std::vector<std::size_t> reserved;
    std::vector<std::size_t> free;
};

struct ComposedAutomaton {
    AutomatonSpec spec;
    PatternMatrix patterns;
    MemoryGraph graph;
    SlotMap slots;
    std::vector<std::string> names;
    std::shared_ptr<const WordVectors> vectors;

    std::size_t state_count() const { return spec.states.size(); }

    Eigen::VectorXd label_vector(const std::string& label) const
    {
        return embed_label(vectors.get(), label, slots.free.size(), spec.fallback);
    }
};

struct ComposeOptions {
    // Map each state's content to uniform marginals (rank / n) so that image
    // content and label embeddings share the same value distribution.
    bool equalize = true;
};

// Ranks mapped to (rank + 0.5) / n; ties broken by position.
inline Eigen::VectorXd rank_equalize(const Eigen::VectorXd& v)
{
    std::vector<Eigen::Index> order(static_cast<std::size_t>(v.size()));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) { return v(i) < v(j); });
    Eigen::VectorXd out(v.size());
    const double n = static_cast<double>(v.size());
    for (std::size_t r = 0; r < order.size(); ++r) out(order[r]) = (static_cast<double>(r) + 0.5) / n;
    return out;
}

inline ComposedAutomaton compose_automaton_patterns(const AutomatonSpec& spec, std::size_t n, std::uint64_t seed,
                                                    const ComposeOptions& opt = {})
{
    spec.validate();
    const auto reserved_count = static_cast<std::size_t>(std::floor(spec.reserve_fraction * static_cast<double>(n)));
    if (reserved_count < 1 || n - reserved_count < 1)
        fail(ErrorKind::spec, "n=" + std::to_string(n) + " leaves no reserved or no free slots");

    ComposedAutomaton out;
    out.spec = spec;
    if (!spec.embeddings.empty()) out.vectors = std::make_shared<WordVectors>(WordVectors::load(spec.embeddings));

    Rng rng(derive_seed(seed, 0));
    auto perm = rng.permutation(n);
    out.slots.reserved.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(reserved_count));
    out.slots.free.assign(perm.begin() + static_cast<std::ptrdiff_t>(reserved_count), perm.end());
    std::sort(out.slots.reserved.begin(), out.slots.reserved.end());
    std::sort(out.slots.free.begin(), out.slots.free.end());

    const std::size_t s = spec.states.size();
    std::vector<Eigen::VectorXd> content(s);
    for (std::size_t i = 0; i < s; ++i) {
        Eigen::VectorXd v(static_cast<Eigen::Index>(n));
        Rng srng(derive_seed(seed, 1 + i));
        if (spec.states[i].content.empty()) {
            for (Eigen::Index k = 0; k < v.size(); ++k) v(k) = srng.uniform();
        } else {
            Raster r = read_pnm(spec.states[i].content);
            if (r.samples.size() < n)
                fail(ErrorKind::ingest, spec.states[i].content + " has fewer than n=" + std::to_string(n) + " values");
            auto idx = srng.permutation(r.samples.size());
            for (std::size_t k = 0; k < n; ++k)
                v(static_cast<Eigen::Index>(k)) = r.samples[idx[k]] / static_cast<double>(r.maxval);
        }
        content[i] = opt.equalize ? rank_equalize(v) : v;
    }

    const std::size_t p = s + spec.transitions.size();
    Eigen::MatrixXd x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
    for (std::size_t i = 0; i < s; ++i) {
        x.col(static_cast<Eigen::Index>(i)) = content[i];
        out.names.push_back(spec.states[i].name);
    }
    for (std::size_t k = 0; k < spec.transitions.size(); ++k) {
        const auto& t = spec.transitions[k];
        Eigen::VectorXd col = content[*spec.state_index(t.source)];
        Eigen::VectorXd e = out.label_vector(t.label);
        for (std::size_t f = 0; f < out.slots.free.size(); ++f)
            col(static_cast<Eigen::Index>(out.slots.free[f])) = e(static_cast<Eigen::Index>(f));
        x.col(static_cast<Eigen::Index>(s + k)) = col;
        out.names.push_back(t.source + "+" + t.label);
    }
    out.patterns = PatternMatrix(std::move(x));
    out.graph = build_automaton_graph(spec);
    return out;
}

struct AutomatonParams {
    ModelParams model{0.0, 1.0, 1.0, 0.1};
    std::size_t settle_steps = 101;
    // Weight of the label embedding when stimulating free slots; 1 replaces
    // the free-slot activity outright.
    double blend = 0.5;
};

struct AutomatonAnswer {
    std::string before;
    std::string label;
    std::string after;
    double r = 0.0;
    std::string error;
};

class Automaton {
public:
    Automaton(std::shared_ptr<const ComposedAutomaton> composed, AutomatonParams params = {})
        : c_(std::move(composed)), params_(params), m_(normalize(c_->graph)),
          dyn_(c_->patterns, m_, params.model), corr_(c_->patterns)
    {
        if (!(params.blend > 0.0 && params.blend <= 1.0)) fail(ErrorKind::contract, "blend must lie in (0, 1]");
        reset(c_->spec.states.front().name);
    }

    const ComposedAutomaton& composed() const { return *c_; }
    const Eigen::VectorXd& sigma() const { return sigma_; }

    void reset(const std::string& state)
    {
        auto i = c_->spec.state_index(state);
        if (!i) fail(ErrorKind::lookup, "unknown state '" + state + "'");
        sigma_ = c_->patterns.column(*i);
        settle();
    }

    // Best-matching state by Pearson correlation over state patterns only.
    std::pair<std::string, double> current() const
    {
        Eigen::VectorXd r = corr_(sigma_);
        std::size_t best = 0;
        for (std::size_t i = 1; i < c_->state_count(); ++i)
            if (r(static_cast<Eigen::Index>(i)) > r(static_cast<Eigen::Index>(best))) best = i;
        return {c_->spec.states[best].name, r(static_cast<Eigen::Index>(best))};
    }

    AutomatonAnswer query(const std::string& label)
    {
        AutomatonAnswer a;
        a.label = label;
        a.before = current().first;
        Eigen::VectorXd e;
        try {
            e = c_->label_vector(label);
        } catch (const Error& err) {
            a.error = err.what();
            std::tie(a.after, a.r) = current();
            return a;
        }
        const double w = params_.blend;
        for (std::size_t f = 0; f < c_->slots.free.size(); ++f) {
            auto i = static_cast<Eigen::Index>(c_->slots.free[f]);
            sigma_(i) = (1.0 - w) * sigma_(i) + w * e(static_cast<Eigen::Index>(f));
        }
        settle();
        std::tie(a.after, a.r) = current();
        return a;
    }

private:
    void settle()
    {
        for (std::size_t t = 0; t < params_.settle_steps; ++t) dyn_.advance(sigma_);
        if (!sigma_.allFinite()) fail(ErrorKind::numeric_divergence, "automaton state diverged");
    }

    std::shared_ptr<const ComposedAutomaton> c_;
    AutomatonParams params_;
    NormalizedAdjacency m_;
    Dynamics dyn_;
    Correlator corr_;
    Eigen::VectorXd sigma_;
};

}  // namespace cdam
