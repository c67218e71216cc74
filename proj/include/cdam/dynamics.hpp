#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "error.hpp"
#include "graph.hpp"
#include "patterns.hpp"
#include "rng.hpp"

namespace cdam {

// Scale of the global inhibitory bias: -xi_tilde (E-I balanced, default)
// or -xi_tilde / n.
enum class Inhibition { mean_load, mean_load_per_neuron };

struct ModelParams {
    double a = 1.0;
    double h = 0.0;
    double beta = 1.0;
    double eta = 0.1;
    Inhibition inhibition = Inhibition::mean_load;

    void validate() const
    {
        if (!(beta > 0.0) || !std::isfinite(beta)) fail(ErrorKind::contract, "beta must be > 0");
        if (!(eta >= 0.0) || !std::isfinite(eta)) fail(ErrorKind::contract, "eta must be >= 0");
        if (!std::isfinite(a) || !std::isfinite(h)) fail(ErrorKind::contract, "a and h must be finite");
    }
};

struct NetworkState {
    Eigen::VectorXd sigma;
    std::size_t t = 0;
};

template <typename Derived>
Eigen::VectorXd softmax_beta(const Eigen::MatrixBase<Derived>& z, double beta)
{
    Eigen::VectorXd e = (beta * (z.array() - z.maxCoeff())).exp().matrix();
    return e / e.sum();
}

// Column-wise softmax, in place.
inline void softmax_columns(Eigen::MatrixXd& z, double beta)
{
    for (Eigen::Index j = 0; j < z.cols(); ++j) {
        auto c = z.col(j);
        c = (beta * (c.array() - c.maxCoeff())).exp().matrix();
        c /= c.sum();
    }
}

// The update rule with Q = a Xi + h Xi M^T precomputed.
class Dynamics {
public:
    Dynamics(const PatternMatrix& xi, const NormalizedAdjacency& m, const ModelParams& params)
        : xi_(&xi), params_(params)
    {
        params.validate();
        if (m.size() != xi.p())
            fail(ErrorKind::contract, "coupling matrix is " + std::to_string(m.size()) + "x" +
                                          std::to_string(m.size()) + " but there are " +
                                          std::to_string(xi.p()) + " patterns");
        q_ = params.a * xi.values() + params.h * xi.values() * m.entries.transpose();
        bias_ = xi.mean_load();
        if (params.inhibition == Inhibition::mean_load_per_neuron) bias_ /= static_cast<double>(xi.n());
    }

    const Eigen::MatrixXd& q() const { return q_; }
    const Eigen::VectorXd& bias() const { return bias_; }
    const ModelParams& params() const { return params_; }
    const PatternMatrix& patterns() const { return *xi_; }

    void advance(Eigen::VectorXd& sigma) const
    {
        Eigen::VectorXd s = softmax_beta(xi_->values().transpose() * sigma, params_.beta);
        sigma += params_.eta * (q_ * s - bias_ - sigma);
    }

    // Every column of `states` is an independent network.
    void advance_batch(Eigen::MatrixXd& states) const
    {
        Eigen::MatrixXd z = xi_->values().transpose() * states;
        softmax_columns(z, params_.beta);
        Eigen::MatrixXd r = q_ * z;
        r.colwise() -= bias_;
        states += params_.eta * (r - states);
    }

    NetworkState step(const NetworkState& in) const
    {
        if (static_cast<std::size_t>(in.sigma.size()) != xi_->n())
            fail(ErrorKind::contract, "state length " + std::to_string(in.sigma.size()) + " != n=" +
                                          std::to_string(xi_->n()));
        NetworkState out{in.sigma, in.t + 1};
        advance(out.sigma);
        return out;
    }

private:
    const PatternMatrix* xi_;
    ModelParams params_;
    Eigen::MatrixXd q_;
    Eigen::VectorXd bias_;
};

inline NetworkState update_step(const NetworkState& state, const PatternMatrix& xi, const NormalizedAdjacency& m,
                                const ModelParams& params)
{
    return Dynamics(xi, m, params).step(state);
}

inline double overlap(const Eigen::VectorXd& sigma, std::size_t mu, const PatternMatrix& xi)
{
    if (mu >= xi.p()) fail(ErrorKind::contract, "pattern index out of range");
    return sigma.dot(xi.column(mu)) / static_cast<double>(xi.n());
}

inline Eigen::VectorXd overlaps(const Eigen::VectorXd& sigma, const PatternMatrix& xi)
{
    return xi.values().transpose() * sigma / static_cast<double>(xi.n());
}

template <typename A, typename B>
double pearson(const Eigen::MatrixBase<A>& x, const Eigen::MatrixBase<B>& y)
{
    if (x.size() != y.size()) fail(ErrorKind::contract, "pearson on vectors of different length");
    Eigen::ArrayXd dx = x.array() - x.mean();
    Eigen::ArrayXd dy = y.array() - y.mean();
    double sxx = dx.square().sum(), syy = dy.square().sum();
    if (!(sxx > 0.0) || !(syy > 0.0)) fail(ErrorKind::undefined_correlation, "zero-variance input");
    double r = (dx * dy).sum() / std::sqrt(sxx * syy);
    return std::clamp(r, -1.0, 1.0);
}

inline double pearson(const Eigen::VectorXd& sigma, std::size_t mu, const PatternMatrix& xi)
{
    if (mu >= xi.p()) fail(ErrorKind::contract, "pattern index out of range");
    return pearson(sigma, xi.column(mu));
}

// Correlation of one state against every pattern at once. A constant
// pattern yields NaN in its slot; a constant state is an error.
class Correlator {
public:
    explicit Correlator(const PatternMatrix& xi)
    {
        centered_ = xi.values();
        centered_.rowwise() -= xi.values().colwise().mean();
        norms_ = centered_.colwise().norm().transpose();
    }

    Eigen::VectorXd operator()(const Eigen::VectorXd& sigma) const
    {
        Eigen::VectorXd s = sigma.array() - sigma.mean();
        double ns = s.norm();
        if (!(ns > 0.0)) fail(ErrorKind::undefined_correlation, "zero-variance state");
        Eigen::VectorXd r = centered_.transpose() * s;
        for (Eigen::Index i = 0; i < r.size(); ++i)
            r(i) = norms_(i) > 0.0 ? std::clamp(r(i) / (norms_(i) * ns), -1.0, 1.0)
                                   : std::numeric_limits<double>::quiet_NaN();
        return r;
    }

    // One column of correlations per state column.
    Eigen::MatrixXd batch(const Eigen::MatrixXd& states) const
    {
        Eigen::MatrixXd out(centered_.cols(), states.cols());
        for (Eigen::Index j = 0; j < states.cols(); ++j) out.col(j) = (*this)(states.col(j));
        return out;
    }

private:
    Eigen::MatrixXd centered_;
    Eigen::VectorXd norms_;
};

namespace detail {

// log sum_k w_k exp(x_k), w_k >= 0 assumed summed positive by the caller.
inline double log_weighted_sum_exp(const std::vector<double>& w, const std::vector<double>& x)
{
    double mx = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < x.size(); ++k)
        if (w[k] != 0.0) mx = std::max(mx, x[k]);
    double s = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) s += w[k] * std::exp(x[k] - mx);
    if (!(s > 0.0)) return std::numeric_limits<double>::quiet_NaN();
    return mx + std::log(s);
}

}  // namespace detail

inline double energy(const Eigen::VectorXd& sigma, const PatternMatrix& xi, const MemoryGraph& g,
                     const NormalizedAdjacency& m, const ModelParams& params)
{
    if (g.size() != xi.p() || m.size() != xi.p())
        fail(ErrorKind::contract, "graph does not match pattern count");
    const double beta = params.beta;
    const Eigen::VectorXd ov = overlaps(sigma, xi);
    const std::size_t p = xi.p();

    std::vector<double> w_auto(p), x_auto(p);
    for (std::size_t mu = 0; mu < p; ++mu) {
        w_auto[mu] = 1.0;
        x_auto[mu] = beta * ov(mu) * ov(mu);
    }

    if (g.directed()) {
        std::vector<double> w, x;
        for (std::size_t mu = 0; mu < p; ++mu) {
            w.push_back(params.a);
            x.push_back(x_auto[mu]);
        }
        for (const Edge& e : g.edges()) {
            w.push_back(params.h * e.weight);
            x.push_back(beta * ov(e.src) * ov(e.dst));
        }
        // Signed weights: evaluate directly rather than with a shifted exponent.
        double mx = *std::max_element(x.begin(), x.end());
        double s = 0.0;
        for (std::size_t k = 0; k < x.size(); ++k) s += w[k] * std::exp(x[k] - mx);
        if (!(s > 0.0)) fail(ErrorKind::energy_undefined, "log argument is not positive");
        return -(mx + std::log(s)) / beta;
    }

    double e = -(params.a / beta) * detail::log_weighted_sum_exp(w_auto, x_auto);
    if (!g.edges().empty()) {
        std::vector<double> w, x;
        for (std::size_t i = 0; i < p; ++i)
            for (std::size_t j = 0; j < p; ++j) {
                double mij = m.entries(i, j);
                if (mij == 0.0) continue;
                if (mij < 0.0) fail(ErrorKind::energy_undefined, "negative coupling in undirected energy");
                w.push_back(mij);
                x.push_back(beta * ov(i) * ov(j));
            }
        double lse = detail::log_weighted_sum_exp(w, x);
        if (!std::isfinite(lse)) fail(ErrorKind::energy_undefined, "hetero log argument is not positive");
        e -= (params.h / beta) * lse;
    }
    return e;
}

inline double energy(const Eigen::VectorXd& sigma, const PatternMatrix& xi, const MemoryGraph& g,
                     const ModelParams& params)
{
    return energy(sigma, xi, g, normalize(g), params);
}

inline NetworkState init_state(const PatternMatrix& xi, std::size_t mu, double c, std::uint64_t seed)
{
    if (mu >= xi.p()) fail(ErrorKind::contract, "trigger index " + std::to_string(mu) + " out of range");
    if (!(c >= 0.0)) fail(ErrorKind::contract, "noise amplitude must be >= 0");
    Rng rng(seed);
    NetworkState s{xi.column(mu), 0};
    for (Eigen::Index i = 0; i < s.sigma.size(); ++i) s.sigma(i) += c * (rng.uniform() - 0.5);
    return s;
}

enum class Termination { max_steps, fixed_point };

inline const char* to_string(Termination t) { return t == Termination::max_steps ? "max-steps" : "fixed-point"; }

struct StopRule {
    std::size_t max_steps = 101;
    double tol = 1e-9;
};

struct StepRecord {
    std::size_t t = 0;
    double mean_activity = 0.0;
    double sd_activity = 0.0;
    double energy = std::numeric_limits<double>::quiet_NaN();
    Eigen::VectorXd r;
    Eigen::VectorXd m;
};

struct SimulationTrace {
    std::vector<StepRecord> records;
    NetworkState final_state;
    Termination reason = Termination::max_steps;

    std::size_t steps() const { return final_state.t; }
};

struct TraceOptions {
    bool energy = false;
    const MemoryGraph* graph = nullptr;  // required when energy is set
};

inline SimulationTrace run(const NetworkState& initial, const PatternMatrix& xi, const NormalizedAdjacency& m,
                           const ModelParams& params, const StopRule& stop, const TraceOptions& opt = {})
{
    if (stop.max_steps < 1) fail(ErrorKind::contract, "max-steps must be >= 1");
    if (opt.energy && (!opt.graph || opt.graph->size() != xi.p()))
        fail(ErrorKind::contract, "energy tracing needs the matching memory graph");
    const Dynamics dyn(xi, m, params);
    const Correlator corr(xi);
    const double nan = std::numeric_limits<double>::quiet_NaN();

    auto record = [&](const NetworkState& s) {
        StepRecord rec;
        rec.t = s.t;
        rec.mean_activity = s.sigma.mean();
        rec.sd_activity = std::sqrt((s.sigma.array() - rec.mean_activity).square().mean());
        rec.m = overlaps(s.sigma, xi);
        try {
            rec.r = corr(s.sigma);
        } catch (const Error&) {
            rec.r = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(xi.p()), nan);
        }
        if (opt.energy) {
            try {
                rec.energy = energy(s.sigma, xi, *opt.graph, m, params);
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::energy_undefined) throw;
            }
        }
        return rec;
    };

    if (static_cast<std::size_t>(initial.sigma.size()) != xi.n())
        fail(ErrorKind::contract, "initial state length does not match n");
    SimulationTrace trace;
    NetworkState cur = initial;
    trace.records.push_back(record(cur));
    for (std::size_t k = 0; k < stop.max_steps; ++k) {
        NetworkState next = dyn.step(cur);
        if (!next.sigma.allFinite())
            fail(ErrorKind::numeric_divergence, "non-finite state at step " + std::to_string(next.t));
        double delta = (next.sigma - cur.sigma).lpNorm<Eigen::Infinity>();
        cur = std::move(next);
        trace.records.push_back(record(cur));
        if (delta < stop.tol) {
            trace.reason = Termination::fixed_point;
            break;
        }
    }
    trace.final_state = cur;
    return trace;
}

// Runs every column for a fixed number of steps; `observe(t, states)` is
// called after each step when supplied.
template <typename Observer>
void run_batch(const Dynamics& dyn, Eigen::MatrixXd& states, std::size_t steps, Observer&& observe)
{
    for (std::size_t t = 1; t <= steps; ++t) {
        dyn.advance_batch(states);
        if (!states.allFinite())
            fail(ErrorKind::numeric_divergence, "non-finite state at step " + std::to_string(t));
        observe(t, static_cast<const Eigen::MatrixXd&>(states));
    }
}

inline void run_batch(const Dynamics& dyn, Eigen::MatrixXd& states, std::size_t steps)
{
    run_batch(dyn, states, steps, [](std::size_t, const Eigen::MatrixXd&) {});
}

}  // namespace cdam
