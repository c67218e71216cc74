#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "error.hpp"

namespace cdam {

inline double mean(const std::vector<double>& v)
{
    if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

// Sample standard deviation (n - 1).
inline double stddev(const std::vector<double>& v)
{
    if (v.size() < 2) return 0.0;
    double m = mean(v), s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(v.size() - 1));
}

inline double sem(const std::vector<double>& v)
{
    return v.size() < 2 ? 0.0 : stddev(v) / std::sqrt(static_cast<double>(v.size()));
}

namespace detail {

// Lentz continued fraction for the incomplete beta function.
inline double beta_cf(double a, double b, double x)
{
    constexpr int max_iter = 500;
    constexpr double eps = 1e-15, tiny = 1e-300;
    double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0, d = 1.0 - qab * x / qap;
    if (std::fabs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= max_iter; ++m) {
        int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < eps) break;
    }
    return h;
}

}  // namespace detail

// I_x(a, b)
inline double incomplete_beta(double a, double b, double x)
{
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    double lbeta = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b);
    double front = std::exp(lbeta + a * std::log(x) + b * std::log1p(-x));
    if (x < (a + 1.0) / (a + b + 2.0)) return front * detail::beta_cf(a, b, x) / a;
    return 1.0 - front * detail::beta_cf(b, a, 1.0 - x) / b;
}

// P(F > f) for F ~ F(d1, d2).
inline double f_upper_tail(double f, double d1, double d2)
{
    if (std::isinf(f)) return 0.0;
    if (f <= 0.0) return 1.0;
    return incomplete_beta(d2 / 2.0, d1 / 2.0, d2 / (d2 + d1 * f));
}

struct AnovaResult {
    double f = 0.0;
    double p = 1.0;
    double df_between = 0.0;
    double df_within = 0.0;
};

inline AnovaResult one_way_anova(const std::vector<std::vector<double>>& groups)
{
    if (groups.size() < 2) fail(ErrorKind::contract, "ANOVA needs at least two groups");
    double total = 0.0;
    std::size_t n = 0;
    for (const auto& g : groups) {
        if (g.size() < 2) fail(ErrorKind::contract, "ANOVA groups need at least two samples");
        for (double x : g) total += x;
        n += g.size();
    }
    double grand = total / static_cast<double>(n);
    double ssb = 0.0, ssw = 0.0;
    for (const auto& g : groups) {
        double m = mean(g);
        ssb += static_cast<double>(g.size()) * (m - grand) * (m - grand);
        for (double x : g) ssw += (x - m) * (x - m);
    }
    AnovaResult r;
    r.df_between = static_cast<double>(groups.size() - 1);
    r.df_within = static_cast<double>(n - groups.size());
    double msb = ssb / r.df_between, msw = ssw / r.df_within;
    // Exact-zero checks on sums of squares; rounding noise below 1e-12 of the
    // scale is treated as zero.
    double scale = std::max(1.0, grand * grand * static_cast<double>(n));
    bool between_zero = ssb <= 1e-12 * scale;
    bool within_zero = ssw <= 1e-12 * scale;
    if (between_zero) {
        r.f = 0.0;
        r.p = 1.0;
    } else if (within_zero) {
        r.f = std::numeric_limits<double>::infinity();
        r.p = 0.0;
    } else {
        r.f = msb / msw;
        r.p = f_upper_tail(r.f, r.df_between, r.df_within);
    }
    return r;
}

// Squared Pearson correlation of two equal-length samples.
inline double r_squared(const std::vector<double>& x, const std::vector<double>& y)
{
    if (x.size() != y.size() || x.size() < 2) fail(ErrorKind::contract, "r_squared needs equal lengths >= 2");
    double mx = mean(x), my = mean(y), sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (!(sxx > 0.0) || !(syy > 0.0)) fail(ErrorKind::undefined_correlation, "zero-variance sample");
    return sxy * sxy / (sxx * syy);
}

}  // namespace cdam
