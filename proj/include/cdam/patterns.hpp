#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <string_view>

#include "error.hpp"
#include "rng.hpp"

namespace cdam {

// Columns are the stored patterns; the mean load is kept in sync with them.
class PatternMatrix {
public:
    PatternMatrix() = default;
    explicit PatternMatrix(Eigen::MatrixXd values) { set_values(std::move(values)); }

    std::size_t n() const { return static_cast<std::size_t>(xi_.rows()); }
    std::size_t p() const { return static_cast<std::size_t>(xi_.cols()); }
    const Eigen::MatrixXd& values() const { return xi_; }
    const Eigen::VectorXd& mean_load() const { return load_; }
    auto column(std::size_t mu) const { return xi_.col(static_cast<Eigen::Index>(mu)); }

    void set_values(Eigen::MatrixXd values)
    {
        if (!values.allFinite()) fail(ErrorKind::contract, "pattern matrix has non-finite entries");
        xi_ = std::move(values);
        load_ = xi_.cols() > 0 ? Eigen::VectorXd(xi_.rowwise().mean()) : Eigen::VectorXd::Zero(xi_.rows());
    }

    // First k columns.
    PatternMatrix head(std::size_t k) const
    {
        if (k > p()) fail(ErrorKind::contract, "requested more patterns than stored");
        return PatternMatrix(xi_.leftCols(static_cast<Eigen::Index>(k)));
    }

private:
    Eigen::MatrixXd xi_;
    Eigen::VectorXd load_;
};

inline PatternMatrix random_patterns(std::size_t n, std::size_t p, std::uint64_t seed)
{
    if (n < 1 || p < 1) fail(ErrorKind::invalid_size, "random patterns need n, p >= 1");
    Rng rng(seed);
    Eigen::MatrixXd x(n, p);
    for (Eigen::Index j = 0; j < x.cols(); ++j)
        for (Eigen::Index i = 0; i < x.rows(); ++i) x(i, j) = rng.uniform();
    return PatternMatrix(std::move(x));
}

inline std::uint64_t fingerprint(const PatternMatrix& xi)
{
    std::uint64_t h = stable_hash(std::to_string(xi.n()) + "x" + std::to_string(xi.p()));
    const double* d = xi.values().data();
    std::string_view bytes(reinterpret_cast<const char*>(d), sizeof(double) * xi.n() * xi.p());
    return stable_hash(bytes, h);
}

}  // namespace cdam
