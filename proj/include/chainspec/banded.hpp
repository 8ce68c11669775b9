// banded.hpp — direct solver for symmetric positive definite banded systems
// (bandwidth 1 for chain Dirichlet problems, 2 for the capacity normal
// equations). In-place LDL^T factorization on band storage.
#pragma once
#include <cstddef>
#include <vector>

#include "chainspec/errors.hpp"

namespace chainspec {

// Lower band storage: band[d][i] = A(i, i-d) for d = 0..bw, i >= d.
class BandedSPD {
public:
    BandedSPD(std::size_t n, std::size_t bw) : n_(n), bw_(bw), band_(bw + 1, std::vector<double>(n, 0.0)) {}

    std::size_t size() const { return n_; }

    double& at(std::size_t i, std::size_t j) {
        std::size_t d = i >= j ? i - j : j - i;
        if (d > bw_) throw SolverFailure("entry outside band");
        return band_[d][i >= j ? i : j];
    }

    double get(std::size_t i, std::size_t j) const {
        std::size_t d = i >= j ? i - j : j - i;
        if (d > bw_) return 0.0;
        return band_[d][i >= j ? i : j];
    }

    void add(std::size_t i, std::size_t j, double v) { at(i, j) += v; }

    // LDL^T factorization; SolverFailure when a pivot falls below tol.
    void factorize(double pivot_tol = 1e-14);

    // Solve A x = rhs (after factorize); rhs is overwritten with x.
    void solve(std::vector<double>& rhs) const;

private:
    std::size_t n_, bw_;
    std::vector<std::vector<double>> band_; // after factorize: unit-lower L (d>=1) and D (d=0)
    bool factored_ = false;
};

inline void BandedSPD::factorize(double pivot_tol) {
    for (std::size_t j = 0; j < n_; ++j) {
        double d = band_[0][j];
        std::size_t lo = j > bw_ ? j - bw_ : 0;
        for (std::size_t k = lo; k < j; ++k) {
            double ljk = band_[j - k][j];
            d -= ljk * ljk * band_[0][k];
        }
        if (!(d > pivot_tol)) throw SolverFailure("non-positive pivot at row " + std::to_string(j));
        band_[0][j] = d;
        std::size_t hi = j + bw_ < n_ - 1 ? j + bw_ : n_ - 1;
        for (std::size_t i = j + 1; i <= hi && i < n_; ++i) {
            double s = band_[i - j][i];
            std::size_t lo2 = i > bw_ ? i - bw_ : 0;
            for (std::size_t k = (lo2 > lo ? lo2 : lo); k < j; ++k)
                s -= band_[i - k][i] * band_[j - k][j] * band_[0][k];
            band_[i - j][i] = s / d;
        }
    }
    factored_ = true;
}

inline void BandedSPD::solve(std::vector<double>& rhs) const {
    if (!factored_) throw SolverFailure("solve before factorize");
    // forward: L y = rhs
    for (std::size_t i = 0; i < n_; ++i) {
        double s = rhs[i];
        std::size_t lo = i > bw_ ? i - bw_ : 0;
        for (std::size_t k = lo; k < i; ++k) s -= band_[i - k][i] * rhs[k];
        rhs[i] = s;
    }
    // diagonal
    for (std::size_t i = 0; i < n_; ++i) rhs[i] /= band_[0][i];
    // backward: L^T x = y
    for (std::size_t i = n_; i-- > 0;) {
        double s = rhs[i];
        std::size_t hi = i + bw_ < n_ - 1 ? i + bw_ : n_ - 1;
        for (std::size_t k = i + 1; k <= hi; ++k) s -= band_[k - i][k] * rhs[k];
        rhs[i] = s;
    }
}

} // namespace chainspec
