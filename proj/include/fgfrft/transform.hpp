#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <sstream>
#include <vector>

#include <Eigen/Dense>

#include "fgfrft/errors.hpp"
#include "fgfrft/gft.hpp"
#include "fgfrft/sinc.hpp"

namespace fgfrft {

inline constexpr std::uint64_t kDefaultMemoryBudget = 4ULL << 30; // 4 GiB

namespace detail {

// q += a*p + b*p^H, tiled so the transposed read stays cache-resident.
// Hermitian powers are never stored; this is the on-the-fly combination.
inline void add_scaled_pair(Eigen::MatrixXcd& q, double a, double b, const Eigen::MatrixXcd& p) {
    constexpr Eigen::Index kBlock = 96;
    const Eigen::Index n = q.rows();
    for (Eigen::Index j0 = 0; j0 < n; j0 += kBlock) {
        const Eigen::Index bj = std::min(kBlock, n - j0);
        for (Eigen::Index i0 = 0; i0 < n; i0 += kBlock) {
            const Eigen::Index bi = std::min(kBlock, n - i0);
            q.block(i0, j0, bi, bj) += a * p.block(i0, j0, bi, bj) +
                                       b * p.block(j0, i0, bj, bi).adjoint();
        }
    }
}

} // namespace detail

// Precomputed integer powers P_n = F^n for n = 1..L, built by recursive
// multiplication and immutable afterwards. Consumers match the stored
// fingerprint against their F to rule out stale caches.
class PowerCache {
  public:
    PowerCache(const GftMatrix& f, int l, std::uint64_t memory_budget = kDefaultMemoryBudget) {
        if (l < 1) throw parameter_error("PowerCache: truncation order must be >= 1");
        const Eigen::Index n = f.n();
        const std::uint64_t bytes = static_cast<std::uint64_t>(l) * static_cast<std::uint64_t>(n) *
                                    static_cast<std::uint64_t>(n) * sizeof(std::complex<double>);
        if (bytes > memory_budget) {
            std::ostringstream msg;
            msg << "PowerCache: " << l << " powers of a " << n << "x" << n << " matrix need "
                << bytes << " bytes, over the " << memory_budget << "-byte budget";
            throw capacity_error(msg.str());
        }
        l_ = l;
        fingerprint_ = content_fingerprint(f.f);
        powers_.reserve(static_cast<std::size_t>(l));
        powers_.push_back(f.f);
        for (int k = 2; k <= l; ++k) powers_.push_back(f.f * powers_.back());
    }

    int l() const { return l_; }
    Eigen::Index n() const { return powers_[0].rows(); }
    std::uint64_t fingerprint() const { return fingerprint_; }

    // F^k for k = 1..L
    const Eigen::MatrixXcd& power(int k) const {
        if (k < 1 || k > l_) throw parameter_error("PowerCache: power index out of range");
        return powers_[static_cast<std::size_t>(k - 1)];
    }

    void verify(const GftMatrix& f) const {
        if (content_fingerprint(f.f) != fingerprint_)
            throw numerical_error("PowerCache: fingerprint mismatch, cache is stale for this matrix");
    }

  private:
    int l_ = 0;
    std::uint64_t fingerprint_ = 0;
    std::vector<Eigen::MatrixXcd> powers_;
};

inline PowerCache build_power_cache(const GftMatrix& f, int l,
                                    std::uint64_t memory_budget = kDefaultMemoryBudget) {
    return PowerCache(f, l, memory_budget);
}

// Fractional operator, either the truncated-series form (l >= 1) or an
// exact spectral construction (l == 0).
struct FracOperator {
    Eigen::MatrixXcd q;
    double alpha = 0.0;
    int l = 0;
};

namespace detail {

inline void warn_if_outside_window(double alpha, int l) {
    if (std::fabs(alpha) > static_cast<double>(l) + 1.0) {
        std::ostringstream msg;
        msg << "order alpha = " << alpha << " lies outside the series window [-" << l + 1 << ", "
            << l + 1 << "]; coefficient mass concentrates in dropped terms";
        warn(msg.str());
    }
}

} // namespace detail

// Q_L^alpha = c_0(alpha) I + sum_{n=1..L} [c_n(alpha) F^n + c_{-n}(alpha) (F^n)^H].
// truncation = 0 uses the cache's full order; smaller values assemble a
// shorter series from the same cache (L sweeps share one power set).
inline FracOperator fgfrft_matrix(const PowerCache& cache, double alpha, int truncation = 0) {
    const int l = truncation == 0 ? cache.l() : truncation;
    if (l < 1 || l > cache.l())
        throw parameter_error("fgfrft_matrix: truncation exceeds the cached power set");
    detail::warn_if_outside_window(alpha, l);
    const SincCoeffs sc = sinc_coeffs(alpha, l);
    const Eigen::Index n = cache.n();
    Eigen::MatrixXcd q = Eigen::MatrixXcd::Zero(n, n);
    q.diagonal().array() = sc.coeff(0);
    for (int k = 1; k <= l; ++k)
        detail::add_scaled_pair(q, sc.coeff(k), sc.coeff(-k), cache.power(k));
    return FracOperator{std::move(q), alpha, l};
}

// d Q_L^alpha / d alpha, assembled from the same cached powers with the
// coefficient derivatives.
inline Eigen::MatrixXcd fgfrft_grad(const PowerCache& cache, double alpha) {
    detail::warn_if_outside_window(alpha, cache.l());
    const SincCoeffs sc = sinc_coeffs(alpha, cache.l());
    const Eigen::Index n = cache.n();
    Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(n, n);
    g.diagonal().array() = sc.dcoeff(0);
    for (int k = 1; k <= cache.l(); ++k)
        detail::add_scaled_pair(g, sc.dcoeff(k), sc.dcoeff(-k), cache.power(k));
    return g;
}

inline Eigen::MatrixXcd apply_forward(const FracOperator& op, const Eigen::MatrixXcd& x) {
    if (x.rows() != op.q.cols()) throw shape_error("apply_forward: signal length does not match operator");
    return op.q * x;
}

// Inverse action via the Hermitian transpose: Q_L^{-alpha} = (Q_L^alpha)^H,
// no rebuild.
inline Eigen::MatrixXcd apply_inverse(const FracOperator& op, const Eigen::MatrixXcd& x) {
    if (x.rows() != op.q.rows()) throw shape_error("apply_inverse: signal length does not match operator");
    return op.q.adjoint() * x;
}

} // namespace fgfrft
