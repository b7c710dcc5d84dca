#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <sstream>
#include <vector>

#include <Eigen/Dense>

#include "fgfrft/errors.hpp"
#include "fgfrft/graph.hpp"
#include "fgfrft/rng.hpp"

namespace fgfrft {

enum class Provenance { graph, haar, synthetic };

// Eigenbasis and eigenphases recorded at construction time (synthetic
// matrices), giving exact fractional powers without any decomposition.
struct KnownSpectrum {
    Eigen::MatrixXcd v;     // unitary eigenvector matrix
    Eigen::VectorXd theta;  // phases in (-pi, pi)
};

struct GftMatrix {
    Eigen::MatrixXcd f;
    Provenance provenance = Provenance::graph;
    std::optional<KnownSpectrum> known_spectrum;

    Eigen::Index n() const { return f.rows(); }

    bool is_real(double tol = 1e-13) const {
        return f.imag().cwiseAbs().maxCoeff() <= tol;
    }
};

inline double unitarity_residual(const Eigen::MatrixXcd& f) {
    const Eigen::Index n = f.rows();
    Eigen::MatrixXcd g = f * f.adjoint();
    g.diagonal().array() -= 1.0;
    return g.norm() / std::sqrt(static_cast<double>(n));
}

inline std::uint64_t content_fingerprint(const Eigen::MatrixXcd& m) {
    return fnv1a64(m.data(), sizeof(std::complex<double>) * static_cast<std::size_t>(m.size()));
}

namespace detail {

// Pivot for the deterministic sign convention: first component of largest
// absolute value.
inline Eigen::Index sign_pivot(const Eigen::VectorXd& v) {
    Eigen::Index pivot = 0;
    double best = std::fabs(v(0));
    for (Eigen::Index i = 1; i < v.size(); ++i) {
        const double a = std::fabs(v(i));
        if (a > best) {
            best = a;
            pivot = i;
        }
    }
    return pivot;
}

} // namespace detail

// GFT matrix of a symmetric shift operator: Z = V diag(lambda) V^T with
// ascending eigenvalues, deterministic eigenvector signs, F = V^T.
// Degenerate eigenvalue clusters are re-orthonormalized (modified
// Gram-Schmidt), sign-fixed, and ordered by their sign pivot index so the
// output does not depend on solver-internal basis choices.
inline GftMatrix gft_from_shift(const ShiftOperator& z) {
    const Eigen::Index n = z.matrix.rows();
    if (n != z.matrix.cols()) throw shape_error("gft_from_shift: shift operator must be square");
    const double sym_resid = (z.matrix - z.matrix.transpose()).norm();
    if (sym_resid > 1e-12 * std::max(1.0, z.matrix.norm()))
        throw numerical_error("gft_from_shift: shift operator is not symmetric");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(z.matrix);
    if (es.info() != Eigen::Success)
        throw numerical_error("gft_from_shift: eigendecomposition failed");
    Eigen::MatrixXd v = es.eigenvectors();
    const Eigen::VectorXd lambda = es.eigenvalues();

    const double scale = std::max(1.0, std::max(std::fabs(lambda(0)), std::fabs(lambda(n - 1))));
    const double cluster_tol = 1e-9 * scale;

    Eigen::Index lo = 0;
    while (lo < n) {
        Eigen::Index hi = lo;
        while (hi + 1 < n && lambda(hi + 1) - lambda(hi) <= cluster_tol) ++hi;
        const Eigen::Index k = hi - lo + 1;
        if (k > 1) {
            // modified Gram-Schmidt inside the cluster
            for (Eigen::Index a = 0; a < k; ++a) {
                for (Eigen::Index b = 0; b < a; ++b)
                    v.col(lo + a) -= v.col(lo + b).dot(v.col(lo + a)) * v.col(lo + b);
                v.col(lo + a).normalize();
            }
        }
        std::vector<std::pair<Eigen::Index, Eigen::Index>> pivots; // (pivot, column)
        for (Eigen::Index a = lo; a <= hi; ++a) {
            const Eigen::Index p = detail::sign_pivot(v.col(a));
            if (v(p, a) < 0.0) v.col(a) = -v.col(a);
            pivots.emplace_back(p, a);
        }
        if (k > 1) {
            std::sort(pivots.begin(), pivots.end());
            Eigen::MatrixXd block(n, k);
            for (Eigen::Index a = 0; a < k; ++a) block.col(a) = v.col(pivots[static_cast<std::size_t>(a)].second);
            v.middleCols(lo, k) = block;
        }
        lo = hi + 1;
    }

    GftMatrix out;
    out.provenance = Provenance::graph;
    out.f = v.transpose().cast<std::complex<double>>();
    const double resid = unitarity_residual(out.f);
    if (resid > 1e-10) {
        std::ostringstream msg;
        msg << "gft_from_shift: unitarity residual " << resid << " exceeds 1e-10";
        throw numerical_error(msg.str());
    }
    return out;
}

// Haar-distributed unitary: QR of a standard complex Gaussian matrix with
// the R diagonal phases divided out.
inline GftMatrix random_unitary(Eigen::Index n, std::uint64_t seed) {
    if (n < 1) throw parameter_error("random_unitary: n must be >= 1");
    Rng rng(seed);
    Eigen::MatrixXcd a(n, n);
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = 0; i < n; ++i)
            a(i, j) = std::complex<double>(rng.gaussian(), rng.gaussian()) * M_SQRT1_2;

    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(a);
    Eigen::MatrixXcd q = qr.householderQ();
    const Eigen::MatrixXcd& r = qr.matrixQR();
    Eigen::VectorXcd phase(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        const std::complex<double> d = r(k, k);
        const double m = std::abs(d);
        phase(k) = m > 0.0 ? d / m : std::complex<double>(1.0, 0.0);
    }
    GftMatrix out;
    out.provenance = Provenance::haar;
    out.f = q * phase.asDiagonal();
    return out;
}

// Unitary with a prescribed spectrum: F = V diag(e^{j theta}) V^H over a
// Haar-random basis V. Serves as the exact-fractional-power oracle since
// F^alpha = V diag(e^{j alpha theta}) V^H in closed form.
inline GftMatrix synthetic_unitary(const std::vector<double>& phases, std::uint64_t seed) {
    const Eigen::Index n = static_cast<Eigen::Index>(phases.size());
    if (n < 1) throw parameter_error("synthetic_unitary: need at least one phase");
    for (double t : phases)
        if (!(std::fabs(t) < M_PI))
            throw parameter_error("synthetic_unitary: phases must satisfy |theta| < pi");

    GftMatrix basis = random_unitary(n, seed);
    Eigen::VectorXcd eig(n);
    Eigen::VectorXd theta(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        theta(k) = phases[static_cast<std::size_t>(k)];
        eig(k) = std::polar(1.0, theta(k));
    }
    GftMatrix out;
    out.provenance = Provenance::synthetic;
    out.f = basis.f * eig.asDiagonal() * basis.f.adjoint();
    out.known_spectrum = KnownSpectrum{std::move(basis.f), std::move(theta)};
    return out;
}

} // namespace fgfrft
