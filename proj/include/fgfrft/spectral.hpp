#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <sstream>
#include <vector>

#include <Eigen/Dense>

#include "fgfrft/errors.hpp"
#include "fgfrft/gft.hpp"
#include "fgfrft/transform.hpp"

namespace fgfrft {

// Spectral form of a unitary matrix: F = V diag(e^{j theta}) V^H.
struct UnitaryEigen {
    Eigen::MatrixXcd v;
    Eigen::VectorXd theta; // phases in (-pi, pi], ascending for computed decompositions

    Eigen::Index n() const { return v.rows(); }

    Eigen::VectorXcd eigenvalues() const {
        Eigen::VectorXcd lam(theta.size());
        for (Eigen::Index k = 0; k < theta.size(); ++k) lam(k) = std::polar(1.0, theta(k));
        return lam;
    }
};

namespace detail {

inline double wrap_phase(std::complex<double> lambda) {
    double t = std::atan2(lambda.imag(), lambda.real());
    if (t <= -M_PI) t = M_PI;
    return t;
}

// Gap clustering of the ascending Hermitian eigenvalues cos(theta). A pair
// mixed by the Hermitian solver has gap <~ eps/tol, so anything closer than
// kClusterGap is rediagonalized against (F - F^H)/(2i) inside the cluster.
inline constexpr double kClusterGap = 1e-5;

struct UnitaryEigenBuild {
    Eigen::MatrixXcd v;
    Eigen::MatrixXcd fv; // F * v, kept for the residual check
    Eigen::VectorXcd lambda;
};

// Shared cluster refinement. cosv: ascending eigenvalues of (F+F^H)/2.
// w: its orthonormal eigenvectors. fw: F*w. skew(wcur, lo, k) must return
// the Hermitian restriction of (F - F^H)/(2i) to columns [lo, lo+k) of
// wcur; clusters are visited once, before their columns are modified.
template <typename SkewRestrict>
inline UnitaryEigenBuild refine_clusters(const Eigen::VectorXd& cosv, Eigen::MatrixXcd w,
                                         Eigen::MatrixXcd fw, SkewRestrict&& skew) {
    const Eigen::Index n = w.rows();
    UnitaryEigenBuild out;
    out.lambda.resize(n);
    Eigen::Index lo = 0;
    while (lo < n) {
        Eigen::Index hi = lo;
        while (hi + 1 < n && cosv(hi + 1) - cosv(hi) <= kClusterGap) ++hi;
        const Eigen::Index k = hi - lo + 1;
        if (k > 1) {
            const Eigen::MatrixXcd m = skew(w, lo, k);
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
            if (es.info() != Eigen::Success)
                throw numerical_error("eigendecompose_unitary: cluster refinement failed");
            const Eigen::MatrixXcd& u = es.eigenvectors();
            w.middleCols(lo, k) = (w.middleCols(lo, k) * u).eval();
            fw.middleCols(lo, k) = (fw.middleCols(lo, k) * u).eval();
        }
        for (Eigen::Index c = lo; c <= hi; ++c)
            out.lambda(c) = w.col(c).dot(fw.col(c)); // Rayleigh quotient v^H F v
        lo = hi + 1;
    }
    out.v = std::move(w);
    out.fv = std::move(fw);
    return out;
}

inline UnitaryEigenBuild decompose_unitary_real(const Eigen::MatrixXd& f) {
    const Eigen::MatrixXd s = 0.5 * (f + f.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s);
    if (es.info() != Eigen::Success)
        throw numerical_error("eigendecompose_unitary: symmetric stage failed");
    const Eigen::MatrixXd b = 0.5 * (f - f.transpose());
    Eigen::MatrixXcd w = es.eigenvectors().cast<std::complex<double>>();
    Eigen::MatrixXcd fw = (f * es.eigenvectors()).cast<std::complex<double>>();
    auto skew = [&b](const Eigen::MatrixXcd& wcur, Eigen::Index lo, Eigen::Index k) -> Eigen::MatrixXcd {
        const Eigen::MatrixXd wc = wcur.middleCols(lo, k).real();
        const Eigen::MatrixXd br = wc.transpose() * (b * wc);
        return br.cast<std::complex<double>>() * std::complex<double>(0.0, -1.0);
    };
    return refine_clusters(es.eigenvalues(), std::move(w), std::move(fw), skew);
}

inline UnitaryEigenBuild decompose_unitary_complex(const Eigen::MatrixXcd& f) {
    const Eigen::MatrixXcd a = 0.5 * (f + f.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a);
    if (es.info() != Eigen::Success)
        throw numerical_error("eigendecompose_unitary: Hermitian stage failed");
    const Eigen::MatrixXcd b = (f - f.adjoint()) * std::complex<double>(0.0, -0.5);
    Eigen::MatrixXcd w = es.eigenvectors();
    Eigen::MatrixXcd fw = f * w;
    auto skew = [&b](const Eigen::MatrixXcd& wcur, Eigen::Index lo, Eigen::Index k) -> Eigen::MatrixXcd {
        return wcur.middleCols(lo, k).adjoint() * (b * wcur.middleCols(lo, k));
    };
    return refine_clusters(es.eigenvalues(), std::move(w), std::move(fw), skew);
}

} // namespace detail

// Eigendecomposition of a unitary matrix. A recorded spectrum is returned
// as stored; otherwise the commuting Hermitian parts (F+F^H)/2 and
// (F-F^H)/(2i) are diagonalized simultaneously, which costs one Hermitian
// eigensolve plus one product instead of a complex Schur sweep. Real
// orthogonal inputs run entirely through the real symmetric solver.
inline UnitaryEigen eigendecompose_unitary(const GftMatrix& f) {
    if (f.known_spectrum) return UnitaryEigen{f.known_spectrum->v, f.known_spectrum->theta};

    detail::UnitaryEigenBuild build =
        f.is_real() ? detail::decompose_unitary_real(f.f.real()) : detail::decompose_unitary_complex(f.f);

    const Eigen::Index n = f.n();
    UnitaryEigen out;
    out.theta.resize(n);
    for (Eigen::Index k = 0; k < n; ++k) out.theta(k) = detail::wrap_phase(build.lambda(k));

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::sort(order.begin(), order.end(),
              [&](Eigen::Index a, Eigen::Index b) { return out.theta(a) < out.theta(b); });

    out.v.resize(n, n);
    Eigen::VectorXd sorted_theta(n);
    Eigen::MatrixXcd residual(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        const Eigen::Index src = order[static_cast<std::size_t>(k)];
        out.v.col(k) = build.v.col(src);
        sorted_theta(k) = out.theta(src);
        residual.col(k) = build.fv.col(src) - std::polar(1.0, out.theta(src)) * build.v.col(src);
    }
    out.theta = std::move(sorted_theta);

    const double rel = residual.norm() / std::max(f.f.norm(), 1e-300);
    if (rel > 1e-6) {
        std::ostringstream msg;
        msg << "eigendecompose_unitary: reconstruction residual " << rel << " exceeds 1e-6";
        throw numerical_error(msg.str());
    }
    return out;
}

// Exact fractional power F^alpha = V diag(e^{j alpha theta}) V^H.
inline FracOperator exact_gfrft(const UnitaryEigen& e, double alpha) {
    Eigen::VectorXcd powered(e.theta.size());
    for (Eigen::Index k = 0; k < e.theta.size(); ++k) powered(k) = std::polar(1.0, alpha * e.theta(k));
    FracOperator op;
    op.alpha = alpha;
    op.l = 0;
    op.q = e.v * (powered.asDiagonal() * e.v.adjoint());
    return op;
}

// d F^alpha / d alpha = V diag(j theta e^{j alpha theta}) V^H.
inline Eigen::MatrixXcd exact_gfrft_grad(const UnitaryEigen& e, double alpha) {
    Eigen::VectorXcd scaled(e.theta.size());
    for (Eigen::Index k = 0; k < e.theta.size(); ++k)
        scaled(k) = std::complex<double>(0.0, e.theta(k)) * std::polar(1.0, alpha * e.theta(k));
    return e.v * (scaled.asDiagonal() * e.v.adjoint());
}

// min_k (pi - |theta_k|). Zero margin means an eigenvalue at -1, where the
// series approximation degrades (Gibbs regime); below 0.05*pi a warning is
// emitted and processing continues.
inline double phase_margin(const GftMatrix& f) {
    Eigen::VectorXd theta;
    if (f.known_spectrum) {
        theta = f.known_spectrum->theta;
    } else {
        theta = eigendecompose_unitary(f).theta;
    }
    double margin = M_PI;
    for (Eigen::Index k = 0; k < theta.size(); ++k)
        margin = std::min(margin, M_PI - std::fabs(theta(k)));
    if (margin < 0.05 * M_PI) {
        std::ostringstream msg;
        msg << "phase margin " << margin << " is below 0.05*pi; series approximation accuracy is at risk";
        warn(msg.str());
    }
    return margin;
}

} // namespace fgfrft
