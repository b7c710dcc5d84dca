#pragma once

#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "fgfrft/errors.hpp"

namespace fgfrft {

// Error triple over D = approx - reference: MSE and MAE are element
// averages, NMSE is ||D||_F^2 / ||reference||_F^2.
struct ErrorReport {
    double mse = 0.0;
    double mae = 0.0;
    double nmse = 0.0;
    Eigen::Index n = 0;
};

inline ErrorReport matrix_errors(const Eigen::MatrixXcd& approx, const Eigen::MatrixXcd& reference) {
    if (approx.rows() != reference.rows() || approx.cols() != reference.cols())
        throw shape_error("matrix_errors: shape mismatch");
    const double ref_sq = reference.squaredNorm();
    if (ref_sq == 0.0) throw numerical_error("matrix_errors: NMSE undefined for all-zero reference");
    const Eigen::MatrixXcd d = approx - reference;
    const double count = static_cast<double>(d.size());
    ErrorReport r;
    r.n = approx.rows();
    r.mse = d.squaredNorm() / count;
    r.mae = d.cwiseAbs().sum() / count;
    r.nmse = d.squaredNorm() / ref_sq;
    return r;
}

// 10 log10(peak^2 / MSE); identical signals return +infinity as the
// sentinel rather than a finite value.
inline double psnr(const Eigen::VectorXd& reconstruction, const Eigen::VectorXd& reference, double peak) {
    if (reconstruction.size() != reference.size())
        throw shape_error("psnr: length mismatch");
    if (reconstruction.size() == 0) throw shape_error("psnr: empty signal");
    if (!(peak > 0.0)) throw parameter_error("psnr: peak must be positive");
    const double mse = (reconstruction - reference).squaredNorm() / static_cast<double>(reference.size());
    if (mse == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(peak * peak / mse);
}

namespace detail {

inline Eigen::MatrixXd gaussian_window(int size, double sigma) {
    Eigen::VectorXd g(size);
    const double mid = (size - 1) / 2.0;
    for (int i = 0; i < size; ++i) g(i) = std::exp(-0.5 * std::pow((i - mid) / sigma, 2));
    Eigen::MatrixXd w = g * g.transpose();
    return w / w.sum();
}

} // namespace detail

// Mean local SSIM over an 11x11 Gaussian window (sigma 1.5), valid region
// only; C1 = (0.01 peak)^2, C2 = (0.03 peak)^2.
inline double ssim(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, double peak) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw shape_error("ssim: shape mismatch");
    constexpr int kWin = 11;
    if (a.rows() < kWin || a.cols() < kWin)
        throw shape_error("ssim: image smaller than the 11x11 window");
    if (!(peak > 0.0)) throw parameter_error("ssim: peak must be positive");

    static const Eigen::MatrixXd w = detail::gaussian_window(kWin, 1.5);
    const double c1 = 0.01 * peak * 0.01 * peak;
    const double c2 = 0.03 * peak * 0.03 * peak;

    double acc = 0.0;
    std::size_t count = 0;
    for (Eigen::Index i = 0; i + kWin <= a.rows(); ++i) {
        for (Eigen::Index j = 0; j + kWin <= a.cols(); ++j) {
            const auto pa = a.block(i, j, kWin, kWin).array();
            const auto pb = b.block(i, j, kWin, kWin).array();
            const double mu_a = (w.array() * pa).sum();
            const double mu_b = (w.array() * pb).sum();
            const double var_a = (w.array() * (pa - mu_a).square()).sum();
            const double var_b = (w.array() * (pb - mu_b).square()).sum();
            const double cov = (w.array() * (pa - mu_a) * (pb - mu_b)).sum();
            acc += ((2.0 * mu_a * mu_b + c1) * (2.0 * cov + c2)) /
                   ((mu_a * mu_a + mu_b * mu_b + c1) * (var_a + var_b + c2));
            ++count;
        }
    }
    return acc / static_cast<double>(count);
}

} // namespace fgfrft
