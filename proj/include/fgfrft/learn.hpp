#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <type_traits>
#include <memory>
#include <optional>
#include <sstream>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "fgfrft/adam.hpp"
#include "fgfrft/errors.hpp"
#include "fgfrft/gft.hpp"
#include "fgfrft/sinc.hpp"
#include "fgfrft/spectral.hpp"
#include "fgfrft/transform.hpp"

namespace fgfrft {

enum class Backend { exact, fast };

inline const char* backend_name(Backend b) { return b == Backend::exact ? "exact" : "fast"; }

// ---------------------------------------------------------------------------
// Cascaded transform-order learning: Yhat = (prod_l Q^{alpha_l}) X with X = I,
// target Y = F^{alpha_target} (always exact), loss = ||Yhat - Y||_F^2 / N^2.
// ---------------------------------------------------------------------------

struct CascadeConfig {
    int depth = 1;             // K
    double init_order = 0.1;   // per-layer initial alpha
    double target_order = 1.5; // total target order
    int truncation = 10;       // L (fast backend)
    int epochs = 200;
    double lr = 0.01;
    std::uint64_t seed = 0;
    std::uint64_t memory_budget = kDefaultMemoryBudget;

    void validate() const {
        if (depth < 1) throw parameter_error("CascadeConfig: depth must be >= 1");
        if (epochs < 1) throw parameter_error("CascadeConfig: epochs must be >= 1");
        if (truncation < 1) throw parameter_error("CascadeConfig: truncation must be >= 1");
        if (!(lr > 0.0)) throw parameter_error("CascadeConfig: lr must be positive");
    }
};

// Loss and per-layer order gradients of the cascade at a given alpha vector.
// Gradients are accumulated in reverse through the layer product:
//   d loss / d alpha_l = 2/N^2 Re< Yhat - Y, Q_K..Q_{l+1} (dQ_l/d alpha) X^{(l-1)} >.
class CascadeProblem {
  public:
    CascadeProblem(const GftMatrix& f, const CascadeConfig& cfg, Backend backend)
        : backend_(backend), cfg_(cfg) {
        cfg_.validate();
        n_ = f.n();
        eig_ = eigendecompose_unitary(f);
        target_ = exact_gfrft(eig_, cfg_.target_order).q; // X = I
        if (backend_ == Backend::fast) cache_.emplace(f, cfg_.truncation, cfg_.memory_budget);
    }

    struct Eval {
        double loss = 0.0;
        Eigen::VectorXd grad;
    };

    Eval eval(const Eigen::VectorXd& alphas) const {
        const int k = static_cast<int>(alphas.size());
        const double nn = static_cast<double>(n_) * static_cast<double>(n_);

        std::vector<Eigen::MatrixXcd> ops(static_cast<std::size_t>(k));
        std::vector<Eigen::MatrixXcd> prefix(static_cast<std::size_t>(k)); // Q_l ... Q_1
        for (int l = 0; l < k; ++l) {
            ops[static_cast<std::size_t>(l)] = op(alphas(l));
            prefix[static_cast<std::size_t>(l)] =
                l == 0 ? ops[0] : ops[static_cast<std::size_t>(l)] * prefix[static_cast<std::size_t>(l - 1)];
        }
        const Eigen::MatrixXcd resid = prefix[static_cast<std::size_t>(k - 1)] - target_;

        Eval out;
        out.loss = resid.squaredNorm() / nn;
        out.grad.resize(k);
        Eigen::MatrixXcd b = resid; // cotangent flowing down through the layers
        for (int l = k - 1; l >= 0; --l) {
            const Eigen::MatrixXcd dq = grad_op(alphas(l));
            const Eigen::MatrixXcd dyhat =
                l == 0 ? dq : Eigen::MatrixXcd(dq * prefix[static_cast<std::size_t>(l - 1)]);
            out.grad(l) = 2.0 / nn * b.conjugate().cwiseProduct(dyhat).sum().real();
            if (l > 0) b = ops[static_cast<std::size_t>(l)].adjoint() * b;
        }
        return out;
    }

    Eigen::Index n() const { return n_; }

  private:
    Eigen::MatrixXcd op(double alpha) const {
        return backend_ == Backend::fast ? fgfrft_matrix(*cache_, alpha).q : exact_gfrft(eig_, alpha).q;
    }
    Eigen::MatrixXcd grad_op(double alpha) const {
        return backend_ == Backend::fast ? fgfrft_grad(*cache_, alpha) : exact_gfrft_grad(eig_, alpha);
    }

    Backend backend_;
    CascadeConfig cfg_;
    Eigen::Index n_ = 0;
    UnitaryEigen eig_;
    Eigen::MatrixXcd target_;
    std::optional<PowerCache> cache_;
};

struct OrderTrajectoryPoint {
    int epoch = 0;
    double loss = 0.0;
    std::vector<double> alphas;
    double alpha_sum = 0.0;
};

struct OrderLearnResult {
    std::vector<OrderTrajectoryPoint> trajectory; // per-epoch states plus the final point
    double final_loss = 0.0;
    std::vector<double> final_alphas;
    double final_alpha_sum = 0.0;
};

inline OrderLearnResult learn_orders(const GftMatrix& f, const CascadeConfig& cfg, Backend backend) {
    cfg.validate();
    const CascadeProblem problem(f, cfg, backend);

    AdamState adam = AdamState::init(
        Eigen::VectorXd::Constant(cfg.depth, cfg.init_order), cfg.lr);

    OrderLearnResult out;
    out.trajectory.reserve(static_cast<std::size_t>(cfg.epochs) + 1);

    auto record = [&](int epoch, double loss, const Eigen::VectorXd& alphas) {
        OrderTrajectoryPoint p;
        p.epoch = epoch;
        p.loss = loss;
        p.alphas.assign(alphas.data(), alphas.data() + alphas.size());
        p.alpha_sum = alphas.sum();
        out.trajectory.push_back(std::move(p));
    };

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        const CascadeProblem::Eval e = problem.eval(adam.params);
        if (!std::isfinite(e.loss)) {
            std::ostringstream msg;
            msg << "learn_orders: non-finite loss at epoch " << epoch;
            throw optimizer_error(msg.str());
        }
        record(epoch, e.loss, adam.params);
        adam = adam_step(adam, e.grad);
    }
    const CascadeProblem::Eval final_eval = problem.eval(adam.params);
    record(cfg.epochs, final_eval.loss, adam.params);

    out.final_loss = final_eval.loss;
    out.final_alphas.assign(adam.params.data(), adam.params.data() + adam.params.size());
    out.final_alpha_sum = adam.params.sum();
    return out;
}

// ---------------------------------------------------------------------------
// Joint order/filter denoising: minimize || Q^{-alpha} H Q^{alpha} y - x ||^2
// over (alpha, H) with Adam; Q^{-alpha} is applied as (Q^alpha)^H. The loss
// is the full complex squared norm against the real target unless
// loss_on_real is set.
// ---------------------------------------------------------------------------

struct DenoiseConfig {
    int truncation = 10;  // L
    int epochs = 300;
    double lr = 0.01;
    double init_alpha = 0.5;
    double sigma = 0.0;   // noise level the caller injected (metadata for records)
    std::uint64_t seed = 0;
    bool loss_on_real = false;

    void validate() const {
        if (truncation < 1) throw parameter_error("DenoiseConfig: truncation must be >= 1");
        if (epochs < 1) throw parameter_error("DenoiseConfig: epochs must be >= 1");
        if (!(lr > 0.0)) throw parameter_error("DenoiseConfig: lr must be positive");
        if (sigma < 0.0) throw parameter_error("DenoiseConfig: sigma must be >= 0");
    }
};

struct FilterDiag {
    Eigen::VectorXd h;
};

namespace detail {

struct DenoiseEval {
    double loss = 0.0;
    double grad_alpha = 0.0;
    Eigen::VectorXd grad_h;
};

class DenoiseEngine {
  public:
    virtual ~DenoiseEngine() = default;
    virtual DenoiseEval eval(double alpha, const Eigen::VectorXd& h) const = 0;
    virtual Eigen::MatrixXd reconstruct(double alpha, const Eigen::VectorXd& h) const = 0;
};

// Exact backend through the cached spectral basis: per evaluation the
// pipeline and its adjoints cost six basis products, never a dense
// operator rebuild.
class ExactDenoiseEngine final : public DenoiseEngine {
  public:
    ExactDenoiseEngine(Eigen::MatrixXd y, Eigen::MatrixXd x,
                       std::shared_ptr<const UnitaryEigen> eig, bool loss_on_real)
        : y_(std::move(y)), x_(std::move(x)), eig_(std::move(eig)), loss_on_real_(loss_on_real) {
        ytil_ = eig_->v.adjoint() * y_.cast<std::complex<double>>();
    }

    DenoiseEval eval(double alpha, const Eigen::VectorXd& h) const override {
        Pipeline p = run(alpha, h);

        DenoiseEval out;
        out.loss = p.loss;

        const Eigen::MatrixXcd vh_r = eig_->v.adjoint() * p.cot;
        const Eigen::MatrixXcd falpha_r = eig_->v * (p.phase.asDiagonal() * vh_r); // F^alpha r

        out.grad_h = 2.0 * falpha_r.conjugate().cwiseProduct(p.u).real().rowwise().sum();

        const Eigen::VectorXcd jt = theta_i(); // j * theta_k
        // term 1: < r, V diag(-j theta conj(phase)) b >
        const Eigen::MatrixXcd t1 = (-jt.array() * p.phase.conjugate().array()).matrix().asDiagonal() * p.b;
        double ga = 2.0 * vh_r.conjugate().cwiseProduct(t1).sum().real();
        // term 2: < F^alpha r, h o (V diag(j theta phase) ytil) >
        const Eigen::MatrixXcd q = eig_->v * ((jt.array() * p.phase.array()).matrix().asDiagonal() * ytil_);
        ga += 2.0 * falpha_r.conjugate().cwiseProduct(h.asDiagonal() * q).sum().real();
        out.grad_alpha = ga;
        return out;
    }

    Eigen::MatrixXd reconstruct(double alpha, const Eigen::VectorXd& h) const override {
        return run(alpha, h).w.real();
    }

  private:
    struct Pipeline {
        Eigen::VectorXcd phase; // e^{j alpha theta}
        Eigen::MatrixXcd u;     // F^alpha y
        Eigen::MatrixXcd b;     // V^H (h o u)
        Eigen::MatrixXcd w;     // (F^alpha)^H h o u
        Eigen::MatrixXcd cot;   // loss cotangent
        double loss = 0.0;
    };

    Eigen::VectorXcd theta_i() const {
        return (std::complex<double>(0.0, 1.0) * eig_->theta.cast<std::complex<double>>().array()).matrix();
    }

    Pipeline run(double alpha, const Eigen::VectorXd& h) const {
        Pipeline p;
        const Eigen::Index n = eig_->n();
        p.phase.resize(n);
        for (Eigen::Index k = 0; k < n; ++k) p.phase(k) = std::polar(1.0, alpha * eig_->theta(k));

        p.u = eig_->v * (p.phase.asDiagonal() * ytil_);
        const Eigen::MatrixXcd v = h.asDiagonal() * p.u;
        p.b = eig_->v.adjoint() * v;
        p.w = eig_->v * (p.phase.conjugate().asDiagonal() * p.b);

        if (loss_on_real_) {
            const Eigen::MatrixXd r = p.w.real() - x_;
            p.loss = r.squaredNorm();
            p.cot = r.cast<std::complex<double>>();
        } else {
            p.cot = p.w - x_.cast<std::complex<double>>();
            p.loss = p.cot.squaredNorm();
        }
        return p;
    }

    Eigen::MatrixXd y_, x_;
    std::shared_ptr<const UnitaryEigen> eig_;
    bool loss_on_real_;
    Eigen::MatrixXcd ytil_;
};

// Fast backend, matrix-free: Q^alpha acts as sum_n c_n(alpha) F^n through
// iterated multiplications by F / F^H; the signal-side powers F^n y are
// fixed per problem and precomputed. Scalar is double when F is real
// orthogonal (every series term is then real) and complex otherwise.
template <typename Mat>
class FastDenoiseEngine final : public DenoiseEngine {
  public:
    using Scalar = typename Mat::Scalar;

    FastDenoiseEngine(Eigen::MatrixXd y, Eigen::MatrixXd x, Mat f, int l, bool loss_on_real)
        : y_(std::move(y)), x_(std::move(x)), f_(std::move(f)), l_(l), loss_on_real_(loss_on_real) {
        spow_.resize(static_cast<std::size_t>(2 * l_ + 1));
        at(spow_, 0) = y_.cast<Scalar>();
        for (int m = 1; m <= l_; ++m) {
            at(spow_, m) = f_ * at(spow_, m - 1);
            at(spow_, -m) = f_.adjoint() * at(spow_, -(m - 1));
        }
    }

    DenoiseEval eval(double alpha, const Eigen::VectorXd& h) const override {
        const SincCoeffs sc = sinc_coeffs(alpha, l_);
        Pipeline p = run(sc, h);

        DenoiseEval out;
        out.loss = p.loss;

        // powers of the cotangent: g_m = F^m r
        std::vector<Mat> gpow(static_cast<std::size_t>(2 * l_ + 1));
        at(gpow, 0) = p.cot;
        for (int m = 1; m <= l_; ++m) {
            at(gpow, m) = f_ * at(gpow, m - 1);
            at(gpow, -m) = f_.adjoint() * at(gpow, -(m - 1));
        }
        Mat qr = sc.coeff(0) * at(gpow, 0); // Q r
        for (int m = 1; m <= l_; ++m) qr += sc.coeff(m) * at(gpow, m) + sc.coeff(-m) * at(gpow, -m);

        out.grad_h = 2.0 * real_part(qr.conjugate().cwiseProduct(p.u)).rowwise().sum();

        Mat dqh_v = sc.dcoeff(0) * at(p.tpow, 0); // (dQ^H/dalpha) v = sum dc_{-m} F^m v
        for (int m = 1; m <= l_; ++m)
            dqh_v += sc.dcoeff(-m) * at(p.tpow, m) + sc.dcoeff(m) * at(p.tpow, -m);
        Mat du = sc.dcoeff(0) * at(spow_, 0); // (dQ/dalpha) y
        for (int m = 1; m <= l_; ++m)
            du += sc.dcoeff(m) * at(spow_, m) + sc.dcoeff(-m) * at(spow_, -m);

        double ga = 2.0 * real_part(p.cot.conjugate().cwiseProduct(dqh_v)).sum();
        ga += 2.0 * real_part(qr.conjugate().cwiseProduct(h.asDiagonal() * du)).sum();
        out.grad_alpha = ga;
        return out;
    }

    Eigen::MatrixXd reconstruct(double alpha, const Eigen::VectorXd& h) const override {
        const SincCoeffs sc = sinc_coeffs(alpha, l_);
        return real_part(run(sc, h).w);
    }

  private:
    struct Pipeline {
        Mat u;                  // Q^alpha y
        std::vector<Mat> tpow;  // F^m (h o u), m = -L..L
        Mat w;                  // Q^{-alpha} h o u, via (Q^alpha)^H
        Mat cot;
        double loss = 0.0;
    };

    template <typename V>
    static typename V::value_type& at(V& v, int m) {
        return v[static_cast<std::size_t>(m + (static_cast<int>(v.size()) - 1) / 2)];
    }
    template <typename V>
    static const typename V::value_type& at(const V& v, int m) {
        return v[static_cast<std::size_t>(m + (static_cast<int>(v.size()) - 1) / 2)];
    }

    template <typename Derived>
    static Eigen::MatrixXd real_part(const Eigen::MatrixBase<Derived>& m) {
        if constexpr (std::is_same_v<typename Derived::Scalar, double>) return m;
        else return m.real();
    }

    Pipeline run(const SincCoeffs& sc, const Eigen::VectorXd& h) const {
        Pipeline p;
        p.u = sc.coeff(0) * at(spow_, 0);
        for (int m = 1; m <= l_; ++m)
            p.u += sc.coeff(m) * at(spow_, m) + sc.coeff(-m) * at(spow_, -m);

        const Mat v = h.asDiagonal() * p.u;
        p.tpow.resize(static_cast<std::size_t>(2 * l_ + 1));
        at(p.tpow, 0) = v;
        for (int m = 1; m <= l_; ++m) {
            at(p.tpow, m) = f_ * at(p.tpow, m - 1);
            at(p.tpow, -m) = f_.adjoint() * at(p.tpow, -(m - 1));
        }
        // Q^H v = sum_m c_{-m} F^m v
        p.w = sc.coeff(0) * at(p.tpow, 0);
        for (int m = 1; m <= l_; ++m)
            p.w += sc.coeff(-m) * at(p.tpow, m) + sc.coeff(m) * at(p.tpow, -m);

        set_loss(p);
        return p;
    }

    void set_loss(Pipeline& p) const {
        if constexpr (std::is_same_v<Scalar, double>) {
            p.cot = p.w - x_;
            p.loss = p.cot.squaredNorm();
        } else {
            if (loss_on_real_) {
                const Eigen::MatrixXd r = p.w.real() - x_;
                p.loss = r.squaredNorm();
                p.cot = r.cast<Scalar>();
            } else {
                p.cot = p.w - x_.cast<Scalar>();
                p.loss = p.cot.squaredNorm();
            }
        }
    }

    Eigen::MatrixXd y_, x_;
    Mat f_;
    int l_;
    bool loss_on_real_;
    std::vector<Mat> spow_; // F^n y, n = -L..L
};

} // namespace detail

struct DenoiseTrajectoryPoint {
    int epoch = 0;
    double loss = 0.0;
    double alpha = 0.0;
};

struct DenoiseResult {
    double alpha_best = 0.0;
    FilterDiag filter_best;
    Eigen::MatrixXd reconstruction; // real part at the best parameters
    std::vector<DenoiseTrajectoryPoint> trajectory;
    double loss_best = 0.0;
    int best_epoch = 0;
};

// Loss/gradient oracle for the denoising objective; exposed so optimizer
// steps and finite-difference checks share one definition.
class DenoiseProblem {
  public:
    DenoiseProblem(Eigen::MatrixXd y, Eigen::MatrixXd x_ref, const GftMatrix& f,
                   const DenoiseConfig& cfg, Backend backend,
                   std::shared_ptr<const UnitaryEigen> spectrum = nullptr)
        : n_(f.n()) {
        cfg.validate();
        if (y.rows() != x_ref.rows() || y.cols() != x_ref.cols())
            throw shape_error("denoise: noisy and reference signals have mismatched channels");
        if (y.rows() != f.n()) throw shape_error("denoise: signal length does not match the graph");

        if (backend == Backend::exact) {
            if (!spectrum) spectrum = std::make_shared<UnitaryEigen>(eigendecompose_unitary(f));
            engine_ = std::make_unique<detail::ExactDenoiseEngine>(
                std::move(y), std::move(x_ref), std::move(spectrum), cfg.loss_on_real);
        } else if (f.is_real()) {
            engine_ = std::make_unique<detail::FastDenoiseEngine<Eigen::MatrixXd>>(
                std::move(y), std::move(x_ref), f.f.real(), cfg.truncation, cfg.loss_on_real);
        } else {
            engine_ = std::make_unique<detail::FastDenoiseEngine<Eigen::MatrixXcd>>(
                std::move(y), std::move(x_ref), f.f, cfg.truncation, cfg.loss_on_real);
        }
    }

    detail::DenoiseEval eval(double alpha, const Eigen::VectorXd& h) const {
        return engine_->eval(alpha, h);
    }
    Eigen::MatrixXd reconstruct(double alpha, const Eigen::VectorXd& h) const {
        return engine_->reconstruct(alpha, h);
    }
    Eigen::Index n() const { return n_; }

  private:
    Eigen::Index n_;
    std::unique_ptr<detail::DenoiseEngine> engine_;
};

inline DenoiseResult denoise(const Eigen::MatrixXd& y, const Eigen::MatrixXd& x_ref,
                             const GftMatrix& f, const DenoiseConfig& cfg, Backend backend,
                             std::shared_ptr<const UnitaryEigen> spectrum = nullptr) {
    cfg.validate();
    const DenoiseProblem problem(y, x_ref, f, cfg, backend, std::move(spectrum));
    const Eigen::Index n = f.n();

    // parameter layout: [alpha, h_1..h_N], filter initialized to all-ones
    Eigen::VectorXd params(n + 1);
    params(0) = cfg.init_alpha;
    params.tail(n).setOnes();
    AdamState adam = AdamState::init(std::move(params), cfg.lr);

    DenoiseResult out;
    out.loss_best = std::numeric_limits<double>::infinity();
    out.trajectory.reserve(static_cast<std::size_t>(cfg.epochs) + 1);

    auto consider = [&](int epoch, double loss, const Eigen::VectorXd& p) {
        out.trajectory.push_back({epoch, loss, p(0)});
        if (loss < out.loss_best) {
            out.loss_best = loss;
            out.best_epoch = epoch;
            out.alpha_best = p(0);
            out.filter_best.h = p.tail(p.size() - 1);
        }
    };

    Eigen::VectorXd grad(n + 1);
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        const detail::DenoiseEval e = problem.eval(adam.params(0), adam.params.tail(n));
        if (!std::isfinite(e.loss)) {
            std::ostringstream msg;
            msg << "denoise: non-finite loss at epoch " << epoch;
            throw optimizer_error(msg.str());
        }
        consider(epoch, e.loss, adam.params);
        grad(0) = e.grad_alpha;
        grad.tail(n) = e.grad_h;
        adam = adam_step(adam, grad);
    }
    const detail::DenoiseEval last = problem.eval(adam.params(0), adam.params.tail(n));
    consider(cfg.epochs, last.loss, adam.params);

    out.reconstruction = problem.reconstruct(out.alpha_best, out.filter_best.h);
    return out;
}

} // namespace fgfrft
