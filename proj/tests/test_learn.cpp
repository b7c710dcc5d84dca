#include <catch2/catch.hpp>

#include "fgfrft/gft.hpp"
#include "fgfrft/graph.hpp"
#include "fgfrft/learn.hpp"
#include "fgfrft/metrics.hpp"
#include "fgfrft/image.hpp"

#include "oracles.hpp"

using namespace fgfrft;

namespace {

double rel_err(double a, double b) { return std::fabs(a - b) / std::max(std::fabs(b), 1e-12); }

// graph-derived real orthogonal GFT
GftMatrix grid_gft(int side) {
    return gft_from_shift(shift_operator(build_grid_graph(side, side), Normalization::combinatorial_laplacian));
}

void check_denoise_gradients(const GftMatrix& f, Backend backend, bool loss_on_real,
                             std::uint64_t seed) {
    const Eigen::Index n = f.n();
    Rng rng(seed);
    Eigen::MatrixXd x(n, 2), y(n, 2);
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        x(i) = rng.gaussian();
        y(i) = x(i) + 0.3 * rng.gaussian();
    }
    DenoiseConfig cfg;
    cfg.truncation = 6;
    cfg.loss_on_real = loss_on_real;
    const DenoiseProblem problem(y, x, f, cfg, backend);

    for (int state = 0; state < 5; ++state) {
        const double alpha = rng.uniform(-1.5, 2.0);
        Eigen::VectorXd h(n);
        for (Eigen::Index i = 0; i < n; ++i) h(i) = 1.0 + 0.4 * rng.gaussian();

        const auto eval = problem.eval(alpha, h);

        const double fd_alpha = oracles::central_diff(
            [&](double a) { return problem.eval(a, h).loss; }, alpha);
        CHECK(rel_err(eval.grad_alpha, fd_alpha) <= 1e-5);

        for (Eigen::Index idx : {Eigen::Index{0}, n / 2, n - 1}) {
            const double fd_h = oracles::central_diff(
                [&](double v) {
                    Eigen::VectorXd hh = h;
                    hh(idx) = v;
                    return problem.eval(alpha, hh).loss;
                },
                h(idx));
            CHECK(rel_err(eval.grad_h(idx), fd_h) <= 1e-5);
        }
    }
}

} // namespace

TEST_CASE("cascade gradients match finite differences for both backends") {
    const GftMatrix f = random_unitary(24, 3);
    for (Backend backend : {Backend::fast, Backend::exact}) {
        for (int k : {1, 3}) {
            CascadeConfig cfg;
            cfg.depth = k;
            cfg.truncation = 8;
            const CascadeProblem problem(f, cfg, backend);
            Rng rng(71 + k);
            for (int state = 0; state < 5; ++state) {
                Eigen::VectorXd alphas(k);
                for (int l = 0; l < k; ++l) alphas(l) = rng.uniform(-0.5, 1.8);
                const auto eval = problem.eval(alphas);
                for (int l = 0; l < k; ++l) {
                    const double fd = oracles::central_diff(
                        [&](double a) {
                            Eigen::VectorXd aa = alphas;
                            aa(l) = a;
                            return problem.eval(aa).loss;
                        },
                        alphas(l));
                    CHECK(rel_err(eval.grad(l), fd) <= 1e-5);
                }
            }
        }
    }
}

TEST_CASE("exact backend with target equal to init is stationary at zero loss") {
    const GftMatrix f = random_unitary(20, 8);
    CascadeConfig cfg;
    cfg.depth = 1;
    cfg.init_order = 0.7;
    cfg.target_order = 0.7;
    cfg.epochs = 10;
    const OrderLearnResult res = learn_orders(f, cfg, Backend::exact);
    CHECK(res.final_loss == 0.0);
    for (const OrderTrajectoryPoint& p : res.trajectory) {
        CHECK(p.loss == 0.0);
        CHECK(p.alphas[0] == 0.7);
    }
}

TEST_CASE("learned orders satisfy approximate additivity") {
    const GftMatrix f = random_unitary(48, 21);
    for (int k : {1, 2}) {
        CascadeConfig cfg;
        cfg.depth = k;
        cfg.init_order = 0.1;
        cfg.target_order = 1.5;
        cfg.truncation = 30;
        cfg.epochs = 200;
        cfg.lr = 0.01;
        const OrderLearnResult res = learn_orders(f, cfg, Backend::fast);
        INFO("k=" << k << " loss=" << res.final_loss << " sum=" << res.final_alpha_sum);
        CHECK(res.final_loss <= 1e-4);
        CHECK(std::fabs(res.final_alpha_sum - 1.5) <= 0.01);
    }
}

TEST_CASE("per-epoch backend losses differ by at most the operator truncation error") {
    const GftMatrix f = random_unitary(32, 14);
    CascadeConfig cfg;
    cfg.depth = 1;
    cfg.truncation = 10;
    cfg.epochs = 60;
    const OrderLearnResult fast = learn_orders(f, cfg, Backend::fast);
    const OrderLearnResult exact = learn_orders(f, cfg, Backend::exact);

    const UnitaryEigen eig = eigendecompose_unitary(f);
    const PowerCache cache(f, cfg.truncation);
    const double n = static_cast<double>(f.n());
    for (std::size_t e : {std::size_t{1}, std::size_t{50}, fast.trajectory.size() - 1}) {
        const double alpha = fast.trajectory[e].alphas[0];
        const double op_err = (fgfrft_matrix(cache, alpha).q - exact_gfrft(eig, alpha).q).norm();
        const double lhs = std::fabs(std::sqrt(fast.trajectory[e].loss) -
                                     std::sqrt(exact.trajectory[e].loss));
        CHECK(lhs <= op_err / n + 1e-12);
    }
}

TEST_CASE("denoise gradients match finite differences across engines and loss modes") {
    const GftMatrix real_f = grid_gft(5); // real orthogonal path
    const GftMatrix complex_f = synthetic_unitary(oracles::spread_phases(25, 0.2, 2), 6);

    check_denoise_gradients(real_f, Backend::fast, false, 100);
    check_denoise_gradients(real_f, Backend::exact, false, 101);
    check_denoise_gradients(complex_f, Backend::fast, false, 102);
    check_denoise_gradients(complex_f, Backend::exact, false, 103);
    check_denoise_gradients(complex_f, Backend::fast, true, 104);
    check_denoise_gradients(complex_f, Backend::exact, true, 105);
}

TEST_CASE("noise-free input with the exact backend is a zero-loss fixed point") {
    const GftMatrix f = grid_gft(4);
    const Eigen::MatrixXd x = Eigen::MatrixXd::Random(16, 1) * 50.0;
    DenoiseConfig cfg;
    cfg.truncation = 5;
    cfg.epochs = 5;
    cfg.init_alpha = 0.37;
    const DenoiseProblem problem(x, x, f, cfg, Backend::exact);
    const auto eval = problem.eval(cfg.init_alpha, Eigen::VectorXd::Ones(16));
    CHECK(eval.loss <= 1e-20);
    CHECK(std::fabs(eval.grad_alpha) <= 1e-10);
    CHECK(eval.grad_h.cwiseAbs().maxCoeff() <= 1e-10);

    const DenoiseResult res = denoise(x, x, f, cfg, Backend::exact);
    CHECK(res.loss_best <= 1e-20);
    CHECK((res.reconstruction - x).cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("best-loss tracking is monotone and matches the trajectory") {
    const GftMatrix f = grid_gft(4);
    Rng rng(33);
    Eigen::MatrixXd x(16, 1), y(16, 1);
    for (Eigen::Index i = 0; i < 16; ++i) {
        x(i) = 100.0 + 20.0 * rng.gaussian();
        y(i) = x(i) + 10.0 * rng.gaussian();
    }
    DenoiseConfig cfg;
    cfg.truncation = 6;
    cfg.epochs = 40;
    const DenoiseResult res = denoise(y, x, f, cfg, Backend::fast);

    double running = std::numeric_limits<double>::infinity();
    for (const DenoiseTrajectoryPoint& p : res.trajectory) running = std::min(running, p.loss);
    CHECK(res.loss_best == running);
    CHECK(res.trajectory[static_cast<std::size_t>(res.best_epoch)].loss == res.loss_best);
}

TEST_CASE("small smooth patch denoises by more than 3 dB") {
    constexpr int kSide = 16;
    const Eigen::MatrixXd img = make_smooth_image(kSide, kSide);
    const Eigen::VectorXd x = flatten_patch(img);
    Rng rng(5);
    Eigen::VectorXd y = x;
    for (Eigen::Index i = 0; i < y.size(); ++i) y(i) += 20.0 * rng.gaussian();

    const GftMatrix f = grid_gft(kSide);
    DenoiseConfig cfg;
    cfg.truncation = 10;
    cfg.epochs = 150;
    cfg.sigma = 20.0;
    const DenoiseResult fast = denoise(y, x, f, cfg, Backend::fast);
    const double gain = psnr(fast.reconstruction.col(0), x, 255.0) - psnr(y, x, 255.0);
    CHECK(gain >= 3.0);
}

TEST_CASE("denoise validates shapes and configuration") {
    const GftMatrix f = grid_gft(3);
    const Eigen::MatrixXd ok = Eigen::MatrixXd::Zero(9, 1);
    DenoiseConfig cfg;
    CHECK_THROWS_AS(denoise(ok, Eigen::MatrixXd::Zero(9, 2), f, cfg, Backend::fast), shape_error);
    CHECK_THROWS_AS(denoise(Eigen::MatrixXd::Zero(4, 1), Eigen::MatrixXd::Zero(4, 1), f, cfg, Backend::fast),
                    shape_error);
    DenoiseConfig bad;
    bad.epochs = 0;
    CHECK_THROWS_AS(denoise(ok, ok, f, bad, Backend::fast), parameter_error);
}
