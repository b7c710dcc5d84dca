#include <catch2/catch.hpp>

#include "fgfrft/metrics.hpp"
#include "fgfrft/rng.hpp"

using namespace fgfrft;

namespace {

Eigen::MatrixXcd random_complex(Eigen::Index n, std::uint64_t seed) {
    Rng rng(seed);
    Eigen::MatrixXcd m(n, n);
    for (Eigen::Index i = 0; i < m.size(); ++i)
        m(i) = std::complex<double>(rng.gaussian(), rng.gaussian());
    return m;
}

} // namespace

TEST_CASE("identical matrices give a zero report") {
    const Eigen::MatrixXcd m = random_complex(5, 1);
    const ErrorReport r = matrix_errors(m, m);
    CHECK(r.mse == 0.0);
    CHECK(r.mae == 0.0);
    CHECK(r.nmse == 0.0);
}

TEST_CASE("2x2 worked example") {
    Eigen::MatrixXcd ref = Eigen::MatrixXcd::Identity(2, 2);
    Eigen::MatrixXcd approx = ref;
    approx(0, 0) += 1.0; // D = [[1,0],[0,0]]
    const ErrorReport r = matrix_errors(approx, ref);
    CHECK(r.mse == Approx(0.25).epsilon(1e-15));
    CHECK(r.mae == Approx(0.25).epsilon(1e-15));
    CHECK(r.nmse == Approx(0.5).epsilon(1e-15));
}

TEST_CASE("algebraic identities of the error report") {
    for (std::uint64_t seed : {2ull, 3ull, 4ull}) {
        const Eigen::MatrixXcd ref = random_complex(16, seed);
        const Eigen::MatrixXcd approx = random_complex(16, seed + 100);
        const ErrorReport r = matrix_errors(approx, ref);
        const double n2 = 16.0 * 16.0;
        // NMSE * ||ref||_F^2 = N^2 * MSE
        CHECK(r.nmse * ref.squaredNorm() == Approx(n2 * r.mse).epsilon(1e-12));
        const double dmax = (approx - ref).cwiseAbs().maxCoeff();
        CHECK(r.mse <= r.mae * dmax * (1.0 + 1e-12));
    }
}

TEST_CASE("matrix_errors input validation") {
    CHECK_THROWS_AS(matrix_errors(Eigen::MatrixXcd::Zero(2, 2), Eigen::MatrixXcd::Zero(3, 3)),
                    shape_error);
    CHECK_THROWS_AS(matrix_errors(Eigen::MatrixXcd::Ones(2, 2), Eigen::MatrixXcd::Zero(2, 2)),
                    numerical_error);
}

TEST_CASE("psnr: sentinel, constant offset, monotonicity") {
    Eigen::VectorXd ref(64);
    Rng rng(9);
    for (Eigen::Index i = 0; i < 64; ++i) ref(i) = 128.0 + 40.0 * rng.gaussian();

    CHECK(std::isinf(psnr(ref, ref, 255.0)));

    const Eigen::VectorXd offset = ref.array() + 1.0;
    CHECK(psnr(offset, ref, 255.0) == Approx(10.0 * std::log10(255.0 * 255.0)).epsilon(1e-12));

    double prev = std::numeric_limits<double>::infinity();
    Eigen::VectorXd noise(64);
    for (Eigen::Index i = 0; i < 64; ++i) noise(i) = rng.gaussian();
    for (double scale : {0.5, 1.0, 2.0, 4.0, 8.0}) {
        const double p = psnr(ref + scale * noise, ref, 255.0);
        CHECK(p < prev);
        prev = p;
    }

    CHECK_THROWS_AS(psnr(Eigen::VectorXd(), Eigen::VectorXd(), 255.0), shape_error);
    CHECK_THROWS_AS(psnr(ref, Eigen::VectorXd::Zero(3), 255.0), shape_error);
    CHECK_THROWS_AS(psnr(ref, ref, 0.0), parameter_error);
}

TEST_CASE("ssim: self-similarity, inversion, constant patches") {
    Eigen::MatrixXd img(16, 16);
    Rng rng(12);
    for (Eigen::Index i = 0; i < img.size(); ++i) img(i) = 128.0 + 30.0 * rng.gaussian();

    CHECK(ssim(img, img, 255.0) == Approx(1.0).margin(1e-12));

    const Eigen::MatrixXd inverted = 255.0 - img.array();
    CHECK(ssim(img, inverted, 255.0) < 1.0);

    // constant-vs-constant reduces to the luminance term
    const Eigen::MatrixXd a = Eigen::MatrixXd::Constant(12, 12, 100.0);
    const Eigen::MatrixXd b = Eigen::MatrixXd::Constant(12, 12, 140.0);
    const double c1 = 2.55 * 2.55;
    const double expect = (2.0 * 100.0 * 140.0 + c1) / (100.0 * 100.0 + 140.0 * 140.0 + c1);
    CHECK(ssim(a, b, 255.0) == Approx(expect).epsilon(1e-12));

    CHECK_THROWS_AS(ssim(Eigen::MatrixXd::Zero(8, 8), Eigen::MatrixXd::Zero(8, 8), 255.0), shape_error);
    CHECK_THROWS_AS(ssim(img, Eigen::MatrixXd::Zero(12, 12), 255.0), shape_error);
}
