#include <catch2/catch.hpp>

#include <algorithm>

#include "fgfrft/gft.hpp"
#include "fgfrft/graph.hpp"
#include "fgfrft/spectral.hpp"

#include "oracles.hpp"

using namespace fgfrft;

namespace {

double reconstruction_residual(const UnitaryEigen& e, const Eigen::MatrixXcd& f) {
    const Eigen::MatrixXcd recon = e.v * (e.eigenvalues().asDiagonal() * e.v.adjoint());
    return (recon - f).norm() / f.norm();
}

double basis_residual(const UnitaryEigen& e) {
    const Eigen::Index n = e.n();
    Eigen::MatrixXcd g = e.v * e.v.adjoint();
    g.diagonal().array() -= 1.0;
    return g.norm() / std::sqrt(static_cast<double>(n));
}

GftMatrix strip_spectrum(GftMatrix f) {
    f.known_spectrum.reset();
    return f;
}

} // namespace

TEST_CASE("identity matrix decomposes to all-zero phases") {
    GftMatrix f;
    f.f = Eigen::MatrixXcd::Identity(6, 6);
    const UnitaryEigen e = eigendecompose_unitary(f);
    CHECK(e.theta.cwiseAbs().maxCoeff() < 1e-12);
    CHECK(reconstruction_residual(e, f.f) < 1e-12);
}

TEST_CASE("known spectra are returned as stored") {
    const GftMatrix f = synthetic_unitary({0.4, -1.1, 2.0}, 21);
    const UnitaryEigen e = eigendecompose_unitary(f);
    CHECK(e.theta(0) == 0.4);
    CHECK(e.v == f.known_spectrum->v);
}

TEST_CASE("computed decomposition recovers a synthetic spectrum") {
    const std::vector<double> phases = oracles::spread_phases(40, 0.1 * M_PI, 17);
    const GftMatrix f = strip_spectrum(synthetic_unitary(phases, 31));
    const UnitaryEigen e = eigendecompose_unitary(f);

    std::vector<double> expect = phases;
    std::sort(expect.begin(), expect.end());
    REQUIRE(e.theta.size() == 40);
    for (Eigen::Index k = 0; k < 40; ++k)
        CHECK(e.theta(k) == Approx(expect[static_cast<std::size_t>(k)]).margin(1e-9));
    CHECK(std::is_sorted(e.theta.data(), e.theta.data() + e.theta.size()));
    CHECK(reconstruction_residual(e, f.f) <= 1e-9);
    CHECK(basis_residual(e) <= 1e-9);
}

TEST_CASE("2x2 rotation has phases +-pi/4") {
    GftMatrix f;
    f.f = oracles::rotation2(M_PI / 4);
    const UnitaryEigen e = eigendecompose_unitary(f);
    CHECK(e.theta(0) == Approx(-M_PI / 4).margin(1e-12));
    CHECK(e.theta(1) == Approx(M_PI / 4).margin(1e-12));
    CHECK(reconstruction_residual(e, f.f) < 1e-12);
}

TEST_CASE("real orthogonal graph GFTs decompose through the paired route") {
    // grid GFT matrices carry conjugate phase pairs and exact +-1 eigenvalues
    for (auto dims : {std::pair{3, 4}, std::pair{5, 5}}) {
        const GftMatrix f = gft_from_shift(
            shift_operator(build_grid_graph(dims.first, dims.second), Normalization::combinatorial_laplacian));
        const UnitaryEigen e = eigendecompose_unitary(f);
        CHECK(reconstruction_residual(e, f.f) <= 1e-9);
        CHECK(basis_residual(e) <= 1e-9);
        CHECK(std::is_sorted(e.theta.data(), e.theta.data() + e.theta.size()));
        CHECK(e.theta.maxCoeff() <= M_PI);
        CHECK(e.theta.minCoeff() > -M_PI);
    }
}

TEST_CASE("Haar unitaries decompose through the Hermitian route") {
    const GftMatrix f = random_unitary(96, 2024);
    const UnitaryEigen e = eigendecompose_unitary(f);
    CHECK(reconstruction_residual(e, f.f) <= 1e-9);
    CHECK(basis_residual(e) <= 1e-9);
    for (Eigen::Index k = 0; k < e.theta.size(); ++k)
        CHECK(std::abs(std::abs(std::polar(1.0, e.theta(k))) - 1.0) < 1e-15);
}

TEST_CASE("exact_gfrft boundary orders") {
    const GftMatrix f = strip_spectrum(synthetic_unitary(oracles::spread_phases(32, 0.2, 3), 5));
    const UnitaryEigen e = eigendecompose_unitary(f);

    const FracOperator id = exact_gfrft(e, 0.0);
    CHECK((id.q - Eigen::MatrixXcd::Identity(32, 32)).norm() <= 1e-12 * 32);

    const FracOperator one = exact_gfrft(e, 1.0);
    CHECK((one.q - f.f).norm() / f.f.norm() <= 1e-9);
}

TEST_CASE("exact_gfrft at alpha=2 equals the matrix square") {
    const GftMatrix f = synthetic_unitary(oracles::spread_phases(24, 0.3, 9), 13);
    const UnitaryEigen e = eigendecompose_unitary(f);
    const Eigen::MatrixXcd square = f.f * f.f;
    CHECK((exact_gfrft(e, 2.0).q - square).norm() / square.norm() <= 1e-9);
}

TEST_CASE("fractional rotation: alpha=0.5 of a pi/4 rotation is a pi/8 rotation") {
    GftMatrix f;
    f.f = oracles::rotation2(M_PI / 4);
    const UnitaryEigen e = eigendecompose_unitary(f);
    CHECK((exact_gfrft(e, 0.5).q - oracles::rotation2(M_PI / 8)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("exact operator satisfies index additivity") {
    const GftMatrix f = synthetic_unitary(oracles::spread_phases(20, 0.4, 2), 11);
    const UnitaryEigen e = eigendecompose_unitary(f);
    const Eigen::MatrixXcd lhs = exact_gfrft(e, 0.35).q * exact_gfrft(e, 0.85).q;
    const Eigen::MatrixXcd rhs = exact_gfrft(e, 1.2).q;
    CHECK((lhs - rhs).norm() / rhs.norm() < 1e-12);
}

TEST_CASE("exact gradient: zero spectrum, rotation generator, finite differences") {
    UnitaryEigen flat;
    flat.v = Eigen::MatrixXcd::Identity(4, 4);
    flat.theta = Eigen::VectorXd::Zero(4);
    CHECK(exact_gfrft_grad(flat, 0.7).cwiseAbs().maxCoeff() == 0.0);

    GftMatrix rot;
    rot.f = oracles::rotation2(M_PI / 4);
    const UnitaryEigen e = eigendecompose_unitary(rot);
    Eigen::MatrixXcd generator(2, 2); // d/d alpha rotation(alpha*pi/4) at alpha=0
    generator << 0.0, -M_PI / 4, M_PI / 4, 0.0;
    CHECK((exact_gfrft_grad(e, 0.0) - generator).cwiseAbs().maxCoeff() < 1e-12);

    const GftMatrix f = synthetic_unitary(oracles::spread_phases(16, 0.3, 4), 2);
    const UnitaryEigen es = eigendecompose_unitary(f);
    for (double alpha : {0.2, 0.9, 1.4}) {
        const Eigen::MatrixXcd fd = oracles::central_diff_matrix(
            [&](double a) { return exact_gfrft(es, a).q; }, alpha);
        const Eigen::MatrixXcd an = exact_gfrft_grad(es, alpha);
        CHECK((an - fd).norm() / fd.norm() <= 1e-6);
    }
}

TEST_CASE("phase margin: identity, synthetic, and the 2-path reflection") {
    GftMatrix id;
    id.f = Eigen::MatrixXcd::Identity(4, 4);
    CHECK(phase_margin(id) == Approx(M_PI).margin(1e-12));

    const GftMatrix synth = synthetic_unitary({0.9 * M_PI, -0.5 * M_PI}, 6);
    CHECK(phase_margin(synth) == Approx(0.1 * M_PI).margin(1e-12));

    // (1/sqrt2)[[1,1],[1,-1]] has eigenvalues +-1: margin 0 and a warning
    std::vector<std::string> captured;
    auto previous = warning_sink();
    warning_sink() = [&](const std::string& msg) { captured.push_back(msg); };
    const GftMatrix path2 =
        gft_from_shift(shift_operator(build_grid_graph(1, 2), Normalization::combinatorial_laplacian));
    const double margin = phase_margin(path2);
    warning_sink() = previous;

    CHECK(margin == Approx(0.0).margin(1e-9));
    REQUIRE_FALSE(captured.empty());
    CHECK(captured.front().find("margin") != std::string::npos);
}

TEST_CASE("non-unitary input fails the reconstruction contract") {
    GftMatrix f;
    f.f = Eigen::MatrixXcd::Identity(5, 5) * 2.0; // not unitary
    CHECK_THROWS_AS(eigendecompose_unitary(f), numerical_error);
}
