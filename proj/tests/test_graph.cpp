#include <catch2/catch.hpp>

#include "fgfrft/graph.hpp"
#include "fgfrft/rng.hpp"

using namespace fgfrft;

namespace {

std::vector<std::vector<double>> random_points(int n, int dim, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<std::vector<double>> pts(static_cast<std::size_t>(n), std::vector<double>(dim));
    for (auto& p : pts)
        for (double& v : p) v = rng.gaussian();
    return pts;
}

void check_graph_invariants(const Graph& g) {
    CHECK(g.adjacency.rows() == g.n);
    CHECK(g.adjacency.cols() == g.n);
    CHECK(g.adjacency.diagonal().cwiseAbs().maxCoeff() == 0.0);
    CHECK((g.adjacency - g.adjacency.transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(g.adjacency.minCoeff() >= 0.0);
}

} // namespace

TEST_CASE("grid graphs: degenerate, cycle, and 3x3 hand enumerations") {
    const Graph g1 = build_grid_graph(1, 1);
    CHECK(g1.n == 1);
    CHECK(g1.edge_count() == 0);

    const Graph g2 = build_grid_graph(2, 2);
    CHECK(g2.n == 4);
    CHECK(g2.edge_count() == 4);
    CHECK(g2.degrees().minCoeff() == 2.0);
    CHECK(g2.degrees().maxCoeff() == 2.0);

    const Graph g3 = build_grid_graph(3, 3);
    CHECK(g3.n == 9);
    CHECK(g3.edge_count() == 12);
    const Eigen::VectorXd deg = g3.degrees();
    // row-major node (r, c) -> r*3 + c
    for (Eigen::Index corner : {0, 2, 6, 8}) CHECK(deg(corner) == 2.0);
    for (Eigen::Index side : {1, 3, 5, 7}) CHECK(deg(side) == 3.0);
    CHECK(deg(4) == 4.0);
    check_graph_invariants(g3);
}

TEST_CASE("grid adjacency matches row-major indexing") {
    const Graph g = build_grid_graph(2, 3);
    CHECK(g.adjacency(0, 1) == 1.0); // (0,0)-(0,1)
    CHECK(g.adjacency(0, 3) == 1.0); // (0,0)-(1,0)
    CHECK(g.adjacency(0, 2) == 0.0);
    CHECK(g.adjacency(2, 5) == 1.0); // (0,2)-(1,2)
    CHECK(g.adjacency(0, 5) == 0.0); // no wraparound or diagonals
}

TEST_CASE("grid parameter validation") {
    CHECK_THROWS_AS(build_grid_graph(0, 4), parameter_error);
    CHECK_THROWS_AS(build_grid_graph(1ll << 20, 1ll << 20), capacity_error);
}

TEST_CASE("knn line example: {0, 1, 10} with k=1") {
    const Graph g = build_knn_graph({{0.0}, {1.0}, {10.0}}, 1);
    CHECK(g.adjacency(0, 1) == 1.0);
    CHECK(g.adjacency(1, 2) == 1.0); // 2 -> 1 symmetrized
    CHECK(g.adjacency(0, 2) == 0.0);
    CHECK(g.edge_count() == 2);
}

TEST_CASE("knn with k = N-1 yields the complete graph") {
    const Graph g = build_knn_graph(random_points(7, 3, 11), 6);
    CHECK(g.edge_count() == 21u);
}

TEST_CASE("knn unit square with k=2 is the 4-cycle") {
    const Graph g = build_knn_graph({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, 2);
    CHECK(g.edge_count() == 4);
    CHECK(g.adjacency(0, 2) == 0.0); // diagonal sqrt(2) loses to the sides
    CHECK(g.adjacency(1, 3) == 0.0);
    CHECK(g.degrees().maxCoeff() == 2.0);
}

TEST_CASE("knn handles duplicate points and rejects k >= N") {
    const Graph g = build_knn_graph({{0.0, 0.0}, {0.0, 0.0}, {5.0, 0.0}}, 1);
    CHECK(g.adjacency(0, 1) == 1.0); // zero distance ranks first by index
    check_graph_invariants(g);

    CHECK_THROWS_AS(build_knn_graph({{0.0}, {1.0}, {2.0}}, 3), parameter_error);
    const double inf = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(build_knn_graph({{0.0}, {inf}}, 1), parameter_error);
}

TEST_CASE("knn adjacency equals its transpose exactly") {
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
        const Graph g = build_knn_graph(random_points(40, 3, seed), 5);
        CHECK((g.adjacency - g.adjacency.transpose()).cwiseAbs().maxCoeff() == 0.0);
        check_graph_invariants(g);
    }
}

TEST_CASE("generators are deterministic in their inputs") {
    const Graph a = build_knn_graph(random_points(30, 2, 9), 4);
    const Graph b = build_knn_graph(random_points(30, 2, 9), 4);
    CHECK(a.adjacency == b.adjacency);
}

TEST_CASE("combinatorial Laplacian of the 2-path") {
    const Graph g = build_grid_graph(1, 2);
    const ShiftOperator z = shift_operator(g, Normalization::combinatorial_laplacian);
    Eigen::MatrixXd expect(2, 2);
    expect << 1, -1, -1, 1;
    CHECK((z.matrix - expect).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("triangle graph Laplacian") {
    Graph g;
    g.n = 3;
    g.kind = GraphKind::custom;
    g.adjacency = Eigen::MatrixXd::Ones(3, 3) - Eigen::MatrixXd::Identity(3, 3);
    const ShiftOperator z = shift_operator(g, Normalization::combinatorial_laplacian);
    CHECK(z.matrix.diagonal().isApproxToConstant(2.0));
    CHECK(z.matrix(0, 1) == -1.0);
    CHECK(z.matrix(1, 2) == -1.0);
}

TEST_CASE("symmetric normalization treats isolated nodes as zero rows") {
    Graph g;
    g.n = 3;
    g.kind = GraphKind::custom;
    g.adjacency = Eigen::MatrixXd::Zero(3, 3);
    g.adjacency(0, 1) = g.adjacency(1, 0) = 1.0; // node 2 isolated
    const ShiftOperator z = shift_operator(g, Normalization::symmetric_normalized_laplacian);
    CHECK(z.matrix.row(2).cwiseAbs().maxCoeff() == 0.0);
    CHECK(z.matrix.col(2).cwiseAbs().maxCoeff() == 0.0);
    CHECK(z.matrix(0, 0) == Approx(1.0));
    CHECK(z.matrix(0, 1) == Approx(-1.0));

    // fully edgeless graph degenerates to the zero operator
    Graph iso;
    iso.n = 4;
    iso.adjacency = Eigen::MatrixXd::Zero(4, 4);
    const ShiftOperator zi = shift_operator(iso, Normalization::symmetric_normalized_laplacian);
    CHECK(zi.matrix.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("adjacency normalization passes the matrix through") {
    const Graph g = build_grid_graph(2, 2);
    const ShiftOperator z = shift_operator(g, Normalization::adjacency);
    CHECK(z.matrix == g.adjacency);
}
