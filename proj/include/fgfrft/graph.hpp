#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

#include "fgfrft/errors.hpp"

namespace fgfrft {

enum class GraphKind { grid, knn, custom };

enum class Normalization { combinatorial_laplacian, symmetric_normalized_laplacian, adjacency };

// Undirected weighted graph held as a dense symmetric adjacency matrix with
// zero diagonal and nonnegative weights.
struct Graph {
    Eigen::Index n = 0;
    Eigen::MatrixXd adjacency;
    GraphKind kind = GraphKind::custom;

    std::size_t edge_count() const {
        std::size_t e = 0;
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = i + 1; j < n; ++j)
                if (adjacency(i, j) != 0.0) ++e;
        return e;
    }

    Eigen::VectorXd degrees() const { return adjacency.rowwise().sum(); }
};

struct ShiftOperator {
    Eigen::MatrixXd matrix;
    Normalization normalization = Normalization::combinatorial_laplacian;
};

// rows x cols lattice, node (r, c) -> r*cols + c, unit-weight edges to the
// 4 axis neighbors, no wraparound.
inline Graph build_grid_graph(std::int64_t rows, std::int64_t cols) {
    if (rows < 1 || cols < 1) throw parameter_error("build_grid_graph: rows and cols must be >= 1");
    const std::int64_t max_nodes = std::numeric_limits<Eigen::Index>::max() / 8;
    if (rows > max_nodes / cols) throw capacity_error("build_grid_graph: rows*cols exceeds index range");
    const Eigen::Index n = static_cast<Eigen::Index>(rows * cols);
    // dense adjacency: n^2 doubles must stay addressable
    if (static_cast<std::uint64_t>(n) > (1ull << 26))
        throw capacity_error("build_grid_graph: dense adjacency for rows*cols nodes is unaddressable");

    Graph g;
    g.n = n;
    g.kind = GraphKind::grid;
    g.adjacency = Eigen::MatrixXd::Zero(n, n);
    for (std::int64_t r = 0; r < rows; ++r) {
        for (std::int64_t c = 0; c < cols; ++c) {
            const Eigen::Index u = static_cast<Eigen::Index>(r * cols + c);
            if (c + 1 < cols) {
                const Eigen::Index v = u + 1;
                g.adjacency(u, v) = g.adjacency(v, u) = 1.0;
            }
            if (r + 1 < rows) {
                const Eigen::Index v = u + static_cast<Eigen::Index>(cols);
                g.adjacency(u, v) = g.adjacency(v, u) = 1.0;
            }
        }
    }
    return g;
}

// Directed k-nearest-neighbor selection by Euclidean distance, symmetrized
// by union, binary weights. Distance ties break toward the smaller node
// index, so duplicate points are handled deterministically.
inline Graph build_knn_graph(const std::vector<std::vector<double>>& points, int k) {
    const Eigen::Index n = static_cast<Eigen::Index>(points.size());
    if (n == 0) throw parameter_error("build_knn_graph: empty point set");
    if (k < 1) throw parameter_error("build_knn_graph: k must be >= 1");
    if (k >= n) throw parameter_error("build_knn_graph: k must be < number of points");
    const std::size_t dim = points[0].size();
    for (const auto& p : points) {
        if (p.size() != dim) throw shape_error("build_knn_graph: inconsistent point dimension");
        for (double v : p)
            if (!std::isfinite(v)) throw parameter_error("build_knn_graph: non-finite coordinate");
    }

    Graph g;
    g.n = n;
    g.kind = GraphKind::knn;
    g.adjacency = Eigen::MatrixXd::Zero(n, n);

    std::vector<double> d2(static_cast<std::size_t>(n));
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            double s = 0.0;
            for (std::size_t a = 0; a < dim; ++a) {
                const double diff = points[static_cast<std::size_t>(i)][a] -
                                    points[static_cast<std::size_t>(j)][a];
                s += diff * diff;
            }
            d2[static_cast<std::size_t>(j)] = s;
        }
        std::iota(order.begin(), order.end(), Eigen::Index{0});
        std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
            const double da = d2[static_cast<std::size_t>(a)];
            const double db = d2[static_cast<std::size_t>(b)];
            return da != db ? da < db : a < b;
        });
        int taken = 0;
        for (Eigen::Index j : order) {
            if (j == i) continue;
            g.adjacency(i, j) = 1.0;
            if (++taken == k) break;
        }
    }
    // symmetrize by union
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j)
            if (g.adjacency(i, j) != 0.0 || g.adjacency(j, i) != 0.0)
                g.adjacency(i, j) = g.adjacency(j, i) = 1.0;
    return g;
}

// Combinatorial L = D - A; symmetric-normalized D^{-1/2} (D - A) D^{-1/2}
// with isolated nodes acting as zero rows; adjacency passes A through.
inline ShiftOperator shift_operator(const Graph& g, Normalization norm) {
    ShiftOperator z;
    z.normalization = norm;
    switch (norm) {
        case Normalization::adjacency:
            z.matrix = g.adjacency;
            break;
        case Normalization::combinatorial_laplacian: {
            z.matrix = -g.adjacency;
            const Eigen::VectorXd deg = g.degrees();
            z.matrix.diagonal() += deg;
            break;
        }
        case Normalization::symmetric_normalized_laplacian: {
            const Eigen::VectorXd deg = g.degrees();
            Eigen::VectorXd dinv_sqrt(g.n);
            for (Eigen::Index i = 0; i < g.n; ++i)
                dinv_sqrt(i) = deg(i) > 0.0 ? 1.0 / std::sqrt(deg(i)) : 0.0;
            Eigen::MatrixXd lap = -g.adjacency;
            lap.diagonal() += deg;
            z.matrix = dinv_sqrt.asDiagonal() * lap * dinv_sqrt.asDiagonal();
            // exact symmetry despite the two-sided scaling
            z.matrix = ((z.matrix + z.matrix.transpose()) * 0.5).eval();
            break;
        }
    }
    return z;
}

} // namespace fgfrft
