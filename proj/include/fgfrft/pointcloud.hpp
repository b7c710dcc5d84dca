#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <tuple>
#include <vector>

#include <Eigen/Dense>

#include "fgfrft/errors.hpp"
#include "fgfrft/rng.hpp"

namespace fgfrft {

// Voxel-grid downsampling: one centroid per occupied voxel, emitted in
// first-occurrence order so the result is deterministic.
inline Eigen::MatrixXd voxel_downsample(const Eigen::MatrixXd& cloud, double voxel) {
    if (cloud.cols() != 3) throw shape_error("voxel_downsample: cloud must be Nx3");
    if (!(voxel > 0.0)) throw parameter_error("voxel_downsample: voxel size must be positive");

    using Key = std::tuple<std::int64_t, std::int64_t, std::int64_t>;
    std::map<Key, std::size_t> slot;
    std::vector<Eigen::Vector3d> sums;
    std::vector<std::size_t> counts;
    for (Eigen::Index i = 0; i < cloud.rows(); ++i) {
        const Key key{static_cast<std::int64_t>(std::floor(cloud(i, 0) / voxel)),
                      static_cast<std::int64_t>(std::floor(cloud(i, 1) / voxel)),
                      static_cast<std::int64_t>(std::floor(cloud(i, 2) / voxel))};
        auto [it, inserted] = slot.try_emplace(key, sums.size());
        if (inserted) {
            sums.emplace_back(cloud.row(i).transpose());
            counts.push_back(1);
        } else {
            sums[it->second] += cloud.row(i).transpose();
            ++counts[it->second];
        }
    }
    Eigen::MatrixXd out(static_cast<Eigen::Index>(sums.size()), 3);
    for (std::size_t i = 0; i < sums.size(); ++i)
        out.row(static_cast<Eigen::Index>(i)) = (sums[i] / static_cast<double>(counts[i])).transpose();
    return out;
}

// Sequential batch ranges of the requested size; a tail smaller than k+2
// cannot carry a k-NN graph, so it is merged into the previous batch.
struct BatchRange {
    Eigen::Index begin = 0;
    Eigen::Index size = 0;
};

inline std::vector<BatchRange> chunk_batches(Eigen::Index total, Eigen::Index batch, int k) {
    if (batch < 2) throw parameter_error("chunk_batches: batch size must be >= 2");
    if (total < 1) throw parameter_error("chunk_batches: empty cloud");
    std::vector<BatchRange> out;
    Eigen::Index pos = 0;
    while (pos < total) {
        const Eigen::Index size = std::min(batch, total - pos);
        out.push_back({pos, size});
        pos += size;
    }
    if (out.size() > 1 && out.back().size <= static_cast<Eigen::Index>(k) + 1) {
        const BatchRange tail = out.back();
        out.pop_back();
        out.back().size += tail.size;
    }
    return out;
}

// Synthetic test cloud: jittered grid samples of a gently curved sheet,
// extent x extent footprint.
inline Eigen::MatrixXd make_plane_cloud(Eigen::Index n, std::uint64_t seed, double extent = 400.0) {
    if (n < 1) throw parameter_error("make_plane_cloud: n must be >= 1");
    Rng rng(seed);
    const Eigen::Index side = static_cast<Eigen::Index>(std::ceil(std::sqrt(static_cast<double>(n))));
    Eigen::MatrixXd cloud(n, 3);
    Eigen::Index row = 0;
    for (Eigen::Index i = 0; i < side && row < n; ++i) {
        for (Eigen::Index j = 0; j < side && row < n; ++j, ++row) {
            const double step = extent / static_cast<double>(side);
            const double x = (static_cast<double>(i) + 0.5 + 0.25 * rng.gaussian()) * step;
            const double y = (static_cast<double>(j) + 0.5 + 0.25 * rng.gaussian()) * step;
            const double z = 40.0 * std::sin(2.0 * M_PI * x / extent) * std::cos(2.0 * M_PI * y / extent);
            cloud(row, 0) = x;
            cloud(row, 1) = y;
            cloud(row, 2) = z;
        }
    }
    return cloud;
}

// Documented PSNR peak convention for clouds: the clean cloud's largest
// per-axis coordinate range.
inline double cloud_peak(const Eigen::MatrixXd& clean) {
    double peak = 0.0;
    for (int a = 0; a < 3; ++a)
        peak = std::max(peak, clean.col(a).maxCoeff() - clean.col(a).minCoeff());
    return peak;
}

} // namespace fgfrft
