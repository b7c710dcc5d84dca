#pragma once

#include <cmath>
#include <sstream>
#include <vector>

#include <Eigen/Dense>

#include "fgfrft/errors.hpp"

namespace fgfrft {

// Non-overlapping square tiles of an image, row-major tile order.
// fgfrft::flatten_patch maps pixel (r, c) to index r*cols + c, matching the
// grid-graph node numbering, so a flattened patch is directly a graph
// signal on build_grid_graph(patch, patch).
struct ImagePatchSet {
    Eigen::Index image_rows = 0;
    Eigen::Index image_cols = 0;
    int patch = 64;
    std::vector<Eigen::MatrixXd> patches;

    static ImagePatchSet split(const Eigen::MatrixXd& image, int patch) {
        if (patch < 1) throw parameter_error("ImagePatchSet: patch size must be >= 1");
        if (image.rows() % patch != 0 || image.cols() % patch != 0) {
            std::ostringstream msg;
            msg << "ImagePatchSet: " << image.rows() << "x" << image.cols()
                << " is not divisible by the patch size " << patch
                << "; crop the image to a multiple of " << patch;
            throw shape_error(msg.str());
        }
        ImagePatchSet set;
        set.image_rows = image.rows();
        set.image_cols = image.cols();
        set.patch = patch;
        for (Eigen::Index r = 0; r < image.rows(); r += patch)
            for (Eigen::Index c = 0; c < image.cols(); c += patch)
                set.patches.push_back(image.block(r, c, patch, patch));
        return set;
    }

    Eigen::MatrixXd reassemble() const {
        Eigen::MatrixXd image(image_rows, image_cols);
        const Eigen::Index per_row = image_cols / patch;
        for (std::size_t i = 0; i < patches.size(); ++i) {
            const Eigen::Index r = static_cast<Eigen::Index>(i) / per_row * patch;
            const Eigen::Index c = static_cast<Eigen::Index>(i) % per_row * patch;
            image.block(r, c, patch, patch) = patches[i];
        }
        return image;
    }
};

inline Eigen::VectorXd flatten_patch(const Eigen::MatrixXd& patch) {
    Eigen::VectorXd v(patch.size());
    for (Eigen::Index r = 0; r < patch.rows(); ++r)
        for (Eigen::Index c = 0; c < patch.cols(); ++c) v(r * patch.cols() + c) = patch(r, c);
    return v;
}

inline Eigen::MatrixXd unflatten_patch(const Eigen::VectorXd& v, Eigen::Index rows, Eigen::Index cols) {
    if (v.size() != rows * cols) throw shape_error("unflatten_patch: length mismatch");
    Eigen::MatrixXd patch(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r)
        for (Eigen::Index c = 0; c < cols; ++c) patch(r, c) = v(r * cols + c);
    return patch;
}

// Smooth 8-bit test image: a diagonal ramp modulated by low-frequency
// sinusoids, values spanning roughly [20, 235].
inline Eigen::MatrixXd make_smooth_image(Eigen::Index rows, Eigen::Index cols) {
    Eigen::MatrixXd img(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        for (Eigen::Index c = 0; c < cols; ++c) {
            const double x = static_cast<double>(c) / static_cast<double>(cols - 1 > 0 ? cols - 1 : 1);
            const double y = static_cast<double>(r) / static_cast<double>(rows - 1 > 0 ? rows - 1 : 1);
            const double v = 0.5 * (x + y) + 0.15 * std::sin(2.0 * M_PI * x) * std::cos(2.0 * M_PI * y);
            img(r, c) = 127.5 + 107.5 * (2.0 * v - 1.0) / 1.3;
        }
    }
    return img;
}

} // namespace fgfrft
