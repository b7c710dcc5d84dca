#pragma once

#include <cmath>
#include <cstdint>
#include <sstream>

#include <Eigen/Dense>

#include "fgfrft/errors.hpp"

namespace fgfrft {

// Bias-corrected Adam over a flat real parameter vector.
struct AdamState {
    Eigen::VectorXd params;
    Eigen::VectorXd m;
    Eigen::VectorXd v;
    std::int64_t step = 0;
    double lr = 0.01;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;

    static AdamState init(Eigen::VectorXd initial, double lr) {
        AdamState s;
        s.m = Eigen::VectorXd::Zero(initial.size());
        s.v = Eigen::VectorXd::Zero(initial.size());
        s.params = std::move(initial);
        s.lr = lr;
        return s;
    }
};

inline AdamState adam_step(const AdamState& state, const Eigen::VectorXd& grad) {
    if (grad.size() != state.params.size())
        throw shape_error("adam_step: gradient length does not match parameters");
    for (Eigen::Index i = 0; i < grad.size(); ++i) {
        if (!std::isfinite(grad(i))) {
            std::ostringstream msg;
            msg << "adam_step: non-finite gradient at step " << state.step + 1 << ", parameter " << i;
            throw optimizer_error(msg.str());
        }
    }
    AdamState next = state;
    next.step = state.step + 1;
    next.m = state.beta1 * state.m + (1.0 - state.beta1) * grad;
    next.v = state.beta2 * state.v + (1.0 - state.beta2) * grad.cwiseProduct(grad);
    const double c1 = 1.0 - std::pow(state.beta1, static_cast<double>(next.step));
    const double c2 = 1.0 - std::pow(state.beta2, static_cast<double>(next.step));
    next.params = state.params.array() -
                  state.lr * (next.m.array() / c1) / ((next.v.array() / c2).sqrt() + state.eps);
    return next;
}

} // namespace fgfrft
