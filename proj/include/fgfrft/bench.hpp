#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <vector>

#include <Eigen/Dense>

#include "fgfrft/errors.hpp"
#include "fgfrft/gft.hpp"
#include "fgfrft/learn.hpp"
#include "fgfrft/metrics.hpp"
#include "fgfrft/rng.hpp"
#include "fgfrft/spectral.hpp"
#include "fgfrft/transform.hpp"

namespace fgfrft {

namespace detail {

using BenchClock = std::chrono::steady_clock;

inline double elapsed_s(BenchClock::time_point a, BenchClock::time_point b) {
    return std::chrono::duration<double>(b - a).count();
}

inline double clock_resolution_s() {
    double best = 1.0;
    for (int trial = 0; trial < 16; ++trial) {
        const auto t0 = BenchClock::now();
        auto t1 = BenchClock::now();
        while (t1 == t0) t1 = BenchClock::now();
        best = std::min(best, elapsed_s(t0, t1));
    }
    return best;
}

inline double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 == 1 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

} // namespace detail

// One sweep configuration outcome. Errors compare the series operator
// against the exact spectral reconstruction; build times cover the online
// construction only.
struct SweepRecord {
    int n = 0;
    int l = 0;
    double alpha = 0.0;
    std::uint64_t seed = 0;
    double mse = 0.0;
    double mae = 0.0;
    double nmse = 0.0;
    double build_time_fast = 0.0;
    double build_time_exact = 0.0;
};

struct TimingRecord {
    int n = 0;
    int l = 0;
    double median_fast_s = 0.0;
    double median_exact_s = 0.0;
    double speedup = 0.0;
    int repeats = 0;
    int warmups = 0;
    bool quality_warning = false;
};

struct OrderLearnSummary {
    std::uint64_t seed = 0;
    int k = 0;
    Backend backend = Backend::fast;
    double final_loss = 0.0;
    double sum_alpha = 0.0;
    double abs_delta_alpha = 0.0;
    double wall_s = 0.0;
    double speedup = 1.0;
};

// Accuracy grid: for every (n, seed) draw a Haar unitary, take the exact
// eigendecomposition reconstruction as ground truth, and record the error
// metrics of the order-L series operator per (alpha, L). The power cache
// is built once per matrix at max(l_list) and shared across L.
inline std::vector<SweepRecord> accuracy_sweep(const std::vector<int>& n_list,
                                               const std::vector<double>& alpha_list,
                                               const std::vector<int>& l_list,
                                               const std::vector<std::uint64_t>& seeds,
                                               std::uint64_t memory_budget = kDefaultMemoryBudget) {
    if (n_list.empty() || alpha_list.empty() || l_list.empty() || seeds.empty())
        throw parameter_error("accuracy_sweep: all parameter lists must be non-empty");
    const int l_max = *std::max_element(l_list.begin(), l_list.end());

    std::vector<SweepRecord> records;
    for (int n : n_list) {
        for (std::uint64_t seed : seeds) {
            const GftMatrix f = random_unitary(n, seed);
            const UnitaryEigen eig = eigendecompose_unitary(f);
            PowerCache cache(f, l_max, memory_budget);
            for (double alpha : alpha_list) {
                const auto te0 = detail::BenchClock::now();
                const FracOperator exact = exact_gfrft(eig, alpha);
                const auto te1 = detail::BenchClock::now();
                for (int l : l_list) {
                    const auto tf0 = detail::BenchClock::now();
                    const FracOperator fast = fgfrft_matrix(cache, alpha, l);
                    const auto tf1 = detail::BenchClock::now();
                    const ErrorReport err = matrix_errors(fast.q, exact.q);
                    SweepRecord rec;
                    rec.n = n;
                    rec.l = l;
                    rec.alpha = alpha;
                    rec.seed = seed;
                    rec.mse = err.mse;
                    rec.mae = err.mae;
                    rec.nmse = err.nmse;
                    rec.build_time_fast = detail::elapsed_s(tf0, tf1);
                    rec.build_time_exact = detail::elapsed_s(te0, te1);
                    records.push_back(rec);
                }
            }
        }
    }
    return records;
}

// Online-construction timing. Both pipelines pre-cache their offline
// artifacts (V, V^H, theta for exact; the power set for fast); the timed
// sections are the per-order rebuilds only, run serially on one thread.
// Synthetic known-spectrum draws keep the untimed offline stage cheap; the
// timed work is independent of the matrix values.
inline std::vector<TimingRecord> timing_benchmark(const std::vector<int>& n_list, int l, int repeats,
                                                  int warmups, std::uint64_t seed = 1,
                                                  bool haar_matrices = false,
                                                  std::uint64_t memory_budget = kDefaultMemoryBudget,
                                                  double alpha = 0.55) {
    if (n_list.empty()) throw parameter_error("timing_benchmark: empty n list");
    if (repeats < 1) throw parameter_error("timing_benchmark: repeats must be >= 1");
    if (warmups < 1) throw parameter_error("timing_benchmark: warmups must be >= 1");
    const bool few_repeats = repeats < 3;
    if (few_repeats)
        warn("timing_benchmark: fewer than 3 repeats gives a low-quality median");

    const double resolution = detail::clock_resolution_s();
    std::vector<TimingRecord> records;
    for (int n : n_list) {
        GftMatrix f;
        if (haar_matrices) {
            f = random_unitary(n, seed);
        } else {
            Rng rng(Rng::derive(seed, static_cast<std::uint64_t>(n)));
            std::vector<double> phases(static_cast<std::size_t>(n));
            for (double& t : phases) t = rng.uniform(-0.95 * M_PI, 0.95 * M_PI);
            f = synthetic_unitary(phases, seed);
        }
        const UnitaryEigen eig = eigendecompose_unitary(f);
        const Eigen::MatrixXcd v = eig.v;
        const Eigen::MatrixXcd vh = eig.v.adjoint();
        const PowerCache cache(f, l, memory_budget);

        Eigen::VectorXcd powered(n);
        Eigen::MatrixXcd scaled(n, n), exact_q(n, n);
        auto exact_online = [&]() {
            for (Eigen::Index k = 0; k < n; ++k) powered(k) = std::polar(1.0, alpha * eig.theta(k));
            scaled.noalias() = powered.asDiagonal() * vh;
            exact_q.noalias() = v * scaled;
        };

        std::vector<double> fast_times, exact_times;
        for (int r = 0; r < warmups + repeats; ++r) {
            const auto t0 = detail::BenchClock::now();
            const FracOperator fast = fgfrft_matrix(cache, alpha);
            const auto t1 = detail::BenchClock::now();
            exact_online();
            const auto t2 = detail::BenchClock::now();
            if (r >= warmups) {
                fast_times.push_back(detail::elapsed_s(t0, t1));
                exact_times.push_back(detail::elapsed_s(t1, t2));
            }
        }

        TimingRecord rec;
        rec.n = n;
        rec.l = l;
        rec.median_fast_s = detail::median(fast_times);
        rec.median_exact_s = detail::median(exact_times);
        rec.speedup = rec.median_exact_s / rec.median_fast_s;
        rec.repeats = repeats;
        rec.warmups = warmups;
        rec.quality_warning = few_repeats || rec.median_fast_s < 100.0 * resolution;
        if (rec.median_fast_s < 100.0 * resolution) {
            std::ostringstream msg;
            msg << "timing_benchmark: n=" << n << " fast interval " << rec.median_fast_s
                << "s is within 100x of the clock resolution " << resolution << "s";
            warn(msg.str());
        }
        records.push_back(rec);
    }
    return records;
}

// Order-learning comparison rows: per (seed, K) run both backends on the
// same Haar matrix and report the final loss, learned order sum, error to
// target, wall time, and the exact/fast wall-time ratio on the fast row.
inline std::vector<OrderLearnSummary> order_learning_experiment(
    const std::vector<int>& k_list, double target, int epochs, double lr, int n, int l,
    const std::vector<std::uint64_t>& seeds, double init_order = 0.1,
    std::uint64_t memory_budget = kDefaultMemoryBudget) {
    if (k_list.empty() || seeds.empty())
        throw parameter_error("order_learning_experiment: empty configuration");

    std::vector<OrderLearnSummary> rows;
    for (std::uint64_t seed : seeds) {
        const GftMatrix f = random_unitary(n, seed);
        for (int k : k_list) {
            CascadeConfig cfg;
            cfg.depth = k;
            cfg.init_order = init_order;
            cfg.target_order = target;
            cfg.truncation = l;
            cfg.epochs = epochs;
            cfg.lr = lr;
            cfg.seed = seed;
            cfg.memory_budget = memory_budget;

            auto run = [&](Backend backend) {
                const auto t0 = detail::BenchClock::now();
                const OrderLearnResult res = learn_orders(f, cfg, backend);
                const auto t1 = detail::BenchClock::now();
                OrderLearnSummary s;
                s.seed = seed;
                s.k = k;
                s.backend = backend;
                s.final_loss = res.final_loss;
                s.sum_alpha = res.final_alpha_sum;
                s.abs_delta_alpha = std::fabs(res.final_alpha_sum - target);
                s.wall_s = detail::elapsed_s(t0, t1);
                return s;
            };

            OrderLearnSummary fast = run(Backend::fast);
            OrderLearnSummary exact = run(Backend::exact);
            fast.speedup = exact.wall_s / fast.wall_s;
            exact.speedup = 1.0;
            rows.push_back(fast);
            rows.push_back(exact);
        }
    }
    return rows;
}

} // namespace fgfrft
