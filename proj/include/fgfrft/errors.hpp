#pragma once

#include <functional>
#include <iostream>
#include <stdexcept>
#include <string>

namespace fgfrft {

// Error taxonomy. The CLI maps these onto exit codes:
// parameter/domain/capacity -> 2, numerical -> 3, io/parse -> 4.
struct parameter_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct shape_error : parameter_error {
    using parameter_error::parameter_error;
};

struct capacity_error : parameter_error {
    using parameter_error::parameter_error;
};

struct numerical_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct optimizer_error : numerical_error {
    using numerical_error::numerical_error;
};

struct io_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct parse_error : io_error {
    using io_error::io_error;
};

// Warnings are non-fatal diagnostics (Gibbs-regime phase margins, coarse
// timer resolution, ...). The handler is replaceable so tests can capture
// them; the default writes to stderr.
using warn_handler = std::function<void(const std::string&)>;

inline warn_handler& warning_sink() {
    static warn_handler handler = [](const std::string& msg) {
        std::cerr << "[fgfrft] warning: " << msg << '\n';
    };
    return handler;
}

inline void warn(const std::string& msg) {
    if (warning_sink()) warning_sink()(msg);
}

} // namespace fgfrft
