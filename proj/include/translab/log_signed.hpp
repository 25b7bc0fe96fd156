#pragma once

#include <cmath>
#include <limits>

namespace translab {

// sign * exp(log_magnitude); sign == 0 exactly when log_magnitude == -inf.
struct LogSigned {
    int sign = 0;
    double log_magnitude = -std::numeric_limits<double>::infinity();

    static LogSigned zero() { return {}; }
    static LogSigned make(int sign, double log_mag) {
        if (sign == 0 || log_mag == -std::numeric_limits<double>::infinity()) return {};
        return {sign > 0 ? 1 : -1, log_mag};
    }
    static LogSigned from_value(double v) {
        if (v == 0.0) return {};
        return {v > 0.0 ? 1 : -1, std::log(std::fabs(v))};
    }
    // May overflow to +-inf; that is the caller's choice.
    double value() const { return sign == 0 ? 0.0 : sign * std::exp(log_magnitude); }
};

}  // namespace translab
