#pragma once

#include <stdexcept>
#include <string>

namespace hamcap {

// Base for all library-specific failures.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NonContinuousLoop : Error { using Error::Error; };
struct OutOfChart : Error { using Error::Error; };
struct BadProfileParams : Error { using Error::Error; };
struct ThresholdNotMet : Error { using Error::Error; };
struct NoEpsilon : Error { using Error::Error; };
struct NoRoot : Error { using Error::Error; };
struct ClassMismatch : Error { using Error::Error; };
struct AmbiguousCluster : Error { using Error::Error; };
struct NotInHalfStrip : Error { using Error::Error; };
struct NoValidBeta : Error { using Error::Error; };
struct BracketInvalid : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };

// Newton failed inside an implicit integration step.
struct NewtonDivergence : Error {
    double t;
    double residual;
    NewtonDivergence(double t_, double res, const std::string& msg)
        : Error(msg), t(t_), residual(res) {}
};

// Trajectory left a bounded chart.
struct LeftChart : Error {
    double t;
    double p;
    LeftChart(double t_, double p_, const std::string& msg)
        : Error(msg), t(t_), p(p_) {}
};

// Orbit of G^k escapes {|p| < k}; carries the offending p-range.
struct EscapesWindow : Error {
    double p_min;
    double p_max;
    EscapesWindow(double lo, double hi, const std::string& msg)
        : Error(msg), p_min(lo), p_max(hi) {}
};

}  // namespace hamcap
