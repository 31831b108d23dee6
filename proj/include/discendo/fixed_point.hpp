#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>

#include "discendo/disc.hpp"
#include "discendo/map_expr.hpp"

// Range compactness and interior fixed points of analytic self-maps.
//
// A map whose image closure stays inside the disc by a definite margin has an
// attracting interior fixed point, and iteration from the origin converges to
// it.  The range check certifies (or refutes) that margin from a sup norm
// estimate on a circle hugging the boundary; when the estimate's bracket
// straddles the threshold the answer is reported as a genuine third state
// rather than coerced to a boolean.

namespace discendo {

enum class RangeClass { Compact, NotCompact, Inconclusive };

struct RangeCheck {
    RangeClass classification;
    double lower;       // sampled sup norm estimate, lower end
    double upper;       // certified upper end
    double margin;      // requested clearance from the boundary
    double radius;      // circle actually probed
};

inline const char* to_string(RangeClass c) {
    switch (c) {
        case RangeClass::Compact: return "compact";
        case RangeClass::NotCompact: return "not_compact";
        default: return "inconclusive";
    }
}

// Does the closure of m(D) stay inside {|w| <= 1 - margin}?  The sup over D
// is probed on the circle of radius 1 - 1e-6; Compact needs the certified
// upper bound under the threshold, NotCompact needs the sampled lower bound
// above it, and anything in between is Inconclusive.
inline RangeCheck compact_range_check(const MapExpr& m, double margin, int samples = 4096) {
    if (!(margin > 0.0 && margin < 1.0)) {
        throw std::invalid_argument("compact_range_check: margin outside (0, 1)");
    }
    const double radius = 1.0 - 1e-6;
    const SupNormEstimate est = sup_norm_estimate(m, radius, samples);
    const double threshold = 1.0 - margin;
    RangeClass cls = RangeClass::Inconclusive;
    if (est.upper <= threshold) {
        cls = RangeClass::Compact;
    } else if (est.lower > threshold) {
        cls = RangeClass::NotCompact;
    }
    return {cls, est.lower, est.upper, margin, radius};
}

struct FixedPointResult {
    DiscPoint z0;        // the interior fixed point
    Complex multiplier;  // m'(z0)
    double residual;     // |m(z0) - z0| at the returned point
    long iterations;
};

struct FixedPointOptions {
    double tol = 1e-12;
    long max_iter = 100000;
    Complex seed = 0.0;
};

// Picard iteration from the seed, switched to Newton polish once steps are
// small.  Maps without an interior fixed point drift toward the boundary;
// that escape (or an exhausted budget) raises convergence_error instead of
// returning a spurious answer.
inline FixedPointResult find_fixed_point(const MapExpr& m, const FixedPointOptions& opt = {}) {
    if (!(opt.tol > 0.0)) throw std::invalid_argument("find_fixed_point: tolerance must be > 0");
    if (opt.max_iter < 1) throw std::invalid_argument("find_fixed_point: max_iter must be >= 1");
    constexpr double kEscape = 1.0 - 1e-9;
    constexpr double kNewtonStep = 1e-4;

    Complex z = opt.seed;
    detail::require_interior(z);
    long iterations = 0;
    double residual = std::abs(eval(m, z) - z);
    while (residual > opt.tol) {
        if (++iterations > opt.max_iter) {
            throw convergence_error("find_fixed_point: no convergence within " +
                                    std::to_string(opt.max_iter) + " iterations");
        }
        const Complex fz = eval(m, z);
        if (std::abs(fz) > kEscape) {
            throw convergence_error(
                "find_fixed_point: iterates escape toward the boundary; "
                "no attracting interior fixed point");
        }
        Complex next = fz;
        if (std::abs(fz - z) < kNewtonStep) {
            const Complex denom = derivative(m, z) - 1.0;
            if (std::abs(denom) > 1e-14) {
                const Complex candidate = z - (fz - z) / denom;
                if (std::abs(candidate) < kEscape) next = candidate;
            }
        }
        z = next;
        residual = std::abs(eval(m, z) - z);
    }
    return {DiscPoint(z), derivative(m, z), residual, iterations};
}

inline FixedPointResult find_fixed_point(const MapExpr& m, double tol, long max_iter) {
    FixedPointOptions opt;
    opt.tol = tol;
    opt.max_iter = max_iter;
    return find_fixed_point(m, opt);
}

}  // namespace discendo
