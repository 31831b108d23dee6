#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "discendo/disc.hpp"
#include "discendo/fixed_point.hpp"
#include "discendo/map_expr.hpp"

// Boundary nets and endomorphism models.  A net of radial stages x_1 < x_2 <
// ... < x_K -> 1 stands in for a boundary limit: the Moebius shifts a_{x_k}
// track the limit map L(z) = lim (z + x_k)/(1 + x_k z), and quantities that
// stabilize along the net approximate their boundary values.  On top of the
// nets sit the three model classes of disc-algebra endomorphisms: honest
// composition inside the disc, the rank-one evaluation-at-a-stage model, and
// the generalized form f -> f(a_{x_k} . t) built from a compact-range map t.

namespace discendo {

class BoundaryNet {
public:
    // Stages must be strictly increasing and strictly inside (0, 1).
    explicit BoundaryNet(std::vector<double> stages) : stages_(std::move(stages)) {
        if (stages_.empty()) throw std::invalid_argument("BoundaryNet: at least one stage");
        double prev = 0.0;
        for (double x : stages_) {
            if (!(x > prev && x < 1.0)) {
                throw std::invalid_argument(
                    "BoundaryNet: stages must be strictly increasing inside (0, 1)");
            }
            prev = x;
        }
    }

    // x_k = 1 - 2^{-k}, k = 1..count: the canonical dyadic approach to 1.
    static BoundaryNet geometric(int count) {
        if (count < 1) throw std::invalid_argument("BoundaryNet::geometric: count must be >= 1");
        std::vector<double> stages(static_cast<std::size_t>(count));
        for (int k = 1; k <= count; ++k) {
            stages[static_cast<std::size_t>(k - 1)] = 1.0 - std::ldexp(1.0, -k);
        }
        return BoundaryNet(std::move(stages));
    }

    int size() const { return static_cast<int>(stages_.size()); }

    // Stages are addressed 1-based, matching the x_1 < ... < x_K convention.
    double stage(int k) const {
        if (k < 1 || k > size()) throw std::out_of_range("BoundaryNet: stage index out of range");
        return stages_[static_cast<std::size_t>(k - 1)];
    }

    const std::vector<double>& stages() const { return stages_; }

private:
    std::vector<double> stages_;
};

// z_i = 1 - 2^{1-i}, i = 1..count: the geometric zero sequence (z_1 = 0)
// used by the Blaschke product and separation examples.
inline std::vector<DiscPoint> geometric_zero_sequence(int count) {
    if (count < 1) throw std::invalid_argument("geometric_zero_sequence: count must be >= 1");
    std::vector<DiscPoint> zeros(static_cast<std::size_t>(count));
    for (int i = 1; i <= count; ++i) {
        zeros[static_cast<std::size_t>(i - 1)] = DiscPoint(1.0 - std::ldexp(1.0, 1 - i));
    }
    return zeros;
}

// Stage-k surrogate for the boundary limit map: a_{x_k}(z).
inline DiscPoint lm_surrogate(const BoundaryNet& net, int k, DiscPoint z) {
    return moebius_eval(MoebiusShift(net.stage(k)), z);
}

// ---- endomorphism models ---------------------------------------------------

class EndomorphismModel {
public:
    enum class Kind { CompositionInDisc, RankOne, GeneralizedComposition };

    static EndomorphismModel composition(MapExpr omega) {
        return EndomorphismModel(CompositionData{std::move(omega)});
    }

    static EndomorphismModel rank_one(BoundaryNet net) {
        return EndomorphismModel(RankOneData{std::move(net)});
    }

    // The generalized model is only meaningful when t has compact range; the
    // factory certifies that with compact_range_check before accepting t.
    static EndomorphismModel generalized(BoundaryNet net, MapExpr t, double margin = 0.25) {
        if (compact_range_check(t, margin).classification != RangeClass::Compact) {
            throw std::domain_error(
                "EndomorphismModel::generalized: map fails the compact range check");
        }
        return EndomorphismModel(GeneralizedData{std::move(net), std::move(t)});
    }

    Kind kind() const {
        if (std::holds_alternative<CompositionData>(data_)) return Kind::CompositionInDisc;
        if (std::holds_alternative<RankOneData>(data_)) return Kind::RankOne;
        return Kind::GeneralizedComposition;
    }

    const MapExpr& omega() const { return std::get<CompositionData>(data_).omega; }

    const BoundaryNet& net() const {
        if (const auto* r = std::get_if<RankOneData>(&data_)) return r->net;
        return std::get<GeneralizedData>(data_).net;
    }

    const MapExpr& inner_map() const { return std::get<GeneralizedData>(data_).inner; }

private:
    struct CompositionData {
        MapExpr omega;
    };
    struct RankOneData {
        BoundaryNet net;
    };
    struct GeneralizedData {
        BoundaryNet net;
        MapExpr inner;
    };

    using Data = std::variant<CompositionData, RankOneData, GeneralizedData>;

    explicit EndomorphismModel(Data data) : data_(std::move(data)) {}

    Data data_;
};

namespace detail {

inline void require_disc_algebra(const MapExpr& f) {
    if (!extends_continuously(f)) {
        throw std::domain_error(
            "test function must extend continuously to the closed disc");
    }
}

}  // namespace detail

// (Tf)(z) at net stage k.  Composition applies f . omega and ignores the
// stage; the other two models require f to extend continuously and read it
// at (or through) the stage point.
inline Complex apply_endomorphism(const EndomorphismModel& model, const MapExpr& f, DiscPoint z,
                                  int stage) {
    switch (model.kind()) {
        case EndomorphismModel::Kind::CompositionInDisc:
            return eval(f, eval(model.omega(), z.value()));
        case EndomorphismModel::Kind::RankOne: {
            detail::require_disc_algebra(f);
            const double x = model.net().stage(stage);
            return eval(f, Complex(x));
        }
        default: {
            detail::require_disc_algebra(f);
            const double x = model.net().stage(stage);
            const Complex w = eval(model.inner_map(), z.value());
            return eval(f, detail::moebius_apply(Complex(x), w));
        }
    }
}

// (T^p f)(z) at net stage k, p >= 1.  The rank-one model is idempotent, so
// every power agrees with a single application.
inline Complex iterate_endomorphism(const EndomorphismModel& model, const MapExpr& f, DiscPoint z,
                                    int power, int stage) {
    if (power < 1) throw std::invalid_argument("iterate_endomorphism: power must be >= 1");
    switch (model.kind()) {
        case EndomorphismModel::Kind::CompositionInDisc: {
            Complex w = z.value();
            for (int i = 0; i < power; ++i) w = eval(model.omega(), w);
            return eval(f, w);
        }
        case EndomorphismModel::Kind::RankOne:
            return apply_endomorphism(model, f, z, stage);
        default: {
            detail::require_disc_algebra(f);
            const double x = model.net().stage(stage);
            Complex w = z.value();
            for (int i = 0; i < power; ++i) {
                w = detail::moebius_apply(Complex(x), eval(model.inner_map(), w));
            }
            return eval(f, w);
        }
    }
}

// ---- stage maps and their limits -------------------------------------------

// psi_k = t . a_{x_k} (shift first, then t): the stage-k maps whose behavior
// as x_k -> 1 drives the collapse analysis.  t must pass the compact range
// check.
inline MapExpr psi_stage(const MapExpr& t, const BoundaryNet& net, int k, double margin = 0.25) {
    if (compact_range_check(t, margin).classification != RangeClass::Compact) {
        throw std::domain_error("psi_stage: map fails the compact range check");
    }
    return compose(t, moebius(Complex(net.stage(k))));
}

struct PsiLimitResult {
    bool converged;
    Complex value;                      // last stage value (the limit when converged)
    std::vector<Complex> stage_values;  // psi_k(z) for every stage, for diagnosis
    double tail_spread;                 // max pairwise gap among the last three stages
};

// Values psi_k(z) along the whole net, with a Cauchy-style convergence call:
// converged iff the last three stages agree pairwise within tol.  On failure
// the full stage column and the tail spread document what happened.
inline PsiLimitResult psi_limit(const MapExpr& t, const BoundaryNet& net, DiscPoint z,
                                double tol = 1e-9, double margin = 0.25) {
    if (!(tol > 0.0)) throw std::invalid_argument("psi_limit: tolerance must be > 0");
    if (compact_range_check(t, margin).classification != RangeClass::Compact) {
        throw std::domain_error("psi_limit: map fails the compact range check");
    }
    PsiLimitResult out{false, 0.0, {}, 0.0};
    out.stage_values.reserve(static_cast<std::size_t>(net.size()));
    for (int k = 1; k <= net.size(); ++k) {
        const Complex shifted = detail::moebius_apply(Complex(net.stage(k)), z.value());
        out.stage_values.push_back(eval(t, shifted));
    }
    out.value = out.stage_values.back();
    const std::size_t count = out.stage_values.size();
    if (count >= 3) {
        const Complex a = out.stage_values[count - 3];
        const Complex b = out.stage_values[count - 2];
        const Complex c = out.stage_values[count - 1];
        out.tail_spread =
            std::max({std::abs(a - b), std::abs(b - c), std::abs(a - c)});
        out.converged = out.tail_spread <= tol;
    }
    return out;
}

// ---- interpolating sequences -----------------------------------------------

struct InterpolatingSequence {
    std::vector<DiscPoint> points;
    std::vector<double> delta_n;  // separation of each point from the others
    double delta;                 // inf over n
};

// delta_n = prod_{k != n} rho(z_k, z_n) over the first `count` points, and
// delta = min_n delta_n.  Points must be pairwise distinct.
inline InterpolatingSequence interpolating_check(const std::vector<DiscPoint>& points, int count) {
    if (count < 1 || static_cast<std::size_t>(count) > points.size()) {
        throw std::invalid_argument("interpolating_check: count outside [1, points]");
    }
    InterpolatingSequence out;
    out.points.assign(points.begin(), points.begin() + count);
    out.delta_n.assign(static_cast<std::size_t>(count), 1.0);
    for (int n = 0; n < count; ++n) {
        for (int k = 0; k < count; ++k) {
            if (k == n) continue;
            const double rho = pseudo_distance(out.points[static_cast<std::size_t>(k)],
                                               out.points[static_cast<std::size_t>(n)]);
            if (rho == 0.0) {
                throw std::domain_error("interpolating_check: repeated point at index " +
                                        std::to_string(n));
            }
            out.delta_n[static_cast<std::size_t>(n)] *= rho;
        }
    }
    out.delta = *std::min_element(out.delta_n.begin(), out.delta_n.end());
    return out;
}

// ---- the two worked examples -----------------------------------------------

struct StageEstimate {
    double x;      // net stage
    double lower;  // sampled sup of |psi_k| on |z| <= r
    double upper;  // certified upper bound
};

// Closed-form bound for sup |tau . a_x| on |z| <= r: writing g = (w+1)/(w-1),
// the shift multiplies the boundary mass by (1+x)/(1-x), so over the image of
// |z| <= r one has Re g <= -((1+x)/(1-x)) * ((1-r)/(1+r)) and |tau . a_x| <=
// exp of that over 2.
inline double example_a_stage_bound(double x, double r) {
    if (!(x >= 0.0 && x < 1.0)) throw std::invalid_argument("stage bound: x outside [0, 1)");
    if (!(r >= 0.0 && r < 1.0)) throw std::invalid_argument("stage bound: r outside [0, 1)");
    return 0.5 * std::exp(-((1.0 + x) / (1.0 - x)) * ((1.0 - r) / (1.0 + r)));
}

inline StageEstimate example_a_stage(double x, double r, int samples = 2048) {
    const MapExpr psi = (x == 0.0) ? tau() : compose(tau(), moebius(Complex(x)));
    const SupNormEstimate est = sup_norm_estimate(psi, r, samples);
    return {x, est.lower, std::min(est.upper, example_a_stage_bound(x, r))};
}

// Stage-by-stage sup norms of psi_k = tau . a_{x_k} on |z| <= r.  The column
// collapses toward 0, which is the quantitative content of the singular
// example: high stages push the disc into the singularity's decay region.
inline std::vector<StageEstimate> verify_example_a(const BoundaryNet& net, double r = 0.5,
                                                   int samples = 2048) {
    if (!(r > 0.0 && r <= 0.9)) {
        throw std::invalid_argument("verify_example_a: radius must lie in (0, 0.9]");
    }
    std::vector<StageEstimate> out;
    out.reserve(static_cast<std::size_t>(net.size()));
    for (int k = 1; k <= net.size(); ++k) {
        out.push_back(example_a_stage(net.stage(k), r, samples));
    }
    return out;
}

struct SeparationReport {
    std::vector<DiscPoint> points;
    std::vector<double> d;           // d_n = |B'(z_n)| (1 - |z_n|^2) / 2
    std::vector<double> half_delta;  // delta_n / 2 from the distance route
    double max_identity_gap;         // max_n |d_n - delta_n / 2|
    double min_d;
    double delta;                    // min_n delta_n
};

// Separation data for a finite Blaschke zero set, computed along two
// independent routes: through the derivative of the product at each zero,
// and through pairwise pseudohyperbolic distances.  The exact identity
// d_n = delta_n / 2 ties the two; its numerical gap is reported.
// The first zero must be the origin.
inline SeparationReport verify_example_b(const std::vector<DiscPoint>& zeros, int count) {
    if (count < 2) throw std::invalid_argument("verify_example_b: need at least two zeros");
    const InterpolatingSequence seq = interpolating_check(zeros, count);
    if (seq.points.front().value() != Complex(0.0)) {
        throw std::domain_error("verify_example_b: the first zero must be 0");
    }
    const MapExpr product = blaschke(seq.points);
    SeparationReport report;
    report.points = seq.points;
    report.delta = seq.delta;
    for (int n = 0; n < count; ++n) {
        const DiscPoint zn = seq.points[static_cast<std::size_t>(n)];
        const double dn =
            0.5 * std::abs(derivative(product, zn)) * (1.0 - zn.modulus() * zn.modulus());
        report.d.push_back(dn);
        report.half_delta.push_back(0.5 * seq.delta_n[static_cast<std::size_t>(n)]);
    }
    report.max_identity_gap = 0.0;
    for (int n = 0; n < count; ++n) {
        report.max_identity_gap =
            std::max(report.max_identity_gap,
                     std::abs(report.d[static_cast<std::size_t>(n)] -
                              report.half_delta[static_cast<std::size_t>(n)]));
    }
    report.min_d = *std::min_element(report.d.begin(), report.d.end());
    return report;
}

}  // namespace discendo
