#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <variant>
#include <vector>

#include "discendo/disc.hpp"
#include "discendo/power_series.hpp"

// Expression trees over analytic self-maps of the unit disc.  Leaves are the
// basic maps (identity, constants, monomials, affine contractions, Moebius
// shifts and their inverses, rotations, finite Blaschke products, and the
// singular map tau(z) = z/2 * exp((z+1)/(z-1))); interior nodes scale by a
// factor of modulus <= 1 or compose two maps.  Every factory validates the
// parameters needed for the result to map D into the closed disc, so a
// constructed expression can always be evaluated, differentiated, expanded
// into a Taylor series, or bounded in sup norm on |z| <= r.

namespace discendo {

class MapExpr;

namespace nodes {

struct Identity {};

struct Constant {
    Complex value;  // |value| strictly inside D
};

struct Monomial {
    int degree;  // z^degree, degree >= 1
};

struct Affine {
    Complex slope;   // slope * z + offset with |slope| + |offset| <= 1
    Complex offset;
};

struct Shift {
    Complex alpha;  // (z + alpha) / (1 + conj(alpha) z)
};

struct InverseShift {
    Complex alpha;  // (z - alpha) / (1 - conj(alpha) z)
};

struct Rotation {
    double angle;  // exp(i * angle) * z
};

struct BlaschkeProduct {
    std::vector<Complex> zeros;  // factor z for a zero at 0, else |a|/a * (a-z)/(1-conj(a)z)
};

// tau(z) = z/2 * exp((z+1)/(z-1)): fixes 0, |tau| <= 1/2, and the closure of
// tau(D) is a compact subset of D; the boundary point 1 is an essential
// singularity and evaluation near it is refused.
struct Tau {};

}  // namespace nodes

class MapExpr {
public:
    struct Node;

    explicit MapExpr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

    const Node& node() const { return *node_; }

private:
    std::shared_ptr<const Node> node_;
};

namespace nodes {

struct Scale {
    Complex factor;  // |factor| <= 1
    MapExpr inner;
};

struct Compose {
    MapExpr outer;
    MapExpr inner;
};

}  // namespace nodes

struct MapExpr::Node {
    std::variant<nodes::Identity, nodes::Constant, nodes::Monomial, nodes::Affine, nodes::Shift,
                 nodes::InverseShift, nodes::Rotation, nodes::BlaschkeProduct, nodes::Tau,
                 nodes::Scale, nodes::Compose>
        value;
};

namespace detail {

template <class... Fs>
struct overloaded : Fs... {
    using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

inline MapExpr make_node(MapExpr::Node node) {
    return MapExpr(std::make_shared<const MapExpr::Node>(std::move(node)));
}

inline void require_interior(Complex z) {
    if (!(std::abs(z) < 1.0)) {
        throw std::domain_error("map evaluation: point has modulus " +
                                std::to_string(std::abs(z)) + ", outside the open unit disc");
    }
}

// Guard band around the essential singularity of tau at z = 1.
inline constexpr double kTauSingularityGuard = 1e-12;

inline void require_off_singularity(Complex z) {
    if (std::abs(z - 1.0) <= kTauSingularityGuard) {
        throw std::domain_error("tau: evaluation point inside the singularity guard around z = 1");
    }
}

// Unimodular normalization making a Blaschke factor positive at the origin.
inline Complex blaschke_unit(Complex a) { return std::abs(a) / a; }

// Integer power by repeated multiplication; std::pow on complex arguments
// routes through exp/log and produces NaN at the origin.
inline Complex ipow(Complex z, int k) {
    Complex acc = 1.0;
    for (int i = 0; i < k; ++i) acc *= z;
    return acc;
}

}  // namespace detail

template <class T>
bool holds(const MapExpr& m) {
    return std::holds_alternative<T>(m.node().value);
}

template <class T>
const T& get(const MapExpr& m) {
    return std::get<T>(m.node().value);
}

// ---- factories -------------------------------------------------------------

inline MapExpr identity() { return detail::make_node({nodes::Identity{}}); }

inline MapExpr constant(Complex value) {
    DiscPoint guard(value);  // rejects |value| too close to the boundary
    return detail::make_node({nodes::Constant{guard.value()}});
}

inline MapExpr monomial(int degree) {
    if (degree < 1) throw std::invalid_argument("monomial: degree must be >= 1");
    return detail::make_node({nodes::Monomial{degree}});
}

inline MapExpr affine(Complex slope, Complex offset) {
    if (!(std::abs(slope) + std::abs(offset) <= 1.0)) {
        throw std::domain_error("affine: |slope| + |offset| must be <= 1 to map D into itself");
    }
    return detail::make_node({nodes::Affine{slope, offset}});
}

inline MapExpr moebius(Complex alpha) {
    DiscPoint guard(alpha);
    return detail::make_node({nodes::Shift{guard.value()}});
}

inline MapExpr moebius(const MoebiusShift& shift) { return moebius(shift.alpha.value()); }

inline MapExpr moebius_inverse(Complex alpha) {
    DiscPoint guard(alpha);
    return detail::make_node({nodes::InverseShift{guard.value()}});
}

inline MapExpr moebius_inverse(const MoebiusShift& shift) {
    return moebius_inverse(shift.alpha.value());
}

inline MapExpr rotation(double angle) {
    if (!std::isfinite(angle)) throw std::invalid_argument("rotation: angle must be finite");
    return detail::make_node({nodes::Rotation{angle}});
}

inline MapExpr blaschke(std::vector<Complex> zeros) {
    if (zeros.empty()) throw std::invalid_argument("blaschke: at least one zero required");
    for (Complex a : zeros) DiscPoint guard(a);
    return detail::make_node({nodes::BlaschkeProduct{std::move(zeros)}});
}

inline MapExpr blaschke(const std::vector<DiscPoint>& zeros) {
    std::vector<Complex> raw;
    raw.reserve(zeros.size());
    for (DiscPoint p : zeros) raw.push_back(p.value());
    return blaschke(std::move(raw));
}

inline MapExpr tau() { return detail::make_node({nodes::Tau{}}); }

inline MapExpr scale(Complex factor, MapExpr inner) {
    if (!(std::abs(factor) <= 1.0)) {
        throw std::domain_error("scale: factor must have modulus <= 1");
    }
    return detail::make_node({nodes::Scale{factor, std::move(inner)}});
}

inline MapExpr compose(MapExpr outer, MapExpr inner) {
    return detail::make_node({nodes::Compose{std::move(outer), std::move(inner)}});
}

// ---- pointwise evaluation --------------------------------------------------

inline Complex eval(const MapExpr& m, Complex z) {
    detail::require_interior(z);
    return std::visit(
        detail::overloaded{
            [&](const nodes::Identity&) { return z; },
            [&](const nodes::Constant& n) { return n.value; },
            [&](const nodes::Monomial& n) { return detail::ipow(z, n.degree); },
            [&](const nodes::Affine& n) { return n.slope * z + n.offset; },
            [&](const nodes::Shift& n) { return detail::moebius_apply(n.alpha, z); },
            [&](const nodes::InverseShift& n) { return detail::moebius_apply(-n.alpha, z); },
            [&](const nodes::Rotation& n) { return std::polar(1.0, n.angle) * z; },
            [&](const nodes::BlaschkeProduct& n) {
                Complex prod = 1.0;
                for (Complex a : n.zeros) {
                    prod *= (a == Complex(0.0))
                                ? z
                                : detail::blaschke_unit(a) * (a - z) / (1.0 - std::conj(a) * z);
                }
                return prod;
            },
            [&](const nodes::Tau&) {
                detail::require_off_singularity(z);
                return 0.5 * z * std::exp((z + 1.0) / (z - 1.0));
            },
            [&](const nodes::Scale& n) { return n.factor * eval(n.inner, z); },
            [&](const nodes::Compose& n) { return eval(n.outer, eval(n.inner, z)); },
        },
        m.node().value);
}

inline Complex eval(const MapExpr& m, DiscPoint z) { return eval(m, z.value()); }

// ---- derivative ------------------------------------------------------------

inline Complex derivative(const MapExpr& m, Complex z) {
    detail::require_interior(z);
    return std::visit(
        detail::overloaded{
            [&](const nodes::Identity&) { return Complex(1.0); },
            [&](const nodes::Constant&) { return Complex(0.0); },
            [&](const nodes::Monomial& n) {
                return static_cast<double>(n.degree) * detail::ipow(z, n.degree - 1);
            },
            [&](const nodes::Affine& n) { return n.slope; },
            [&](const nodes::Shift& n) {
                const Complex den = 1.0 + std::conj(n.alpha) * z;
                return (1.0 - std::norm(n.alpha)) / (den * den);
            },
            [&](const nodes::InverseShift& n) {
                const Complex den = 1.0 - std::conj(n.alpha) * z;
                return (1.0 - std::norm(n.alpha)) / (den * den);
            },
            [&](const nodes::Rotation& n) { return std::polar(1.0, n.angle); },
            [&](const nodes::BlaschkeProduct& n) {
                // Product rule with prefix/suffix partial products so that a
                // vanishing factor (z at one of the zeros) stays harmless.
                const std::size_t count = n.zeros.size();
                std::vector<Complex> value(count), deriv(count);
                for (std::size_t i = 0; i < count; ++i) {
                    const Complex a = n.zeros[i];
                    if (a == Complex(0.0)) {
                        value[i] = z;
                        deriv[i] = 1.0;
                    } else {
                        const Complex unit = detail::blaschke_unit(a);
                        const Complex den = 1.0 - std::conj(a) * z;
                        value[i] = unit * (a - z) / den;
                        deriv[i] = -unit * (1.0 - std::norm(a)) / (den * den);
                    }
                }
                std::vector<Complex> prefix(count + 1, 1.0), suffix(count + 1, 1.0);
                for (std::size_t i = 0; i < count; ++i) prefix[i + 1] = prefix[i] * value[i];
                for (std::size_t i = count; i-- > 0;) suffix[i] = suffix[i + 1] * value[i];
                Complex sum = 0.0;
                for (std::size_t i = 0; i < count; ++i) {
                    sum += prefix[i] * deriv[i] * suffix[i + 1];
                }
                return sum;
            },
            [&](const nodes::Tau&) {
                detail::require_off_singularity(z);
                const Complex d = z - 1.0;
                return 0.5 * std::exp((z + 1.0) / d) * (1.0 - 2.0 * z / (d * d));
            },
            [&](const nodes::Scale& n) { return n.factor * derivative(n.inner, z); },
            [&](const nodes::Compose& n) {
                return derivative(n.outer, eval(n.inner, z)) * derivative(n.inner, z);
            },
        },
        m.node().value);
}

inline Complex derivative(const MapExpr& m, DiscPoint z) { return derivative(m, z.value()); }

// ---- Taylor expansion ------------------------------------------------------

// Expansion of m around an interior center w0, truncated to the given degree;
// the result's coefficient k multiplies (z - w0)^k.  Each node has a closed
// form: rational leaves expand through a geometric series in the denominator,
// tau exponentiates the series of (z+1)/(z-1), and compositions re-expand the
// outer map around the inner map's value at the center.
inline PowerSeries taylor_about(const MapExpr& m, Complex w0, int degree) {
    if (degree < 0) throw std::invalid_argument("taylor_about: negative degree");
    detail::require_interior(w0);
    const int n = degree;
    return std::visit(
        detail::overloaded{
            [&](const nodes::Identity&) {
                PowerSeries s(n);
                s.at(0) = w0;
                if (n >= 1) s.at(1) = 1.0;
                return s;
            },
            [&](const nodes::Constant& c) {
                PowerSeries s(n);
                s.at(0) = c.value;
                return s;
            },
            [&](const nodes::Monomial& mono) {
                // Binomial expansion of (w0 + u)^k.
                PowerSeries s(n);
                const int k = mono.degree;
                Complex coeff = detail::ipow(w0, k);  // j = 0 term
                for (int j = 0; j <= std::min(k, n); ++j) {
                    s.at(j) = coeff;
                    if (j < k) {
                        coeff = (w0 == Complex(0.0))
                                    ? ((j + 1 == k) ? Complex(1.0) : Complex(0.0))
                                    : coeff * static_cast<double>(k - j) /
                                          (static_cast<double>(j + 1) * w0);
                    }
                }
                return s;
            },
            [&](const nodes::Affine& a) {
                PowerSeries s(n);
                s.at(0) = a.slope * w0 + a.offset;
                if (n >= 1) s.at(1) = a.slope;
                return s;
            },
            [&](const nodes::Shift& sh) {
                const PowerSeries numer{w0 + sh.alpha, 1.0};
                const PowerSeries invden =
                    series_geometric(1.0 + std::conj(sh.alpha) * w0, std::conj(sh.alpha), n);
                return series_multiply(numer, invden, n);
            },
            [&](const nodes::InverseShift& sh) {
                const PowerSeries numer{w0 - sh.alpha, 1.0};
                const PowerSeries invden =
                    series_geometric(1.0 - std::conj(sh.alpha) * w0, -std::conj(sh.alpha), n);
                return series_multiply(numer, invden, n);
            },
            [&](const nodes::Rotation& rot) {
                const Complex phase = std::polar(1.0, rot.angle);
                PowerSeries s(n);
                s.at(0) = phase * w0;
                if (n >= 1) s.at(1) = phase;
                return s;
            },
            [&](const nodes::BlaschkeProduct& b) {
                PowerSeries prod(n);
                prod.at(0) = 1.0;
                for (Complex a : b.zeros) {
                    PowerSeries factor(n);
                    if (a == Complex(0.0)) {
                        factor.at(0) = w0;
                        if (n >= 1) factor.at(1) = 1.0;
                    } else {
                        const PowerSeries numer{a - w0, -1.0};
                        const PowerSeries invden =
                            series_geometric(1.0 - std::conj(a) * w0, -std::conj(a), n);
                        factor = series_scale(detail::blaschke_unit(a),
                                              series_multiply(numer, invden, n));
                    }
                    prod = series_multiply(prod, factor, n);
                }
                return prod;
            },
            [&](const nodes::Tau&) {
                detail::require_off_singularity(w0);
                // (z+1)/(z-1) = (w0+1 + u)/(w0-1 + u), then exponentiate.
                const PowerSeries numer{w0 + 1.0, 1.0};
                const PowerSeries g =
                    series_multiply(numer, series_geometric(w0 - 1.0, 1.0, n), n);
                const PowerSeries e = series_exp(g, n);
                const PowerSeries front{0.5 * w0, 0.5};
                return series_multiply(front, e, n);
            },
            [&](const nodes::Scale& sc) {
                return series_scale(sc.factor, taylor_about(sc.inner, w0, n));
            },
            [&](const nodes::Compose& co) {
                PowerSeries inner = taylor_about(co.inner, w0, n);
                const Complex pivot = inner[0];
                const PowerSeries outer = taylor_about(co.outer, pivot, n);
                inner.at(0) = 0.0;
                return series_compose(outer, inner, n);
            },
        },
        m.node().value);
}

inline PowerSeries taylor(const MapExpr& m, int degree) { return taylor_about(m, 0.0, degree); }

// Independent cross-check: recover Maclaurin coefficients by discretizing the
// Cauchy integral over the circle |z| = 0.75 with 4 * (degree + 1) *
// oversampling equispaced points.  Deliberately shares no code with
// taylor_about beyond pointwise evaluation.
inline PowerSeries taylor_sampled(const MapExpr& m, int degree, int oversampling = 4) {
    if (degree < 0) throw std::invalid_argument("taylor_sampled: negative degree");
    if (oversampling < 1) throw std::invalid_argument("taylor_sampled: oversampling must be >= 1");
    const double radius = 0.75;
    const int samples = std::max(64, 4 * (degree + 1) * oversampling);
    std::vector<Complex> values(static_cast<std::size_t>(samples));
    for (int j = 0; j < samples; ++j) {
        const double theta = 2.0 * std::numbers::pi * j / samples;
        values[static_cast<std::size_t>(j)] = eval(m, std::polar(radius, theta));
    }
    PowerSeries out(degree);
    for (int k = 0; k <= degree; ++k) {
        Complex acc = 0.0;
        for (int j = 0; j < samples; ++j) {
            const double theta = 2.0 * std::numbers::pi * j / samples;
            acc += values[static_cast<std::size_t>(j)] * std::polar(1.0, -k * theta);
        }
        out.at(k) = acc / (static_cast<double>(samples) * std::pow(radius, k));
    }
    return out;
}

// ---- sup norm on |z| <= r --------------------------------------------------

// Structural upper bound for sup |m| over the closed disc of radius r,
// assembled from exact per-node maxima:
//   - a Moebius shift maps |z| <= r onto a pseudohyperbolic disc whose
//     farthest point from 0 has modulus (r + |alpha|) / (1 + |alpha| r);
//   - |tau(z)| = |z|/2 * exp(Re (z+1)/(z-1)) and both factors attain their
//     maximum over |z| <= r at z = -r, giving r/2 * exp(-(1-r)/(1+r));
//   - compositions feed the inner bound into the outer bound.
inline double sup_bound(const MapExpr& m, double r) {
    if (!(r >= 0.0 && r <= 1.0)) throw std::invalid_argument("sup_bound: radius outside [0, 1]");
    return std::visit(
        detail::overloaded{
            [&](const nodes::Identity&) { return r; },
            [&](const nodes::Constant& n) { return std::abs(n.value); },
            [&](const nodes::Monomial& n) { return std::pow(r, n.degree); },
            [&](const nodes::Affine& n) { return std::abs(n.slope) * r + std::abs(n.offset); },
            [&](const nodes::Shift& n) {
                const double a = std::abs(n.alpha);
                return (r + a) / (1.0 + a * r);
            },
            [&](const nodes::InverseShift& n) {
                const double a = std::abs(n.alpha);
                return (r + a) / (1.0 + a * r);
            },
            [&](const nodes::Rotation&) { return r; },
            [&](const nodes::BlaschkeProduct& n) {
                double prod = 1.0;
                for (Complex zero : n.zeros) {
                    const double a = std::abs(zero);
                    prod *= (r + a) / (1.0 + a * r);
                }
                return prod;
            },
            [&](const nodes::Tau&) { return 0.5 * r * std::exp(-(1.0 - r) / (1.0 + r)); },
            [&](const nodes::Scale& n) { return std::abs(n.factor) * sup_bound(n.inner, r); },
            [&](const nodes::Compose& n) {
                return sup_bound(n.outer, std::min(1.0, sup_bound(n.inner, r)));
            },
        },
        m.node().value);
}

struct SupNormEstimate {
    double lower;  // largest sampled |m| on the circle |z| = r
    double upper;  // certified bound: min(structural bound, lower + fill-in)
};

// Two-sided estimate of sup |m| on |z| <= r.  The lower bound samples the
// circle at `samples` equispaced angles (the maximum modulus principle puts
// the sup on the boundary circle).  The upper bound closes the gaps with a
// Lipschitz fill-in: a Cauchy estimate bounds |m'| by 1/(1-r) between sample
// points, so the true maximum exceeds the sampled one by at most
// pi * r / (samples * (1 - r)); the structural bound caps the result.
inline SupNormEstimate sup_norm_estimate(const MapExpr& m, double r, int samples = 2048) {
    if (!(r > 0.0 && r < 1.0)) {
        throw std::invalid_argument("sup_norm_estimate: radius outside (0, 1)");
    }
    if (samples < 8) throw std::invalid_argument("sup_norm_estimate: too few samples");
    double lower = 0.0;
    for (int j = 0; j < samples; ++j) {
        const double theta = 2.0 * std::numbers::pi * j / samples;
        lower = std::max(lower, std::abs(eval(m, std::polar(r, theta))));
    }
    const double fill = std::numbers::pi * r / (samples * (1.0 - r));
    return {lower, std::min(sup_bound(m, r), lower + fill)};
}

// True when the map extends continuously to the closed disc; only tau (whose
// boundary behavior at 1 is essentially singular) breaks the property.
inline bool extends_continuously(const MapExpr& m) {
    return std::visit(
        detail::overloaded{
            [&](const nodes::Tau&) { return false; },
            [&](const nodes::Scale& n) { return extends_continuously(n.inner); },
            [&](const nodes::Compose& n) {
                return extends_continuously(n.outer) && extends_continuously(n.inner);
            },
            [&](const auto&) { return true; },
        },
        m.node().value);
}

}  // namespace discendo
