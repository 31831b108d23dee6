#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

// Geometry of the open unit disc D = {|z| < 1}: interior points, Moebius
// shifts in the rotation-free normalization
//
//     a(z) = (z + alpha) / (1 + conj(alpha) z),        a(0) = alpha,
//
// and the pseudohyperbolic / hyperbolic distances
//
//     rho(z, w) = |z - w| / |1 - conj(w) z|,           d(z, w) = atanh(rho).
//
// rho is invariant under disc automorphisms and stays strictly below 1 on
// interior points; atanh(rho) is a genuine metric (triangle inequality).

namespace discendo {

using Complex = std::complex<double>;

// Thrown by iterative routines that fail to settle within their budget.
class convergence_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Interior points keep a guard band off the boundary so the denominators
// 1 - conj(w) z stay well conditioned in every downstream formula.
inline constexpr double kDiscGuard = 1e-14;

class DiscPoint {
public:
    DiscPoint() = default;

    explicit DiscPoint(Complex value) : value_(value) {
        if (!(std::abs(value) <= 1.0 - kDiscGuard)) {
            throw std::domain_error("DiscPoint: modulus " + std::to_string(std::abs(value)) +
                                    " is not strictly inside the unit disc");
        }
    }
    explicit DiscPoint(double re) : DiscPoint(Complex(re, 0.0)) {}
    DiscPoint(double re, double im) : DiscPoint(Complex(re, im)) {}

    Complex value() const { return value_; }
    double modulus() const { return std::abs(value_); }

    friend bool operator==(const DiscPoint& a, const DiscPoint& b) {
        return a.value_ == b.value_;
    }

private:
    Complex value_{0.0, 0.0};
};

struct MoebiusShift {
    DiscPoint alpha;

    explicit MoebiusShift(DiscPoint base) : alpha(base) {}
    explicit MoebiusShift(Complex base) : alpha(base) {}
    explicit MoebiusShift(double base) : alpha(base) {}
};

namespace detail {

inline Complex moebius_apply(Complex alpha, Complex z) {
    return (z + alpha) / (1.0 + std::conj(alpha) * z);
}

inline double rho(Complex z, Complex w) {
    return std::abs(z - w) / std::abs(1.0 - std::conj(w) * z);
}

}  // namespace detail

inline double pseudo_distance(DiscPoint z, DiscPoint w) {
    return detail::rho(z.value(), w.value());
}

inline double hyperbolic_distance(DiscPoint z, DiscPoint w) {
    return std::atanh(pseudo_distance(z, w));
}

inline DiscPoint moebius_eval(const MoebiusShift& a, DiscPoint z) {
    return DiscPoint(detail::moebius_apply(a.alpha.value(), z.value()));
}

// a'(z) = (1 - |alpha|^2) / (1 + conj(alpha) z)^2; nonvanishing on D.
inline Complex moebius_derivative(const MoebiusShift& a, DiscPoint z) {
    const Complex alpha = a.alpha.value();
    const Complex den = 1.0 + std::conj(alpha) * z.value();
    return (1.0 - std::norm(alpha)) / (den * den);
}

}  // namespace discendo
