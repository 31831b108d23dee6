#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "discendo/disc.hpp"
#include "discendo/fixed_point.hpp"
#include "discendo/map_expr.hpp"
#include "discendo/power_series.hpp"

// Spectra of composition-type operators.  For a self-map with attracting
// interior fixed point z0 and multiplier mu = m'(z0), the operator spectrum
// is the closed multiplicative orbit {mu^n : n >= 1} together with {0, 1}.
// Finite sections in the monomial basis make that prediction checkable: the
// N x N truncation stores the Maclaurin coefficients of the powers m^k as
// columns, and (after conjugating the fixed point to the origin) its
// eigenvalues converge to the predicted orbit.

namespace discendo {

namespace detail {

// Descending modulus; ties broken by argument so orderings are reproducible.
inline void sort_by_modulus(std::vector<Complex>& values) {
    std::stable_sort(values.begin(), values.end(), [](Complex a, Complex b) {
        const double ma = std::abs(a), mb = std::abs(b);
        if (ma != mb) return ma > mb;
        return std::arg(a) < std::arg(b);
    });
}

}  // namespace detail

struct SpectrumSet {
    Complex multiplier;
    int n_max;
    double eps;
    std::vector<Complex> points;  // sorted by decreasing modulus; contains both 1 and 0

    // First k points; k must not exceed the stored count.
    std::vector<Complex> top(int k) const {
        if (k < 0 || static_cast<std::size_t>(k) > points.size()) {
            throw std::invalid_argument("SpectrumSet::top: k exceeds stored point count");
        }
        return {points.begin(), points.begin() + k};
    }
};

// Predicted spectrum {1, mu, mu^2, ..., 0}: powers are built by successive
// multiplication (no pow calls), stop at n_max, and drop below modulus eps.
inline SpectrumSet theoretical_spectrum(Complex mu, int n_max = 8, double eps = 1e-12) {
    if (!(std::abs(mu) < 1.0)) {
        throw std::domain_error("theoretical_spectrum: multiplier must satisfy |mu| < 1");
    }
    if (n_max < 1) throw std::invalid_argument("theoretical_spectrum: n_max must be >= 1");
    if (eps < 0.0) throw std::invalid_argument("theoretical_spectrum: eps must be >= 0");
    SpectrumSet out{mu, n_max, eps, {Complex(1.0)}};
    Complex power = mu;
    for (int n = 1; n <= n_max; ++n) {
        if (power == Complex(0.0) || std::abs(power) < eps) break;
        out.points.push_back(power);
        power *= mu;
    }
    out.points.push_back(Complex(0.0));
    return out;
}

struct CompositionMatrix {
    Eigen::MatrixXcd entries;  // entries(j, k) = Maclaurin coefficient j of m^k

    Eigen::Index dim() const { return entries.rows(); }
};

// N x N finite section of composition by m in the monomial basis: column k
// holds the coefficients of m^k = m * m^{k-1}, truncated to degree N - 1.
// When m(0) = 0 the matrix is lower triangular with diagonal m'(0)^k.
inline CompositionMatrix build_truncation(const MapExpr& m, int N) {
    if (N < 1) throw std::invalid_argument("build_truncation: N must be >= 1");
    const PowerSeries symbol = taylor(m, N - 1);
    if (!(std::abs(symbol[0]) < 1.0)) {
        throw std::domain_error("build_truncation: |m(0)| must be < 1");
    }
    CompositionMatrix out{Eigen::MatrixXcd::Zero(N, N)};
    PowerSeries column(N - 1);
    column.at(0) = 1.0;  // m^0 = 1
    out.entries(0, 0) = 1.0;
    for (int k = 1; k < N; ++k) {
        column = series_multiply(column, symbol, N - 1);
        for (int j = 0; j < N; ++j) out.entries(j, k) = column[j];
    }
    return out;
}

inline std::vector<Complex> eigenvalues(const Eigen::MatrixXcd& matrix) {
    if (matrix.rows() != matrix.cols()) {
        throw std::invalid_argument("eigenvalues: matrix must be square");
    }
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(matrix, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) {
        throw convergence_error("eigenvalues: QR iteration did not converge");
    }
    std::vector<Complex> values(solver.eigenvalues().data(),
                                solver.eigenvalues().data() + matrix.rows());
    detail::sort_by_modulus(values);
    return values;
}

inline std::vector<Complex> eigenvalues(const CompositionMatrix& matrix) {
    return eigenvalues(matrix.entries);
}

struct MatchReport {
    std::vector<std::pair<Complex, Complex>> pairs;  // (predicted, computed)
    double max_distance;
    bool pass;
};

// Greedy nearest-neighbor matching of the top-k points of both collections,
// walking the predictions in decreasing modulus and consuming each computed
// value at most once.
inline MatchReport compare_spectra(std::vector<Complex> computed, const SpectrumSet& predicted,
                                   int k, double tol) {
    if (k < 0 || static_cast<std::size_t>(k) > computed.size() ||
        static_cast<std::size_t>(k) > predicted.points.size()) {
        throw std::invalid_argument("compare_spectra: k exceeds a collection size");
    }
    detail::sort_by_modulus(computed);
    const std::vector<Complex> want = predicted.top(k);
    std::vector<bool> used(static_cast<std::size_t>(k), false);
    MatchReport report{{}, 0.0, true};
    for (Complex p : want) {
        int best = -1;
        double best_dist = 0.0;
        for (int i = 0; i < k; ++i) {
            if (used[static_cast<std::size_t>(i)]) continue;
            const double dist = std::abs(computed[static_cast<std::size_t>(i)] - p);
            if (best < 0 || dist < best_dist) {
                best = i;
                best_dist = dist;
            }
        }
        used[static_cast<std::size_t>(best)] = true;
        report.pairs.emplace_back(p, computed[static_cast<std::size_t>(best)]);
        report.max_distance = std::max(report.max_distance, best_dist);
    }
    report.pass = report.max_distance <= tol;
    return report;
}

// Conjugate m by the Moebius shift taking 0 to z0, so the fixed point lands
// at the origin: a_{z0}^{-1} . m . a_{z0}.  The multiplier is unchanged.
// z0 must actually be fixed by m (residual <= 1e-8); z0 = 0 returns m as is.
inline MapExpr conjugate_to_origin(const MapExpr& m, DiscPoint z0) {
    const double residual = std::abs(eval(m, z0) - z0.value());
    if (residual > 1e-8) {
        throw std::domain_error("conjugate_to_origin: point is not fixed (residual " +
                                std::to_string(residual) + ")");
    }
    if (z0.value() == Complex(0.0)) return m;
    return compose(moebius_inverse(z0.value()), compose(m, moebius(z0.value())));
}

struct AbBaReport {
    bool ok;
    double max_distance;       // worst matched distance among nonzero eigenvalues
    std::size_t nonzero_ab;    // eigenvalue counts above the threshold
    std::size_t nonzero_ba;
};

// The nonzero spectra of AB and BA coincide.  Both eigenvalue lists are
// filtered to modulus > tol and greedily matched; equality requires matching
// counts and all pair distances within tol.
inline AbBaReport ab_ba_report(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b, double tol) {
    if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows()) {
        throw std::invalid_argument("ab_ba_report: matrices must be square with equal dimension");
    }
    auto nonzero = [tol](std::vector<Complex> values) {
        std::erase_if(values, [tol](Complex v) { return std::abs(v) <= tol; });
        return values;  // already sorted by decreasing modulus
    };
    const std::vector<Complex> ab = nonzero(eigenvalues(Eigen::MatrixXcd(a * b)));
    std::vector<Complex> ba = nonzero(eigenvalues(Eigen::MatrixXcd(b * a)));
    AbBaReport report{true, 0.0, ab.size(), ba.size()};
    if (ab.size() != ba.size()) {
        report.ok = false;
        return report;
    }
    std::vector<bool> used(ba.size(), false);
    for (Complex v : ab) {
        int best = -1;
        double best_dist = 0.0;
        for (std::size_t i = 0; i < ba.size(); ++i) {
            if (used[i]) continue;
            const double dist = std::abs(ba[i] - v);
            if (best < 0 || dist < best_dist) {
                best = static_cast<int>(i);
                best_dist = dist;
            }
        }
        used[static_cast<std::size_t>(best)] = true;
        report.max_distance = std::max(report.max_distance, best_dist);
    }
    report.ok = report.max_distance <= tol;
    return report;
}

inline bool ab_ba_check(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b, double tol) {
    return ab_ba_report(a, b, tol).ok;
}

}  // namespace discendo
