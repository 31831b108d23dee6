#pragma once

#include <complex>
#include <initializer_list>
#include <stdexcept>
#include <utility>
#include <vector>

// Truncated Maclaurin series with explicit degree control. Every operation
// names the degree of its result; nothing extends or reinterprets a series
// silently. Coefficients are stored lowest degree first.

namespace discendo {

using Complex = std::complex<double>;

class PowerSeries {
public:
    // Zero series of the given degree (degree + 1 stored coefficients).
    explicit PowerSeries(int degree) {
        if (degree < 0) throw std::invalid_argument("PowerSeries: negative degree");
        coeff_.assign(static_cast<std::size_t>(degree) + 1, Complex(0.0));
    }

    PowerSeries(std::initializer_list<Complex> coeffs) : coeff_(coeffs) {
        if (coeff_.empty()) throw std::invalid_argument("PowerSeries: empty coefficient list");
    }

    explicit PowerSeries(std::vector<Complex> coeffs) : coeff_(std::move(coeffs)) {
        if (coeff_.empty()) throw std::invalid_argument("PowerSeries: empty coefficient list");
    }

    int degree() const { return static_cast<int>(coeff_.size()) - 1; }

    // Reads beyond the stored degree return 0, matching the series semantics.
    Complex operator[](int k) const {
        if (k < 0) throw std::out_of_range("PowerSeries: negative index");
        return k <= degree() ? coeff_[static_cast<std::size_t>(k)] : Complex(0.0);
    }

    Complex& at(int k) {
        if (k < 0 || k > degree()) throw std::out_of_range("PowerSeries: index out of range");
        return coeff_[static_cast<std::size_t>(k)];
    }

    const std::vector<Complex>& coefficients() const { return coeff_; }

    Complex evaluate(Complex z) const {
        Complex acc = 0.0;
        for (std::size_t i = coeff_.size(); i-- > 0;) acc = acc * z + coeff_[i];
        return acc;
    }

    // Copy cut or zero-padded to exactly degree n.
    PowerSeries truncated(int n) const {
        PowerSeries out(n);
        const int top = std::min(n, degree());
        for (int k = 0; k <= top; ++k) out.at(k) = coeff_[static_cast<std::size_t>(k)];
        return out;
    }

private:
    std::vector<Complex> coeff_;
};

inline PowerSeries series_add(const PowerSeries& a, const PowerSeries& b, int n) {
    PowerSeries out(n);
    for (int k = 0; k <= n; ++k) out.at(k) = a[k] + b[k];
    return out;
}

inline PowerSeries series_scale(Complex s, const PowerSeries& a) {
    PowerSeries out(a.degree());
    for (int k = 0; k <= a.degree(); ++k) out.at(k) = s * a[k];
    return out;
}

// Cauchy product truncated to degree n.
inline PowerSeries series_multiply(const PowerSeries& a, const PowerSeries& b, int n) {
    PowerSeries out(n);
    const int da = std::min(a.degree(), n);
    for (int i = 0; i <= da; ++i) {
        const Complex ai = a[i];
        if (ai == Complex(0.0)) continue;
        const int db = std::min(b.degree(), n - i);
        for (int j = 0; j <= db; ++j) out.at(i + j) += ai * b[j];
    }
    return out;
}

// outer(inner(u)) truncated to degree n; requires inner(0) = 0 so that the
// composition is well defined degree by degree. Horner over the outer series.
inline PowerSeries series_compose(const PowerSeries& outer, const PowerSeries& inner, int n) {
    if (inner[0] != Complex(0.0)) {
        throw std::invalid_argument("series_compose: inner series must have zero constant term");
    }
    PowerSeries acc(n);
    for (int k = outer.degree(); k >= 0; --k) {
        acc = series_multiply(acc, inner, n);
        acc.at(0) += outer[k];
    }
    return acc;
}

// exp of a series to degree n.  With h = a - a(0), the coefficients of
// exp(h) satisfy the convolution recurrence  i*E_i = sum_{j=1}^{i} j h_j E_{i-j},
// and the constant factor exp(a(0)) scales the result.
inline PowerSeries series_exp(const PowerSeries& a, int n) {
    PowerSeries e(n);
    e.at(0) = 1.0;
    for (int i = 1; i <= n; ++i) {
        Complex s = 0.0;
        for (int j = 1; j <= i; ++j) s += static_cast<double>(j) * a[j] * e[i - j];
        e.at(i) = s / static_cast<double>(i);
    }
    return series_scale(std::exp(a[0]), e);
}

// Geometric expansion 1 / (d0 + d1 u) to degree n; requires d0 != 0.
inline PowerSeries series_geometric(Complex d0, Complex d1, int n) {
    if (d0 == Complex(0.0)) {
        throw std::invalid_argument("series_geometric: vanishing constant term");
    }
    PowerSeries out(n);
    const Complex ratio = -d1 / d0;
    Complex c = 1.0 / d0;
    for (int k = 0; k <= n; ++k) {
        out.at(k) = c;
        c *= ratio;
    }
    return out;
}

}  // namespace discendo
