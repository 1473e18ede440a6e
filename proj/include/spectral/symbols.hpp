#pragma once

#include <complex>
#include <functional>
#include <map>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "spectral/poly.hpp"

namespace spectral {

// Finite Laurent polynomial s(w) = sum_l s_l w^l. Stored coefficients are
// nonzero (canonical form); the zero symbol has empty support. This is the
// carrier of right limits: the Laurent matrix L(s) has s_{j-k} at (j,k), and
// the CLT variance for a statistic with Fourier data fhat is
// sum_{k>=1} k fhat_k fhat_{-k}.
class LaurentSymbol {
public:
    LaurentSymbol() = default;
    explicit LaurentSymbol(std::map<int, double> coeffs);

    static LaurentSymbol monomial(int degree, double value);
    // a*w + b + a/w, the tridiagonal (Jacobi) symbol.
    static LaurentSymbol jacobi(double a, double b);

    double coeff(int degree) const;
    const std::map<int, double>& coeffs() const { return c_; }
    bool is_zero() const { return c_.empty(); }
    int min_degree() const;  // 0 for the zero symbol
    int max_degree() const;

    // s is real on |w|=1 iff s_l == s_{-l} (real coefficients).
    bool real_on_circle(double tol = 1e-12) const;

    std::complex<double> eval(std::complex<double> w) const;
    // Value at w = e^{i theta}; requires real_on_circle.
    double eval_circle(double theta) const;

    friend LaurentSymbol operator+(const LaurentSymbol&, const LaurentSymbol&);
    friend LaurentSymbol operator-(const LaurentSymbol&, const LaurentSymbol&);
    friend LaurentSymbol operator*(const LaurentSymbol&, const LaurentSymbol&);
    friend LaurentSymbol operator*(double, const LaurentSymbol&);

    LaurentSymbol positive_part() const;  // degrees >= 0 (analytic part)
    LaurentSymbol negative_part() const;  // degrees < 0

    nlohmann::json to_json() const;  // {"coeffs": {"-1": 1.0, ...}}
    static LaurentSymbol from_json(const nlohmann::json& j);

private:
    void canonicalize();
    std::map<int, double> c_;
};

// p(s(w)) by exact coefficient arithmetic.
LaurentSymbol compose_polynomial(const Polynomial& p, const LaurentSymbol& s);

// s_r(w) = s(rw): coefficient s_l -> s_l * r^l. The CLT variance is invariant
// under this conjugation while individual Fourier coefficients are not.
LaurentSymbol scaling_conjugation(const LaurentSymbol& s, double r);

// Fourier data of f composed with a symbol, truncated at |k| <= K.
// tail_estimate is a Cauchy-Schwarz diagnostic for the discarded part of the
// variance sum, computed from the full quadrature grid (not a certified bound).
struct FourierCoefficients {
    std::map<int, double> values;
    int truncation = 0;
    double tail_estimate = 0.0;

    double at(int k) const;
};

// Exact convolution path: p(s) expanded as a Laurent polynomial, coefficients
// read off directly. Valid for any symbol; tail_estimate is 0.
FourierCoefficients fourier_of_polynomial(const Polynomial& p, const LaurentSymbol& s);

// Quadrature path for general f: trapezoid/FFT on a power-of-two theta grid,
// spectrally accurate for smooth f. Requires s real on the circle.
FourierCoefficients fourier_of_composition(const std::function<double(double)>& f,
                                           const LaurentSymbol& s, int K = 64, int grid = 1024);

// sum_{k=1}^{K} k fhat_k fhat_{-k}.
double clt_variance(const FourierCoefficients& fc);

}  // namespace spectral
