#include "spectral/symbols.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <nlohmann/json.hpp>

namespace spectral {

namespace {

constexpr double kCoeffEps = 0.0;  // exact canonical form: drop true zeros only

// In-place iterative radix-2 FFT (decimation in time). n must be a power of 2.
void fft(std::vector<std::complex<double>>& a, bool inverse) {
    const size_t n = a.size();
    if (n == 0 || (n & (n - 1)) != 0) throw std::invalid_argument("fft: size must be a power of two");
    for (size_t i = 1, j = 0; i < n; ++i) {
        size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (size_t len = 2; len <= n; len <<= 1) {
        double ang = 2.0 * std::numbers::pi / static_cast<double>(len) * (inverse ? 1.0 : -1.0);
        std::complex<double> wl(std::cos(ang), std::sin(ang));
        for (size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0);
            for (size_t k = 0; k < len / 2; ++k) {
                auto u = a[i + k], v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
    if (inverse)
        for (auto& x : a) x /= static_cast<double>(n);
}

}  // namespace

LaurentSymbol::LaurentSymbol(std::map<int, double> coeffs) : c_(std::move(coeffs)) { canonicalize(); }

void LaurentSymbol::canonicalize() {
    for (auto it = c_.begin(); it != c_.end();)
        it = (std::abs(it->second) <= kCoeffEps) ? c_.erase(it) : std::next(it);
}

LaurentSymbol LaurentSymbol::monomial(int degree, double value) {
    return LaurentSymbol({{degree, value}});
}

LaurentSymbol LaurentSymbol::jacobi(double a, double b) {
    return LaurentSymbol({{1, a}, {0, b}, {-1, a}});
}

double LaurentSymbol::coeff(int degree) const {
    auto it = c_.find(degree);
    return it == c_.end() ? 0.0 : it->second;
}

int LaurentSymbol::min_degree() const { return c_.empty() ? 0 : c_.begin()->first; }
int LaurentSymbol::max_degree() const { return c_.empty() ? 0 : c_.rbegin()->first; }

bool LaurentSymbol::real_on_circle(double tol) const {
    for (const auto& [l, v] : c_)
        if (std::abs(v - coeff(-l)) > tol) return false;
    return true;
}

std::complex<double> LaurentSymbol::eval(std::complex<double> w) const {
    std::complex<double> v = 0.0;
    for (const auto& [l, cv] : c_) v += cv * std::pow(w, l);
    return v;
}

double LaurentSymbol::eval_circle(double theta) const {
    double v = 0.0;
    for (const auto& [l, cv] : c_) v += cv * std::cos(l * theta);
    // Imaginary parts cancel for real-on-circle symbols; the cosine sum is the
    // real part in general.
    return v;
}

LaurentSymbol operator+(const LaurentSymbol& a, const LaurentSymbol& b) {
    std::map<int, double> r = a.c_;
    for (const auto& [l, v] : b.c_) r[l] += v;
    return LaurentSymbol(std::move(r));
}

LaurentSymbol operator-(const LaurentSymbol& a, const LaurentSymbol& b) {
    std::map<int, double> r = a.c_;
    for (const auto& [l, v] : b.c_) r[l] -= v;
    return LaurentSymbol(std::move(r));
}

LaurentSymbol operator*(const LaurentSymbol& a, const LaurentSymbol& b) {
    std::map<int, double> r;
    for (const auto& [la, va] : a.c_)
        for (const auto& [lb, vb] : b.c_) r[la + lb] += va * vb;
    return LaurentSymbol(std::move(r));
}

LaurentSymbol operator*(double s, const LaurentSymbol& a) {
    std::map<int, double> r = a.c_;
    for (auto& [l, v] : r) v *= s;
    return LaurentSymbol(std::move(r));
}

LaurentSymbol LaurentSymbol::positive_part() const {
    std::map<int, double> r;
    for (const auto& [l, v] : c_)
        if (l >= 0) r[l] = v;
    return LaurentSymbol(std::move(r));
}

LaurentSymbol LaurentSymbol::negative_part() const {
    std::map<int, double> r;
    for (const auto& [l, v] : c_)
        if (l < 0) r[l] = v;
    return LaurentSymbol(std::move(r));
}

nlohmann::json LaurentSymbol::to_json() const {
    nlohmann::json coeffs = nlohmann::json::object();
    for (const auto& [l, v] : c_) coeffs[std::to_string(l)] = v;
    return nlohmann::json{{"coeffs", coeffs}};
}

LaurentSymbol LaurentSymbol::from_json(const nlohmann::json& j) {
    std::map<int, double> c;
    for (const auto& [key, v] : j.at("coeffs").items()) c[std::stoi(key)] = v.get<double>();
    return LaurentSymbol(std::move(c));
}

LaurentSymbol compose_polynomial(const Polynomial& p, const LaurentSymbol& s) {
    LaurentSymbol r;
    const auto& c = p.coeffs();
    for (size_t k = c.size(); k-- > 0;) {
        r = r * s;
        r = r + LaurentSymbol::monomial(0, c[k]);
    }
    return r;
}

LaurentSymbol scaling_conjugation(const LaurentSymbol& s, double r) {
    if (!(r > 0.0)) throw std::invalid_argument("scaling_conjugation: r > 0 required");
    std::map<int, double> c;
    for (const auto& [l, v] : s.coeffs()) c[l] = v * std::pow(r, l);
    return LaurentSymbol(std::move(c));
}

double FourierCoefficients::at(int k) const {
    auto it = values.find(k);
    return it == values.end() ? 0.0 : it->second;
}

FourierCoefficients fourier_of_polynomial(const Polynomial& p, const LaurentSymbol& s) {
    LaurentSymbol ps = compose_polynomial(p, s);
    FourierCoefficients fc;
    fc.truncation = std::max(std::abs(ps.min_degree()), std::abs(ps.max_degree()));
    for (const auto& [l, v] : ps.coeffs()) fc.values[l] = v;
    fc.tail_estimate = 0.0;
    return fc;
}

FourierCoefficients fourier_of_composition(const std::function<double(double)>& f,
                                           const LaurentSymbol& s, int K, int grid) {
    if (!s.real_on_circle())
        throw std::invalid_argument(
            "fourier_of_composition: symbol is not real on the unit circle; "
            "non-polynomial statistics need the symmetric (s_l = s_{-l}) case");
    if (K < 1) throw std::invalid_argument("fourier_of_composition: K >= 1 required");
    if (grid < 4 * K || (grid & (grid - 1)) != 0)
        throw std::invalid_argument("fourier_of_composition: grid must be a power of two >= 4K");

    std::vector<std::complex<double>> g(static_cast<size_t>(grid));
    for (int j = 0; j < grid; ++j) {
        double theta = 2.0 * std::numbers::pi * j / grid;
        g[static_cast<size_t>(j)] = f(s.eval_circle(theta));
    }
    fft(g, false);
    for (auto& x : g) x /= static_cast<double>(grid);

    auto coeff_at = [&](int k) {
        int idx = ((k % grid) + grid) % grid;
        return g[static_cast<size_t>(idx)].real();
    };

    FourierCoefficients fc;
    fc.truncation = K;
    for (int k = -K; k <= K; ++k) {
        double v = coeff_at(k);
        if (v != 0.0) fc.values[k] = v;
    }
    // Cauchy-Schwarz on the discarded band K < k <= grid/2:
    //   |sum k fhat_k fhat_{-k}| <= sqrt(sum k^2 fhat_k^2) sqrt(sum fhat_{-k}^2).
    double d2 = 0.0, e2 = 0.0;
    for (int k = K + 1; k <= grid / 2; ++k) {
        double ck = coeff_at(k), cmk = coeff_at(-k);
        d2 += static_cast<double>(k) * k * ck * ck;
        e2 += cmk * cmk;
    }
    fc.tail_estimate = std::sqrt(d2) * std::sqrt(e2);
    return fc;
}

double clt_variance(const FourierCoefficients& fc) {
    double sum = 0.0;
    for (const auto& [k, v] : fc.values)
        if (k >= 1) sum += static_cast<double>(k) * v * fc.at(-k);
    return sum;
}

}  // namespace spectral
