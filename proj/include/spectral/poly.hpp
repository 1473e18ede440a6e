#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace spectral {

// Dense real polynomial in the monomial basis, coefficient k is the
// coefficient of x^k. Trailing zeros are trimmed so degree() is exact.
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(std::vector<double> coeffs) : c_(std::move(coeffs)) { trim(); }

    static Polynomial constant(double v) { return Polynomial({v}); }
    static Polynomial identity() { return Polynomial({0.0, 1.0}); }

    int degree() const { return static_cast<int>(c_.size()) - 1; }  // -1 for zero poly
    bool is_zero() const { return c_.empty(); }

    double coeff(int k) const {
        return (k >= 0 && k < static_cast<int>(c_.size())) ? c_[static_cast<size_t>(k)] : 0.0;
    }
    const std::vector<double>& coeffs() const { return c_; }

    double operator()(double x) const {
        double v = 0.0;
        for (size_t i = c_.size(); i-- > 0;) v = v * x + c_[i];
        return v;
    }

    Polynomial derivative() const {
        if (c_.size() <= 1) return Polynomial();
        std::vector<double> d(c_.size() - 1);
        for (size_t k = 1; k < c_.size(); ++k) d[k - 1] = static_cast<double>(k) * c_[k];
        return Polynomial(std::move(d));
    }

    friend Polynomial operator+(const Polynomial& p, const Polynomial& q) {
        std::vector<double> r(std::max(p.c_.size(), q.c_.size()), 0.0);
        for (size_t i = 0; i < p.c_.size(); ++i) r[i] += p.c_[i];
        for (size_t i = 0; i < q.c_.size(); ++i) r[i] += q.c_[i];
        return Polynomial(std::move(r));
    }
    friend Polynomial operator-(const Polynomial& p, const Polynomial& q) {
        std::vector<double> r(std::max(p.c_.size(), q.c_.size()), 0.0);
        for (size_t i = 0; i < p.c_.size(); ++i) r[i] += p.c_[i];
        for (size_t i = 0; i < q.c_.size(); ++i) r[i] -= q.c_[i];
        return Polynomial(std::move(r));
    }
    friend Polynomial operator*(const Polynomial& p, const Polynomial& q) {
        if (p.is_zero() || q.is_zero()) return Polynomial();
        std::vector<double> r(p.c_.size() + q.c_.size() - 1, 0.0);
        for (size_t i = 0; i < p.c_.size(); ++i)
            for (size_t j = 0; j < q.c_.size(); ++j) r[i + j] += p.c_[i] * q.c_[j];
        return Polynomial(std::move(r));
    }
    friend Polynomial operator*(double s, const Polynomial& p) {
        std::vector<double> r = p.c_;
        for (double& v : r) v *= s;
        return Polynomial(std::move(r));
    }

private:
    void trim() {
        while (!c_.empty() && c_.back() == 0.0) c_.pop_back();
    }
    std::vector<double> c_;
};

}  // namespace spectral
