#include "spectral/banded.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>
#include <string>

namespace spectral {

BandedMatrix::BandedMatrix(int lower_bandwidth, int upper_bandwidth, EntryFn entry,
                           std::optional<double> bound_hint)
    : lower_(lower_bandwidth), upper_(upper_bandwidth), entry_(std::move(entry)), bound_(bound_hint) {
    if (lower_ < 0 || upper_ < 0) throw std::invalid_argument("BandedMatrix: bandwidths must be nonnegative");
    if (!entry_) throw std::invalid_argument("BandedMatrix: entry generator required");
}

double BandedMatrix::operator()(Index r, Index c) const {
    if (r < 1 || c < 1) return 0.0;
    if (r - c > lower_ || c - r > upper_) return 0.0;
    return entry_(r, c);
}

double BandedMatrix::norm_estimate(Index probe) const {
    if (bound_) return *bound_;
    double best = 0.0;
    for (Index r = 1; r <= probe; ++r) {
        double row = 0.0;
        for (Index c = std::max<Index>(1, r - lower_); c <= r + upper_; ++c) row += std::abs((*this)(r, c));
        if (row > best) best = row;
    }
    return best;
}

double Window::max_abs_diff(const Window& other) const {
    if (radius != other.radius) throw std::invalid_argument("Window::max_abs_diff: radius mismatch");
    return (entries - other.entries).cwiseAbs().maxCoeff();
}

Window window_extract(const BandedMatrix& B, Index n, int M) {
    if (M < 1) throw std::invalid_argument("window_extract: M >= 1 required");
    Window w(M, n);
    for (int r = -M; r <= M; ++r)
        for (int s = -M; s <= M; ++s) w.at(r, s) = B(n + r, n + s);
    return w;
}

Eigen::MatrixXd dense_truncation(const BandedMatrix& B, Index size) {
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(size, size);
    for (Index r = 1; r <= size; ++r) {
        Index lo = std::max<Index>(1, r - B.lower_bandwidth());
        Index hi = std::min<Index>(size, r + B.upper_bandwidth());
        for (Index c = lo; c <= hi; ++c) D(r - 1, c - 1) = B(r, c);
    }
    return D;
}

BandedMatrix poly_apply(const BandedMatrix& B, const Polynomial& p) {
    const int d = std::max(p.degree(), 0);
    const int lower = d * B.lower_bandwidth();
    const int upper = d * B.upper_bandwidth();
    // Entry (r,s) of p(B) only sees indices within d*band of [min(r,s), max(r,s)].
    auto src = std::make_shared<BandedMatrix>(B);
    auto poly = std::make_shared<Polynomial>(p);
    const int reach = d * B.bandwidth();
    auto entry = [src, poly, reach](Index r, Index s) -> double {
        Index lo = std::max<Index>(1, std::min(r, s) - reach);
        Index hi = std::max(r, s) + reach;
        Index size = hi - lo + 1;
        Eigen::MatrixXd D = Eigen::MatrixXd::Zero(size, size);
        for (Index i = lo; i <= hi; ++i) {
            Index clo = std::max(lo, i - src->lower_bandwidth());
            Index chi = std::min(hi, i + src->upper_bandwidth());
            for (Index j = clo; j <= chi; ++j) D(i - lo, j - lo) = (*src)(i, j);
        }
        // Horner on the matrix; exact for the (r,s) entry by the reach bound.
        const auto& c = poly->coeffs();
        Eigen::MatrixXd P = Eigen::MatrixXd::Zero(size, size);
        if (!c.empty()) {
            P = c.back() * Eigen::MatrixXd::Identity(size, size);
            for (size_t k = c.size() - 1; k-- > 0;) {
                P = (P * D).eval();
                P.diagonal().array() += c[k];
            }
        }
        return P(r - lo, s - lo);
    };
    std::optional<double> hint;
    if (B.bound_hint()) {
        double nb = *B.bound_hint();
        double h = 0.0, x = 1.0;
        for (int k = 0; k <= p.degree(); ++k, x *= nb) h += std::abs(p.coeff(k)) * x;
        hint = h;
    }
    return BandedMatrix(lower, upper, entry, hint);
}

double trace_product(const BandedMatrix& B, Index n, const std::vector<int>& powers, int max_order) {
    int total = 0;
    for (int l : powers) {
        if (l < 1) throw std::invalid_argument("trace_product: powers must be >= 1");
        total += l;
    }
    if (total > max_order)
        throw std::invalid_argument("trace_product: total order " + std::to_string(total) +
                                    " exceeds configured max order " + std::to_string(max_order));
    const Index size = n + static_cast<Index>(B.bandwidth()) * total + B.bandwidth();
    Eigen::MatrixXd D = dense_truncation(B, size);
    // Pn keeps the first n coordinates; accumulate the alternating product.
    Eigen::MatrixXd acc = Eigen::MatrixXd::Identity(size, size);
    for (int l : powers) {
        for (int k = 0; k < l; ++k) acc = (acc * D).eval();
        acc.rightCols(size - n).setZero();  // acc <- acc * Pn
    }
    return acc.trace();
}

double commutator_hs_norm_sq(const BandedMatrix& B, Index n) {
    double sum = 0.0;
    const int b = B.bandwidth();
    for (Index r = std::max<Index>(1, n - b + 1); r <= n; ++r)
        for (Index c = n + 1; c <= n + b; ++c) {
            double u = B(r, c), l = B(c, r);
            sum += u * u + l * l;
        }
    return sum;
}

}  // namespace spectral
