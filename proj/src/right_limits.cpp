#include "spectral/right_limits.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>
#include <utility>

namespace spectral {

CoefficientSequence CoefficientSequence::tridiagonal(ScalarFn a, ScalarFn b, bool n_dependent,
                                                     std::optional<double> bound_hint) {
    CoefficientSequence s;
    s.tri_ = true;
    s.n_dependent_ = n_dependent;
    s.a_ = std::move(a);
    s.b_ = std::move(b);
    s.bound_ = bound_hint;
    return s;
}

CoefficientSequence CoefficientSequence::general_banded(std::map<int, ScalarFn> diagonals, bool n_dependent,
                                                        std::optional<double> bound_hint) {
    if (diagonals.empty()) throw std::invalid_argument("general_banded: at least one diagonal required");
    CoefficientSequence s;
    s.tri_ = false;
    s.n_dependent_ = n_dependent;
    s.diagonals_ = std::move(diagonals);
    s.bound_ = bound_hint;
    return s;
}

CoefficientSequence CoefficientSequence::from_vectors(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("from_vectors: empty coefficient data");
    // Indices past the stored data clamp to the last value, extending the
    // finite data to a Nevai-class tail.
    auto a_shared = std::make_shared<std::vector<double>>(std::move(a));
    auto b_shared = std::make_shared<std::vector<double>>(std::move(b));
    auto clamp_at = [](const std::vector<double>& v, Index k) {
        if (k < 1) k = 1;
        size_t i = static_cast<size_t>(k - 1);
        return i < v.size() ? v[i] : v.back();
    };
    return tridiagonal([a_shared, clamp_at](Index k) { return clamp_at(*a_shared, k); },
                       [b_shared, clamp_at](Index k) { return clamp_at(*b_shared, k); });
}

double CoefficientSequence::a(Index k) const {
    if (!tri_) throw std::logic_error("CoefficientSequence::a: not a tridiagonal sequence");
    return a_(k);
}

double CoefficientSequence::b(Index k) const {
    if (!tri_) throw std::logic_error("CoefficientSequence::b: not a tridiagonal sequence");
    return b_(k);
}

BandedMatrix CoefficientSequence::matrix() const {
    if (tri_) {
        auto a = a_;
        auto b = b_;
        return BandedMatrix(1, 1,
                            [a, b](Index r, Index c) {
                                if (r == c) return b(r);
                                return a(r < c ? r : c);  // J[k,k+1] = J[k+1,k] = a_k
                            },
                            bound_);
    }
    int lower = 0, upper = 0;
    for (const auto& [off, fn] : diagonals_) {
        if (off < 0) lower = std::max(lower, -off);
        if (off > 0) upper = std::max(upper, off);
    }
    auto diags = diagonals_;
    return BandedMatrix(lower, upper,
                        [diags](Index r, Index c) {
                            auto it = diags.find(static_cast<int>(c - r));
                            return it == diags.end() ? 0.0 : it->second(r);
                        },
                        bound_);
}

std::string to_string(RightLimitTag tag) {
    switch (tag) {
        case RightLimitTag::Laurent: return "laurent";
        case RightLimitTag::Periodic: return "periodic";
        case RightLimitTag::LaurentPlusFiniteRank: return "laurent_plus_finite_rank";
        case RightLimitTag::Undetermined: return "undetermined";
    }
    return "undetermined";
}

SubsequenceScheme SubsequenceScheme::arithmetic(Index start, Index step) {
    if (start < 1 || step < 1) throw std::invalid_argument("arithmetic scheme: start, step >= 1 required");
    return SubsequenceScheme{[start, step](int j) -> std::optional<Index> {
                                 Index n = start + step * static_cast<Index>(j);
                                 if (n > kGeneratorIndexCap) return std::nullopt;
                                 return n;
                             },
                             "arithmetic(start=" + std::to_string(start) + ", step=" + std::to_string(step) + ")"};
}

SubsequenceScheme SubsequenceScheme::explicit_values(std::vector<Index> values) {
    for (size_t i = 0; i + 1 < values.size(); ++i)
        if (values[i + 1] <= values[i])
            throw std::invalid_argument("explicit scheme: values must be strictly increasing");
    auto v = std::make_shared<std::vector<Index>>(std::move(values));
    return SubsequenceScheme{[v](int j) -> std::optional<Index> {
                                 if (j < 0 || static_cast<size_t>(j) >= v->size()) return std::nullopt;
                                 Index n = (*v)[static_cast<size_t>(j)];
                                 if (n > kGeneratorIndexCap) return std::nullopt;
                                 return n;
                             },
                             "explicit(" + std::to_string(v->size()) + " values)"};
}

namespace {

// Mean value and max deviation of diagonal d (entries at column - row = d).
std::pair<double, double> diagonal_stats(const Window& w, int d) {
    const int M = w.radius;
    double sum = 0.0;
    int count = 0;
    for (int r = -M; r <= M; ++r) {
        int c = r + d;
        if (c < -M || c > M) continue;
        sum += w.at(r, c);
        ++count;
    }
    double mean = sum / count;
    double dev = 0.0;
    for (int r = -M; r <= M; ++r) {
        int c = r + d;
        if (c < -M || c > M) continue;
        dev = std::max(dev, std::abs(w.at(r, c) - mean));
    }
    return {mean, dev};
}

// The symbol convention puts s_{j-k} at entry (j,k): diagonal at
// column - row = d carries coefficient s_{-d}.
LaurentSymbol symbol_from_diagonal_means(const Window& w, double tol) {
    std::map<int, double> coeffs;
    for (int d = -2 * w.radius; d <= 2 * w.radius; ++d) {
        auto [mean, dev] = diagonal_stats(w, d);
        (void)dev;
        if (std::abs(mean) > tol) coeffs[-d] = mean;
    }
    return LaurentSymbol(std::move(coeffs));
}

double max_constancy_deviation(const Window& w) {
    double dev = 0.0;
    for (int d = -2 * w.radius; d <= 2 * w.radius; ++d) dev = std::max(dev, diagonal_stats(w, d).second);
    return dev;
}

// Residual of p-periodicity: max |W(r+p, c+p) - W(r, c)|.
double periodicity_residual(const Window& w, int p) {
    const int M = w.radius;
    double dev = 0.0;
    for (int r = -M; r <= M - p; ++r)
        for (int c = -M; c <= M - p; ++c) dev = std::max(dev, std::abs(w.at(r + p, c + p) - w.at(r, c)));
    return dev;
}

RightLimitClass classify(Window w, double tol) {
    RightLimitClass out;
    out.window = std::move(w);
    const Window& W = out.window;
    const int M = W.radius;

    double dev = max_constancy_deviation(W);
    if (dev < tol) {
        out.tag = RightLimitTag::Laurent;
        out.symbol = symbol_from_diagonal_means(W, tol);
        out.period = 1;
        out.deviation = dev;
        return out;
    }

    for (int p = 2; p <= M; ++p) {
        double res = periodicity_residual(W, p);
        if (res < tol) {
            out.tag = RightLimitTag::Periodic;
            out.period = p;
            out.deviation = res;
            return out;
        }
    }

    // Laurent plus finite rank: diagonals constant on the outer half of the
    // window, deviations confined to the inner half.
    const int inner = M / 2;
    bool fits = true;
    double background_dev = 0.0;
    std::map<int, double> coeffs;
    for (int d = -2 * M; d <= 2 * M && fits; ++d) {
        // Background from entries with max(|r|,|c|) > inner.
        double sum = 0.0;
        int count = 0;
        for (int r = -M; r <= M; ++r) {
            int c = r + d;
            if (c < -M || c > M) continue;
            if (std::abs(r) <= inner && std::abs(c) <= inner) continue;
            sum += W.at(r, c);
            ++count;
        }
        if (count == 0) continue;
        double bg = sum / count;
        for (int r = -M; r <= M; ++r) {
            int c = r + d;
            if (c < -M || c > M) continue;
            double e = std::abs(W.at(r, c) - bg);
            if (std::abs(r) <= inner && std::abs(c) <= inner) continue;
            if (e > tol) fits = false;
            background_dev = std::max(background_dev, e);
        }
        if (std::abs(bg) > tol) coeffs[-d] = bg;
    }
    if (fits) {
        out.tag = RightLimitTag::LaurentPlusFiniteRank;
        out.symbol = LaurentSymbol(std::move(coeffs));
        out.deviation = background_dev;
        return out;
    }

    out.tag = RightLimitTag::Undetermined;
    out.deviation = dev;
    return out;
}

}  // namespace

RightLimitClass detect_right_limit(const CoefficientSequence& seq, const SubsequenceScheme& scheme,
                                   int M, double tol, int budget) {
    if (M < 1) throw std::invalid_argument("detect_right_limit: M >= 1 required");
    BandedMatrix B = seq.matrix();

    Window prev;
    bool have_prev = false;
    double last_diff = 0.0;
    Index prev_n = 0;
    for (int j = 0; j < budget; ++j) {
        auto nj = scheme.at(j);
        if (!nj) break;
        if (have_prev && *nj <= prev_n)
            throw std::invalid_argument("detect_right_limit: subsequence not strictly increasing");
        Window w = window_extract(B, *nj, M);
        if (have_prev) {
            last_diff = w.max_abs_diff(prev);
            if (last_diff < tol) {
                RightLimitClass out = classify(std::move(w), tol);
                out.subsequence = scheme.description;
                out.convergence_error = last_diff;
                return out;
            }
        }
        prev = std::move(w);
        prev_n = *nj;
        have_prev = true;
    }

    RightLimitClass out;
    out.tag = RightLimitTag::Undetermined;
    if (have_prev) out.window = std::move(prev);
    out.subsequence = scheme.description;
    out.convergence_error = last_diff;
    out.deviation = have_prev ? max_constancy_deviation(out.window) : 0.0;
    return out;
}

LaurentSymbol laurent_symbol_of(const Window& w, double tol) {
    double dev = max_constancy_deviation(w);
    if (dev >= tol)
        throw std::invalid_argument("laurent_symbol_of: diagonals deviate from constancy by " +
                                    std::to_string(dev) + " (tol " + std::to_string(tol) + ")");
    return symbol_from_diagonal_means(w, tol);
}

}  // namespace spectral
