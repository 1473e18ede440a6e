#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "spectral/banded.hpp"
#include "spectral/symbols.hpp"

namespace spectral {

// Generator of recurrence data: either tridiagonal (a_n > 0, b_n) or general
// banded diagonals indexed by offset. Generators must be pure; the sequence is
// a value type wrapping them.
class CoefficientSequence {
public:
    using ScalarFn = std::function<double(Index)>;

    static CoefficientSequence tridiagonal(ScalarFn a, ScalarFn b, bool n_dependent = false,
                                           std::optional<double> bound_hint = std::nullopt);
    // diagonals[offset](row) gives the entry at (row, row + offset).
    static CoefficientSequence general_banded(std::map<int, ScalarFn> diagonals, bool n_dependent = false,
                                              std::optional<double> bound_hint = std::nullopt);
    static CoefficientSequence from_vectors(std::vector<double> a, std::vector<double> b);

    bool tridiagonal_kind() const { return tri_; }
    bool n_dependent() const { return n_dependent_; }

    // a_k (off-diagonal, k >= 1) and b_k (diagonal, k >= 1); tridiagonal only.
    double a(Index k) const;
    double b(Index k) const;

    BandedMatrix matrix() const;

private:
    CoefficientSequence() = default;
    bool tri_ = true;
    bool n_dependent_ = false;
    ScalarFn a_, b_;
    std::map<int, ScalarFn> diagonals_;
    std::optional<double> bound_;
};

enum class RightLimitTag { Laurent, Periodic, LaurentPlusFiniteRank, Undetermined };

std::string to_string(RightLimitTag tag);

struct RightLimitClass {
    RightLimitTag tag = RightLimitTag::Undetermined;
    LaurentSymbol symbol;  // Laurent case (and the Laurent part of the perturbed case)
    int period = 1;        // Periodic case
    Window window;         // evidence: the last extracted window
    std::string subsequence;
    double convergence_error = 0.0;  // max diff between the last two windows
    double deviation = 0.0;          // max deviation from the fitted structure
};

// Strictly increasing subsequence n_j, j = 0, 1, ...; returns nullopt when
// exhausted (or past the generator index cap).
struct SubsequenceScheme {
    std::function<std::optional<Index>(int)> at;
    std::string description;

    static SubsequenceScheme arithmetic(Index start, Index step);
    static SubsequenceScheme explicit_values(std::vector<Index> values);
};

inline constexpr Index kGeneratorIndexCap = 1'000'000'000;

// Extracts windows along the subsequence until two successive windows agree
// to tol (or the scheme is exhausted), then classifies the stabilized window:
// constant diagonals -> Laurent; p-periodic diagonals -> Periodic; constant
// except finitely many entries -> LaurentPlusFiniteRank; otherwise
// Undetermined (with the evidence window attached).
RightLimitClass detect_right_limit(const CoefficientSequence& seq, const SubsequenceScheme& scheme,
                                   int M, double tol = 1e-9, int budget = 64);

// Symbol of a window with constant diagonals: s_{j-k} = common diagonal
// value (deviations averaged). Throws when a diagonal deviates beyond tol.
LaurentSymbol laurent_symbol_of(const Window& w, double tol = 1e-9);

}  // namespace spectral
