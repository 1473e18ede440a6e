#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "spectral/poly.hpp"

namespace spectral {

using Index = std::int64_t;

// Semi-infinite banded matrix, rows and columns indexed from 1. Entries are
// produced lazily by a pure generator; the declared bandwidths are a hard
// contract (anything outside is treated as zero without consulting the
// generator). bound_hint, when present, is an operator-norm estimate used by
// the cumulant-bound diagnostics.
class BandedMatrix {
public:
    using EntryFn = std::function<double(Index, Index)>;

    BandedMatrix(int lower_bandwidth, int upper_bandwidth, EntryFn entry,
                 std::optional<double> bound_hint = std::nullopt);

    int lower_bandwidth() const { return lower_; }
    int upper_bandwidth() const { return upper_; }
    int bandwidth() const { return lower_ > upper_ ? lower_ : upper_; }
    const std::optional<double>& bound_hint() const { return bound_; }

    // Zero for indices below 1 and outside the band.
    double operator()(Index r, Index c) const;

    // bound_hint if present, otherwise the max row l1-sum over rows 1..probe.
    double norm_estimate(Index probe = 256) const;

private:
    int lower_;
    int upper_;
    EntryFn entry_;
    std::optional<double> bound_;
};

// Finite two-sided block of radius M: entries indexed by signed offsets
// -M..M relative to a center position in the one-sided matrix (center 0 for
// abstract two-sided data).
struct Window {
    int radius = 0;
    Index center = 0;
    Eigen::MatrixXd entries;  // (2M+1) x (2M+1), entry (r,s) at (r+M, s+M)

    Window() = default;
    Window(int M, Index n) : radius(M), center(n), entries(Eigen::MatrixXd::Zero(2 * M + 1, 2 * M + 1)) {}

    double at(int r, int s) const { return entries(r + radius, s + radius); }
    double& at(int r, int s) { return entries(r + radius, s + radius); }

    double max_abs_diff(const Window& other) const;
};

// Exact copy of B[n+r, n+s] for |r|,|s| <= M; positions with ambient index
// below 1 are zero-filled.
Window window_extract(const BandedMatrix& B, Index n, int M);

// Dense copy of B over rows/columns 1..size.
Eigen::MatrixXd dense_truncation(const BandedMatrix& B, Index size);

// p(B) as a banded matrix with bandwidths deg(p) * (original bandwidths).
// Each entry is computed exactly on a local window, so the result stays lazy.
BandedMatrix poly_apply(const BandedMatrix& B, const Polynomial& p);

inline constexpr int kDefaultMaxTraceOrder = 16;

// Exact Tr B^{l_1} P_n ... B^{l_j} P_n, where P_n projects onto the first n
// coordinates. Bandedness makes the dense truncation of size
// n + band * (sum l_i) exact. Throws if sum l_i exceeds max_order.
double trace_product(const BandedMatrix& B, Index n, const std::vector<int>& powers,
                     int max_order = kDefaultMaxTraceOrder);

// Hilbert-Schmidt norm squared of the commutator [B, P_n]; a finite sum over
// the band entries that straddle the cut.
double commutator_hs_norm_sq(const BandedMatrix& B, Index n);

}  // namespace spectral
