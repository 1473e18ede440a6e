#pragma once

#include <optional>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "spectral/banded.hpp"
#include "spectral/symbols.hpp"

namespace spectral {

inline constexpr int kDefaultMaxCumulantOrder = 8;

// Cumulants C_m^{(n)}(B) of the linear statistic encoded by a banded matrix B
// and the projection P_n. C_1 = Tr B P_n; for m >= 2 the subtracted form
//   C_m = sum_{j=2}^m (-1)^{j+1}/j sum_{l_1+..+l_j=m}
//         (Tr B^{l_1}P_n...B^{l_j}P_n - Tr B^m P_n) / (l_1!..l_j!)
// is used, which localizes to a window of radius band*m around the cut. The
// evaluation is exact; away from the boundary it runs on that window alone,
// so n may be astronomically large.
double cumulant(const BandedMatrix& B, Index n, int m, int max_order = kDefaultMaxCumulantOrder);

// D_m(F) for a finite two-sided window F (P_- in place of P_n), m >= 2.
double dm(const Window& F, int m, int max_order = kDefaultMaxCumulantOrder);

// (m^{3/2} e^m / sqrt(2 pi)) * ||B||^{m-2} * ||[B,P_n]||_HS^2. Requires
// bound_hint; without it the matrix may be unbounded and the bound is void.
double cumulant_bound(const BandedMatrix& B, Index n, int m);

// log of exp(-z Tr B P_n) * det(I + P_n (e^{zB} - I) P_n), evaluated on dense
// truncations grown until stable. Requires bound_hint; each z must satisfy
// |z| <= 1/(3 ||B||).
std::vector<double> generating_function_log(const BandedMatrix& B, Index n,
                                            const std::vector<double>& z_grid, double tol = 1e-9);

struct CumulantReport {
    Index n = 0;
    std::vector<int> orders;
    std::vector<double> values;
    std::vector<double> predicted_limits;  // 0.5 sum k s_k s_{-k} for m=2, else 0
    std::vector<double> bounds;            // empty when bound_hint is absent
    int window_radius_used = 0;

    nlohmann::json to_json() const;
};

CumulantReport cumulant_report(const BandedMatrix& B, Index n, const std::vector<int>& orders,
                               const std::optional<LaurentSymbol>& right_limit = std::nullopt);

}  // namespace spectral
