#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "spectral/banded.hpp"
#include "spectral/symbols.hpp"

namespace spectral {

struct FiniteSection {
    int N = 0;
    Eigen::MatrixXd entries;
    std::string provenance;
};

// (T(s))_{j,k} = s_{j-k}, (H(s))_{j,k} = s_{j+k-1} (1-based), truncated to N x N.
FiniteSection toeplitz_section(const LaurentSymbol& s, int N);
FiniteSection hankel_section(const LaurentSymbol& s, int N);

struct SzegoReport {
    Index n = 0;
    std::vector<int> schedule;
    std::vector<double> lhs_per_N;
    double lhs = 0.0;
    double rhs = 0.0;
    double residual = 0.0;

    nlohmann::json to_json() const;
};

// Szego-type limit: lhs = exp(-Tr P_n T(s)) det(I + P_n (e^{T(s)} - I) P_n)
// on finite sections of sizes N/2 and N (stabilization required),
// rhs = exp(1/2 sum_{k>=1} k s_k s_{-k}).
SzegoReport szego_limit_check(const LaurentSymbol& s, Index n, int N, double stab_tol = 1e-7);

// |det(e^{-T(s_+)} e^{T(s)} e^{-T(s_-)}) - exp(1/2 sum k s_k s_{-k})| on
// N-sections with growth verification.
double hhp_check(const LaurentSymbol& s, int N, double stab_tol = 1e-6);

}  // namespace spectral
