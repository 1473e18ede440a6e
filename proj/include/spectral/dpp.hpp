#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "spectral/right_limits.hpp"

namespace spectral {

struct DiscreteMeasure {
    std::vector<double> nodes;    // strictly increasing
    std::vector<double> weights;  // positive

    void validate() const;  // throws on length mismatch, ordering, nonpositive weights
    double total_mass() const;
};

// Symmetrized projection kernel: entries K_n(x_i, x_j) sqrt(w_i w_j), an
// orthogonal projection of rank n in the flat inner product.
struct KernelMatrix {
    int rank = 0;
    Eigen::MatrixXd entries;  // size x size, symmetric
    std::vector<double> nodes;

    int size() const { return static_cast<int>(entries.rows()); }
    double projection_residual() const;  // max |K^2 - K|
};

// Rows built from orthonormal polynomial values p_0..p_{n-1} via the three
// term recurrence, then symmetrized with sqrt(weights). Throws when the Gram
// residual of the polynomial values exceeds 1e-6 (loss of orthonormality).
KernelMatrix build_kernel(const CoefficientSequence& seq, const DiscreteMeasure& measure, int n);

// Exact mean and variance of the linear statistic sum f(x_i):
//   mean = sum f(x_i) K_ii,  var = 1/2 sum_{i,j} (f(x_i) - f(x_j))^2 K_ij K_ji.
std::pair<double, double> exact_moments(const KernelMatrix& K, const std::function<double(double)>& f);

struct SampleBatch {
    std::uint64_t seed = 0;
    int rank = 0;
    std::vector<std::vector<int>> draws;  // node indices, each of length rank
    std::vector<double> statistics;       // per draw, filled by evaluate_statistic

    void evaluate_statistic(const std::vector<double>& nodes, const std::function<double(double)>& f);
    std::string to_csv() const;  // one row per draw: index, statistic
    nlohmann::json summary_json() const;
};

// Exact projection-DPP sampler (eigen-based sequential conditional sampling).
// Deterministic: draw i uses its own RNG stream derived from (seed, i).
// Refuses kernels whose projection residual exceeds 1e-6.
SampleBatch sample(const KernelMatrix& K, int draws, std::uint64_t seed);

struct NormalityReport {
    double mean = 0.0;
    double variance = 0.0;
    double kappa3 = 0.0;            // third cumulant of the centered statistic
    double kappa4 = 0.0;
    double ks_distance = 0.0;       // to N(0, predicted_variance)
    bool pass_ks = false;           // engineering thresholds: KS < 0.02,
    bool pass_skew = false;         // |kappa3| < 0.05 sigma^3 at 1e4 draws
    nlohmann::json to_json() const;
};

NormalityReport normality_check(const SampleBatch& batch, double predicted_variance,
                                double ks_threshold = 0.02, double skew_threshold = 0.05);

// Binary kernel cache: header (int64 size, int64 rank), then row-major
// little-endian doubles for nodes and entries.
void save_kernel(const KernelMatrix& K, const std::string& path);
KernelMatrix load_kernel(const std::string& path);

}  // namespace spectral
