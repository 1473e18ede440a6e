#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "spectral/dpp.hpp"
#include "spectral/poly.hpp"
#include "spectral/right_limits.hpp"
#include "spectral/symbols.hpp"

namespace spectral {

// Catalog of concrete ensembles. Parameters are plain data so specs round-trip
// through JSON; coefficients() turns a spec into the generator.
struct EnsembleSpec {
    enum class Variant {
        Chebyshev,        // a_n = a, b_n = b
        NevaiCustom,      // a_n = a (1 + da/n), b_n = b + db/n
        SparseDecaying,   // a = 1, b_{N_j} = scale/(j+1), N_j = 4^{j+1}
        SparseFixed,      // a = 1, b_{N_j} = btilde, N_j = 4^{j+1}
        BlocksExample1,   // blocks A_j (a=1, size 3^{j^2}) and C_j (a=1/2, size 2^{j^2})
        BlocksExample2,   // A_j, B_j, C_j, D_j with geometric interpolation on B/D
        Hahn,             // hahn(alpha, beta, N); nodes rescaled to [0,1]
        Periodic,         // period-p lists a_1..a_p (> 0), b_1..b_p
        TwoMatrixSymbolic // V2 coefficients, tau, a, b (symbol-level only)
    };

    Variant variant = Variant::Chebyshev;
    double a = 1.0, b = 0.0;          // chebyshev / nevai / two-matrix
    double da = 0.0, db = 0.0;        // nevai decay amplitudes
    double scale = 1.0;               // sparse_decaying
    double btilde = 1.0;              // sparse_fixed
    double alpha = 0.0, beta = 0.0;   // hahn
    long long N = 0;                  // hahn node count (nodes 0..N)
    std::vector<double> a_list, b_list;  // periodic
    std::vector<double> v2;           // two-matrix V2 polynomial coefficients
    double tau = 1.0;                 // two-matrix coupling

    static EnsembleSpec chebyshev(double a = 1.0, double b = 0.0);
    static EnsembleSpec hahn(double alpha, double beta, long long N);
    static EnsembleSpec periodic(std::vector<double> a_list, std::vector<double> b_list);

    void validate() const;  // throws std::invalid_argument with a descriptive message

    nlohmann::json to_json() const;
    static EnsembleSpec from_json(const nlohmann::json& j);
};

// Generator for the spec. Sparse/block variants cap indices at
// kGeneratorIndexCap; the two-matrix variant has no recurrence data and throws.
CoefficientSequence coefficients(const EnsembleSpec& spec);

// Closed-form Hahn recurrence coefficients on nodes rescaled to [0,1]
// (k = 1, 2, ...; J[k,k] = hahn_b(k), J[k,k+1] = hahn_a(k)).
double hahn_a(long long k, double alpha, double beta, long long N);
double hahn_b(long long k, double alpha, double beta, long long N);

// Limits (a, b) of the rescaled Hahn coefficients when alpha/n -> A,
// beta/n -> B, N/n -> t along n -> infinity.
std::pair<double, double> hahn_limit(double A, double B, double t);

// Hahn weight measure on nodes k/N, k = 0..N, normalized to mass 1.
DiscreteMeasure hahn_measure(double alpha, double beta, long long N);

// Block positions for the two block examples: centers of the j-th A or C
// block while the block fits under the index cap.
std::vector<Index> block_centers(const EnsembleSpec& spec, char block, int max_count = 8);

struct DiscriminantPoly {
    int period = 1;
    Polynomial delta;                                   // monic-after-scaling: leading coeff 1/(a_1..a_p)
    std::vector<std::pair<double, double>> bands;       // sorted disjoint closed intervals
};

// Discriminant of the periodic Jacobi matrix: trace of the ordered product of
// the p transfer matrices; band set = Delta^{-1}([-2,2]) by bisection on
// Delta -+ 2 (tolerance 1e-12).
DiscriminantPoly discriminant(const std::vector<double>& a_list, const std::vector<double>& b_list);

// Two-matrix model symbols: s2 = a w + b + a/w, s1 = (1/tau) (V2'(s2))_- + a w.
std::pair<LaurentSymbol, LaurentSymbol> two_matrix_symbols(const Polynomial& v2, double tau, double a,
                                                           double b);

// Recurrence coefficients of the orthonormal polynomials of a discrete
// measure, by the Lanczos procedure with full reorthogonalization (moment
// determinants are hopelessly ill-conditioned). Returns count pairs (a_k, b_k).
CoefficientSequence recurrence_from_measure(const std::vector<double>& nodes,
                                            const std::vector<double>& weights, int count);

// Hexagon bookkeeping: for sides (ga, gb, gc) and a vertical section m, the
// type-III lozenge centers form a Hahn ensemble of size L_m with parameters
// N = gc + L_m, alpha = |ga - m| + 1, beta = |gb - m| + 1.
struct HexagonSection {
    long long L_m = 0;
    EnsembleSpec hahn_spec;
};
HexagonSection hexagon_section(long long ga, long long gb, long long gc, long long m);

}  // namespace spectral
