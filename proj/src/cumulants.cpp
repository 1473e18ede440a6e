#include "spectral/cumulants.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "spectral/linalg.hpp"

namespace spectral {

namespace {

// Compensated accumulator; the subtracted cumulant form cancels O(n) terms
// down to O(1) values, which is exactly where naive summation loses digits.
struct KahanSum {
    double sum = 0.0, carry = 0.0;
    void add(double v) {
        double y = v - carry;
        double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
};

double factorial(int k) {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

// Subtracted cumulant sum on a dense matrix D with the projector onto the
// first ncut coordinates:
//   sum_{j=2}^m (-1)^{j+1}/j sum_{compositions} (Tr G_{l_1}...G_{l_j} - Tr G_m) / prod l_i!
// where G_l is the leading ncut x ncut block of D^l (cyclicity of the trace
// lets every factor be projected on both sides).
double subtracted_cumulant(const Eigen::MatrixXd& D, Eigen::Index ncut, int m) {
    std::vector<Eigen::MatrixXd> blocks(static_cast<size_t>(m) + 1);
    Eigen::MatrixXd power = Eigen::MatrixXd::Identity(D.rows(), D.cols());
    for (int l = 1; l <= m; ++l) {
        power = (power * D).eval();
        blocks[static_cast<size_t>(l)] = power.topLeftCorner(ncut, ncut);
    }
    const double trace_full = blocks[static_cast<size_t>(m)].trace();

    KahanSum total;
    std::vector<int> comp;
    // Lexicographic enumeration over (j, l_1..l_j).
    auto recurse = [&](auto&& self, int remaining) -> void {
        if (remaining == 0) {
            const int j = static_cast<int>(comp.size());
            if (j < 2) return;
            Eigen::MatrixXd prod = blocks[static_cast<size_t>(comp[0])];
            for (int i = 1; i < j; ++i) prod = (prod * blocks[static_cast<size_t>(comp[static_cast<size_t>(i)])]).eval();
            double denom = 1.0;
            for (int l : comp) denom *= factorial(l);
            double sign = (j % 2 == 0) ? -1.0 : 1.0;  // (-1)^{j+1}
            total.add(sign / j * (prod.trace() - trace_full) / denom);
            return;
        }
        for (int l = 1; l <= remaining; ++l) {
            comp.push_back(l);
            self(self, remaining - l);
            comp.pop_back();
        }
    };
    recurse(recurse, m);
    return total.sum;
}

}  // namespace

double cumulant(const BandedMatrix& B, Index n, int m, int max_order) {
    if (m < 1) throw std::invalid_argument("cumulant: m >= 1 required");
    if (m > max_order)
        throw std::invalid_argument("cumulant: order " + std::to_string(m) + " exceeds max order " +
                                    std::to_string(max_order) + " (composition count grows as 2^{m-1})");
    if (m == 1) {
        KahanSum s;
        for (Index k = 1; k <= n; ++k) s.add(B(k, k));
        return s.sum;
    }
    const int b = B.bandwidth();
    const Index reach = static_cast<Index>(b) * m;
    if (n - 2 * reach >= 1) {
        // Interior: everything localizes to the window of radius 2*b*m around
        // the cut; entries within b*m of the center are exact under powers.
        const int R = static_cast<int>(2 * reach);
        Window w = window_extract(B, n, std::max(R, 1));
        return subtracted_cumulant(w.entries, w.radius + 1, m);
    }
    const Index size = n + reach + b + 1;
    return subtracted_cumulant(dense_truncation(B, size), n, m);
}

double dm(const Window& F, int m, int max_order) {
    if (m < 2) throw std::invalid_argument("dm: m >= 2 required");
    if (m > max_order)
        throw std::invalid_argument("dm: order " + std::to_string(m) + " exceeds max order " +
                                    std::to_string(max_order));
    // P_- keeps offsets r < 0, i.e. the first `radius` positions.
    return subtracted_cumulant(F.entries, F.radius, m);
}

double cumulant_bound(const BandedMatrix& B, Index n, int m) {
    if (!B.bound_hint())
        throw std::invalid_argument("cumulant_bound: unbounded-operator mode (no bound_hint on B)");
    const double norm = *B.bound_hint();
    const double hs2 = commutator_hs_norm_sq(B, n);
    return std::pow(static_cast<double>(m), 1.5) * std::exp(static_cast<double>(m)) /
           std::sqrt(2.0 * std::numbers::pi) * std::pow(norm, m - 2) * hs2;
}

std::vector<double> generating_function_log(const BandedMatrix& B, Index n,
                                            const std::vector<double>& z_grid, double tol) {
    if (!B.bound_hint())
        throw std::invalid_argument("generating_function_log: unbounded-operator mode (no bound_hint)");
    const double radius = 1.0 / (3.0 * *B.bound_hint());
    for (double z : z_grid)
        if (std::abs(z) > radius)
            throw std::invalid_argument("generating_function_log: |z| = " + std::to_string(std::abs(z)) +
                                        " outside the admissible radius 1/(3||B||) = " + std::to_string(radius));

    double trace_bp = 0.0;
    for (Index k = 1; k <= n; ++k) trace_bp += B(k, k);

    std::vector<double> out;
    out.reserve(z_grid.size());
    for (double z : z_grid) {
        Index size = n + static_cast<Index>(B.bandwidth()) * 8 + 8;
        double prev = 0.0;
        bool have_prev = false;
        for (int iter = 0; iter < 8; ++iter, size *= 2) {
            Eigen::MatrixXd E = matrix_exp(z * dense_truncation(B, size));
            // det(I + Pn (e^{zB} - I) Pn) is the determinant of the leading
            // n x n block of e^{zB}.
            auto [sign, logdet] = signed_logdet(Eigen::MatrixXd(E.topLeftCorner(n, n)));
            if (sign <= 0) throw std::runtime_error("generating_function_log: nonpositive determinant");
            double val = logdet - z * trace_bp;
            if (have_prev && std::abs(val - prev) < tol) {
                prev = val;
                break;
            }
            prev = val;
            have_prev = true;
        }
        out.push_back(prev);
    }
    return out;
}

nlohmann::json CumulantReport::to_json() const {
    return nlohmann::json{{"n", n},
                          {"orders", orders},
                          {"values", values},
                          {"limits", predicted_limits},
                          {"bounds", bounds},
                          {"window_radius_used", window_radius_used}};
}

CumulantReport cumulant_report(const BandedMatrix& B, Index n, const std::vector<int>& orders,
                               const std::optional<LaurentSymbol>& right_limit) {
    CumulantReport rep;
    rep.n = n;
    rep.orders = orders;
    int max_m = 1;
    for (int m : orders) {
        rep.values.push_back(cumulant(B, n, m));
        max_m = std::max(max_m, m);
        double limit = 0.0;
        if (right_limit) {
            if (m == 1) {
                limit = rep.values.back();  // C_1 has no universal limit; report as-is
            } else if (m == 2) {
                for (const auto& [k, v] : right_limit->coeffs())
                    if (k >= 1) limit += 0.5 * k * v * right_limit->coeff(-k);
            }
        }
        rep.predicted_limits.push_back(limit);
        if (B.bound_hint()) rep.bounds.push_back(m >= 2 ? cumulant_bound(B, n, m) : 0.0);
    }
    rep.window_radius_used = 2 * B.bandwidth() * max_m;
    return rep;
}

}  // namespace spectral
