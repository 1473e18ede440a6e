#include "spectral/ensembles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

namespace spectral {

namespace {

using ull = unsigned long long;

constexpr ull kSaturated = std::numeric_limits<ull>::max() / 4;

ull pow_sat(ull base, int exp) {
    ull v = 1;
    for (int i = 0; i < exp; ++i) {
        if (v > kSaturated / base) return kSaturated;
        v *= base;
    }
    return v;
}

// Monic-recurrence building blocks of the Hahn coefficients (0-based n):
//   A_n = (n+alpha+beta+1)(n+alpha+1)(N-n) / ((2n+a+b+1)(2n+a+b+2))
//   C_n = n(n+alpha+beta+N+1)(n+beta) / ((2n+a+b)(2n+a+b+1))
double hahn_A(double n, double al, double be, double N) {
    // At n = 0 the factor (n+al+be+1) cancels against (2n+al+be+1); use the
    // reduced form so al+be = -1 (a removable 0/0) stays finite.
    if (n == 0) return (al + 1) * N / (al + be + 2);
    return (n + al + be + 1) * (n + al + 1) * (N - n) /
           ((2 * n + al + be + 1) * (2 * n + al + be + 2));
}

double hahn_C(double n, double al, double be, double N) {
    if (n == 0) return 0.0;
    return n * (n + al + be + N + 1) * (n + be) / ((2 * n + al + be) * (2 * n + al + be + 1));
}

}  // namespace

EnsembleSpec EnsembleSpec::chebyshev(double a, double b) {
    EnsembleSpec s;
    s.variant = Variant::Chebyshev;
    s.a = a;
    s.b = b;
    return s;
}

EnsembleSpec EnsembleSpec::hahn(double alpha, double beta, long long N) {
    EnsembleSpec s;
    s.variant = Variant::Hahn;
    s.alpha = alpha;
    s.beta = beta;
    s.N = N;
    return s;
}

EnsembleSpec EnsembleSpec::periodic(std::vector<double> a_list, std::vector<double> b_list) {
    EnsembleSpec s;
    s.variant = Variant::Periodic;
    s.a_list = std::move(a_list);
    s.b_list = std::move(b_list);
    return s;
}

void EnsembleSpec::validate() const {
    switch (variant) {
        case Variant::Chebyshev:
        case Variant::NevaiCustom:
            if (a <= 0) throw std::invalid_argument("ensemble: off-diagonal a must be positive");
            break;
        case Variant::SparseDecaying:
        case Variant::SparseFixed:
        case Variant::BlocksExample1:
        case Variant::BlocksExample2:
            break;
        case Variant::Hahn:
            if (alpha <= -1 || beta <= -1)
                throw std::invalid_argument("hahn: alpha, beta > -1 required");
            if (N < 1) throw std::invalid_argument("hahn: N >= 1 required");
            break;
        case Variant::Periodic:
            if (a_list.empty() || a_list.size() != b_list.size())
                throw std::invalid_argument("periodic: a and b lists must be nonempty and equal length");
            for (double v : a_list)
                if (v <= 0) throw std::invalid_argument("periodic: a entries must be positive");
            break;
        case Variant::TwoMatrixSymbolic:
            if (tau == 0.0) throw std::invalid_argument("two_matrix: coupling constant tau must be nonzero");
            if (a <= 0) throw std::invalid_argument("two_matrix: a must be positive");
            break;
    }
}

namespace {

const char* variant_name(EnsembleSpec::Variant v) {
    switch (v) {
        case EnsembleSpec::Variant::Chebyshev: return "chebyshev";
        case EnsembleSpec::Variant::NevaiCustom: return "nevai_custom";
        case EnsembleSpec::Variant::SparseDecaying: return "sparse_decaying";
        case EnsembleSpec::Variant::SparseFixed: return "sparse_fixed";
        case EnsembleSpec::Variant::BlocksExample1: return "blocks_example1";
        case EnsembleSpec::Variant::BlocksExample2: return "blocks_example2";
        case EnsembleSpec::Variant::Hahn: return "hahn";
        case EnsembleSpec::Variant::Periodic: return "periodic";
        case EnsembleSpec::Variant::TwoMatrixSymbolic: return "two_matrix_symbolic";
    }
    return "chebyshev";
}

EnsembleSpec::Variant variant_from_name(const std::string& name) {
    using V = EnsembleSpec::Variant;
    if (name == "chebyshev") return V::Chebyshev;
    if (name == "nevai_custom") return V::NevaiCustom;
    if (name == "sparse_decaying") return V::SparseDecaying;
    if (name == "sparse_fixed") return V::SparseFixed;
    if (name == "blocks_example1") return V::BlocksExample1;
    if (name == "blocks_example2") return V::BlocksExample2;
    if (name == "hahn") return V::Hahn;
    if (name == "periodic") return V::Periodic;
    if (name == "two_matrix_symbolic") return V::TwoMatrixSymbolic;
    throw std::invalid_argument("unknown ensemble variant: " + name);
}

}  // namespace

nlohmann::json EnsembleSpec::to_json() const {
    nlohmann::json j{{"variant", variant_name(variant)}};
    switch (variant) {
        case Variant::Chebyshev:
            j["a"] = a;
            j["b"] = b;
            break;
        case Variant::NevaiCustom:
            j["a"] = a;
            j["b"] = b;
            j["da"] = da;
            j["db"] = db;
            break;
        case Variant::SparseDecaying: j["scale"] = scale; break;
        case Variant::SparseFixed: j["btilde"] = btilde; break;
        case Variant::BlocksExample1:
        case Variant::BlocksExample2: break;
        case Variant::Hahn:
            j["alpha"] = alpha;
            j["beta"] = beta;
            j["N"] = N;
            break;
        case Variant::Periodic:
            j["a_list"] = a_list;
            j["b_list"] = b_list;
            break;
        case Variant::TwoMatrixSymbolic:
            j["v2"] = v2;
            j["tau"] = tau;
            j["a"] = a;
            j["b"] = b;
            break;
    }
    return j;
}

EnsembleSpec EnsembleSpec::from_json(const nlohmann::json& j) {
    EnsembleSpec s;
    s.variant = variant_from_name(j.at("variant").get<std::string>());
    s.a = j.value("a", 1.0);
    s.b = j.value("b", 0.0);
    s.da = j.value("da", 0.0);
    s.db = j.value("db", 0.0);
    s.scale = j.value("scale", 1.0);
    s.btilde = j.value("btilde", 1.0);
    s.alpha = j.value("alpha", 0.0);
    s.beta = j.value("beta", 0.0);
    s.N = j.value("N", 0LL);
    s.a_list = j.value("a_list", std::vector<double>{});
    s.b_list = j.value("b_list", std::vector<double>{});
    s.v2 = j.value("v2", std::vector<double>{});
    s.tau = j.value("tau", 1.0);
    s.validate();
    return s;
}

double hahn_a(long long k, double alpha, double beta, long long N) {
    if (k < 1) throw std::invalid_argument("hahn_a: k >= 1 required");
    if (k > N) throw std::invalid_argument("hahn_a: k <= N required (finite Jacobi matrix)");
    double Ak = hahn_A(static_cast<double>(k - 1), alpha, beta, static_cast<double>(N));
    double Ck = hahn_C(static_cast<double>(k), alpha, beta, static_cast<double>(N));
    return std::sqrt(Ak * Ck) / static_cast<double>(N);
}

double hahn_b(long long k, double alpha, double beta, long long N) {
    if (k < 1) throw std::invalid_argument("hahn_b: k >= 1 required");
    if (k > N + 1) throw std::invalid_argument("hahn_b: k <= N+1 required");
    double n = static_cast<double>(k - 1);
    return (hahn_A(n, alpha, beta, static_cast<double>(N)) +
            hahn_C(n, alpha, beta, static_cast<double>(N))) /
           static_cast<double>(N);
}

std::pair<double, double> hahn_limit(double A, double B, double t) {
    if (t <= 1) throw std::invalid_argument("hahn_limit: t > 1 required");
    double d = t * (2 + A + B) * (2 + A + B);
    double u = (t - 1) * (1 + A + B) * (1 + A);
    double v = (1 + A + B + t) * (1 + B);
    return {std::sqrt(u * v) / d, (u + v) / d};
}

DiscreteMeasure hahn_measure(double alpha, double beta, long long N) {
    if (alpha <= -1 || beta <= -1 || N < 1)
        throw std::invalid_argument("hahn_measure: alpha, beta > -1 and N >= 1 required");
    std::vector<double> log_w(static_cast<size_t>(N) + 1);
    // log C(alpha+x, x) + log C(beta+N-x, N-x) via lgamma.
    auto log_binom = [](double top, double k) {
        return std::lgamma(top + 1.0) - std::lgamma(k + 1.0) - std::lgamma(top - k + 1.0);
    };
    double max_log = -std::numeric_limits<double>::infinity();
    for (long long x = 0; x <= N; ++x) {
        double lx = static_cast<double>(x);
        double lw = log_binom(alpha + lx, lx) + log_binom(beta + static_cast<double>(N) - lx,
                                                          static_cast<double>(N) - lx);
        log_w[static_cast<size_t>(x)] = lw;
        max_log = std::max(max_log, lw);
    }
    DiscreteMeasure mu;
    mu.nodes.resize(log_w.size());
    mu.weights.resize(log_w.size());
    double mass = 0.0;
    for (long long x = 0; x <= N; ++x) {
        size_t i = static_cast<size_t>(x);
        mu.nodes[i] = static_cast<double>(x) / static_cast<double>(N);
        mu.weights[i] = std::exp(log_w[i] - max_log);
        mass += mu.weights[i];
    }
    for (double& w : mu.weights) w /= mass;
    return mu;
}

namespace {

// Block layout of Examples 6.3/6.4: callback receives (start, size, kind, j)
// and returns true to continue the walk. kinds: 'A', 'B', 'C', 'D'.
template <typename Fn>
void walk_blocks(bool with_transitions, Fn&& visit) {
    ull pos = 1;
    for (int j = 1; j < 64; ++j) {
        ull e = 1;
        for (int i = 0; i < 6; ++i) e *= static_cast<ull>(j);  // j^6
        ull sizes[4] = {pow_sat(3, j * j), with_transitions ? e - 1 : 0, pow_sat(2, j * j),
                        with_transitions ? e - 1 : 0};
        char kinds[4] = {'A', 'B', 'C', 'D'};
        for (int s = 0; s < 4; ++s) {
            if (sizes[s] == 0) continue;
            if (!visit(pos, sizes[s], kinds[s], j)) return;
            if (sizes[s] >= kSaturated || pos > kSaturated - sizes[s]) return;
            pos += sizes[s];
        }
    }
}

double blocks_a(Index k, bool with_transitions) {
    if (k < 1) return 0.0;
    const ull ku = static_cast<ull>(k);
    double result = 1.0;
    walk_blocks(with_transitions, [&](ull start, ull size, char kind, int j) {
        if (ku < start) return false;
        if (ku >= start + size && size < kSaturated) return true;
        ull p = ku - start + 1;  // position within the block, 1-based
        double e = 1.0;
        for (int i = 0; i < 6; ++i) e *= j;
        switch (kind) {
            case 'A': result = 1.0; break;
            case 'C': result = 0.5; break;
            // B_j: a^2 walks geometrically from 1 down toward 1/4
            // (ratio c_j, c_j^{j^6} = 1/4); D_j walks back up.
            case 'B': result = std::exp2(-static_cast<double>(p) / e); break;
            case 'D': result = std::exp2(-1.0 + static_cast<double>(p) / e); break;
        }
        return false;
    });
    return result;
}

}  // namespace

std::vector<Index> block_centers(const EnsembleSpec& spec, char block, int max_count) {
    if (spec.variant != EnsembleSpec::Variant::BlocksExample1 &&
        spec.variant != EnsembleSpec::Variant::BlocksExample2)
        throw std::invalid_argument("block_centers: spec is not a block example");
    if (block != 'A' && block != 'C') throw std::invalid_argument("block_centers: block must be 'A' or 'C'");
    const bool transitions = spec.variant == EnsembleSpec::Variant::BlocksExample2;
    std::vector<Index> centers;
    walk_blocks(transitions, [&](ull start, ull size, char kind, int) {
        if (static_cast<Index>(centers.size()) >= max_count) return false;
        ull end = start + size - 1;
        if (end > static_cast<ull>(kGeneratorIndexCap)) return false;
        if (kind == block) centers.push_back(static_cast<Index>(start + size / 2));
        return true;
    });
    return centers;
}

CoefficientSequence coefficients(const EnsembleSpec& spec) {
    spec.validate();
    using V = EnsembleSpec::Variant;
    switch (spec.variant) {
        case V::Chebyshev: {
            double a = spec.a, b = spec.b;
            return CoefficientSequence::tridiagonal([a](Index) { return a; }, [b](Index) { return b; },
                                                    false, 2 * a + std::abs(b));
        }
        case V::NevaiCustom: {
            double a = spec.a, b = spec.b, da = spec.da, db = spec.db;
            return CoefficientSequence::tridiagonal(
                [a, da](Index k) { return a * (1.0 + da / static_cast<double>(k)); },
                [b, db](Index k) { return b + db / static_cast<double>(k); }, false,
                2 * a * (1.0 + std::abs(da)) + std::abs(b) + std::abs(db));
        }
        case V::SparseDecaying:
        case V::SparseFixed: {
            const bool decaying = spec.variant == V::SparseDecaying;
            double scale = spec.scale, btilde = spec.btilde;
            // Perturbation positions N_j = 4^{j+1}: gaps grow without bound.
            auto bfn = [decaying, scale, btilde](Index k) {
                if (k < 4) return 0.0;
                ull p = 4;
                for (int j = 0; p <= static_cast<ull>(kGeneratorIndexCap); ++j, p *= 4)
                    if (p == static_cast<ull>(k)) return decaying ? scale / (j + 1) : btilde;
                return 0.0;
            };
            double bmax = decaying ? std::abs(scale) : std::abs(btilde);
            return CoefficientSequence::tridiagonal([](Index) { return 1.0; }, bfn, false, 2.0 + bmax);
        }
        case V::BlocksExample1:
            return CoefficientSequence::tridiagonal([](Index k) { return blocks_a(k, false); },
                                                    [](Index) { return 0.0; }, false, 2.0);
        case V::BlocksExample2:
            return CoefficientSequence::tridiagonal([](Index k) { return blocks_a(k, true); },
                                                    [](Index) { return 0.0; }, false, 2.0);
        case V::Hahn: {
            double al = spec.alpha, be = spec.beta;
            long long N = spec.N;
            // Finite matrix extended by clamping; the rescaled spectrum lies in [0,1].
            return CoefficientSequence::tridiagonal(
                [al, be, N](Index k) { return hahn_a(std::clamp<Index>(k, 1, N), al, be, N); },
                [al, be, N](Index k) { return hahn_b(std::clamp<Index>(k, 1, N + 1), al, be, N); }, true,
                1.0);
        }
        case V::Periodic: {
            auto al = spec.a_list;
            auto bl = spec.b_list;
            size_t p = al.size();
            double amax = *std::max_element(al.begin(), al.end());
            double bmax = 0.0;
            for (double v : bl) bmax = std::max(bmax, std::abs(v));
            return CoefficientSequence::tridiagonal(
                [al, p](Index k) { return al[static_cast<size_t>((k - 1) % static_cast<Index>(p))]; },
                [bl, p](Index k) { return bl[static_cast<size_t>((k - 1) % static_cast<Index>(p))]; },
                false, 2 * amax + bmax);
        }
        case V::TwoMatrixSymbolic:
            throw std::invalid_argument(
                "coefficients: two_matrix_symbolic is symbol-level only (no recurrence data)");
    }
    throw std::logic_error("coefficients: unreachable");
}

DiscriminantPoly discriminant(const std::vector<double>& a_list, const std::vector<double>& b_list) {
    if (a_list.empty() || a_list.size() != b_list.size())
        throw std::invalid_argument("discriminant: a and b lists must be nonempty and equal length");
    for (double v : a_list)
        if (v <= 0) throw std::invalid_argument("discriminant: a entries must be positive");
    const int p = static_cast<int>(a_list.size());

    // Transfer matrices T_i = [[(x - b_i)/a_i, -a_{i-1}/a_i], [1, 0]] with the
    // cyclic convention a_0 = a_p; Delta = tr(T_p ... T_1).
    Polynomial m00 = Polynomial::constant(1.0), m01, m10, m11 = Polynomial::constant(1.0);
    for (int i = 1; i <= p; ++i) {
        double ai = a_list[static_cast<size_t>(i - 1)];
        double aprev = a_list[static_cast<size_t>((i + p - 2) % p)];
        Polynomial t00 = (1.0 / ai) * (Polynomial::identity() - Polynomial::constant(b_list[static_cast<size_t>(i - 1)]));
        Polynomial t01 = Polynomial::constant(-aprev / ai);
        Polynomial n00 = t00 * m00 + t01 * m10;
        Polynomial n01 = t00 * m01 + t01 * m11;
        m10 = m00;
        m11 = m01;
        m00 = n00;
        m01 = n01;
    }
    DiscriminantPoly out;
    out.period = p;
    out.delta = m00 + m11;

    // Band endpoints: bisection on Delta -+ 2 over a bracketing grid.
    double amax = *std::max_element(a_list.begin(), a_list.end());
    double bmax = 0.0;
    for (double v : b_list) bmax = std::max(bmax, std::abs(v));
    const double R = 2 * amax + bmax + 1.0;
    const int grid = 200 * p + 2000;
    auto bisect = [](const Polynomial& q, double lo, double hi) {
        double flo = q(lo);
        for (int it = 0; it < 100; ++it) {
            double mid = 0.5 * (lo + hi);
            double fm = q(mid);
            if ((flo <= 0) == (fm <= 0)) {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
            }
        }
        return 0.5 * (lo + hi);
    };
    std::vector<double> roots;
    for (double level : {-2.0, 2.0}) {
        Polynomial q = out.delta - Polynomial::constant(level);
        double prev_x = -R, prev_f = q(prev_x);
        for (int i = 1; i <= grid; ++i) {
            double x = -R + 2 * R * static_cast<double>(i) / grid;
            double f = q(x);
            if ((prev_f <= 0) != (f <= 0)) roots.push_back(bisect(q, prev_x, x));
            prev_x = x;
            prev_f = f;
        }
    }
    std::sort(roots.begin(), roots.end());
    // Bands are the maximal intervals between consecutive roots where |Delta| <= 2.
    for (size_t i = 0; i + 1 < roots.size(); ++i) {
        double mid = 0.5 * (roots[i] + roots[i + 1]);
        if (std::abs(out.delta(mid)) <= 2.0) {
            if (!out.bands.empty() && std::abs(out.bands.back().second - roots[i]) < 1e-11)
                out.bands.back().second = roots[i + 1];  // merge touching bands
            else
                out.bands.emplace_back(roots[i], roots[i + 1]);
        }
    }
    return out;
}

std::pair<LaurentSymbol, LaurentSymbol> two_matrix_symbols(const Polynomial& v2, double tau, double a,
                                                           double b) {
    if (tau == 0.0)
        throw std::invalid_argument("two_matrix_symbols: coupling constant tau must be nonzero");
    if (a <= 0) throw std::invalid_argument("two_matrix_symbols: a must be positive");
    LaurentSymbol s2 = LaurentSymbol::jacobi(a, b);
    LaurentSymbol s1 =
        (1.0 / tau) * compose_polynomial(v2.derivative(), s2).negative_part() + LaurentSymbol::monomial(1, a);
    return {s1, s2};
}

CoefficientSequence recurrence_from_measure(const std::vector<double>& nodes,
                                            const std::vector<double>& weights, int count) {
    if (nodes.size() != weights.size() || nodes.empty())
        throw std::invalid_argument("recurrence_from_measure: nodes/weights mismatch or empty");
    const int m = static_cast<int>(nodes.size());
    if (count < 1 || count > m)
        throw std::invalid_argument(
            "recurrence_from_measure: count must be in [1, #nodes]; the measure supports only #nodes "
            "orthogonal polynomials");
    for (int i = 0; i + 1 < m; ++i)
        if (nodes[static_cast<size_t>(i + 1)] <= nodes[static_cast<size_t>(i)])
            throw std::invalid_argument("recurrence_from_measure: nodes must be strictly increasing");
    for (double w : weights)
        if (w <= 0) throw std::invalid_argument("recurrence_from_measure: weights must be positive");

    // Lanczos on diag(nodes) started from sqrt(weights), with full
    // reorthogonalization: alpha_j = b_{j+1}, beta_j = a_j.
    Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(nodes.data(), m);
    Eigen::MatrixXd V(m, count);
    Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(weights.data(), m).cwiseSqrt();
    v /= v.norm();
    V.col(0) = v;
    std::vector<double> avec, bvec;
    for (int j = 0; j < count; ++j) {
        Eigen::VectorXd w = x.cwiseProduct(V.col(j));
        double alpha = V.col(j).dot(w);
        bvec.push_back(alpha);
        if (j + 1 >= count || j + 1 >= m) break;
        w -= alpha * V.col(j);
        if (j > 0) w -= avec.back() * V.col(j - 1);
        // Full reorthogonalization (twice) against all previous vectors.
        for (int pass = 0; pass < 2; ++pass)
            for (int i = 0; i <= j; ++i) w -= V.col(i).dot(w) * V.col(i);
        double beta = w.norm();
        if (beta <= 0)
            throw std::runtime_error("recurrence_from_measure: breakdown (measure support exhausted)");
        avec.push_back(beta);
        V.col(j + 1) = w / beta;
    }
    if (avec.empty()) avec.push_back(1.0);  // count == 1: no off-diagonal data
    return CoefficientSequence::from_vectors(std::move(avec), std::move(bvec));
}

HexagonSection hexagon_section(long long ga, long long gb, long long gc, long long m) {
    if (ga < 1 || gb < 1 || gc < 1) throw std::invalid_argument("hexagon_section: sides must be >= 1");
    if (ga > gb) throw std::invalid_argument("hexagon_section: requires a <= b");
    if (m < 1 || m > ga + gb - 1)
        throw std::invalid_argument("hexagon_section: m must be in [1, a+b-1]");
    HexagonSection out;
    if (m <= ga)
        out.L_m = m;
    else if (m <= gb)
        out.L_m = ga;
    else
        out.L_m = ga + gb - m;
    out.hahn_spec = EnsembleSpec::hahn(static_cast<double>(std::llabs(ga - m) + 1),
                                       static_cast<double>(std::llabs(gb - m) + 1), gc + out.L_m);
    return out;
}

}  // namespace spectral
