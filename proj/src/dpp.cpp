#include "spectral/dpp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace spectral {

void DiscreteMeasure::validate() const {
    if (nodes.size() != weights.size() || nodes.empty())
        throw std::invalid_argument("DiscreteMeasure: nodes/weights mismatch or empty");
    for (size_t i = 0; i + 1 < nodes.size(); ++i)
        if (nodes[i + 1] <= nodes[i])
            throw std::invalid_argument("DiscreteMeasure: nodes must be strictly increasing");
    for (double w : weights)
        if (w <= 0) throw std::invalid_argument("DiscreteMeasure: weights must be positive");
}

double DiscreteMeasure::total_mass() const {
    double m = 0.0;
    for (double w : weights) m += w;
    return m;
}

double KernelMatrix::projection_residual() const {
    return (entries * entries - entries).cwiseAbs().maxCoeff();
}

KernelMatrix build_kernel(const CoefficientSequence& seq, const DiscreteMeasure& measure, int n) {
    measure.validate();
    const int m = static_cast<int>(measure.nodes.size());
    if (n < 1 || n > m)
        throw std::invalid_argument("build_kernel: rank n must be in [1, #nodes]");
    const double mass = measure.total_mass();

    // Orthonormal polynomial values by forward recurrence, in long double to
    // protect orthonormality on large node sets.
    Eigen::MatrixXd phi(m, n);  // phi(i, j) = p_j(x_i) sqrt(w_i)
    for (int i = 0; i < m; ++i) {
        const long double x = static_cast<long double>(measure.nodes[static_cast<size_t>(i)]);
        long double pm1 = 0.0L;
        long double p0 = 1.0L / std::sqrt(static_cast<long double>(mass));
        phi(i, 0) = static_cast<double>(p0);
        for (int j = 1; j < n; ++j) {
            // x p_{j-1} = a_{j-1} p_{j-2} + b_j p_{j-1} + a_j p_j (1-based a, b)
            long double aj = static_cast<long double>(seq.a(j));
            long double bj = static_cast<long double>(seq.b(j));
            long double ajm1 = j >= 2 ? static_cast<long double>(seq.a(j - 1)) : 0.0L;
            long double p1 = ((x - bj) * p0 - ajm1 * pm1) / aj;
            phi(i, j) = static_cast<double>(p1);
            pm1 = p0;
            p0 = p1;
        }
        double sw = std::sqrt(measure.weights[static_cast<size_t>(i)]);
        phi.row(i) *= sw;
    }

    double gram_residual = (phi.transpose() * phi - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
    if (gram_residual > 1e-6)
        throw std::runtime_error(
            "build_kernel: orthonormality lost (Gram residual " + std::to_string(gram_residual) +
            "); use higher precision or fewer polynomial degrees");

    KernelMatrix K;
    K.rank = n;
    K.nodes = measure.nodes;
    K.entries = phi * phi.transpose();
    return K;
}

std::pair<double, double> exact_moments(const KernelMatrix& K, const std::function<double(double)>& f) {
    const int m = K.size();
    Eigen::VectorXd fv(m);
    for (int i = 0; i < m; ++i) fv(i) = f(K.nodes[static_cast<size_t>(i)]);
    double mean = 0.0;
    for (int i = 0; i < m; ++i) mean += fv(i) * K.entries(i, i);
    double var = 0.0;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            double d = fv(i) - fv(j);
            var += 0.5 * d * d * K.entries(i, j) * K.entries(i, j);
        }
    return {mean, var};
}

void SampleBatch::evaluate_statistic(const std::vector<double>& nodes,
                                     const std::function<double(double)>& f) {
    statistics.clear();
    statistics.reserve(draws.size());
    for (const auto& d : draws) {
        double s = 0.0;
        for (int idx : d) s += f(nodes[static_cast<size_t>(idx)]);
        statistics.push_back(s);
    }
}

std::string SampleBatch::to_csv() const {
    std::string out = "draw,statistic\n";
    char buf[64];
    for (size_t i = 0; i < draws.size(); ++i) {
        double s = i < statistics.size() ? statistics[i] : 0.0;
        std::snprintf(buf, sizeof(buf), "%zu,%.17g\n", i, s);
        out += buf;
    }
    return out;
}

nlohmann::json SampleBatch::summary_json() const {
    double mean = 0.0, var = 0.0;
    size_t n = statistics.size();
    for (double s : statistics) mean += s;
    if (n > 0) mean /= static_cast<double>(n);
    for (double s : statistics) var += (s - mean) * (s - mean);
    if (n > 1) var /= static_cast<double>(n - 1);
    return nlohmann::json{{"seed", seed},
                          {"rank", rank},
                          {"draws", n},
                          {"empirical_mean", mean},
                          {"empirical_variance", var}};
}

namespace {

double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

SampleBatch sample(const KernelMatrix& K, int draws, std::uint64_t seed) {
    double residual = K.projection_residual();
    if (residual > 1e-6)
        throw std::invalid_argument("sample: kernel is not a projection (|K^2-K| = " +
                                    std::to_string(residual) + "); refusing to sample");
    const int m = K.size();
    const int n = K.rank;

    // Feature representation K = Phi Phi^T from the top-n eigenvectors.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(K.entries);
    Eigen::MatrixXd phi(m, n);
    for (int j = 0; j < n; ++j) phi.col(j) = es.eigenvectors().col(m - 1 - j);

    SampleBatch batch;
    batch.seed = seed;
    batch.rank = n;
    batch.draws.resize(static_cast<size_t>(draws));

    for (int d = 0; d < draws; ++d) {
        // Independent per-draw stream: deterministic in (seed, d) alone.
        std::seed_seq sq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                         static_cast<std::uint32_t>(d), 0x9e3779b9u};
        std::mt19937_64 rng(sq);

        Eigen::MatrixXd E = phi.transpose();  // n x m, columns are feature vectors
        std::vector<int>& pts = batch.draws[static_cast<size_t>(d)];
        pts.reserve(static_cast<size_t>(n));
        for (int t = 0; t < n; ++t) {
            // P(pick i) = |E col i|^2 / (n - t) for a projection of rank n - t.
            double total = static_cast<double>(n - t);
            double u = uniform01(rng) * total;
            double acc = 0.0;
            int idx = m - 1;
            for (int i = 0; i < m; ++i) {
                acc += E.col(i).squaredNorm();
                if (acc >= u) {
                    idx = i;
                    break;
                }
            }
            pts.push_back(idx);
            Eigen::VectorXd e = E.col(idx);
            double norm = e.norm();
            if (norm > 0) {
                e /= norm;
                E -= e * (e.transpose() * E);
            }
            E.col(idx).setZero();
        }
        std::sort(pts.begin(), pts.end());
    }
    return batch;
}

nlohmann::json NormalityReport::to_json() const {
    return nlohmann::json{{"mean", mean},         {"variance", variance},
                          {"kappa3", kappa3},     {"kappa4", kappa4},
                          {"ks_distance", ks_distance}, {"pass_ks", pass_ks},
                          {"pass_skew", pass_skew}};
}

NormalityReport normality_check(const SampleBatch& batch, double predicted_variance,
                                double ks_threshold, double skew_threshold) {
    if (batch.statistics.size() < 1000)
        throw std::invalid_argument("normality_check: at least 1000 draws required");
    const auto& s = batch.statistics;
    const double n = static_cast<double>(s.size());
    NormalityReport rep;
    for (double v : s) rep.mean += v;
    rep.mean /= n;
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double v : s) {
        double c = v - rep.mean;
        m2 += c * c;
        m3 += c * c * c;
        m4 += c * c * c * c;
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;
    rep.variance = m2 * n / (n - 1);
    rep.kappa3 = m3;
    rep.kappa4 = m4 - 3 * m2 * m2;

    std::vector<double> sorted(s);
    std::sort(sorted.begin(), sorted.end());
    const double sigma = std::sqrt(predicted_variance);
    double ks = 0.0;
    for (size_t i = 0; i < sorted.size(); ++i) {
        double z = (sorted[i] - rep.mean) / sigma;
        double cdf = 0.5 * (1.0 + std::erf(z / std::sqrt(2.0)));
        double lo = static_cast<double>(i) / n;
        double hi = static_cast<double>(i + 1) / n;
        ks = std::max(ks, std::max(std::abs(cdf - lo), std::abs(cdf - hi)));
    }
    rep.ks_distance = ks;
    rep.pass_ks = ks < ks_threshold;
    rep.pass_skew = std::abs(rep.kappa3) < skew_threshold * sigma * sigma * sigma;
    return rep;
}

void save_kernel(const KernelMatrix& K, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("save_kernel: cannot open " + path);
    std::int64_t size = K.size(), rank = K.rank;
    out.write(reinterpret_cast<const char*>(&size), sizeof(size));
    out.write(reinterpret_cast<const char*>(&rank), sizeof(rank));
    out.write(reinterpret_cast<const char*>(K.nodes.data()),
              static_cast<std::streamsize>(sizeof(double) * K.nodes.size()));
    for (std::int64_t i = 0; i < size; ++i)
        for (std::int64_t j = 0; j < size; ++j) {
            double v = K.entries(i, j);
            out.write(reinterpret_cast<const char*>(&v), sizeof(v));
        }
}

KernelMatrix load_kernel(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("load_kernel: cannot open " + path);
    std::int64_t size = 0, rank = 0;
    in.read(reinterpret_cast<char*>(&size), sizeof(size));
    in.read(reinterpret_cast<char*>(&rank), sizeof(rank));
    if (!in || size < 1 || rank < 1 || rank > size)
        throw std::runtime_error("load_kernel: corrupt header in " + path);
    KernelMatrix K;
    K.rank = static_cast<int>(rank);
    K.nodes.resize(static_cast<size_t>(size));
    in.read(reinterpret_cast<char*>(K.nodes.data()),
            static_cast<std::streamsize>(sizeof(double) * K.nodes.size()));
    K.entries.resize(size, size);
    for (std::int64_t i = 0; i < size; ++i)
        for (std::int64_t j = 0; j < size; ++j) {
            double v = 0.0;
            in.read(reinterpret_cast<char*>(&v), sizeof(v));
            K.entries(i, j) = v;
        }
    if (!in) throw std::runtime_error("load_kernel: truncated data in " + path);
    return K;
}

}  // namespace spectral
