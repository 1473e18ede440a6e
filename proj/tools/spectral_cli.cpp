// spectral-clt command line: ensembles -> right limits -> predictions ->
// finite-n cumulants -> Monte Carlo validation, with JSON reports.

#include <cmath>
#include <cstdint>
#include <ctime>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "spectral/banded.hpp"
#include "spectral/cumulants.hpp"
#include "spectral/dpp.hpp"
#include "spectral/ensembles.hpp"
#include "spectral/fredholm.hpp"
#include "spectral/right_limits.hpp"
#include "spectral/symbols.hpp"

using nlohmann::json;
using namespace spectral;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUndetermined = 2;
constexpr int kExitValidation = 3;
constexpr int kExitConfig = 4;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

json load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ConfigError("config parse error in " + path + ": " + e.what());
    }
    if (j.value("schema", "") != "spectral-clt/1")
        throw ConfigError("config must declare \"schema\": \"spectral-clt/1\"");
    return j;
}

void write_report(const json& report, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << report.dump(2) << "\n";
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot open output file: " + out_path);
    out << report.dump(2) << "\n";
}

// Function spec: {"type":"polynomial","coeffs":[...]} or a named C1 function
// on an explicit interval E.
struct FunctionSpec {
    bool is_polynomial = true;
    Polynomial poly;
    std::function<double(double)> fn;
    std::string name;
};

FunctionSpec parse_function(const json& j) {
    FunctionSpec f;
    std::string type = j.value("type", "polynomial");
    if (type == "polynomial") {
        f.is_polynomial = true;
        std::vector<double> c = j.value("coeffs", std::vector<double>{0.0, 1.0});
        f.poly = Polynomial(std::move(c));
        f.name = "polynomial";
        f.fn = [p = f.poly](double x) { return p(x); };
        return f;
    }
    if (type != "named") throw ConfigError("function spec type must be 'polynomial' or 'named'");
    f.is_polynomial = false;
    f.name = j.value("name", "");
    if (f.name == "cos") {
        double freq = j.value("frequency", 1.0);
        f.fn = [freq](double x) { return std::cos(freq * x); };
    } else if (f.name == "sin") {
        double freq = j.value("frequency", 1.0);
        f.fn = [freq](double x) { return std::sin(freq * x); };
    } else if (f.name == "exp") {
        f.fn = [](double x) { return std::exp(x); };
    } else if (f.name == "indicator_right") {
        double thr = j.value("threshold", 0.0);
        f.fn = [thr](double x) { return x > thr ? 1.0 : 0.0; };
    } else if (f.name == "smoothed_indicator") {
        double thr = j.value("threshold", 0.0);
        double eps = j.value("epsilon", 0.1);
        f.fn = [thr, eps](double x) { return 0.5 * (1.0 + std::tanh((x - thr) / eps)); };
    } else {
        throw ConfigError("unknown named function: " + f.name);
    }
    return f;
}

SubsequenceScheme parse_subsequence(const json& j, const EnsembleSpec& spec) {
    std::string type = j.value("type", "arithmetic");
    if (type == "arithmetic")
        return SubsequenceScheme::arithmetic(j.value("start", Index{64}), j.value("step", Index{64}));
    if (type == "explicit") return SubsequenceScheme::explicit_values(j.at("values").get<std::vector<Index>>());
    if (type == "block-centers") {
        std::string block = j.value("block", "A");
        auto centers = block_centers(spec, block.empty() ? 'A' : block[0], j.value("max_count", 8));
        return SubsequenceScheme::explicit_values(std::move(centers));
    }
    throw ConfigError("unknown subsequence type: " + type);
}

json symbol_json(const LaurentSymbol& s) { return s.to_json(); }

json right_limit_json(const RightLimitClass& rl) {
    json j{{"tag", to_string(rl.tag)},
           {"subsequence", rl.subsequence},
           {"convergence_error", rl.convergence_error},
           {"deviation", rl.deviation},
           {"window", {{"radius", rl.window.radius}, {"center", rl.window.center}}}};
    if (rl.tag == RightLimitTag::Laurent || rl.tag == RightLimitTag::LaurentPlusFiniteRank)
        j["symbol"] = symbol_json(rl.symbol);
    if (rl.tag == RightLimitTag::Periodic) j["period"] = rl.period;
    return j;
}

json base_report(const json& config, bool stable) {
    json j{{"schema", "spectral-clt/1"}};
    if (!stable) j["generated_at"] = static_cast<std::int64_t>(std::time(nullptr));
    if (config.contains("label")) j["label"] = config["label"];
    return j;
}

int cmd_predict(const json& cfg, const std::string& out, bool stable) {
    EnsembleSpec spec = EnsembleSpec::from_json(cfg.at("ensemble"));
    FunctionSpec f = parse_function(cfg.value("f", json{{"type", "polynomial"}}));
    json report = base_report(cfg, stable);
    report["command"] = "predict";

    LaurentSymbol s;
    if (spec.variant == EnsembleSpec::Variant::TwoMatrixSymbolic) {
        auto [s1, s2] = two_matrix_symbols(Polynomial(spec.v2), spec.tau, spec.a, spec.b);
        s = cfg.value("which_symbol", std::string("s1")) == "s2" ? s2 : s1;
        report["symbol"] = symbol_json(s);
    } else {
        CoefficientSequence seq = coefficients(spec);
        SubsequenceScheme scheme = parse_subsequence(cfg.value("subsequence", json::object()), spec);
        int M = cfg.value("window_radius", 8);
        double tol = cfg.value("tolerance", 1e-9);
        RightLimitClass rl = detect_right_limit(seq, scheme, M, tol);
        report["right_limit"] = right_limit_json(rl);
        if (rl.tag == RightLimitTag::Periodic && cfg.value("compose_discriminant", true)) {
            // The magic formula turns Delta_S(J^R) into S^p + S^{-p}: the
            // effective symbol for X_{f o Delta} is w^p + w^{-p}.
            s = LaurentSymbol::monomial(rl.period, 1.0) + LaurentSymbol::monomial(-rl.period, 1.0);
            report["composed_with_discriminant"] = true;
        } else if (rl.tag == RightLimitTag::Laurent) {
            s = rl.symbol;
        } else {
            write_report(report, out);
            return kExitUndetermined;
        }
    }

    if (cfg.contains("Q")) {
        Polynomial Q(cfg.at("Q").get<std::vector<double>>());
        s = compose_polynomial(Q, s);
        report["Q_applied"] = true;
    }
    report["symbol"] = symbol_json(s);

    FourierCoefficients fc;
    if (f.is_polynomial) {
        fc = fourier_of_polynomial(f.poly, s);
    } else {
        if (!s.real_on_circle())
            throw std::runtime_error(
                "C1 function with a non-symmetric symbol is refused; supply a polynomial f");
        fc = fourier_of_composition(f.fn, s, cfg.value("K", 64), cfg.value("grid", 1024));
    }
    report["f"] = f.name;
    report["variance"] = clt_variance(fc);
    report["fourier_truncation"] = fc.truncation;
    report["tail_estimate"] = fc.tail_estimate;
    write_report(report, out);
    return kExitOk;
}

int cmd_cumulants(const json& cfg, const std::string& out, bool stable) {
    EnsembleSpec spec = EnsembleSpec::from_json(cfg.at("ensemble"));
    CoefficientSequence seq = coefficients(spec);
    FunctionSpec f = parse_function(cfg.value("f", json{{"type", "polynomial"}}));
    if (!f.is_polynomial) throw ConfigError("cumulants command requires a polynomial f");
    Index n = cfg.at("n").get<Index>();
    std::vector<int> orders = cfg.value("orders", std::vector<int>{1, 2, 3, 4});

    BandedMatrix B = poly_apply(seq.matrix(), f.poly);
    std::optional<LaurentSymbol> limit;
    if (cfg.contains("subsequence") || cfg.value("detect_right_limit", true)) {
        SubsequenceScheme scheme = parse_subsequence(cfg.value("subsequence", json::object()), spec);
        RightLimitClass rl = detect_right_limit(seq, scheme, 8, cfg.value("tolerance", 1e-9));
        if (rl.tag == RightLimitTag::Laurent) limit = compose_polynomial(f.poly, rl.symbol);
    }
    CumulantReport rep = cumulant_report(B, n, orders, limit);
    json report = base_report(cfg, stable);
    report["command"] = "cumulants";
    report["report"] = rep.to_json();
    write_report(report, out);
    return kExitOk;
}

int cmd_sample(const json& cfg, const std::string& out, bool stable, std::uint64_t seed) {
    EnsembleSpec spec = EnsembleSpec::from_json(cfg.at("ensemble"));
    if (spec.variant != EnsembleSpec::Variant::Hahn)
        throw ConfigError("sample command currently supports the hahn ensemble (discrete measure)");
    int n = cfg.at("n").get<int>();
    int draws = cfg.value("draws", 10000);
    FunctionSpec f = parse_function(cfg.value("f", json{{"type", "polynomial"}}));

    DiscreteMeasure mu = hahn_measure(spec.alpha, spec.beta, spec.N);
    CoefficientSequence seq = coefficients(spec);
    KernelMatrix K = build_kernel(seq, mu, n);
    auto [mean, var] = exact_moments(K, f.fn);

    SampleBatch batch = sample(K, draws, seed);
    batch.evaluate_statistic(K.nodes, f.fn);

    json report = base_report(cfg, stable);
    report["command"] = "sample";
    report["exact_mean"] = mean;
    report["exact_variance"] = var;
    report["batch"] = batch.summary_json();
    if (cfg.contains("predicted_variance")) {
        NormalityReport nr = normality_check(batch, cfg["predicted_variance"].get<double>());
        report["normality"] = nr.to_json();
    }

    double emp_mean = report["batch"]["empirical_mean"].get<double>();
    double emp_var = report["batch"]["empirical_variance"].get<double>();
    double se = std::sqrt(emp_var / draws);
    bool mean_ok = std::abs(emp_mean - mean) <= 4 * se;
    bool var_ok = var == 0.0 || std::abs(emp_var - var) <= 0.10 * var;
    report["mean_within_4se"] = mean_ok;
    report["variance_within_10pct"] = var_ok;

    if (!out.empty()) {
        std::ofstream csv(out + ".csv");
        csv << batch.to_csv();
        report["csv"] = out + ".csv";
    }
    write_report(report, out);
    return mean_ok && var_ok ? kExitOk : kExitValidation;
}

int cmd_szego(const json& cfg, const std::string& out, bool stable) {
    LaurentSymbol s = LaurentSymbol::from_json(cfg.at("symbol"));
    Index n = cfg.value("n", Index{60});
    int N = cfg.value("N", 400);
    SzegoReport rep = szego_limit_check(s, n, N);
    json report = base_report(cfg, stable);
    report["command"] = "szego";
    report["report"] = rep.to_json();
    write_report(report, out);
    return kExitOk;
}

int cmd_rightlimit(const json& cfg, const std::string& out, bool stable) {
    EnsembleSpec spec = EnsembleSpec::from_json(cfg.at("ensemble"));
    CoefficientSequence seq = coefficients(spec);
    SubsequenceScheme scheme = parse_subsequence(cfg.value("subsequence", json::object()), spec);
    RightLimitClass rl =
        detect_right_limit(seq, scheme, cfg.value("window_radius", 8), cfg.value("tolerance", 1e-9));
    json report = base_report(cfg, stable);
    report["command"] = "rightlimit";
    report["right_limit"] = right_limit_json(rl);
    write_report(report, out);
    return rl.tag == RightLimitTag::Undetermined ? kExitUndetermined : kExitOk;
}

int cmd_discriminant(const json& cfg, const std::string& out, bool stable) {
    EnsembleSpec spec = EnsembleSpec::from_json(cfg.at("ensemble"));
    if (spec.variant != EnsembleSpec::Variant::Periodic)
        throw ConfigError("discriminant command requires a periodic ensemble");
    DiscriminantPoly d = discriminant(spec.a_list, spec.b_list);
    json report = base_report(cfg, stable);
    report["command"] = "discriminant";
    report["period"] = d.period;
    report["delta_coeffs"] = d.delta.coeffs();
    json bands = json::array();
    for (auto [lo, hi] : d.bands) bands.push_back({lo, hi});
    report["bands"] = bands;
    write_report(report, out);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"spectral-clt: CLT laboratory for linear statistics of orthogonal polynomial ensembles"};
    app.require_subcommand(1);

    std::string config_path, out_path;
    std::uint64_t seed = 0;
    bool stable = false;
    app.add_option("--config", config_path, "JSON config path")->required();
    app.add_option("--out", out_path, "output report path (stdout if omitted)");
    app.add_option("--seed", seed, "RNG seed for sampling");
    app.add_flag("--stable", stable, "omit timestamps for byte-identical reports");

    auto* predict = app.add_subcommand("predict", "right limit -> symbol -> limit variance");
    auto* cumulants_cmd = app.add_subcommand("cumulants", "finite-n cumulant report");
    auto* sample_cmd = app.add_subcommand("sample", "exact DPP sampling and cross-checks");
    auto* szego = app.add_subcommand("szego", "Szego-type determinant limit check");
    auto* rightlimit = app.add_subcommand("rightlimit", "right-limit classification");
    auto* discriminant_cmd = app.add_subcommand("discriminant", "periodic discriminant and bands");

    CLI11_PARSE(app, argc, argv);

    try {
        json cfg = load_config(config_path);
        if (predict->parsed()) return cmd_predict(cfg, out_path, stable);
        if (cumulants_cmd->parsed()) return cmd_cumulants(cfg, out_path, stable);
        if (sample_cmd->parsed()) return cmd_sample(cfg, out_path, stable, seed);
        if (szego->parsed()) return cmd_szego(cfg, out_path, stable);
        if (rightlimit->parsed()) return cmd_rightlimit(cfg, out_path, stable);
        if (discriminant_cmd->parsed()) return cmd_discriminant(cfg, out_path, stable);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const json::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }
    return kExitConfig;
}
