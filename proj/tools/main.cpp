// fpp — command-line front end: special-function evaluation, exact laws and
// samplers, rate-function tables, entropy profiles, LDP decay profiles and
// the importance-sampling ruin estimator. Emits plot-ready CSV or JSON with
// the full effective configuration echoed into the output metadata.

#include <CLI11.hpp>
#include <json.hpp>

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "fpp/entropy.hpp"
#include "fpp/laws.hpp"
#include "fpp/mittag_leffler.hpp"
#include "fpp/parallel.hpp"
#include "fpp/rates.hpp"
#include "fpp/rng.hpp"
#include "fpp/ruin.hpp"
#include "fpp/simulate.hpp"

namespace {

// Exit codes: 0 ok, 2 validation error, 3 numeric/domain error,
// 4 insufficient replications.
constexpr int kExitValidation = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitInsufficient = 4;

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fmt(const fpp::ExtendedReal& v) {
    return v.is_infinite() ? "inf" : fmt(v.finite_value());
}

std::string fmt(std::uint64_t v) { return std::to_string(v); }
std::string fmt(std::int64_t v) { return std::to_string(v); }

std::string csv_quote(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

using KvList = std::vector<std::pair<std::string, std::string>>;

// One table of output: config metadata, column header, rows, summary.
struct Table {
    KvList config;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    KvList summary;

    void add_row(std::vector<std::string> r) { rows.push_back(std::move(r)); }

    void write_csv(std::ostream& os) const {
        for (const auto& [k, v] : config) os << "# config " << k << "=" << v << "\n";
        for (std::size_t i = 0; i < columns.size(); ++i) {
            os << (i ? "," : "") << csv_quote(columns[i]);
        }
        os << "\n";
        for (const auto& row : rows) {
            for (std::size_t i = 0; i < row.size(); ++i) {
                os << (i ? "," : "") << csv_quote(row[i]);
            }
            os << "\n";
        }
        for (const auto& [k, v] : summary) os << "# summary " << k << "=" << v << "\n";
    }

    void write_json(std::ostream& os) const {
        nlohmann::ordered_json j;
        j["config"] = nlohmann::ordered_json::object();
        for (const auto& [k, v] : config) j["config"][k] = v;
        j["rows"] = nlohmann::ordered_json::array();
        for (const auto& row : rows) {
            nlohmann::ordered_json r;
            for (std::size_t i = 0; i < columns.size() && i < row.size(); ++i) {
                r[columns[i]] = row[i];
            }
            j["rows"].push_back(std::move(r));
        }
        j["summary"] = nlohmann::ordered_json::object();
        for (const auto& [k, v] : summary) j["summary"][k] = v;
        os << j.dump(2) << "\n";
    }
};

struct OutputOptions {
    std::string format;  // csv | json | plain
    std::string path;    // "-" means stdout
};

void add_output_flags(CLI::App* cmd, OutputOptions& out, const std::string& default_format) {
    out.format = default_format;
    out.path = "-";
    cmd->add_option("--format", out.format, "Output format")
        ->check(CLI::IsMember({"csv", "json", "plain"}))
        ->capture_default_str();
    cmd->add_option("--output", out.path, "Output path ('-' for stdout)")
        ->capture_default_str();
}

void emit(const Table& table, const OutputOptions& out, const std::string& plain_value = "") {
    std::ofstream file;
    std::ostream* os = &std::cout;
    if (out.path != "-") {
        file.open(out.path);
        if (!file) throw std::invalid_argument("cannot open output path: " + out.path);
        os = &file;
    }
    if (out.format == "plain") {
        *os << plain_value << "\n";
    } else if (out.format == "json") {
        table.write_json(*os);
    } else {
        table.write_csv(*os);
    }
}

fpp::ClaimLaw parse_claims(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    try {
        if (parts.size() == 2 && (parts[0] == "exp" || parts[0] == "exponential")) {
            return fpp::ClaimLaw::exponential(std::stod(parts[1]));
        }
        if (parts.size() == 3 && parts[0] == "gamma") {
            return fpp::ClaimLaw::gamma(std::stod(parts[1]), std::stod(parts[2]));
        }
        if (parts.size() == 2 && (parts[0] == "det" || parts[0] == "deterministic")) {
            return fpp::ClaimLaw::deterministic(std::stod(parts[1]));
        }
    } catch (const std::invalid_argument&) {
    }
    throw std::invalid_argument(
        "claims must look like exp:<mu>, gamma:<shape>:<rate> or det:<m>, got '" + text + "'");
}

double chi_squared_sf(double x, double df) {
    return boost::math::gamma_q(df / 2.0, x / 2.0);
}

// Pulls `--config <file>` out of the raw arguments and merges the file's
// flat key=value lines below them: a key already present on the command line
// is ignored, so flags win. Merged keys are appended as --key=value tokens
// inside the subcommand scope.
std::vector<std::string> merge_config_args(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    std::string config_path;
    for (std::size_t i = 0; i < args.size();) {
        if (args[i] == "--config") {
            if (i + 1 >= args.size()) {
                throw std::invalid_argument("--config needs a file path");
            }
            config_path = args[i + 1];
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i),
                       args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
        } else if (args[i].rfind("--config=", 0) == 0) {
            config_path = args[i].substr(9);
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
        } else {
            ++i;
        }
    }
    if (config_path.empty()) return args;

    std::ifstream file(config_path);
    if (!file) throw std::invalid_argument("cannot read config file: " + config_path);
    std::string line;
    while (std::getline(file, line)) {
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::size_t eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            std::size_t a = s.find_first_not_of(" \t\r");
            std::size_t b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty()) continue;
        std::string flag = "--" + key;
        bool already_given = false;
        for (const std::string& a : args) {
            if (a == flag || a.rfind(flag + "=", 0) == 0) {
                already_given = true;
                break;
            }
        }
        if (!already_given) args.push_back(flag + "=" + value);
    }
    return args;
}

// ---------------------------------------------------------------------------

int run_ml_eval(double alpha, double beta, std::optional<double> gamma, double z,
                bool log_scale, double guard, const OutputOptions& out) {
    fpp::SeriesOptions opt;
    opt.guard = guard;
    double value;
    if (log_scale) {
        if (gamma) throw std::invalid_argument("--log supports the plain function only");
        value = fpp::log_mittag_leffler(alpha, beta, z, opt);
    } else if (gamma) {
        value = fpp::mittag_leffler_generalized(alpha, beta, *gamma, z, opt);
    } else {
        value = fpp::mittag_leffler(alpha, beta, z, opt);
    }

    Table t;
    t.config = {{"subcommand", "ml-eval"},
                {"alpha", fmt(alpha)},
                {"beta", fmt(beta)},
                {"gamma", gamma ? fmt(*gamma) : "none"},
                {"z", fmt(z)},
                {"log", log_scale ? "true" : "false"},
                {"guard", fmt(guard)}};
    t.columns = {"alpha", "beta", "gamma", "z", "value"};
    t.add_row({fmt(alpha), fmt(beta), gamma ? fmt(*gamma) : "", fmt(z), fmt(value)});
    emit(t, out, fmt(value));
    return 0;
}

int run_pmf(double nu, double lambda, double tval, std::optional<std::int64_t> k_max,
            const OutputOptions& out) {
    fpp::WeightedPoissonLaw law(nu, lambda, tval);
    std::int64_t horizon = k_max.value_or(law.truncation_horizon());

    Table t;
    t.config = {{"subcommand", "pmf"}, {"nu", fmt(nu)},      {"lambda", fmt(lambda)},
                {"t", fmt(tval)},      {"k_max", fmt(horizon)}};
    t.columns = {"k", "pmf", "log_pmf", "cum"};
    double cum = 0.0;
    for (std::int64_t k = 0; k <= horizon; ++k) {
        double lp = law.log_pmf(k);
        cum += std::exp(lp);
        t.add_row({fmt(k), fmt(std::exp(lp)), fmt(lp), fmt(cum)});
    }
    t.summary = {{"mean", fmt(law.mean())}, {"cum_mass", fmt(cum)}};
    emit(t, out);
    return 0;
}

int run_sample(const std::string& kind, double nu, double h, double lambda,
               double tval, std::uint64_t n, std::uint64_t seed,
               const OutputOptions& out) {
    Table t;
    t.config = {{"subcommand", "sample"}, {"kind", kind},          {"nu", fmt(nu)},
                {"h", fmt(h)},            {"lambda", fmt(lambda)}, {"t", fmt(tval)},
                {"n", fmt(n)},            {"seed", fmt(seed)}};
    t.columns = {"index", "value"};
    std::vector<double> values(n);
    for (std::uint64_t i = 0; i < n; ++i) {
        fpp::RngStream g = fpp::substream(seed, i);
        double v;
        if (kind == "holding") {
            v = fpp::sample_holding_time({nu, h, lambda}, g);
        } else if (kind == "stable") {
            v = fpp::sample_positive_stable(nu, g);
        } else if (kind == "wp") {
            fpp::WeightedPoissonLaw law(nu, lambda, tval);
            v = static_cast<double>(law.sample(g));
        } else {  // count
            v = static_cast<double>(fpp::simulate_count({nu, h, lambda}, tval, g));
        }
        values[i] = v;
        t.add_row({fmt(i), fmt(v)});
    }
    double mean, se;
    fpp::mean_and_std_error(values, mean, se);
    t.summary = {{"mean", fmt(mean)}, {"std_error", fmt(se)}};
    emit(t, out);
    return 0;
}

int run_rate(const std::string& family, double nu, double h, double lambda,
             const std::vector<double>& xs, const OutputOptions& out) {
    Table t;
    t.config = {{"subcommand", "rate"}, {"family", family},      {"nu", fmt(nu)},
                {"h", fmt(h)},          {"lambda", fmt(lambda)}};
    {
        std::string xlist;
        for (std::size_t i = 0; i < xs.size(); ++i) xlist += (i ? ";" : "") + fmt(xs[i]);
        t.config.emplace_back("x", xlist);
    }
    t.columns = {"x", "value", "method", "optimizer_location"};
    for (double x : xs) {
        fpp::RateEvaluation r{x, fpp::ExtendedReal(0.0), fpp::RateMethod::numeric_conjugate,
                              std::nullopt};
        if (family == "count") {
            r = fpp::count_rate({nu, h, lambda}, x);
        } else if (family == "holding-mean") {
            r = fpp::holding_mean_rate({nu, h, lambda}, x);
        } else if (family == "weighted") {
            r = fpp::weighted_poisson_rate(nu, lambda, x);
        } else {  // composition
            r = fpp::composition_rate(lambda, x);
        }
        t.add_row({fmt(x), fmt(r.value), fpp::to_string(r.method),
                   r.optimizer_location ? fmt(*r.optimizer_location) : ""});
    }
    emit(t, out);
    return 0;
}

int run_entropy(double nu, double lambda1, double lambda2,
                const std::vector<double>& ts, const OutputOptions& out) {
    fpp::ExtendedReal limit = fpp::relative_entropy_rate(nu, lambda1, lambda2);

    Table t;
    t.config = {{"subcommand", "entropy"}, {"nu", fmt(nu)},
                {"lambda1", fmt(lambda1)}, {"lambda2", fmt(lambda2)}};
    {
        std::string tlist;
        for (std::size_t i = 0; i < ts.size(); ++i) tlist += (i ? ";" : "") + fmt(ts[i]);
        t.config.emplace_back("t", tlist);
    }
    t.columns = {"t", "H", "H_over_t", "limit", "gap"};
    for (double tv : ts) {
        fpp::ExtendedReal H = fpp::relative_entropy(nu, lambda1, lambda2, tv);
        if (H.is_infinite() || limit.is_infinite()) {
            t.add_row({fmt(tv), fmt(H), H.is_infinite() ? "inf" : fmt(H.finite_value() / tv),
                       fmt(limit), ""});
        } else {
            double ht = H.finite_value() / tv;
            t.add_row({fmt(tv), fmt(H), fmt(ht), fmt(limit),
                       fmt(std::abs(ht - limit.finite_value()))});
        }
    }
    t.summary = {{"limit", fmt(limit)}};
    emit(t, out);
    return 0;
}

int run_ldp_profile(const std::string& kind, double nu, double h, double lambda,
                    double x, const std::vector<double>& ts, std::uint64_t n_rep,
                    std::uint64_t seed, const OutputOptions& out) {
    fpp::ExtendedReal limit = kind == "renewal"
                                  ? fpp::count_rate({nu, h, lambda}, x).value
                                  : fpp::weighted_poisson_rate(nu, lambda, x).value;
    std::vector<fpp::ProfilePoint> prof;
    if (kind == "renewal") {
        prof = fpp::ldp_profile_renewal({nu, h, lambda}, x, ts, n_rep, seed);
    } else {
        prof = fpp::ldp_profile_weighted(nu, lambda, x, ts);
    }

    Table t;
    t.config = {{"subcommand", "ldp-profile"}, {"kind", kind},
                {"nu", fmt(nu)},               {"h", fmt(h)},
                {"lambda", fmt(lambda)},       {"x", fmt(x)},
                {"n_rep", fmt(n_rep)},         {"seed", fmt(seed)}};
    {
        std::string tlist;
        for (std::size_t i = 0; i < ts.size(); ++i) tlist += (i ? ";" : "") + fmt(ts[i]);
        t.config.emplace_back("t", tlist);
    }
    t.columns = {"t", "estimate", "stderr_or_bound_flag", "limit", "gap"};
    for (const auto& p : prof) {
        std::string flag = p.is_bound ? "bound" : fmt(p.std_error);
        std::string gap = limit.is_finite() ? fmt(std::abs(p.value - limit.finite_value())) : "";
        t.add_row({fmt(p.t), fmt(p.value), flag, fmt(limit), gap});
    }
    emit(t, out);
    return 0;
}

int run_compare_subordinated(double lambda, double tval, std::uint64_t n_rep,
                             std::uint64_t seed, std::optional<std::int64_t> k_max,
                             const OutputOptions& out) {
    // Exact pmf up to 99% mass (plus an overflow bin for the chi-square).
    std::vector<double> exact;
    double cum = 0.0;
    std::int64_t k99 = 0;
    for (std::int64_t k = 0;; ++k) {
        exact.push_back(fpp::subordinated_pmf(lambda, tval, k));
        cum += exact.back();
        if ((!k_max && cum >= 0.99) || (k_max && k >= *k_max)) {
            k99 = k;
            break;
        }
        if (k > 100000) throw std::runtime_error("compare-subordinated: k grid blew up");
    }

    std::vector<std::uint64_t> counts(static_cast<std::size_t>(k99) + 2, 0);
    fpp::FracParams p{0.5, 1.0, lambda};
    for (std::uint64_t i = 0; i < n_rep; ++i) {
        fpp::RngStream g = fpp::substream(seed, i);
        std::int64_t c = fpp::simulate_count(p, tval, g);
        ++counts[static_cast<std::size_t>(std::min(c, k99 + 1))];
    }

    Table t;
    t.config = {{"subcommand", "compare-subordinated"},
                {"lambda", fmt(lambda)},
                {"t", fmt(tval)},
                {"n_rep", fmt(n_rep)},
                {"seed", fmt(seed)},
                {"k_max", fmt(k99)}};
    t.columns = {"k", "empirical_pmf", "exact_pmf"};
    double chi2 = 0.0;
    for (std::int64_t k = 0; k <= k99; ++k) {
        double emp = static_cast<double>(counts[static_cast<std::size_t>(k)]) /
                     static_cast<double>(n_rep);
        t.add_row({fmt(k), fmt(emp), fmt(exact[static_cast<std::size_t>(k)])});
        double expected = exact[static_cast<std::size_t>(k)] * static_cast<double>(n_rep);
        double observed = static_cast<double>(counts[static_cast<std::size_t>(k)]);
        chi2 += (observed - expected) * (observed - expected) / expected;
    }
    {
        double expected = (1.0 - cum) * static_cast<double>(n_rep);
        double observed = static_cast<double>(counts.back());
        if (expected > 0.0) {
            chi2 += (observed - expected) * (observed - expected) / expected;
        }
    }
    double df = static_cast<double>(k99 + 1);  // bins 0..k99 plus overflow, minus one
    double p_value = chi_squared_sf(chi2, df);
    t.summary = {{"chi2", fmt(chi2)}, {"df", fmt(df)}, {"p_value", fmt(p_value)}};
    emit(t, out);
    return 0;
}

int run_ruin(double nu, double h, double lambda, double c, const std::string& claims_text,
             const std::vector<double>& us, std::uint64_t n_rep, std::uint64_t seed,
             std::uint64_t step_cap, bool with_crude, std::uint64_t crude_n_rep,
             std::uint64_t crude_horizon, const OutputOptions& out) {
    fpp::RuinModel model{{nu, h, lambda}, c, parse_claims(claims_text)};

    std::vector<fpp::RuinIsResult> results;
    double slope = 0.0, rel_gap = 0.0, w = 0.0;
    bool have_slope = us.size() >= 3;
    if (have_slope) {
        fpp::SlopeCheck sc = fpp::lundberg_slope_check(model, us, n_rep, seed);
        results = std::move(sc.per_u);
        slope = sc.slope;
        rel_gap = sc.rel_gap;
        w = sc.lundberg_exponent;
    } else {
        w = fpp::lundberg_root(model);
        for (std::size_t j = 0; j < us.size(); ++j) {
            results.push_back(fpp::estimate_ruin_importance(
                model, us[j], n_rep, fpp::derive_seed(seed, j), 0, step_cap));
        }
    }

    Table t;
    t.config = {{"subcommand", "ruin"},   {"nu", fmt(nu)},
                {"h", fmt(h)},            {"lambda", fmt(lambda)},
                {"c", fmt(c)},            {"claims", model.claims.describe()},
                {"n_rep", fmt(n_rep)},    {"seed", fmt(seed)},
                {"step_cap", fmt(step_cap)},
                {"crude", with_crude ? "true" : "false"},
                {"crude_n_rep", fmt(crude_n_rep)},
                {"crude_horizon", fmt(crude_horizon)}};
    {
        std::string ulist;
        for (std::size_t i = 0; i < us.size(); ++i) ulist += (i ? ";" : "") + fmt(us[i]);
        t.config.emplace_back("u", ulist);
    }
    t.columns = {"u", "estimate", "std_error", "acceptance_rate",
                 "crude_estimate", "crude_std_error", "crude_hits"};
    for (std::size_t j = 0; j < us.size(); ++j) {
        std::vector<std::string> row{fmt(us[j]), fmt(results[j].estimate.value),
                                     fmt(results[j].estimate.std_error),
                                     fmt(results[j].acceptance_rate), "", "", ""};
        if (with_crude) {
            fpp::RuinCrudeResult cr = fpp::estimate_ruin_crude(
                model, us[j], crude_n_rep, crude_horizon, fpp::derive_seed(seed, 1000 + j));
            row[4] = fmt(cr.estimate.value);
            row[5] = fmt(cr.estimate.std_error);
            row[6] = fmt(cr.hits);
        }
        t.add_row(std::move(row));
    }
    t.summary = {{"w", fmt(w)}};
    if (have_slope) {
        t.summary.emplace_back("slope", fmt(slope));
        t.summary.emplace_back("rel_gap", fmt(rel_gap));
    }
    emit(t, out);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"fractional Poisson process toolkit"};
    app.require_subcommand(1);
    // --h is a model parameter, so help answers to --help only.
    app.set_help_flag("--help", "Print help");
    auto add_subcommand = [&app](const std::string& name, const std::string& desc) {
        CLI::App* sub = app.add_subcommand(name, desc);
        sub->set_help_flag("--help", "Print help");
        return sub;
    };
    app.footer("Any subcommand also accepts --config <file> with flat key=value\n"
               "lines; values from the file fill in options not given as flags.");

    // ml-eval ---------------------------------------------------------------
    auto* ml = add_subcommand("ml-eval", "Evaluate (generalized) Mittag-Leffler functions");
    double ml_alpha = 1.0, ml_beta = 1.0, ml_z = 0.0, ml_guard = 100.0;
    std::optional<double> ml_gamma;
    bool ml_log = false;
    OutputOptions ml_out;
    ml->add_option("--alpha", ml_alpha, "Series exponent step")->required();
    ml->add_option("--beta", ml_beta, "Offset in Gamma(alpha r + beta)")->required();
    ml->add_option("--gamma", ml_gamma, "Generalized order (omit for the plain function)");
    ml->add_option("--z", ml_z, "Argument")->required();
    ml->add_flag("--log", ml_log, "Return log E_{alpha,beta}(z), z >= 0");
    ml->add_option("--guard", ml_guard, "Series domain guard")->capture_default_str();
    add_output_flags(ml, ml_out, "plain");

    // pmf -------------------------------------------------------------------
    auto* pmf = add_subcommand("pmf", "Weighted-Poisson pmf table at fixed t");
    double pmf_nu = 0.5, pmf_lambda = 1.0, pmf_t = 1.0;
    std::optional<std::int64_t> pmf_kmax;
    OutputOptions pmf_out;
    pmf->add_option("--nu", pmf_nu, "Fractional order")->required();
    pmf->add_option("--lambda", pmf_lambda, "Rate")->required();
    pmf->add_option("--t", pmf_t, "Time")->required();
    pmf->add_option("--k-max", pmf_kmax, "Last k to print (default: truncation horizon)");
    add_output_flags(pmf, pmf_out, "csv");

    // sample ----------------------------------------------------------------
    auto* sample = add_subcommand("sample", "Draw from the exact laws");
    std::string sample_kind;
    double s_nu = 0.5, s_h = 1.0, s_lambda = 1.0, s_t = 1.0;
    std::uint64_t s_n = 10, s_seed = 12345;
    OutputOptions sample_out;
    sample->add_option("--kind", sample_kind, "holding | stable | wp | count")
        ->required()
        ->check(CLI::IsMember({"holding", "stable", "wp", "count"}));
    sample->add_option("--nu", s_nu, "Fractional order")->capture_default_str();
    sample->add_option("--h", s_h, "Generalized order")->capture_default_str();
    sample->add_option("--lambda", s_lambda, "Rate")->capture_default_str();
    sample->add_option("--t", s_t, "Time (wp and count kinds)")->capture_default_str();
    sample->add_option("--n", s_n, "Number of draws")->capture_default_str();
    sample->add_option("--seed", s_seed, "Seed")->capture_default_str();
    add_output_flags(sample, sample_out, "csv");

    // rate ------------------------------------------------------------------
    auto* rate = add_subcommand("rate", "Rate-function tables");
    std::string rate_family = "count";
    double r_nu = 0.5, r_h = 1.0, r_lambda = 1.0;
    std::vector<double> r_x;
    OutputOptions rate_out;
    rate->add_option("--family", rate_family, "count | holding-mean | weighted | composition")
        ->check(CLI::IsMember({"count", "holding-mean", "weighted", "composition"}))
        ->capture_default_str();
    rate->add_option("--nu", r_nu, "Fractional order")->capture_default_str();
    rate->add_option("--h", r_h, "Generalized order")->capture_default_str();
    rate->add_option("--lambda", r_lambda, "Rate")->capture_default_str();
    rate->add_option("--x", r_x, "Query points (comma separated)")
        ->required()
        ->delimiter(',');
    add_output_flags(rate, rate_out, "csv");

    // entropy ---------------------------------------------------------------
    auto* ent = add_subcommand("entropy", "Relative entropy between weighted-Poisson laws");
    double e_nu = 0.5, e_l1 = 1.0, e_l2 = 2.0;
    std::vector<double> e_t;
    OutputOptions ent_out;
    ent->add_option("--nu", e_nu, "Fractional order")->required();
    ent->add_option("--lambda1", e_l1, "First rate")->required();
    ent->add_option("--lambda2", e_l2, "Second rate")->required();
    ent->add_option("--t", e_t, "Times (comma separated; empty prints the limit only)")
        ->delimiter(',');
    add_output_flags(ent, ent_out, "csv");

    // ldp-profile -----------------------------------------------------------
    auto* ldp = add_subcommand("ldp-profile", "Decay profile -(1/t) log P(X_t/t >= x)");
    std::string ldp_kind;
    double l_nu = 0.5, l_h = 1.0, l_lambda = 1.0, l_x = 1.0;
    std::vector<double> l_t;
    std::uint64_t l_nrep = 100000, l_seed = 12345;
    OutputOptions ldp_out;
    ldp->add_option("--kind", ldp_kind, "renewal (Monte Carlo) | weighted (exact)")
        ->required()
        ->check(CLI::IsMember({"renewal", "weighted"}));
    ldp->add_option("--nu", l_nu, "Fractional order")->required();
    ldp->add_option("--h", l_h, "Generalized order")->capture_default_str();
    ldp->add_option("--lambda", l_lambda, "Rate")->required();
    ldp->add_option("--x", l_x, "Threshold")->required();
    ldp->add_option("--t", l_t, "Time grid (comma separated)")->required()->delimiter(',');
    ldp->add_option("--n-rep", l_nrep, "Replications per cell (renewal)")->capture_default_str();
    ldp->add_option("--seed", l_seed, "Seed")->capture_default_str();
    add_output_flags(ldp, ldp_out, "csv");

    // compare-subordinated ----------------------------------------------------
    auto* cmp = add_subcommand(
        "compare-subordinated",
        "Simulated count pmf (nu=1/2, h=1) against the Poisson-over-half-normal pmf");
    double c_lambda = 1.0, c_t = 1.0;
    std::uint64_t c_nrep = 100000, c_seed = 12345;
    std::optional<std::int64_t> c_kmax;
    OutputOptions cmp_out;
    cmp->add_option("--lambda", c_lambda, "Rate")->required();
    cmp->add_option("--t", c_t, "Time")->required();
    cmp->add_option("--n-rep", c_nrep, "Replications")->capture_default_str();
    cmp->add_option("--seed", c_seed, "Seed")->capture_default_str();
    cmp->add_option("--k-max", c_kmax, "Last pmf index (default: 99% mass)");
    add_output_flags(cmp, cmp_out, "csv");

    // ruin ------------------------------------------------------------------
    auto* ruin = add_subcommand("ruin", "Lundberg root and ruin-probability estimators");
    double ru_nu = 0.5, ru_h = 1.0, ru_lambda = 1.0, ru_c = 1.0;
    std::string ru_claims;
    std::vector<double> ru_u;
    std::uint64_t ru_nrep = 100000, ru_seed = 12345, ru_cap = 10000000;
    bool ru_crude = false;
    std::uint64_t ru_crude_nrep = 20000, ru_crude_horizon = 100000;
    OutputOptions ruin_out;
    ruin->add_option("--nu", ru_nu, "Fractional order")->required();
    ruin->add_option("--h", ru_h, "Generalized order")->capture_default_str();
    ruin->add_option("--lambda", ru_lambda, "Rate")->required();
    ruin->add_option("--c", ru_c, "Premium rate")->required();
    ruin->add_option("--claims", ru_claims, "exp:<mu> | gamma:<shape>:<rate> | det:<m>")
        ->required();
    ruin->add_option("--u", ru_u, "Initial capital grid (comma separated)")
        ->required()
        ->delimiter(',');
    ruin->add_option("--n-rep", ru_nrep, "IS replications per u")->capture_default_str();
    ruin->add_option("--seed", ru_seed, "Seed")->capture_default_str();
    ruin->add_option("--step-cap", ru_cap, "Per-replication step cap")->capture_default_str();
    ruin->add_flag("--crude", ru_crude, "Also run the crude (horizon-capped) estimator");
    ruin->add_option("--crude-n-rep", ru_crude_nrep, "Crude replications per u")
        ->capture_default_str();
    ruin->add_option("--crude-horizon", ru_crude_horizon, "Crude step horizon")
        ->capture_default_str();
    add_output_flags(ruin, ruin_out, "json");

    try {
        std::vector<std::string> args = merge_config_args(argc, argv);
        std::reverse(args.begin(), args.end());  // CLI11's vector overload pops from the back
        app.parse(std::move(args));
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitValidation;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }

    try {
        if (ml->parsed()) {
            return run_ml_eval(ml_alpha, ml_beta, ml_gamma, ml_z, ml_log, ml_guard, ml_out);
        }
        if (pmf->parsed()) return run_pmf(pmf_nu, pmf_lambda, pmf_t, pmf_kmax, pmf_out);
        if (sample->parsed()) {
            return run_sample(sample_kind, s_nu, s_h, s_lambda, s_t, s_n, s_seed, sample_out);
        }
        if (rate->parsed()) return run_rate(rate_family, r_nu, r_h, r_lambda, r_x, rate_out);
        if (ent->parsed()) return run_entropy(e_nu, e_l1, e_l2, e_t, ent_out);
        if (ldp->parsed()) {
            return run_ldp_profile(ldp_kind, l_nu, l_h, l_lambda, l_x, l_t, l_nrep, l_seed,
                                   ldp_out);
        }
        if (cmp->parsed()) {
            return run_compare_subordinated(c_lambda, c_t, c_nrep, c_seed, c_kmax, cmp_out);
        }
        if (ruin->parsed()) {
            return run_ruin(ru_nu, ru_h, ru_lambda, ru_c, ru_claims, ru_u, ru_nrep, ru_seed,
                            ru_cap, ru_crude, ru_crude_nrep, ru_crude_horizon, ruin_out);
        }
    } catch (const fpp::InsufficientReplicationsError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInsufficient;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    }
    return 0;
}
