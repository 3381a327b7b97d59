#include "ncc/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "ncc/bias.hpp"
#include "ncc/estimators.hpp"
#include "ncc/rng.hpp"

namespace ncc::cli {

using nlohmann::json;

std::string format_double(double x) {
    if (std::isnan(x)) return "NA";
    if (std::isinf(x)) return x > 0 ? "Inf" : "-Inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace {

const std::set<std::string> kTopKeys = {"seed",           "replicates", "bootstrap_b", "workers",
                                        "grid",           "lambda_pattern", "scenarios"};
const std::set<std::string> kScenarioKeys = {"id",     "hypothesis", "n01",    "n11",    "n02",
                                             "n12",    "n22",        "alpha1", "alpha",  "sigma",
                                             "theta1", "theta2",     "trend_pattern", "lambda",
                                             "replicates", "bootstrap_b"};

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
    for (const auto& [key, value] : obj.items())
        if (!allowed.contains(key)) throw ConfigError("unknown key '" + key + "' in " + where);
}

template <class T>
T get(const json& obj, const char* key, T fallback, const std::string& where) {
    if (!obj.contains(key)) return fallback;
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(where + ": bad value for '" + key + "': " + e.what());
    }
}

Scenario parse_scenario(const json& obj, std::size_t index) {
    const std::string where = "scenarios[" + std::to_string(index) + "]";
    if (!obj.is_object()) throw ConfigError(where + " must be an object");
    reject_unknown(obj, kScenarioKeys, where);

    Scenario s;
    s.id = get<std::string>(obj, "id", "scenario-" + std::to_string(index), where);
    s.hypothesis = parse_hypothesis(get<std::string>(obj, "hypothesis", "null", where));
    auto& d = s.design;
    d.n01 = get(obj, "n01", d.n01, where);
    d.n11 = get(obj, "n11", d.n11, where);
    d.n02 = get(obj, "n02", d.n02, where);
    d.n12 = get(obj, "n12", d.n12, where);
    d.n22 = get(obj, "n22", d.n22, where);
    d.alpha1 = get(obj, "alpha1", d.alpha1, where);
    d.alpha = get(obj, "alpha", d.alpha, where);
    d.sigma = get(obj, "sigma", d.sigma, where);
    d.theta1 = get(obj, "theta1", d.theta1, where);
    d.theta2 = get(obj, "theta2", s.hypothesis == Hypothesis::alternative ? kAlternativeTheta2 : 0.0, where);
    d.trend.pattern = parse_trend_pattern(get<std::string>(obj, "trend_pattern", "none", where));
    d.trend.lambda = get(obj, "lambda", 0.0, where);
    s.replicates = get(obj, "replicates", 0, where);
    s.bootstrap_b = get(obj, "bootstrap_b", -1, where);
    return s;
}

}  // namespace

RunPlan parse_config_text(std::string_view text, const RunConfig& flags) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("parse error: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("scenario file must be a JSON object");
    reject_unknown(doc, kTopKeys, "scenario file");

    RunPlan plan;
    plan.config = flags;
    auto& cfg = plan.config;
    if (!cfg.seed && doc.contains("seed")) cfg.seed = get<std::uint64_t>(doc, "seed", 0, "scenario file");
    if (!cfg.seed) throw ConfigError("seed is required (set \"seed\" in the file or pass --seed)");

    const int file_reps = get(doc, "replicates", 1000, "scenario file");
    const int file_b = get(doc, "bootstrap_b", 0, "scenario file");
    if (!cfg.workers) cfg.workers = get(doc, "workers", 1, "scenario file");

    const bool has_grid = doc.contains("grid");
    const bool has_list = doc.contains("scenarios");
    if (has_grid == has_list) throw ConfigError("scenario file needs exactly one of 'grid' or 'scenarios'");

    if (has_grid) {
        const auto name = get<std::string>(doc, "grid", "", "scenario file");
        if (name != "table1") throw ConfigError("unknown grid preset '" + name + "'");
        GridOptions opt;
        opt.lambda_pattern = parse_trend_pattern(get<std::string>(doc, "lambda_pattern", "linear", "scenario file"));
        opt.replicates = file_reps;
        opt.bootstrap_b = file_b;
        plan.scenarios = table1_grid(opt);
    } else {
        if (doc.contains("lambda_pattern")) throw ConfigError("'lambda_pattern' applies only to grid presets");
        const auto& list = doc.at("scenarios");
        if (!list.is_array() || list.empty()) throw ConfigError("'scenarios' must be a non-empty list");
        std::set<std::string> ids;
        for (std::size_t i = 0; i < list.size(); ++i) {
            auto s = parse_scenario(list[i], i);
            if (s.replicates == 0) s.replicates = file_reps;
            if (s.bootstrap_b < 0) s.bootstrap_b = file_b;
            if (!ids.insert(s.id).second) throw ConfigError("duplicate scenario id '" + s.id + "'");
            plan.scenarios.push_back(std::move(s));
        }
    }

    for (auto& s : plan.scenarios) {
        if (cfg.replicates) s.replicates = *cfg.replicates;
        if (cfg.bootstrap_b) s.bootstrap_b = *cfg.bootstrap_b;
        try {
            validate(s);
        } catch (const ValidationError& e) {
            throw ConfigError("scenario '" + s.id + "': " + e.what());
        }
    }
    if (*cfg.workers < 1) throw ConfigError("workers must be at least 1");
    return plan;
}

RunPlan parse_config(const std::filesystem::path& file, RunConfig flags) {
    std::ifstream in(file);
    if (!in) throw ConfigError("cannot open scenario file " + file.string());
    std::stringstream ss;
    ss << in.rdbuf();
    flags.scenario_file = file;
    return parse_config_text(ss.str(), flags);
}

const std::vector<std::string> kResultColumns = {
    "scenario_id", "hypothesis", "alpha1", "r",      "a",              "lambda", "trend_pattern",
    "n01",         "n11",        "n02",    "n12",    "n22",            "method", "statistic_name",
    "value",       "mc_se",      "n_replicates",     "n_continuing"};

namespace {

constexpr std::array<Statistic, kNumStatistics> kStatistics = {
    Statistic::marginal_bias,           Statistic::conditional_bias,
    Statistic::marginal_rmse,           Statistic::conditional_rmse,
    Statistic::marginal_rejection_rate, Statistic::conditional_rejection_rate,
    Statistic::continuation_frequency};

template <class Fn>
void for_each_row(const std::vector<OperatingCharacteristics>& results, Fn&& fn) {
    for (const auto& oc : results)
        for (const auto& mc : oc.methods)
            for (Statistic st : kStatistics) fn(oc, mc, st, mc[st]);
}

std::string csv_opt(const std::optional<double>& v) { return v ? format_double(*v) : "NA"; }

json json_opt(const std::optional<double>& v) {
    if (!v || !std::isfinite(*v)) return nullptr;
    return *v;
}

}  // namespace

void write_results_csv(std::ostream& os, const std::vector<OperatingCharacteristics>& results) {
    for (std::size_t i = 0; i < kResultColumns.size(); ++i) os << (i ? "," : "") << kResultColumns[i];
    os << '\n';
    for_each_row(results, [&](const OperatingCharacteristics& oc, const MethodCharacteristics& mc, Statistic st,
                              const Estimate& e) {
        const auto& d = oc.scenario.design;
        os << oc.scenario.id << ',' << to_string(oc.scenario.hypothesis) << ',' << format_double(d.alpha1) << ','
           << format_double(d.period_ratio()) << ',' << format_double(d.allocation_ratio()) << ','
           << format_double(d.trend.lambda) << ',' << to_string(d.trend.pattern) << ',' << d.n01 << ',' << d.n11
           << ',' << d.n02 << ',' << d.n12 << ',' << d.n22 << ',' << to_string(mc.method) << ',' << to_string(st)
           << ',' << csv_opt(e.value) << ',' << csv_opt(e.mc_se) << ',' << oc.n_replicates << ','
           << oc.n_continuing << '\n';
    });
}

void write_results_json(std::ostream& os, const std::vector<OperatingCharacteristics>& results) {
    json rows = json::array();
    for_each_row(results, [&](const OperatingCharacteristics& oc, const MethodCharacteristics& mc, Statistic st,
                              const Estimate& e) {
        const auto& d = oc.scenario.design;
        rows.push_back({{"scenario_id", oc.scenario.id},
                        {"hypothesis", to_string(oc.scenario.hypothesis)},
                        {"alpha1", d.alpha1},
                        {"r", d.period_ratio()},
                        {"a", d.allocation_ratio()},
                        {"lambda", d.trend.lambda},
                        {"trend_pattern", to_string(d.trend.pattern)},
                        {"n01", d.n01},
                        {"n11", d.n11},
                        {"n02", d.n02},
                        {"n12", d.n12},
                        {"n22", d.n22},
                        {"method", to_string(mc.method)},
                        {"statistic_name", to_string(st)},
                        {"value", json_opt(e.value)},
                        {"mc_se", json_opt(e.mc_se)},
                        {"n_replicates", oc.n_replicates},
                        {"n_continuing", oc.n_continuing}});
    });
    os << rows.dump(2) << '\n';
}

void emit_results(const std::vector<OperatingCharacteristics>& results, const std::filesystem::path& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory " + out_dir.string() + ": " + ec.message());
    auto write = [&](const char* name, auto&& writer) {
        const auto path = out_dir / name;
        std::ofstream out(path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + path.string());
        writer(out, results);
        if (!out) throw std::runtime_error("write failed for " + path.string());
    };
    write("results.csv", write_results_csv);
    write("results.json", write_results_json);
}

AnalyticGrid AnalyticGrid::defaults() {
    AnalyticGrid g;
    g.alpha1.push_back(0.001);
    for (int i = 1; i <= 99; ++i) g.alpha1.push_back(i / 100.0);
    g.alpha1.push_back(0.999);
    g.r = {1.0 / 15, 1.0 / 10, 1.0 / 6, 1.0 / 5, 1.0 / 3, 0.5, 2.0 / 3, 1, 1.5, 2, 3, 4, 5, 7, 10};
    g.a = g.r;
    return g;
}

std::vector<AnalyticRow> analytic_rows(const AnalyticGrid& grid) {
    constexpr int base = 150;
    std::vector<AnalyticRow> rows;
    auto add = [&](char panel, double alpha1, double r, double a, int n01, int n11, int n02, int n12) {
        DesignConfig d;
        d.n01 = n01;
        d.n11 = n11;
        d.n02 = n02;
        d.n12 = n12;
        d.alpha1 = alpha1;
        d.sigma = grid.sigma;
        d.theta1 = grid.theta1;
        const auto in = BiasInputs::from_design(d);
        AnalyticRow row{panel, alpha1, r, a, grid.theta1, n01, n11, n02, n12,
                        in.rho, bias::stop_probability(in), bias::marginal(in), std::nullopt};
        try {
            row.conditional_bias = bias::conditional(in);
        } catch (const DegenerateProbabilityError&) {
        }
        rows.push_back(row);
    };
    for (double a1 : grid.alpha1) add('A', a1, 1, 1, base, base, base, base);
    for (double r : grid.r) {
        const int n1 = int(std::lround(r * base));
        add('B', 0.5, r, 1, n1, n1, base, base);
    }
    for (double a : grid.a) {
        const int n1 = int(std::lround(a * base));
        add('C', 0.5, 1, a, base, n1, base, n1);
    }
    return rows;
}

void write_analytic_csv(std::ostream& os, const std::vector<AnalyticRow>& rows) {
    os << "panel,alpha1,r,a,theta1,n01,n11,n02,n12,rho,stop_probability,marginal_bias,conditional_bias\n";
    for (const auto& r : rows) {
        os << r.panel << ',' << format_double(r.alpha1) << ',' << format_double(r.r) << ',' << format_double(r.a)
           << ',' << format_double(r.theta1) << ',' << r.n01 << ',' << r.n11 << ',' << r.n02 << ',' << r.n12 << ','
           << format_double(r.rho) << ',' << format_double(r.stop_probability) << ','
           << format_double(r.marginal_bias) << ',' << csv_opt(r.conditional_bias) << '\n';
    }
}

SingleTrace trace_single(const Scenario& scenario, std::uint64_t master_seed, std::int64_t replicate) {
    validate(scenario);
    const auto& design = scenario.design;
    const auto seed = replicate_seed(scenario, master_seed, replicate);
    const auto period1 = simulate_period1(design, seed);
    SingleTrace t;
    t.interim = interim_z(period1.summary(), design);
    t.data = complete_period2(period1, design, seed, t.interim.continued);
    const auto& cells = t.data.summary();
    t.rho = ncc_weight(cells.count(Cell::c01), cells.count(Cell::c02), cells.count(Cell::c11),
                       cells.count(Cell::c12));
    t.separate = separate_estimate(cells);
    if (t.interim.continued) t.model_based = model_based_estimate(cells);
    t.result = run_replicate(scenario, master_seed, replicate);
    return t;
}

void print_trace(std::ostream& os, const Scenario& scenario, const SingleTrace& t) {
    const auto& cells = t.data.summary();
    os << "scenario " << scenario.id << '\n';
    static constexpr const char* names[] = {"01", "11", "02", "12", "22"};
    for (int k = 0; k < kNumCells; ++k)
        os << "cell " << names[k] << ": n=" << cells.n[k] << " mean=" << format_double(cells.mean[k]) << '\n';
    os << "z11 " << format_double(t.interim.z11) << '\n'
       << "c1 " << format_double(t.interim.c1) << '\n'
       << "decision " << (t.interim.continued ? "continue" : "stop") << '\n'
       << "rho " << format_double(t.rho) << '\n'
       << "separate_estimate " << format_double(t.separate) << '\n'
       << "model_based_estimate " << (t.model_based ? format_double(*t.model_based) : "NA") << '\n';
    for (Theta1Method m : kTheta1Methods)
        os << "theta1_" << to_string(m) << ' ' << format_double(t.result.theta1[int(m)]) << '\n';
    if (t.result.failed) {
        os << "error " << t.result.error << '\n';
        return;
    }
    os << "method estimate bias_correction t_statistic rejected\n";
    for (const auto& r : t.result.records)
        os << to_string(r.method) << ' ' << format_double(r.estimate) << ' ' << format_double(r.bias_correction)
           << (r.correction_capped ? "(capped)" : "") << ' '
           << (r.tested() ? format_double(r.t_statistic) : "NA") << ' '
           << (r.tested() ? (r.rejected ? "yes" : "no") : "NA") << '\n';
}

}  // namespace ncc::cli
