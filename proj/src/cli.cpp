#include "tsmw/cli.hpp"

#include <chrono>
#include <exception>
#include <ctime>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "tsmw/errors.hpp"
#include "tsmw/oracle.hpp"
#include "tsmw/quantile.hpp"
#include "tsmw/report.hpp"
#include "tsmw/trial_csv.hpp"
#include "tsmw/validation.hpp"

namespace tsmw {

namespace {

constexpr std::uint64_t kDefaultSeed = 20240601;

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string to_string(PiSource s) {
    switch (s) {
        case PiSource::NullTable: return "null-table";
        case PiSource::File: return "file";
        case PiSource::Plugin: return "plugin";
        case PiSource::MonteCarlo: return "monte-carlo";
    }
    return "";
}

const SampleDesign& require_design(const RunConfig& c) {
    if (!c.design) throw InputError("this command needs a design: -m, -n, -M, -N");
    return *c.design;
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path + "'");
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw InputError("'" + path + "' is not valid JSON: " + e.what());
    }
}

Distribution treated_distribution(const RunConfig& c, const char* fallback) {
    return Distribution::parse(c.y_dist.value_or(fallback));
}

// Pattern probabilities for general mode. Exact sources fill `exact`; estimated ones fill `real`.
struct PiChoice {
    std::optional<PiVector<Rational>> exact;
    PiVector<double> real;
    Json detail = Json::object();
};

PiChoice choose_pi(const RunConfig& c) {
    PiChoice out;
    out.detail["source"] = to_string(c.pi_source);
    switch (c.pi_source) {
        case PiSource::NullTable:
            out.exact = null_pi_vector();
            break;
        case PiSource::File: {
            if (c.pi_file.empty()) throw InputError("--pi-source file needs --pi-file");
            const Json doc = read_json_file(c.pi_file);
            const ParsedPi parsed = parse_pi(doc.contains("pi") ? doc.at("pi") : doc);
            if (parsed.exact) out.exact = parsed.rational;
            out.real = parsed.real;
            check_pi_range(out.real);
            break;
        }
        case PiSource::Plugin: {
            if (c.data_path.empty()) throw InputError("--pi-source plugin needs --data");
            const TwoStageData data = read_trial_csv_file(c.data_path);
            out.exact = pi_plugin_from_data(data.pooled_x(), data.pooled_y());
            break;
        }
        case PiSource::MonteCarlo: {
            const Distribution x = Distribution::parse(c.x_dist);
            const Distribution y = treated_distribution(c, "uniform(0,1)");
            const std::uint64_t reps = c.pi_replications.value_or(1'000'000);
            const std::uint64_t seed = c.seed.value_or(kDefaultSeed);
            const PiEstimate est = pi_monte_carlo(x, y, reps, seed, c.threads);
            out.real = est.value;
            out.detail["x"] = x.describe();
            out.detail["y"] = y.describe();
            out.detail["replications"] = reps;
            out.detail["seed"] = seed;
            out.detail["standard_error"] = pi_json(est.standard_error, true);
            break;
        }
    }
    if (out.exact) out.real = to_double(*out.exact);
    return out;
}

// Moments for the moments and cumulants commands: exact when the inputs are exact.
struct MomentChoice {
    std::optional<MomentSet<Rational>> exact;
    MomentSet<double> real;
};

void fill_moments(const RunConfig& c, const SampleDesign& d, Json& report, MomentChoice& m) {
    report["mode"] = c.general ? "general" : "null";
    if (!c.general) {
        m.exact = moments_null(d);
    } else {
        const PiChoice pi = choose_pi(c);
        Json detail = pi.detail;
        if (pi.exact) {
            detail["values"] = pi_json(*pi.exact, c.as_float);
            m.exact = moments_general(d, *pi.exact);
        } else {
            detail["values"] = pi_json(pi.real, true);
            m.real = moments_general(d, pi.real);
        }
        report["pi"] = std::move(detail);
    }
    if (m.exact) m.real = to_double(*m.exact);
}

Json moments_section(const MomentChoice& m, bool as_float) {
    return m.exact ? moments_json(*m.exact, as_float) : moments_json(m.real, true);
}

Json shapes_json(const CumulantSet<double>& k) {
    Json out = Json::object();
    const std::pair<const char*, ShapeTarget> targets[] = {{"stage1", ShapeTarget::Stage1},
                                                           {"stage2", ShapeTarget::Stage2},
                                                           {"aggregate_paper", ShapeTarget::AggregatePaper},
                                                           {"aggregate_binomial", ShapeTarget::AggregateBinomial}};
    for (auto [name, target] : targets) {
        try {
            out[name] = shape_json(standardized_shape(k, target));
        } catch (const DegenerateError&) {
            out[name] = nullptr;
        }
    }
    return out;
}

template <class T>
Json aggregates_json(const CumulantSet<T>& k, bool as_float) {
    Json out = Json::object();
    for (AggregateWeighting w : {AggregateWeighting::Paper, AggregateWeighting::Binomial}) {
        const Aggregates<T> a = paper_aggregates(k, w);
        out[to_string(w)] = Json{{"k1", value_json(a.k1, as_float)},
                                 {"k2", value_json(a.k2, as_float)},
                                 {"k3", value_json(a.k3, as_float)},
                                 {"k4", value_json(a.k4, as_float)}};
    }
    return out;
}

Json pair_json(const CriticalValuePair& p, bool as_float) {
    Json j{{"method", to_string(p.method)}, {"c1", p.c1}, {"c2", p.c2}};
    if (p.achieved_size_exact) {
        j["achieved_size"] = value_json(*p.achieved_size_exact, as_float);
    } else if (p.achieved_size) {
        j["achieved_size"] = *p.achieved_size;
    }
    return j;
}

int cmd_moments(const RunConfig& c, Json& report) {
    const SampleDesign& d = require_design(c);
    report["design"] = design_json(d);
    MomentChoice m;
    fill_moments(c, d, report, m);
    report["moments"] = moments_section(m, c.as_float);
    return 0;
}

int cmd_cumulants(const RunConfig& c, Json& report) {
    MomentChoice m;
    if (!c.moments_report.empty()) {
        const Json source = read_json_file(c.moments_report);
        if (!source.contains("moments")) throw InputError("'" + c.moments_report + "' has no \"moments\" object");
        if (source.contains("design")) report["design"] = source.at("design");
        report["moments_report"] = c.moments_report;
        const ParsedMoments parsed = parse_moments(source.at("moments"));
        if (parsed.exact) {
            m.exact = parsed.rational;
            m.real = to_double(parsed.rational);
        } else {
            m.real = parsed.real;
        }
    } else {
        const SampleDesign& d = require_design(c);
        report["design"] = design_json(d);
        fill_moments(c, d, report, m);
    }
    if (m.exact) {
        const CumulantSet<Rational> k = mixed_cumulants(*m.exact);
        report["cumulants"] = cumulants_json(k, c.as_float);
        report["aggregates"] = aggregates_json(k, c.as_float);
    } else {
        const CumulantSet<double> k = mixed_cumulants(m.real);
        report["cumulants"] = cumulants_json(k, true);
        report["aggregates"] = aggregates_json(k, true);
    }
    report["shape"] = shapes_json(mixed_cumulants(m.real));
    return 0;
}

int cmd_critical_values(const RunConfig& c, Json& report) {
    const SampleDesign& d = require_design(c);
    report["design"] = design_json(d);
    report["alpha1"] = c.alpha1;
    report["alpha"] = c.alpha;

    bool within_budget = true;
    try {
        check_budget(d);
    } catch (const BudgetExceeded&) {
        within_budget = false;
    }
    const bool want_exact = c.method == "exact" || c.method == "both" || (c.method == "auto" && within_budget);
    const bool want_cf = c.method == "cf" || c.method == "both" || c.method == "auto";

    std::optional<JointPmf> pmf;
    if (want_exact) {
        if (c.general) throw InputError("exact critical values exist only under the null");
        pmf = exact_joint_pmf(d);
        report["exact"] = pair_json(critical_values_exact(*pmf, c.alpha1, c.alpha), c.as_float);
    }
    if (want_cf) {
        CfOptions options;
        options.continuity_correction = c.continuity_correction;
        if (c.general) {
            const PiChoice pi = choose_pi(c);
            options.pi = pi.real;
            Json detail = pi.detail;
            detail["values"] = pi_json(pi.real, true);
            report["pi"] = std::move(detail);
        }
        CriticalValuePair cf = critical_values_cf(d, c.alpha1, c.alpha, options);
        Json j = pair_json(cf, c.as_float);
        j["continuity_correction"] = c.continuity_correction;
        if (pmf) {
            j["null_size"] = value_json(overall_size_exact(*pmf, cf.c1, cf.c2), c.as_float);
        } else if (c.replications) {
            const SizeEstimate s =
                overall_size(d, cf, SizeMethod::MonteCarlo, *c.replications, c.seed.value_or(kDefaultSeed), c.threads);
            j["null_size"] = Json{{"estimate", s.value}, {"standard_error", s.standard_error}};
        }
        report["cornish_fisher"] = std::move(j);
    }

    if (c.aggregate != "none") {
        // Informational only: the aggregates mix both stages, so they yield a single quantile.
        const CumulantSet<double> k = mixed_cumulants(to_double(moments_null(d)));
        const ShapeTarget target = c.aggregate == "paper" ? ShapeTarget::AggregatePaper
                                                          : ShapeTarget::AggregateBinomial;
        const Shape s = standardized_shape(k, target);
        report["aggregate_quantiles"] =
            Json{{"weighting", c.aggregate},
                 {"shape", shape_json(s)},
                 {"quantile_1_minus_alpha1", cornish_fisher_quantile(s, 1 - c.alpha1)},
                 {"quantile_1_minus_alpha", cornish_fisher_quantile(s, 1 - c.alpha)}};
    }
    return 0;
}

int cmd_validate(const RunConfig& c, Json& report) {
    ValidationOptions options;
    options.tolerance = c.tolerance;
    options.threads = c.threads;
    ValidationMode mode = ValidationMode::NullExact;
    std::vector<SampleDesign> designs;
    if (c.monte_carlo) {
        mode = ValidationMode::GeneralMonteCarlo;
        designs.push_back(c.design.value_or(SampleDesign::make(3, 3, 6, 6)));
        options.controls = Distribution::parse(c.x_dist);
        options.treated = treated_distribution(c, "uniform(0,1)+0.3");
        if (c.pi_replications) options.pi_replications = *c.pi_replications;
        if (c.replications) options.simulation_replications = *c.replications;
        options.seed = c.seed.value_or(kDefaultSeed);
        report["x"] = options.controls.describe();
        report["y"] = options.treated.describe();
        report["pi_replications"] = options.pi_replications;
        report["replications"] = options.simulation_replications;
        report["seed"] = options.seed;
    } else {
        mode = c.general ? ValidationMode::GeneralReduction : ValidationMode::NullExact;
        designs = design_grid(c.max_total);
        report["max_total"] = c.max_total;
    }
    const ValidationReport v = validate_formulas(designs, mode, options);
    report["validation"] = validation_json(v);
    return v.mismatches() == 0 ? 0 : 1;
}

int cmd_simulate(const RunConfig& c, Json& report) {
    const SampleDesign& d = require_design(c);
    const Distribution x = Distribution::parse(c.x_dist);
    const Distribution y = treated_distribution(c, "uniform(0,1)");
    const std::uint64_t reps = c.replications.value_or(100'000);
    const std::uint64_t seed = c.seed.value_or(kDefaultSeed);
    const MomentEstimates est = simulate_joint(d, x, y, reps, seed, c.threads);
    report["design"] = design_json(d);
    report["x"] = x.describe();
    report["y"] = y.describe();
    report["replications"] = reps;
    report["seed"] = seed;
    Json estimates = Json::object();
    for (auto [a, b] : kMomentOrders) {
        estimates[moment_key(a, b)] = Json{{"value", est.values(a, b)}, {"standard_error", est.standard_errors(a, b)}};
    }
    report["estimates"] = std::move(estimates);
    return 0;
}

int cmd_test(const RunConfig& c, Json& report) {
    if (c.data_path.empty()) throw InputError("test needs --data");
    if (!c.c1 || !c.c2) throw InputError("test needs --c1 and --c2");
    const TwoStageData data = read_trial_csv_file(c.data_path);
    CriticalValuePair cv;
    cv.c1 = *c.c1;
    cv.c2 = *c.c2;
    const Count u1 = mann_whitney_u(data.x_stage1, data.y_stage1);
    const Decision decision = two_stage_decision(u1, [&] { return mann_whitney_u(data.pooled_x(), data.pooled_y()); }, cv);
    report["design"] = design_json(data.design());
    report["c1"] = cv.c1;
    report["c2"] = cv.c2;
    report["decision"] = to_string(decision.outcome);
    report["u1"] = decision.u1;
    report["u2"] = decision.u2 ? Json(*decision.u2) : Json(nullptr);
    return 0;
}

}  // namespace

int run(const RunConfig& c, std::ostream& out, std::ostream& err) {
    Json report;
    report["schema"] = kReportSchema;
    report["command"] = c.command;
    if (c.timestamp) report["generated_at"] = utc_timestamp();

    int code = 0;
    try {
        if (c.command == "moments") {
            code = cmd_moments(c, report);
        } else if (c.command == "cumulants") {
            code = cmd_cumulants(c, report);
        } else if (c.command == "critical-values") {
            code = cmd_critical_values(c, report);
        } else if (c.command == "validate") {
            code = cmd_validate(c, report);
        } else if (c.command == "simulate") {
            code = cmd_simulate(c, report);
        } else if (c.command == "test") {
            code = cmd_test(c, report);
        } else {
            throw InputError("unknown command '" + c.command + "'");
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    const std::string text = report.dump(2) + "\n";
    if (c.output_path) {
        std::ofstream file(*c.output_path);
        if (!file) {
            err << "error: cannot write '" << *c.output_path << "'\n";
            return 2;
        }
        file << text;
    } else {
        out << text;
    }
    return code;
}

int run_command_line(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Two-stage Mann-Whitney moments, cumulants and critical values"};
    app.require_subcommand(1);

    RunConfig config;
    config.threads = default_threads();
    std::optional<Count> m, n, M, N;
    std::string pi_source = "null-table";
    std::optional<std::uint64_t> seed, replications, pi_replications;
    std::optional<std::string> y_dist, output;
    std::optional<Count> c1, c2;
    bool no_timestamp = false, no_cc = false;

    auto add_design = [&](CLI::App* sub) {
        sub->add_option("-m", m, "stage-1 controls");
        sub->add_option("-n", n, "stage-1 treated");
        sub->add_option("-M", M, "total controls");
        sub->add_option("-N", N, "total treated");
    };
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("-o,--output", output, "write the report here instead of stdout");
        sub->add_flag("--float", config.as_float, "render exact values as floating point");
        sub->add_flag("--no-timestamp", no_timestamp, "omit generated_at for byte-identical reports");
        sub->add_option("--threads", config.threads, "worker threads")->check(CLI::PositiveNumber);
    };
    auto add_mode = [&](CLI::App* sub) {
        auto* null_flag = sub->add_flag("--null", "null hypothesis (default)");
        auto* gen_flag = sub->add_flag("--general", config.general, "general alternative");
        null_flag->excludes(gen_flag);
        sub->add_option("--pi-source", pi_source, "null-table, file, plugin or monte-carlo")
            ->check(CLI::IsMember({"null-table", "file", "plugin", "monte-carlo"}));
        sub->add_option("--pi-file", config.pi_file, "JSON object with pi0 .. pi13");
        sub->add_option("--data", config.data_path, "trial CSV for plug-in estimates");
    };
    auto add_sampling = [&](CLI::App* sub) {
        sub->add_option("--seed", seed, "random seed");
        sub->add_option("--replications", replications, "simulation replications");
        sub->add_option("--pi-replications", pi_replications, "replications for pattern probabilities");
        sub->add_option("--x-dist", config.x_dist, "control distribution, e.g. uniform(0,1)");
        sub->add_option("--y-dist", y_dist, "treated distribution, e.g. uniform(0,1)+0.3");
    };

    auto* moments = app.add_subcommand("moments", "joint raw moments up to order 4");
    add_design(moments);
    add_mode(moments);
    add_sampling(moments);
    add_common(moments);

    auto* cumulants = app.add_subcommand("cumulants", "mixed cumulants and aggregates");
    add_design(cumulants);
    add_mode(cumulants);
    add_sampling(cumulants);
    add_common(cumulants);
    cumulants->add_option("--moments-report", config.moments_report, "read moments from a moments report");

    auto* critical = app.add_subcommand("critical-values", "two-stage critical values");
    add_design(critical);
    add_mode(critical);
    add_sampling(critical);
    add_common(critical);
    critical->add_option("--alpha1", config.alpha1, "stage-1 size")->capture_default_str();
    critical->add_option("--alpha", config.alpha, "overall size")->capture_default_str();
    critical->add_option("--method", config.method, "exact, cf, both or auto")
        ->check(CLI::IsMember({"exact", "cf", "both", "auto"}))
        ->capture_default_str();
    critical->add_flag("--no-continuity-correction", no_cc, "plain ceiling of the Cornish-Fisher quantile");
    critical->add_option("--aggregate", config.aggregate, "also report quantiles of the paper or binomial aggregate")
        ->check(CLI::IsMember({"none", "paper", "binomial"}));

    auto* validate = app.add_subcommand("validate", "check closed forms against the oracles");
    add_design(validate);
    add_sampling(validate);
    add_common(validate);
    auto* v_null = validate->add_flag("--null", "null closed forms vs enumeration (default)");
    auto* v_gen = validate->add_flag("--general", config.general, "general closed forms at null pi vs enumeration");
    auto* v_mc = validate->add_flag("--monte-carlo", config.monte_carlo, "general closed forms vs simulation");
    v_null->excludes(v_gen)->excludes(v_mc);
    v_gen->excludes(v_mc);
    validate->add_option("--max-total", config.max_total, "largest M+N in the design grid")->capture_default_str();
    validate->add_option("--tolerance", config.tolerance, "standard errors allowed in Monte Carlo mode");

    auto* simulate = app.add_subcommand("simulate", "simulated joint moments");
    add_design(simulate);
    add_sampling(simulate);
    add_common(simulate);

    auto* test = app.add_subcommand("test", "apply the two-stage rule to trial data");
    add_common(test);
    test->add_option("--data", config.data_path, "trial CSV (group,stage,value)")->required();
    test->add_option("--c1", c1, "stage-1 critical value")->required();
    test->add_option("--c2", c2, "stage-2 critical value")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    config.command = app.get_subcommands().front()->get_name();
    config.seed = seed;
    config.replications = replications;
    config.pi_replications = pi_replications;
    config.y_dist = y_dist;
    config.output_path = output;
    config.c1 = c1;
    config.c2 = c2;
    config.timestamp = !no_timestamp;
    config.continuity_correction = !no_cc;
    if (pi_source == "file") config.pi_source = PiSource::File;
    if (pi_source == "plugin") config.pi_source = PiSource::Plugin;
    if (pi_source == "monte-carlo") config.pi_source = PiSource::MonteCarlo;

    try {
        if (m || n || M || N) {
            if (!m || !n || !M || !N) throw InputError("a design needs all of -m, -n, -M, -N");
            config.design = SampleDesign::make(*m, *n, *M, *N);
        }
        if (config.command == "critical-values" && !(config.alpha1 > 0 && config.alpha1 < config.alpha &&
                                                     config.alpha < 1)) {
            throw InputError("need 0 < alpha1 < alpha < 1");
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    return run(config, out, err);
}

}  // namespace tsmw
