#include "tsmw/validation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <sstream>

#include "tsmw/errors.hpp"
#include "tsmw/oracle.hpp"
#include "tsmw/pi_model.hpp"

namespace tsmw {

std::string to_string(ValidationMode mode) {
    switch (mode) {
        case ValidationMode::NullExact: return "NullExact";
        case ValidationMode::GeneralReduction: return "GeneralReduction";
        case ValidationMode::GeneralMonteCarlo: return "GeneralMonteCarlo";
    }
    return "";
}

std::string to_string(Verdict verdict) {
    switch (verdict) {
        case Verdict::Exact: return "Exact";
        case Verdict::WithinTolerance: return "WithinTolerance";
        case Verdict::Mismatch: return "Mismatch";
    }
    return "";
}

std::size_t ValidationReport::mismatches() const {
    std::size_t k = 0;
    for (const auto& r : records) k += r.verdict == Verdict::Mismatch;
    return k;
}

std::vector<SampleDesign> design_grid(Count max_total) {
    std::vector<SampleDesign> out;
    for (Count M = 1; M < max_total; ++M) {
        for (Count N = 1; M + N <= max_total; ++N) {
            for (Count m = 1; m <= M; ++m) {
                for (Count n = 1; n <= N; ++n) out.push_back(SampleDesign::make(m, n, M, N));
            }
        }
    }
    return out;
}

namespace {

const char* general_trace(int a, int b) {
    static const std::map<std::pair<int, int>, const char*> traces = {
        {{1, 0}, "general::single_first"}, {{0, 1}, "general::single_first"},
        {{2, 0}, "general::single_second"}, {{0, 2}, "general::single_second"},
        {{1, 1}, "general::cross_11"},     {{3, 0}, "general::single_third"},
        {{0, 3}, "general::single_third"}, {{2, 1}, "general::cross_21"},
        {{1, 2}, "general::cross_12"},     {{4, 0}, "general::single_fourth (quartic table)"},
        {{0, 4}, "general::single_fourth (quartic table)"},
        {{3, 1}, "general::cross_31"},     {{2, 2}, "general::cross_22 (with helpers H, K)"},
        {{1, 3}, "general::cross_13"},
    };
    return traces.at({a, b});
}

const char* null_trace(int a, int b) {
    static const std::map<std::pair<int, int>, const char*> traces = {
        {{1, 0}, "null::single_first"}, {{0, 1}, "null::single_first"},
        {{2, 0}, "null::single_second"}, {{0, 2}, "null::single_second"},
        {{1, 1}, "null::cross_11"},     {{3, 0}, "null::single_third"},
        {{0, 3}, "null::single_third"}, {{2, 1}, "null::cross_21 (conditional mean)"},
        {{1, 2}, "null::cross_12"},     {{4, 0}, "null::single_fourth"},
        {{0, 4}, "null::single_fourth"}, {{3, 1}, "null::cross_31 (conditional mean)"},
        {{2, 2}, "null::cross_22 (with helpers H, G)"},
        {{1, 3}, "null::cross_13"},
    };
    return traces.at({a, b});
}

ValidationRecord exact_record(std::string formula, std::string trace, const SampleDesign& d, const Rational& engine,
                              const Rational& oracle) {
    ValidationRecord r;
    r.formula = std::move(formula);
    r.trace = std::move(trace);
    r.design = d;
    r.engine_value = to_string(engine);
    r.oracle_value = to_string(oracle);
    r.deviation = std::fabs(to_double(Rational(engine - oracle)));
    r.verdict = engine == oracle ? Verdict::Exact : Verdict::Mismatch;
    return r;
}

std::string format_double(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

// Standard error of each general moment induced by the pi estimates. Patterns are
// estimated from independent draws, so the variance is the sum over patterns of the
// squared partial derivative times the squared standard error.
MomentSet<double> propagated_errors(const SampleDesign& d, const PiEstimate& pi, const FormulaOverrides& overrides) {
    MomentSet<double> var;
    for (Pi id : kAllPis) {
        const double se = pi.standard_error[id];
        if (se == 0) continue;
        const double h = 1e-6;
        PiVector<double> lo = pi.value, hi = pi.value;
        hi[id] = std::min(1.0, pi.value[id] + h);
        lo[id] = std::max(0.0, pi.value[id] - h);
        const auto f_hi = moments_general(d, hi, overrides);
        const auto f_lo = moments_general(d, lo, overrides);
        for (std::size_t i = 0; i < var.values.size(); ++i) {
            const double deriv = (f_hi.values[i] - f_lo.values[i]) / (hi[id] - lo[id]);
            var.values[i] += deriv * deriv * se * se;
        }
    }
    for (double& v : var.values) v = std::sqrt(v);
    return var;
}

}  // namespace

ValidationReport validate_formulas(const std::vector<SampleDesign>& designs, ValidationMode mode,
                                   const ValidationOptions& options) {
    ValidationReport report;
    report.mode = mode;
    report.tolerance = mode == ValidationMode::GeneralMonteCarlo ? options.tolerance : 0.0;
    const PiVector<Rational> null_pi = null_pi_vector();
    std::optional<PiEstimate> estimated;
    if (mode == ValidationMode::GeneralMonteCarlo && !designs.empty()) {
        estimated = pi_monte_carlo(options.controls, options.treated, options.pi_replications, options.seed,
                                   options.threads);
    }

    for (const SampleDesign& d : designs) {
        if (mode == ValidationMode::GeneralMonteCarlo) {
            const PiEstimate& pi = *estimated;
            const MomentSet<double> engine = moments_general(d, pi.value, options.overrides);
            const MomentSet<double> engine_se = propagated_errors(d, pi, options.overrides);
            const MomentEstimates sim = simulate_joint(d, options.controls, options.treated,
                                                       options.simulation_replications,
                                                       derive_seed(options.seed, 0x5157ULL), options.threads);
            for (auto [a, b] : kMomentOrders) {
                ValidationRecord r;
                r.formula = "general:" + moment_key(a, b);
                r.trace = general_trace(a, b);
                r.design = d;
                const double e = engine(a, b), o = sim.values(a, b);
                r.engine_value = format_double(e);
                r.oracle_value = format_double(o);
                r.deviation = std::fabs(e - o);
                r.standard_error = std::hypot(engine_se(a, b), sim.standard_errors(a, b));
                const double slack = 1e-9 * std::max(1.0, std::fabs(o));
                r.verdict = r.deviation <= options.tolerance * r.standard_error + slack ? Verdict::WithinTolerance
                                                                                         : Verdict::Mismatch;
                report.records.push_back(std::move(r));
            }
            continue;
        }

        const JointPmf pmf = exact_joint_pmf(d);
        const MomentSet<Rational> oracle = pmf_moments(pmf);
        const MomentSet<Rational> general = moments_general(d, null_pi, options.overrides);

        if (mode == ValidationMode::NullExact) {
            const MomentSet<Rational> closed = moments_null(d);
            for (auto [a, b] : kMomentOrders) {
                report.records.push_back(
                    exact_record("null:" + moment_key(a, b), null_trace(a, b), d, closed(a, b), oracle(a, b)));
            }
        }
        for (auto [a, b] : kMomentOrders) {
            report.records.push_back(
                exact_record("general:" + moment_key(a, b), general_trace(a, b), d, general(a, b), oracle(a, b)));
        }
        if (mode == ValidationMode::NullExact && d.controls1 == 1 && d.treated1 == 1) {
            // The helpers depend on the pooled sizes only; check them once per (M, N).
            const Count M = d.controls, N = d.treated;
            if (M >= 2) {
                const Rational h = enumerate_helper_h(M, N);
                report.records.push_back(exact_record("null:helper_H", "null::helper_h", d, null::helper_h(M, N), h));
                report.records.push_back(
                    exact_record("general:helper_H", "helper_h_expectation", d, helper_h_expectation(d, null_pi), h));
            }
            if (N >= 2) {
                const Rational k = enumerate_helper_k(M, N);
                report.records.push_back(exact_record("null:helper_G", "null::helper_g", d, null::helper_g(M, N), k));
                report.records.push_back(
                    exact_record("general:helper_K", "helper_k_expectation", d, helper_k_expectation(d, null_pi), k));
            }
        }
    }
    return report;
}

}  // namespace tsmw
