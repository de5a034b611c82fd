#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tsmw/design.hpp"
#include "tsmw/moments.hpp"
#include "tsmw/random.hpp"

namespace tsmw {

enum class ValidationMode { NullExact, GeneralReduction, GeneralMonteCarlo };
enum class Verdict { Exact, WithinTolerance, Mismatch };

std::string to_string(ValidationMode mode);
std::string to_string(Verdict verdict);

struct ValidationRecord {
    std::string formula;  // e.g. "null:E_U1_2" or "general:E_U1_4"
    std::string trace;    // evaluator the value comes from
    SampleDesign design;
    std::string engine_value;
    std::string oracle_value;
    double deviation = 0;
    double standard_error = 0;  // combined; Monte Carlo mode only
    Verdict verdict = Verdict::Exact;
};

struct ValidationReport {
    ValidationMode mode = ValidationMode::NullExact;
    double tolerance = 0;
    std::vector<ValidationRecord> records;

    std::size_t mismatches() const;
};

struct ValidationOptions {
    double tolerance = 5.0;  // standard errors, Monte Carlo mode
    FormulaOverrides overrides;

    // Monte Carlo mode only.
    Distribution controls = Distribution::uniform(0, 1);
    Distribution treated = Distribution::uniform(0, 1).shifted(0.3);
    std::uint64_t pi_replications = 10'000'000;
    std::uint64_t simulation_replications = 1'000'000;
    std::uint64_t seed = 20240601;
    unsigned threads = 1;
};

// Every design with 1 <= m <= M, 1 <= n <= N and M + N <= max_total.
std::vector<SampleDesign> design_grid(Count max_total);

// NullExact: null closed forms, general closed forms at the null probabilities, and the
// helper expectations, all against exact enumeration. GeneralReduction: general closed
// forms at the null probabilities against exact enumeration. GeneralMonteCarlo: general
// closed forms at estimated probabilities against simulation.
ValidationReport validate_formulas(const std::vector<SampleDesign>& designs, ValidationMode mode,
                                   const ValidationOptions& options = {});

}  // namespace tsmw
