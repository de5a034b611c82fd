#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

#include "tsmw/design.hpp"

namespace tsmw {

enum class PiSource { NullTable, File, Plugin, MonteCarlo };

struct RunConfig {
    std::string command;  // moments, cumulants, critical-values, validate, simulate, test
    std::optional<SampleDesign> design;
    bool general = false;  // --general; validate also accepts --monte-carlo
    bool monte_carlo = false;
    PiSource pi_source = PiSource::NullTable;
    std::string pi_file;
    std::string data_path;
    std::string moments_report;
    double alpha1 = 0.025;
    double alpha = 0.05;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> replications;
    std::optional<std::uint64_t> pi_replications;
    std::string x_dist = "uniform(0,1)";
    std::optional<std::string> y_dist;
    std::optional<std::string> output_path;
    bool as_float = false;
    bool timestamp = true;
    unsigned threads = 1;
    Count max_total = 8;
    double tolerance = 5.0;
    std::optional<Count> c1;
    std::optional<Count> c2;
    std::string method = "auto";     // critical-values: exact, cf, both, auto
    bool continuity_correction = true;
    std::string aggregate = "none";  // none, paper, binomial
};

// Executes one command and writes its report to config.output_path, or `out` when unset.
// Exit codes: 0 success, 1 validation mismatch, 2 input or domain error (message on `err`).
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

// Parses argv into a RunConfig and runs it.
int run_command_line(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace tsmw
