#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "tsmw/rational.hpp"

namespace tsmw {

using Count = std::int64_t;

// Sample sizes of a two-stage trial: stage-1 controls/treated and the pooled totals
// after the second stage. Construct through make() to enforce 1 <= stage1 <= total.
struct SampleDesign {
    Count controls1 = 1;
    Count treated1 = 1;
    Count controls = 1;
    Count treated = 1;

    static SampleDesign make(Count controls1, Count treated1, Count controls, Count treated);

    Count max_u1() const { return controls1 * treated1; }
    Count max_u2() const { return controls * treated; }
    bool single_stage() const { return controls1 == controls && treated1 == treated; }

    // Row/column mirror: controls and treated swap roles.
    SampleDesign mirrored() const { return {treated1, controls1, treated, controls}; }

    friend bool operator==(const SampleDesign&, const SampleDesign&) = default;
};

std::string to_string(const SampleDesign& d);

enum class CriticalValueMethod { ExactEnumeration, CornishFisher, MonteCarlo };

std::string to_string(CriticalValueMethod method);

// Stage thresholds. c1 == max_u1()+1 (or c2 == max_u2()+1) encodes "never reject at this stage".
struct CriticalValuePair {
    Count c1 = 1;
    Count c2 = 1;
    double alpha1_nominal = 0.0;
    double alpha_overall_nominal = 0.0;
    std::optional<double> achieved_size;
    std::optional<Rational> achieved_size_exact;
    CriticalValueMethod method = CriticalValueMethod::ExactEnumeration;
};

}  // namespace tsmw
