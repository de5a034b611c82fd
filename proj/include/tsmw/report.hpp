#pragma once

#include <string>

#include "json.hpp"
#include "tsmw/cumulants.hpp"
#include "tsmw/design.hpp"
#include "tsmw/moments.hpp"
#include "tsmw/pi_model.hpp"
#include "tsmw/validation.hpp"

namespace tsmw {

using Json = nlohmann::ordered_json;

inline constexpr int kReportSchema = 1;

// Shortest decimal that round-trips to the same double.
std::string format_double(double value);

// Exact values render as "p/q" strings unless as_float is set.
Json value_json(const Rational& value, bool as_float);
Json value_json(double value, bool as_float);

Json design_json(const SampleDesign& design);

template <class T>
Json pi_json(const PiVector<T>& pi, bool as_float);

template <class T>
Json moments_json(const MomentSet<T>& moments, bool as_float);

template <class T>
Json cumulants_json(const CumulantSet<T>& cumulants, bool as_float);

Json shape_json(const Shape& shape);
Json validation_json(const ValidationReport& report);

// Reads the "moments" object of a report. Values may be "p/q" strings or numbers; the
// result is exact only when every value is a string.
struct ParsedMoments {
    bool exact = true;
    MomentSet<Rational> rational;
    MomentSet<double> real;
};
ParsedMoments parse_moments(const Json& moments);

// Reads pattern probabilities from {"pi0": "1/2", ...}; all thirteen are required.
struct ParsedPi {
    bool exact = true;
    PiVector<Rational> rational;
    PiVector<double> real;
};
ParsedPi parse_pi(const Json& object);

}  // namespace tsmw
