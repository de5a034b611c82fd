#include "tsmw/report.hpp"

#include <charconv>

#include "tsmw/errors.hpp"

namespace tsmw {

std::string format_double(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

Json value_json(const Rational& value, bool as_float) {
    if (as_float) return to_double(value);
    return to_string(value);
}

Json value_json(double value, bool) { return value; }

Json design_json(const SampleDesign& d) {
    return Json{{"m", d.controls1}, {"n", d.treated1}, {"M", d.controls}, {"N", d.treated}};
}

template <class T>
Json pi_json(const PiVector<T>& pi, bool as_float) {
    Json out = Json::object();
    for (Pi id : kAllPis) out[pi_name(id)] = value_json(pi[id], as_float);
    return out;
}

template <class T>
Json moments_json(const MomentSet<T>& moments, bool as_float) {
    Json out = Json::object();
    for (auto [a, b] : kMomentOrders) out[moment_key(a, b)] = value_json(moments(a, b), as_float);
    return out;
}

template <class T>
Json cumulants_json(const CumulantSet<T>& c, bool as_float) {
    Json out = Json::object();
    for (auto [r, s] : kMomentOrders) out[cumulant_key(r, s)] = value_json(c(r, s), as_float);
    return out;
}

template Json pi_json(const PiVector<Rational>&, bool);
template Json pi_json(const PiVector<double>&, bool);
template Json moments_json(const MomentSet<Rational>&, bool);
template Json moments_json(const MomentSet<double>&, bool);
template Json cumulants_json(const CumulantSet<Rational>&, bool);
template Json cumulants_json(const CumulantSet<double>&, bool);

Json shape_json(const Shape& s) {
    return Json{{"mean", s.mean},
                {"variance", s.variance},
                {"skewness", s.skewness},
                {"excess_kurtosis", s.excess_kurtosis}};
}

Json validation_json(const ValidationReport& report) {
    std::size_t exact = 0, within = 0;
    Json records = Json::array();
    for (const auto& r : report.records) {
        exact += r.verdict == Verdict::Exact;
        within += r.verdict == Verdict::WithinTolerance;
        Json j{{"formula", r.formula},
               {"trace", r.trace},
               {"design", design_json(r.design)},
               {"engine", r.engine_value},
               {"oracle", r.oracle_value},
               {"deviation", r.deviation}};
        if (report.mode == ValidationMode::GeneralMonteCarlo) j["standard_error"] = r.standard_error;
        j["verdict"] = to_string(r.verdict);
        records.push_back(std::move(j));
    }
    return Json{{"mode", to_string(report.mode)},
                {"tolerance", report.tolerance},
                {"summary",
                 {{"records", report.records.size()},
                  {"exact", exact},
                  {"within_tolerance", within},
                  {"mismatch", report.mismatches()}}},
                {"records", std::move(records)}};
}

namespace {

// Returns true and fills `exact` for strings; fills `real` for numbers.
bool read_value(const Json& v, const std::string& key, Rational& exact, double& real) {
    if (v.is_string()) {
        exact = parse_rational(v.get<std::string>());
        real = to_double(exact);
        return true;
    }
    if (v.is_number()) {
        real = v.get<double>();
        return false;
    }
    throw InputError("value of '" + key + "' must be a string or a number");
}

}  // namespace

ParsedMoments parse_moments(const Json& moments) {
    if (!moments.is_object()) throw InputError("\"moments\" must be an object");
    ParsedMoments out;
    out.rational.mode = MomentMode::NullExact;
    out.real.mode = MomentMode::General;
    for (auto [a, b] : kMomentOrders) {
        const std::string key = moment_key(a, b);
        if (!moments.contains(key)) throw InputError("moments report lacks '" + key + "'");
        out.exact &= read_value(moments.at(key), key, out.rational(a, b), out.real(a, b));
    }
    return out;
}

ParsedPi parse_pi(const Json& object) {
    if (!object.is_object()) throw InputError("pattern probabilities must be a JSON object");
    ParsedPi out;
    for (Pi id : kAllPis) {
        const std::string key = pi_name(id);
        if (!object.contains(key)) throw InputError("missing '" + key + "'");
        out.exact &= read_value(object.at(key), key, out.rational[id], out.real[id]);
    }
    return out;
}

}  // namespace tsmw
