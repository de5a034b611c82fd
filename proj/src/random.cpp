#include "tsmw/random.hpp"

#include <charconv>
#include <cmath>
#include <string>

#include "tsmw/errors.hpp"
#include "tsmw/quantile.hpp"

namespace tsmw {

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

Distribution Distribution::uniform(double lo, double hi) {
    if (!(lo < hi)) throw DomainError("uniform needs lo < hi");
    return {Kind::Uniform, lo, hi, 0.0};
}

Distribution Distribution::normal(double mean, double sd) {
    if (!(sd > 0)) throw DomainError("normal needs sd > 0");
    return {Kind::Normal, mean, sd, 0.0};
}

Distribution Distribution::exponential(double rate) {
    if (!(rate > 0)) throw DomainError("exponential needs rate > 0");
    return {Kind::Exponential, rate, 0.0, 0.0};
}

namespace {

double parse_double(std::string_view s, std::string_view whole) {
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    double v = 0;
    const char* begin = s.data() + (!s.empty() && s[0] == '+' ? 1 : 0);
    auto [ptr, ec] = std::from_chars(begin, s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
        throw DomainError("bad distribution spec: '" + std::string(whole) + "'");
    }
    return v;
}

}  // namespace

Distribution Distribution::parse(std::string_view spec) {
    const std::string_view whole = spec;
    const auto open = spec.find('(');
    const auto close = spec.find(')');
    if (open == std::string_view::npos || close == std::string_view::npos || close < open) {
        throw DomainError("bad distribution spec: '" + std::string(whole) + "'");
    }
    const std::string_view name = spec.substr(0, open);
    const std::string_view args = spec.substr(open + 1, close - open - 1);
    const std::string_view rest = spec.substr(close + 1);

    std::vector<double> values;
    std::size_t start = 0;
    while (start <= args.size()) {
        const auto comma = args.find(',', start);
        const auto end = comma == std::string_view::npos ? args.size() : comma;
        values.push_back(parse_double(args.substr(start, end - start), whole));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }

    auto need = [&](std::size_t k) {
        if (values.size() != k) throw DomainError("bad distribution spec: '" + std::string(whole) + "'");
    };
    Distribution d = uniform(0, 1);
    if (name == "uniform") {
        need(2);
        d = uniform(values[0], values[1]);
    } else if (name == "normal") {
        need(2);
        d = normal(values[0], values[1]);
    } else if (name == "exponential") {
        need(1);
        d = exponential(values[0]);
    } else {
        throw DomainError("unknown distribution '" + std::string(name) + "'");
    }
    if (!rest.empty()) {
        if (rest[0] != '+' && rest[0] != '-') throw DomainError("bad distribution spec: '" + std::string(whole) + "'");
        d = d.shifted(parse_double(rest, whole));
    }
    return d;
}

Distribution Distribution::shifted(double offset) const {
    Distribution d = *this;
    d.shift_ += offset;
    return d;
}

double Distribution::draw(Rng& rng) const {
    const double u = uniform_open01(rng);
    switch (kind_) {
        case Kind::Uniform: return shift_ + a_ + (b_ - a_) * u;
        case Kind::Normal: return shift_ + a_ + b_ * normal_inverse_cdf(u);
        case Kind::Exponential: return shift_ - std::log1p(-u) / a_;
    }
    return 0.0;
}

std::string Distribution::describe() const {
    auto num = [](double v) {
        char buf[32];
        return std::string(buf, std::to_chars(buf, buf + sizeof buf, v).ptr);
    };
    std::string out;
    switch (kind_) {
        case Kind::Uniform: out = "uniform(" + num(a_) + "," + num(b_) + ")"; break;
        case Kind::Normal: out = "normal(" + num(a_) + "," + num(b_) + ")"; break;
        case Kind::Exponential: out = "exponential(" + num(a_) + ")"; break;
    }
    if (shift_ > 0) out += "+";
    if (shift_ != 0.0) out += num(shift_);
    return out;
}

unsigned default_threads() {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

}  // namespace tsmw
