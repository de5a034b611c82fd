#include "tsmw/rational.hpp"

#include <cctype>
#include <charconv>
#include <string>

#include "tsmw/errors.hpp"

namespace tsmw {

namespace {

BigInt parse_integer(std::string_view text, std::string_view whole) {
    if (text.empty()) throw DomainError("malformed number: '" + std::string(whole) + "'");
    std::size_t i = 0;
    bool negative = false;
    if (text[0] == '+' || text[0] == '-') {
        negative = text[0] == '-';
        i = 1;
    }
    if (i == text.size()) throw DomainError("malformed number: '" + std::string(whole) + "'");
    BigInt out = 0;
    for (; i < text.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(text[i]))) {
            throw DomainError("malformed number: '" + std::string(whole) + "'");
        }
        out = out * 10 + (text[i] - '0');
    }
    return negative ? BigInt(-out) : out;
}

BigInt pow10(int k) {
    BigInt out = 1;
    for (int i = 0; i < k; ++i) out *= 10;
    return out;
}

}  // namespace

std::string to_string(const Rational& value) {
    const BigInt num = boost::multiprecision::numerator(value);
    const BigInt den = boost::multiprecision::denominator(value);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

Rational parse_rational(std::string_view text) {
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
    const std::string_view whole = text;

    if (const auto slash = text.find('/'); slash != std::string_view::npos) {
        const BigInt den = parse_integer(text.substr(slash + 1), whole);
        if (den == 0) throw DomainError("zero denominator: '" + std::string(whole) + "'");
        return Rational(parse_integer(text.substr(0, slash), whole), den);
    }

    int exponent = 0;
    if (const auto e = text.find_first_of("eE"); e != std::string_view::npos) {
        const std::string_view exp_text = text.substr(e + 1);
        const char* begin = exp_text.data() + (!exp_text.empty() && exp_text[0] == '+' ? 1 : 0);
        const char* end = exp_text.data() + exp_text.size();
        auto [ptr, ec] = std::from_chars(begin, end, exponent);
        if (ec != std::errc() || ptr != end || begin == end) {
            throw DomainError("malformed number: '" + std::string(whole) + "'");
        }
        text = text.substr(0, e);
    }

    std::string digits(text);
    if (const auto dot = digits.find('.'); dot != std::string::npos) {
        exponent -= static_cast<int>(digits.size() - dot - 1);
        digits.erase(dot, 1);
        if (digits.empty() || digits == "-" || digits == "+") {
            throw DomainError("malformed number: '" + std::string(whole) + "'");
        }
    }
    const BigInt mantissa = parse_integer(digits, whole);
    if (exponent > 4000 || exponent < -4000) throw DomainError("exponent out of range: '" + std::string(whole) + "'");
    if (exponent >= 0) return Rational(mantissa * pow10(exponent));
    return Rational(mantissa, pow10(-exponent));
}

double to_double(const Rational& value) { return value.convert_to<double>(); }

}  // namespace tsmw
