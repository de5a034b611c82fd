#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tsmw/design.hpp"
#include "tsmw/random.hpp"
#include "tsmw/rational.hpp"

namespace tsmw {

// The thirteen pattern probabilities. Numbering follows the customary labels, which
// skip 11; the enum keeps the gap visible instead of renumbering.
enum class Pi : int { P0, P1, P2, P3, P4, P5, P6, P7, P8, P9, P10, P12, P13 };

inline constexpr std::size_t kPiCount = 13;
inline constexpr std::array<Pi, kPiCount> kAllPis = {Pi::P0, Pi::P1, Pi::P2, Pi::P3,  Pi::P4,  Pi::P5, Pi::P6,
                                                     Pi::P7, Pi::P8, Pi::P9, Pi::P10, Pi::P12, Pi::P13};

// Conventional label number (0..10, 12, 13).
int pi_label(Pi id);
std::string pi_name(Pi id);  // "pi0" ... "pi13"
std::optional<Pi> pi_from_name(std::string_view name);

// Swapping the roles of controls and treated maps each pattern to its mirror image.
Pi mirror(Pi id);

// An indicator-product pattern: edge (x, y) stands for I(X_x < Y_y), with distinct local
// indices denoting distinct observations.
struct PiPattern {
    Pi id;
    int controls;  // distinct X indices used
    int treated;   // distinct Y indices used
    std::vector<std::pair<int, int>> edges;
};

const PiPattern& pi_pattern(Pi id);

template <class T>
struct PiVector {
    std::array<T, kPiCount> values{};

    T& operator[](Pi id) { return values[static_cast<std::size_t>(id)]; }
    const T& operator[](Pi id) const { return values[static_cast<std::size_t>(id)]; }

    static PiVector filled(const T& v) {
        PiVector out;
        out.values.fill(v);
        return out;
    }

    PiVector mirrored() const {
        PiVector out;
        for (Pi id : kAllPis) out[mirror(id)] = (*this)[id];
        return out;
    }

    friend bool operator==(const PiVector&, const PiVector&) = default;
};

PiVector<double> to_double(const PiVector<Rational>& pi);

// Throws DomainError when an entry lies outside [0, 1].
template <class T>
void check_pi_range(const PiVector<T>& pi);

// Exact values when all observations come from one continuous population.
PiVector<Rational> null_pi_vector();

struct NullIndicatorEntry {
    std::string pattern;  // space-separated index pairs, e.g. "ij kj kl"
    Rational value;       // exact expectation under the null
    Rational published;   // value as commonly tabulated; differs from `value` for two entries
};

// Null expectations of the indicator products used when simplifying the moment
// formulas, including products over disjoint index groups.
const std::vector<NullIndicatorEntry>& null_indicator_table();

// Exact null expectation for a pattern string such as "ij kl"; nullopt if not tabulated.
std::optional<Rational> null_indicator_value(std::string_view pattern);

struct PiEstimate {
    PiVector<double> value;
    PiVector<double> standard_error;
    std::uint64_t replications = 0;
    std::uint64_t seed = 0;
};

// Each replicate draws a fresh minimal set of variates for every pattern independently.
// Deterministic for a given seed regardless of `threads`.
PiEstimate pi_monte_carlo(const Distribution& controls, const Distribution& treated, std::uint64_t replications,
                          std::uint64_t seed, unsigned threads = 1);

// Exact U-statistic estimates: averages of each indicator product over all ordered
// selections of distinct indices. Needs at least four observations per group.
PiVector<Rational> pi_plugin_from_data(std::span<const double> xs, std::span<const double> ys);

}  // namespace tsmw
