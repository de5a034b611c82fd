#include "tsmw/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>
#include <unordered_map>
#include <vector>

#include "tsmw/errors.hpp"

namespace tsmw {

namespace {

using Tally = unsigned __int128;

BigInt to_big(Tally v) {
    BigInt out = static_cast<std::uint64_t>(v >> 64);
    out <<= 64;
    out += static_cast<std::uint64_t>(v);
    return out;
}

BigInt binomial(Count n, Count k) {
    BigInt out = 1;
    for (Count i = 1; i <= k; ++i) {
        out *= n - k + i;
        out /= i;
    }
    return out;
}

BigInt factorial(Count n) {
    BigInt out = 1;
    for (Count i = 2; i <= n; ++i) out *= i;
    return out;
}

BigInt big_pow(Count base, int e) {
    BigInt out = 1;
    for (int i = 0; i < e; ++i) out *= base;
    return out;
}

// Calls visit(x_below) for every ranking, where x_below[j] is the number of controls
// ranked below the j-th treated observation.
template <class Visit>
void for_each_ranking(Count controls, Count treated, Visit visit) {
    std::vector<Count> below(static_cast<std::size_t>(treated));
    // Treated observation j sits after below[j] controls; rankings correspond to
    // nondecreasing sequences 0 <= below[0] <= ... <= below[N-1] <= M.
    std::fill(below.begin(), below.end(), 0);
    while (true) {
        visit(below);
        Count j = treated - 1;
        while (j >= 0 && below[j] == controls) --j;
        if (j < 0) return;
        const Count v = below[j] + 1;
        for (Count k = j; k < treated; ++k) below[k] = v;
    }
}

}  // namespace

std::uint64_t enumeration_budget() {
    if (const char* env = std::getenv("TWOSTAGE_MW_BUDGET"); env && *env) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end && *end == '\0' && v > 0) return v;
        throw DomainError(std::string("TWOSTAGE_MW_BUDGET is not a positive integer: '") + env + "'");
    }
    return 20'000'000;
}

void check_budget(const SampleDesign& d, std::optional<std::uint64_t> budget) {
    const std::uint64_t limit = budget.value_or(enumeration_budget());
    const BigInt arrangements = binomial(d.controls + d.treated, d.controls);
    if (arrangements > limit) {
        throw BudgetExceeded("C(" + std::to_string(d.controls + d.treated) + "," + std::to_string(d.controls) +
                             ") = " + arrangements.str() + " arrangements exceeds the enumeration budget of " +
                             std::to_string(limit));
    }
}

Rational JointPmf::probability(Count u1, Count u2) const {
    const auto it = counts.find({u1, u2});
    return it == counts.end() ? Rational(0) : Rational(it->second, total);
}

std::map<Count, Rational> JointPmf::u1_marginal() const {
    std::map<Count, BigInt> acc;
    for (const auto& [key, c] : counts) acc[key.first] += c;
    std::map<Count, Rational> out;
    for (const auto& [u, c] : acc) out[u] = Rational(c, total);
    return out;
}

std::map<Count, Rational> JointPmf::u2_marginal() const {
    std::map<Count, BigInt> acc;
    for (const auto& [key, c] : counts) acc[key.second] += c;
    std::map<Count, Rational> out;
    for (const auto& [u, c] : acc) out[u] = Rational(c, total);
    return out;
}

JointPmf exact_joint_pmf(const SampleDesign& d, std::optional<std::uint64_t> budget) {
    check_budget(d, budget);
    const Count m = d.controls1, n = d.treated1;
    const Count m2 = d.controls - m, n2 = d.treated - n;

    JointPmf pmf;
    pmf.design = d;
    pmf.total = factorial(d.controls + d.treated) / (factorial(m) * factorial(m2) * factorial(n) * factorial(n2));
    if (pmf.total >= (BigInt(1) << 127)) throw BudgetExceeded("design too large for exact enumeration");

    // Dynamic program over how many observations of each kind have been placed, from
    // the lowest rank upward. A treated observation placed now exceeds every control
    // already placed, so it adds the stage-1 controls so far to U1 (if it is stage-1
    // itself) and all controls so far to U2.
    const std::size_t width = static_cast<std::size_t>(d.max_u2() + 1);
    const std::size_t cells = static_cast<std::size_t>(d.max_u1() + 1) * width;
    auto key = [&](Count a1, Count a2, Count b1, Count b2) {
        return static_cast<std::size_t>(((a1 * (m2 + 1) + a2) * (n + 1) + b1) * (n2 + 1) + b2);
    };
    struct State {
        Count a1, a2, b1, b2;
        std::vector<Tally> mass;
    };
    std::unordered_map<std::size_t, State> layer;
    layer.emplace(key(0, 0, 0, 0), State{0, 0, 0, 0, std::vector<Tally>(cells, 0)});
    layer.begin()->second.mass[0] = 1;

    const Count steps = d.controls + d.treated;
    for (Count t = 0; t < steps; ++t) {
        std::unordered_map<std::size_t, State> next;
        auto push = [&](Count a1, Count a2, Count b1, Count b2, const std::vector<Tally>& from, Count du1,
                         Count du2) {
            auto [it, fresh] = next.try_emplace(key(a1, a2, b1, b2));
            State& s = it->second;
            if (fresh) s = State{a1, a2, b1, b2, std::vector<Tally>(cells, 0)};
            const std::size_t shift = static_cast<std::size_t>(du1) * width + static_cast<std::size_t>(du2);
            for (std::size_t i = 0; i + shift < cells; ++i) {
                if (from[i] != 0) s.mass[i + shift] += from[i];
            }
        };
        for (auto& [k, s] : layer) {
            if (s.a1 < m) push(s.a1 + 1, s.a2, s.b1, s.b2, s.mass, 0, 0);
            if (s.a2 < m2) push(s.a1, s.a2 + 1, s.b1, s.b2, s.mass, 0, 0);
            if (s.b1 < n) push(s.a1, s.a2, s.b1 + 1, s.b2, s.mass, s.a1, s.a1 + s.a2);
            if (s.b2 < n2) push(s.a1, s.a2, s.b1, s.b2 + 1, s.mass, 0, s.a1 + s.a2);
        }
        layer = std::move(next);
    }

    const State& final_state = layer.begin()->second;
    for (std::size_t i = 0; i < cells; ++i) {
        if (final_state.mass[i] == 0) continue;
        pmf.counts[{static_cast<Count>(i / width), static_cast<Count>(i % width)}] = to_big(final_state.mass[i]);
    }
    return pmf;
}

JointPmf point_mass(const SampleDesign& design, Count u1, Count u2) {
    JointPmf pmf;
    pmf.design = design;
    pmf.total = 1;
    pmf.counts[{u1, u2}] = 1;
    return pmf;
}

MomentSet<Rational> pmf_moments(const JointPmf& pmf, int max_order) {
    if (max_order < 1 || max_order > 4) throw DomainError("moment order must be between 1 and 4");
    MomentSet<Rational> out;
    out.mode = MomentMode::NullExact;
    for (auto [a, b] : kMomentOrders) {
        if (a + b > max_order) continue;
        BigInt sum = 0;
        for (const auto& [key, c] : pmf.counts) sum += big_pow(key.first, a) * big_pow(key.second, b) * c;
        out(a, b) = Rational(sum, pmf.total);
    }
    return out;
}

CumulantSet<Rational> cumulants_by_recursion(const MomentSet<Rational>& mu) {
    // mu'_{r,s} = sum_{i<r} sum_{j<=s} C(r-1,i) C(s,j) kappa_{r-i,s-j} mu'_{i,j} for r >= 1,
    // and the same with the roles of the two indices exchanged when r = 0.
    auto raw = [&](int a, int b) -> Rational { return a == 0 && b == 0 ? Rational(1) : mu(a, b); };
    auto choose = [](int n, int k) {
        long v = 1;
        for (int i = 1; i <= k; ++i) v = v * (n - k + i) / i;
        return v;
    };
    CumulantSet<Rational> k;
    for (int order = 1; order <= 4; ++order) {
        for (auto [r, s] : kMomentOrders) {
            if (r + s != order) continue;
            Rational acc = raw(r, s);
            if (r >= 1) {
                for (int i = 0; i < r; ++i) {
                    for (int j = 0; j <= s; ++j) {
                        if (i == 0 && j == 0) continue;
                        acc -= choose(r - 1, i) * choose(s, j) * k(r - i, s - j) * raw(i, j);
                    }
                }
            } else {
                for (int j = 1; j < s; ++j) acc -= choose(s - 1, j) * k(0, s - j) * raw(0, j);
            }
            k(r, s) = acc;
        }
    }
    return k;
}

CumulantSet<Rational> pmf_cumulants(const JointPmf& pmf) { return cumulants_by_recursion(pmf_moments(pmf, 4)); }

Rational enumerate_helper_h(Count controls, Count treated) {
    if (controls < 2) throw DomainError("helper H needs at least two controls");
    check_budget(SampleDesign::make(1, 1, controls, treated));
    BigInt sum = 0;
    BigInt count = 0;
    for_each_ranking(controls, treated, [&](const std::vector<Count>& below) {
        Count u = 0;
        Count h = 0;
        for (Count c : below) {
            u += c;
            h += c * (c - 1);
        }
        sum += BigInt(h) * u * u;
        ++count;
    });
    return Rational(sum, count);
}

Rational enumerate_helper_k(Count controls, Count treated) {
    if (treated < 2) throw DomainError("helper K needs at least two treated observations");
    check_budget(SampleDesign::make(1, 1, controls, treated));
    BigInt sum = 0;
    BigInt count = 0;
    for_each_ranking(controls, treated, [&](const std::vector<Count>& below) {
        // above[i]: treated observations ranked above the i-th control.
        std::vector<Count> above(static_cast<std::size_t>(controls), 0);
        Count u = 0;
        for (Count c : below) {
            u += c;
            for (Count i = 0; i < c; ++i) ++above[i];
        }
        Count g = 0;
        for (Count a : above) g += a * (a - 1);
        sum += BigInt(g) * u * u;
        ++count;
    });
    return Rational(sum, count);
}

StageStatistics draw_statistics(const SampleDesign& d, const Distribution& controls, const Distribution& treated,
                                Rng& rng, std::vector<double>& xs, std::vector<double>& ys) {
    xs.resize(static_cast<std::size_t>(d.controls));
    ys.resize(static_cast<std::size_t>(d.treated));
    for (double& x : xs) x = controls.draw(rng);
    for (double& y : ys) y = treated.draw(rng);
    StageStatistics s;
    for (Count i = 0; i < d.controls; ++i) {
        for (Count j = 0; j < d.treated; ++j) {
            const double x = xs[i], y = ys[j];
            if (x == y) throw TieError("sampler produced a tie; distributions must be continuous");
            if (x < y) {
                ++s.u2;
                if (i < d.controls1 && j < d.treated1) ++s.u1;
            }
        }
    }
    return s;
}

MomentEstimates simulate_joint(const SampleDesign& d, const Distribution& controls, const Distribution& treated,
                               std::uint64_t replications, std::uint64_t seed, unsigned threads) {
    if (replications == 0) throw DomainError("replications must be positive");
    // Per-chunk sums of squared fourth-order products must fit in 128 bits.
    if (d.max_u2() > 16384) throw DomainError("design too large for exact simulation tallies");

    const std::size_t chunks = chunk_count(replications);
    struct Sums {
        std::array<Tally, 14> first{};
        std::array<Tally, 14> second{};
    };
    std::vector<Sums> partial(chunks);

    for_each_chunk(chunks, threads, [&](std::size_t k) {
        Rng rng(derive_seed(seed, k));
        std::vector<double> xs, ys;
        Sums sums;
        const std::uint64_t reps = chunk_length(replications, k);
        for (std::uint64_t r = 0; r < reps; ++r) {
            const StageStatistics s = draw_statistics(d, controls, treated, rng, xs, ys);
            std::array<Tally, 5> p1{1, 0, 0, 0, 0}, p2{1, 0, 0, 0, 0};
            for (int e = 1; e <= 4; ++e) {
                p1[e] = p1[e - 1] * static_cast<Tally>(s.u1);
                p2[e] = p2[e - 1] * static_cast<Tally>(s.u2);
            }
            for (std::size_t i = 0; i < kMomentOrders.size(); ++i) {
                const Tally v = p1[kMomentOrders[i].first] * p2[kMomentOrders[i].second];
                sums.first[i] += v;
                sums.second[i] += v * v;
            }
        }
        partial[k] = sums;
    });

    MomentEstimates est;
    est.replications = replications;
    est.seed = seed;
    est.values.mode = MomentMode::General;
    est.standard_errors.mode = MomentMode::General;
    for (std::size_t i = 0; i < kMomentOrders.size(); ++i) {
        BigInt s1 = 0, s2 = 0;
        for (const Sums& p : partial) {
            s1 += to_big(p.first[i]);
            s2 += to_big(p.second[i]);
        }
        const BigInt r = replications;
        est.values.values[i] = to_double(Rational(s1, r));
        if (replications > 1) {
            const Rational var = Rational(s2 * r - s1 * s1, r * r * (r - 1));
            est.standard_errors.values[i] = std::sqrt(to_double(var));
        }
    }
    return est;
}

}  // namespace tsmw
