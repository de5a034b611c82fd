#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <utility>

#include "tsmw/cumulants.hpp"
#include "tsmw/design.hpp"
#include "tsmw/moments.hpp"
#include "tsmw/random.hpp"
#include "tsmw/rational.hpp"
#include "tsmw/ustat.hpp"

namespace tsmw {

// Largest C(M+N, M) the exact enumerators accept. Default 2e7; the environment
// variable TWOSTAGE_MW_BUDGET overrides it.
std::uint64_t enumeration_budget();

// Throws BudgetExceeded when C(M+N, M) exceeds the budget.
void check_budget(const SampleDesign& design, std::optional<std::uint64_t> budget = std::nullopt);

// Exact null distribution of (U1, U2). Masses are stored as counts over a common
// denominator: the number of equally likely sequences of the four observation kinds
// (stage-1/stage-2 control, stage-1/stage-2 treated) along the pooled ranking.
struct JointPmf {
    SampleDesign design;
    BigInt total;
    std::map<std::pair<Count, Count>, BigInt> counts;

    Rational probability(Count u1, Count u2) const;
    std::map<Count, Rational> u1_marginal() const;
    std::map<Count, Rational> u2_marginal() const;
};

JointPmf exact_joint_pmf(const SampleDesign& design, std::optional<std::uint64_t> budget = std::nullopt);

// Distribution concentrated on a single (u1, u2).
JointPmf point_mass(const SampleDesign& design, Count u1, Count u2);

MomentSet<Rational> pmf_moments(const JointPmf& pmf, int max_order = 4);

// Cumulants from raw moments through the general bivariate moment-cumulant recursion.
CumulantSet<Rational> pmf_cumulants(const JointPmf& pmf);
CumulantSet<Rational> cumulants_by_recursion(const MomentSet<Rational>& moments);

// Null expectations of the pooled helper sums, by iterating all C(M+N, M) rankings.
Rational enumerate_helper_h(Count controls, Count treated);
Rational enumerate_helper_k(Count controls, Count treated);

struct MomentEstimates {
    MomentSet<double> values;
    MomentSet<double> standard_errors;
    std::uint64_t replications = 0;
    std::uint64_t seed = 0;
};

// Draws the pooled samples; the first controls1 / treated1 draws form stage 1.
StageStatistics draw_statistics(const SampleDesign& design, const Distribution& controls,
                                const Distribution& treated, Rng& rng, std::vector<double>& xs,
                                std::vector<double>& ys);

MomentEstimates simulate_joint(const SampleDesign& design, const Distribution& controls, const Distribution& treated,
                               std::uint64_t replications, std::uint64_t seed, unsigned threads = 1);

}  // namespace tsmw
