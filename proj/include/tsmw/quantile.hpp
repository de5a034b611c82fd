#pragma once

#include <cstdint>
#include <optional>

#include "tsmw/cumulants.hpp"
#include "tsmw/design.hpp"
#include "tsmw/oracle.hpp"
#include "tsmw/pi_model.hpp"

namespace tsmw {

double normal_cdf(double z);

// Wichura's AS 241 (PPND16); about 1e-16 relative accuracy. DomainError outside (0, 1).
double normal_inverse_cdf(double p);

// Third-order Cornish-Fisher quantile from mean, variance, skewness and excess kurtosis.
double cornish_fisher_quantile(const Shape& shape, double p);

// Inverse of the above in p, found by bisection: the p with quantile(p) = x.
double cornish_fisher_cdf(const Shape& shape, double x);

// c1: smallest c with P(U1 >= c) <= alpha1. c2: smallest c with
// P(U1 < c1, U2 >= c) <= alpha - P(U1 >= c1). Both from the exact null pmf.
CriticalValuePair critical_values_exact(const SampleDesign& design, double alpha1, double alpha);
CriticalValuePair critical_values_exact(const JointPmf& pmf, double alpha1, double alpha);

struct CfOptions {
    // Treat the integer statistic as continuous on half-unit cells: the threshold is the
    // ceiling of (quantile + 1/2) and the stage-1 spend is the tail beyond c1 - 1/2.
    bool continuity_correction = true;
    // Pattern probabilities; null values when absent.
    std::optional<PiVector<double>> pi;
};

CriticalValuePair critical_values_cf(const SampleDesign& design, double alpha1, double alpha,
                                     const CfOptions& options = {});

enum class SizeMethod { Exact, MonteCarlo };

struct SizeEstimate {
    double value = 0;
    double standard_error = 0;
    std::optional<Rational> exact;
};

// P(U1 >= c1) + P(U1 < c1, U2 >= c2) under the null.
Rational overall_size_exact(const JointPmf& pmf, Count c1, Count c2);

SizeEstimate overall_size(const SampleDesign& design, const CriticalValuePair& c, SizeMethod method,
                          std::uint64_t replications = 1'000'000, std::uint64_t seed = 1, unsigned threads = 1);

}  // namespace tsmw
