#pragma once

#include <array>
#include <string>

#include "tsmw/moments.hpp"

namespace tsmw {

// Mixed cumulants kappa_{r,s} of (U1, U2), stored in the same order as kMomentOrders.
template <class T>
struct CumulantSet {
    std::array<T, 14> values{};

    T& operator()(int r, int s) { return values[moment_index(r, s)]; }
    const T& operator()(int r, int s) const { return values[moment_index(r, s)]; }

    friend bool operator==(const CumulantSet&, const CumulantSet&) = default;
};

// Report key: "kappa_2_1".
std::string cumulant_key(int r, int s);

CumulantSet<double> to_double(const CumulantSet<Rational>& set);

template <class T>
CumulantSet<T> mixed_cumulants(const MomentSet<T>& moments);

// Paper weighting sums the mixed cumulants of each order with unit coefficients.
// Binomial weighting uses C(r, s), giving the cumulants of U1 + U2.
enum class AggregateWeighting { Paper, Binomial };

std::string to_string(AggregateWeighting w);

template <class T>
struct Aggregates {
    T k1;
    T k2;
    T k3;
    T k4;
    AggregateWeighting weighting = AggregateWeighting::Paper;
};

template <class T>
Aggregates<T> paper_aggregates(const CumulantSet<T>& c, AggregateWeighting weighting = AggregateWeighting::Paper);

enum class ShapeTarget { Stage1, Stage2, AggregatePaper, AggregateBinomial };

struct Shape {
    double mean = 0;
    double variance = 0;
    double skewness = 0;
    double excess_kurtosis = 0;
};

// Throws DegenerateError when the selected variance is not positive.
template <class T>
Shape standardized_shape(const CumulantSet<T>& c, ShapeTarget which);

}  // namespace tsmw
