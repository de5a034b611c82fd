#include "tsmw/cumulants.hpp"

#include <cmath>

#include "tsmw/errors.hpp"

namespace tsmw {

std::string cumulant_key(int r, int s) { return "kappa_" + std::to_string(r) + "_" + std::to_string(s); }

CumulantSet<double> to_double(const CumulantSet<Rational>& set) {
    CumulantSet<double> out;
    for (std::size_t i = 0; i < set.values.size(); ++i) out.values[i] = to_double(set.values[i]);
    return out;
}

std::string to_string(AggregateWeighting w) { return w == AggregateWeighting::Paper ? "paper" : "binomial"; }

namespace {

// e(a, b) is E(A^a B^b); A is the statistic that appears squared.
template <class T, class E>
T third_mixed(E e) {
    return e(2, 1) - e(2, 0) * e(0, 1) - 2 * e(1, 1) * e(1, 0) + 2 * e(1, 0) * e(1, 0) * e(0, 1);
}

template <class T, class E>
T fourth_31(E e) {
    const T a = e(1, 0), b = e(0, 1);
    return e(3, 1) - e(3, 0) * b - 3 * a * e(2, 1) - 3 * e(2, 0) * e(1, 1) + 6 * a * b * e(2, 0) +
           6 * a * a * e(1, 1) - 6 * a * a * a * b;
}

template <class T, class E>
T fourth_40(E e) {
    const T a = e(1, 0);
    return e(4, 0) - 4 * a * e(3, 0) - 3 * e(2, 0) * e(2, 0) + 12 * a * a * e(2, 0) - 6 * a * a * a * a;
}

}  // namespace

template <class T>
CumulantSet<T> mixed_cumulants(const MomentSet<T>& m) {
    auto fwd = [&](int a, int b) -> T { return m(a, b); };
    auto rev = [&](int a, int b) -> T { return m(b, a); };

    CumulantSet<T> c;
    const T e1 = m(1, 0), e2 = m(0, 1);
    c(1, 0) = e1;
    c(0, 1) = e2;
    c(2, 0) = m(2, 0) - e1 * e1;
    c(1, 1) = m(1, 1) - e1 * e2;
    c(0, 2) = m(0, 2) - e2 * e2;
    c(3, 0) = m(3, 0) - 3 * m(2, 0) * e1 + 2 * e1 * e1 * e1;
    c(2, 1) = third_mixed<T>(fwd);
    c(1, 2) = third_mixed<T>(rev);
    c(0, 3) = m(0, 3) - 3 * m(0, 2) * e2 + 2 * e2 * e2 * e2;
    c(4, 0) = fourth_40<T>(fwd);
    c(3, 1) = fourth_31<T>(fwd);
    c(2, 2) = m(2, 2) - 2 * e1 * m(1, 2) - 2 * e2 * m(2, 1) - m(2, 0) * m(0, 2) - 2 * m(1, 1) * m(1, 1) +
              8 * e1 * e2 * m(1, 1) + 2 * m(2, 0) * e2 * e2 + 2 * m(0, 2) * e1 * e1 - 6 * e1 * e1 * e2 * e2;
    c(1, 3) = fourth_31<T>(rev);
    c(0, 4) = fourth_40<T>(rev);
    return c;
}

template <class T>
Aggregates<T> paper_aggregates(const CumulantSet<T>& c, AggregateWeighting weighting) {
    const bool binom = weighting == AggregateWeighting::Binomial;
    Aggregates<T> out;
    out.weighting = weighting;
    out.k1 = c(1, 0) + c(0, 1);
    out.k2 = c(2, 0) + (binom ? 2 : 1) * c(1, 1) + c(0, 2);
    out.k3 = c(3, 0) + (binom ? 3 : 1) * (c(2, 1) + c(1, 2)) + c(0, 3);
    out.k4 = c(4, 0) + (binom ? 4 : 1) * (c(3, 1) + c(1, 3)) + (binom ? 6 : 1) * c(2, 2) + c(0, 4);
    return out;
}

template <class T>
Shape standardized_shape(const CumulantSet<T>& c, ShapeTarget which) {
    double k1 = 0, k2 = 0, k3 = 0, k4 = 0;
    switch (which) {
        case ShapeTarget::Stage1:
            k1 = to_double(c(1, 0)), k2 = to_double(c(2, 0)), k3 = to_double(c(3, 0)), k4 = to_double(c(4, 0));
            break;
        case ShapeTarget::Stage2:
            k1 = to_double(c(0, 1)), k2 = to_double(c(0, 2)), k3 = to_double(c(0, 3)), k4 = to_double(c(0, 4));
            break;
        case ShapeTarget::AggregatePaper:
        case ShapeTarget::AggregateBinomial: {
            const auto a = paper_aggregates(c, which == ShapeTarget::AggregatePaper ? AggregateWeighting::Paper
                                                                                    : AggregateWeighting::Binomial);
            k1 = to_double(a.k1), k2 = to_double(a.k2), k3 = to_double(a.k3), k4 = to_double(a.k4);
            break;
        }
    }
    if (!(k2 > 0)) throw DegenerateError("variance is zero; shape is undefined");
    return {k1, k2, k3 / std::pow(k2, 1.5), k4 / (k2 * k2)};
}

template CumulantSet<Rational> mixed_cumulants(const MomentSet<Rational>&);
template CumulantSet<double> mixed_cumulants(const MomentSet<double>&);
template Aggregates<Rational> paper_aggregates(const CumulantSet<Rational>&, AggregateWeighting);
template Aggregates<double> paper_aggregates(const CumulantSet<double>&, AggregateWeighting);
template Shape standardized_shape(const CumulantSet<Rational>&, ShapeTarget);
template Shape standardized_shape(const CumulantSet<double>&, ShapeTarget);

}  // namespace tsmw
