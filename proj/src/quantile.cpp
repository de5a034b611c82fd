#include "tsmw/quantile.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "tsmw/errors.hpp"

namespace tsmw {

namespace {

template <std::size_t K>
double poly(const std::array<double, K>& c, double x) {
    double s = 0;
    for (std::size_t i = K; i-- > 0;) s = s * x + c[i];
    return s;
}

constexpr std::array<double, 8> kA = {3.3871328727963666080e0, 1.3314166789178437745e+2, 1.9715909503065514427e+3,
                                      1.3731693765509461125e+4, 4.5921953931549871457e+4, 6.7265770927008700853e+4,
                                      3.3430575583588128105e+4, 2.5090809287301226727e+3};
constexpr std::array<double, 8> kB = {1.0,
                                      4.2313330701600911252e+1,
                                      6.8718700749205790830e+2,
                                      5.3941960214247511077e+3,
                                      2.1213794301586595867e+4,
                                      3.9307895800092710610e+4,
                                      2.8729085735721942674e+4,
                                      5.2264952788528545610e+3};
constexpr std::array<double, 8> kC = {1.42343711074968357734e0, 4.63033784615654529590e0, 5.76949722146069140550e0,
                                      3.64784832476320460504e0, 1.27045825245236838258e0, 2.41780725177450611770e-1,
                                      2.27238449892691845833e-2, 7.74545014278341407640e-4};
constexpr std::array<double, 8> kD = {1.0,
                                      2.05319162663775882187e0,
                                      1.67638483018380384940e0,
                                      6.89767334985100004550e-1,
                                      1.48103976427480074590e-1,
                                      1.51986665636164571966e-2,
                                      5.47593808499534494600e-4,
                                      1.05075007164441684324e-9};
constexpr std::array<double, 8> kE = {6.65790464350110377720e0, 5.46378491116411436990e0, 1.78482653991729133580e0,
                                      2.96560571828504891230e-1, 2.65321895265761230930e-2, 1.24266094738807843860e-3,
                                      2.71155556874348757815e-5, 2.01033439929228813265e-7};
constexpr std::array<double, 8> kF = {1.0,
                                      5.99832206555887937690e-1,
                                      1.36929880922735805310e-1,
                                      1.48753612908506148525e-2,
                                      7.86869131145613259100e-4,
                                      1.84631831751005468180e-5,
                                      1.42151175831644588870e-7,
                                      2.04426310338993978564e-15};

void check_alphas(double alpha1, double alpha) {
    if (!(alpha1 > 0 && alpha1 < alpha && alpha < 1)) {
        throw DomainError("need 0 < alpha1 < alpha < 1");
    }
}

}  // namespace

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double normal_inverse_cdf(double p) {
    if (!(p > 0 && p < 1)) throw DomainError("normal_inverse_cdf needs p in (0, 1)");
    const double q = p - 0.5;
    if (std::fabs(q) <= 0.425) {
        const double r = 0.180625 - q * q;
        return q * poly(kA, r) / poly(kB, r);
    }
    double r = std::sqrt(-std::log(q < 0 ? p : 1.0 - p));
    double z;
    if (r <= 5.0) {
        r -= 1.6;
        z = poly(kC, r) / poly(kD, r);
    } else {
        r -= 5.0;
        z = poly(kE, r) / poly(kF, r);
    }
    return q < 0 ? -z : z;
}

double cornish_fisher_quantile(const Shape& s, double p) {
    if (!(s.variance > 0)) throw DegenerateError("variance is zero; quantile is undefined");
    const double z = normal_inverse_cdf(p);
    const double g1 = s.skewness, g2 = s.excess_kurtosis;
    const double w = z + (z * z - 1) * g1 / 6 + (z * z * z - 3 * z) * g2 / 24 - (2 * z * z * z - 5 * z) * g1 * g1 / 36;
    return s.mean + w * std::sqrt(s.variance);
}

double cornish_fisher_cdf(const Shape& s, double x) {
    double lo = 1e-12, hi = 1 - 1e-12;
    if (x <= cornish_fisher_quantile(s, lo)) return 0.0;
    if (x >= cornish_fisher_quantile(s, hi)) return 1.0;
    for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (cornish_fisher_quantile(s, mid) < x) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

Rational overall_size_exact(const JointPmf& pmf, Count c1, Count c2) {
    BigInt hits = 0;
    for (const auto& [key, c] : pmf.counts) {
        if (key.first >= c1 || key.second >= c2) hits += c;
    }
    return Rational(hits, pmf.total);
}

CriticalValuePair critical_values_exact(const JointPmf& pmf, double alpha1, double alpha) {
    check_alphas(alpha1, alpha);
    const SampleDesign& d = pmf.design;
    const Rational a1(alpha1), a(alpha);

    // Stage-1 upper tails, indexed by threshold.
    std::vector<BigInt> tail1(static_cast<std::size_t>(d.max_u1() + 2), 0);
    for (const auto& [key, c] : pmf.counts) tail1[key.first] += c;
    for (Count u = d.max_u1(); u-- > 0;) tail1[u] += tail1[u + 1];

    Count c1 = 1;
    while (c1 <= d.max_u1() && Rational(tail1[c1], pmf.total) > a1) ++c1;
    const Rational spent(tail1[c1], pmf.total);
    const Rational remaining = a - spent;

    // P(U1 < c1, U2 >= c) for each c.
    std::vector<BigInt> tail2(static_cast<std::size_t>(d.max_u2() + 2), 0);
    for (const auto& [key, c] : pmf.counts) {
        if (key.first < c1) tail2[key.second] += c;
    }
    for (Count u = d.max_u2(); u-- > 0;) tail2[u] += tail2[u + 1];

    Count c2 = 1;
    while (c2 <= d.max_u2() && Rational(tail2[c2], pmf.total) > remaining) ++c2;
    if (Rational(tail2[c2], pmf.total) > remaining) throw InfeasibleAlpha("no stage-2 threshold meets the budget");

    const Rational size = spent + Rational(tail2[c2], pmf.total);
    CriticalValuePair out;
    out.c1 = c1;
    out.c2 = c2;
    out.alpha1_nominal = alpha1;
    out.alpha_overall_nominal = alpha;
    out.achieved_size = to_double(size);
    out.achieved_size_exact = size;
    out.method = CriticalValueMethod::ExactEnumeration;
    return out;
}

CriticalValuePair critical_values_exact(const SampleDesign& design, double alpha1, double alpha) {
    check_alphas(alpha1, alpha);
    return critical_values_exact(exact_joint_pmf(design), alpha1, alpha);
}

CriticalValuePair critical_values_cf(const SampleDesign& d, double alpha1, double alpha, const CfOptions& options) {
    check_alphas(alpha1, alpha);
    const MomentSet<double> moments =
        options.pi ? moments_general(d, *options.pi) : to_double(moments_null(d));
    const CumulantSet<double> k = mixed_cumulants(moments);
    const Shape s1 = standardized_shape(k, ShapeTarget::Stage1);
    const Shape s2 = standardized_shape(k, ShapeTarget::Stage2);
    const double half = options.continuity_correction ? 0.5 : 0.0;

    auto clamp = [](double v, Count hi) { return std::clamp<Count>(static_cast<Count>(std::ceil(v)), 1, hi); };
    const Count c1 = clamp(cornish_fisher_quantile(s1, 1 - alpha1) + half, d.max_u1() + 1);
    const double spent = c1 > d.max_u1() ? 0.0 : 1.0 - cornish_fisher_cdf(s1, static_cast<double>(c1) - half);
    const double remaining = alpha - spent;
    const Count c2 = remaining <= 0 ? d.max_u2() + 1
                                    : clamp(cornish_fisher_quantile(s2, 1 - std::min(remaining, 1 - 1e-12)) + half,
                                            d.max_u2() + 1);

    CriticalValuePair out;
    out.c1 = c1;
    out.c2 = c2;
    out.alpha1_nominal = alpha1;
    out.alpha_overall_nominal = alpha;
    out.method = CriticalValueMethod::CornishFisher;
    return out;
}

SizeEstimate overall_size(const SampleDesign& d, const CriticalValuePair& c, SizeMethod method,
                          std::uint64_t replications, std::uint64_t seed, unsigned threads) {
    SizeEstimate out;
    if (method == SizeMethod::Exact) {
        const Rational v = overall_size_exact(exact_joint_pmf(d), c.c1, c.c2);
        out.value = to_double(v);
        out.exact = v;
        return out;
    }
    if (replications == 0) throw DomainError("replications must be positive");
    const Distribution uniform = Distribution::uniform(0, 1);
    const std::size_t chunks = chunk_count(replications);
    std::vector<std::uint64_t> hits(chunks, 0);
    for_each_chunk(chunks, threads, [&](std::size_t k) {
        Rng rng(derive_seed(seed, k));
        std::vector<double> xs, ys;
        std::uint64_t h = 0;
        const std::uint64_t reps = chunk_length(replications, k);
        for (std::uint64_t r = 0; r < reps; ++r) {
            const StageStatistics s = draw_statistics(d, uniform, uniform, rng, xs, ys);
            h += s.u1 >= c.c1 || s.u2 >= c.c2;
        }
        hits[k] = h;
    });
    std::uint64_t total = 0;
    for (auto h : hits) total += h;
    out.value = static_cast<double>(total) / static_cast<double>(replications);
    out.standard_error = std::sqrt(out.value * (1 - out.value) / static_cast<double>(replications));
    return out;
}

}  // namespace tsmw
