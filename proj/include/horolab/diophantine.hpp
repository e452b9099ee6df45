#pragma once

// Continued fractions with honest precision tracking, Diophantine-type
// estimates for numbers and lattice points, and the type-μ construction.

#include <boost/multiprecision/cpp_int.hpp>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "horolab/group.hpp"
#include "horolab/numeric.hpp"

namespace horolab {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

// A real number known to lie in [lo, hi]. Degenerate intervals are exact.
struct RealInterval {
    BigRational lo, hi;

    static RealInterval exact(const BigRational& v) { return {v, v}; }
    // The double's exact value widened by 2^10 ulp either side.
    static RealInterval from_double(double x);
    // Decimal literal "[-]digits[.digits][e±exp]" with half a unit in the
    // last written place either side.
    static RealInterval from_decimal(const std::string& s);
    static RealInterval sqrt_of(unsigned long n, unsigned bits = 256);
    static RealInterval golden_ratio(unsigned bits = 256);
    static RealInterval e_minus_two(unsigned terms = 80);

    bool is_exact() const { return lo == hi; }
    BigRational midpoint() const { return (lo + hi) / 2; }
    double to_double() const;
    DoubleDouble to_double_double() const;
};

RealInterval operator+(const RealInterval& a, const BigRational& b);
RealInterval operator-(const RealInterval& a, const BigRational& b);

struct ContinuedFraction {
    BigInt a0;
    std::vector<BigInt> digits;  // a_1, a_2, ...
    std::size_t depth() const { return digits.size(); }
    BigRational value() const;   // the finite CF as a rational
};

struct RationalApprox {
    BigInt p, q;
    double err_bound = 0;      // may underflow to 0 for huge q
    double log_err_bound = 0;  // natural log of err_bound, always finite
};

double log_big(const BigInt& n);  // natural log of n > 0

// Exact rational: stops early if the expansion terminates.
ContinuedFraction cf_expand(const BigRational& x, std::size_t depth);
// Interval: emits digits while both endpoints agree, PrecisionExhausted otherwise.
ContinuedFraction cf_expand(const RealInterval& x, std::size_t depth);
// binary64: depth <= 60 and the 2^10-ulp interval certificate.
ContinuedFraction cf_expand(double x, std::size_t depth);

std::vector<RationalApprox> convergents(const ContinuedFraction& cf);

// Truncated limsup estimate: max of log(1/|x−p_k/q_k|)/log q_k over the
// tail half of the convergents, using |x−p_k/q_k| <= 1/(q_k q_{k+1}).
double dioph_type_estimate(const ContinuedFraction& cf);
double dioph_type_estimate(const RealInterval& x, std::size_t depth);

// Depth-truncated certificate: every digit a_1..a_depth is <= bound.
bool is_badly_approximable(const RealInterval& x, std::size_t depth, long bound);

struct NonDiophantine {
    ContinuedFraction cf;
    std::vector<RationalApprox> approximants;  // scheduled levels only
    std::vector<std::size_t> levels;           // convergent index of each approximant
    int mu = 100;
    RealInterval enclosure() const;            // bracket from the last two convergents
};

// Digits follow the prefix (a0 first), then a_{k+1} = q_k^{mu-2} for
// `levels` steps, so |x − p_k/q_k| = 1/(q_k(a_{k+1}q_k + q_{k−1})) <= q_k^{−mu}.
NonDiophantine construct_non_dioph(int mu, std::size_t levels, const std::vector<long>& prefix);
NonDiophantine construct_non_dioph_100();

double lambda_partial(const DoubleDouble& alpha, double s, std::size_t n);

struct DiophProfile {
    double mu_hat = 0;
    double kappa_hat = 0;        // clamped to [0, 1], truncated estimate
    double kappa_slope = 0;      // raw −slope of log η against t
    double log_intercept = 0;    // fitted log C, reported, never asserted
    std::vector<std::pair<double, double>> samples;  // (t, η)
};

DiophProfile lattice_dioph_type(const LatticePoint& p, double t_max, std::size_t steps);

} // namespace horolab
