#include "horolab/diophantine.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>

#include "horolab/error.hpp"

namespace horolab {

namespace mp = boost::multiprecision;

namespace {

BigInt floor_of(const BigRational& r) {
    const BigInt n = mp::numerator(r);
    const BigInt d = mp::denominator(r);
    BigInt q = n / d;
    if (n < 0 && q * d != n) q -= 1;
    return q;
}

BigRational rational_from_double(double x) {
    if (!std::isfinite(x)) throw PreconditionViolated("non-finite real input");
    if (x == 0) return BigRational(0);
    int e = 0;
    const double frac = std::frexp(x, &e);
    const auto m = static_cast<long long>(std::ldexp(frac, 53));
    e -= 53;
    if (e >= 0) return BigRational(BigInt(m) << e);
    return BigRational(BigInt(m), BigInt(1) << -e);
}

double rational_to_double(const BigRational& r) {
    BigInt n = mp::numerator(r);
    const BigInt d = mp::denominator(r);
    if (n == 0) return 0.0;
    const bool neg = n < 0;
    if (neg) n = -n;
    const long shift = 64 - (static_cast<long>(mp::msb(n)) - static_cast<long>(mp::msb(d)));
    BigInt q = shift >= 0 ? BigInt((n << shift) / d) : BigInt(n / (d << -shift));
    double v = std::ldexp(q.convert_to<double>(), static_cast<int>(-shift));
    return neg ? -v : v;
}

BigInt pow10(unsigned k) {
    BigInt r = 1;
    for (unsigned i = 0; i < k; ++i) r *= 10;
    return r;
}

} // namespace

double log_big(const BigInt& n) {
    if (n <= 0) throw PreconditionViolated("log of nonpositive integer");
    const long top = static_cast<long>(mp::msb(n));
    const long shift = std::max(0L, top - 60);
    const double lead = BigInt(n >> shift).convert_to<double>();
    return std::log(lead) + static_cast<double>(shift) * std::log(2.0);
}

RealInterval RealInterval::from_double(double x) {
    const BigRational v = rational_from_double(x);
    int e = 0;
    std::frexp(x == 0 ? 1.0 : x, &e);
    // ulp(x) = 2^(e-53); radius 2^10 ulp.
    const int re = e - 53 + 10;
    const BigRational rad = re >= 0 ? BigRational(BigInt(1) << re) : BigRational(BigInt(1), BigInt(1) << -re);
    return {v - rad, v + rad};
}

RealInterval RealInterval::from_decimal(const std::string& s) {
    std::size_t i = 0;
    bool neg = false;
    if (i < s.size() && (s[i] == '-' || s[i] == '+')) neg = s[i++] == '-';
    BigInt mant = 0;
    long frac_digits = 0;
    bool seen_digit = false, seen_point = false;
    for (; i < s.size(); ++i) {
        const char ch = s[i];
        if (std::isdigit(static_cast<unsigned char>(ch))) {
            mant = mant * 10 + (ch - '0');
            seen_digit = true;
            if (seen_point) ++frac_digits;
        } else if (ch == '.' && !seen_point) {
            seen_point = true;
        } else {
            break;
        }
    }
    long exp10 = 0;
    if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
        ++i;
        std::size_t used = 0;
        try {
            exp10 = std::stol(s.substr(i), &used);
        } catch (const std::exception&) {
            throw PreconditionViolated("malformed exponent in decimal '" + s + "'");
        }
        i += used;
    }
    if (!seen_digit || i != s.size()) throw PreconditionViolated("malformed decimal '" + s + "'");
    const long scale = exp10 - frac_digits;
    BigRational unit = scale >= 0 ? BigRational(pow10(static_cast<unsigned>(scale)))
                                  : BigRational(BigInt(1), pow10(static_cast<unsigned>(-scale)));
    BigRational v = BigRational(mant) * unit;
    if (neg) v = -v;
    const BigRational rad = unit / 2;
    return {v - rad, v + rad};
}

RealInterval RealInterval::sqrt_of(unsigned long n, unsigned bits) {
    const BigInt scaled = BigInt(n) << (2 * bits);
    const BigInt r = mp::sqrt(scaled);
    const BigInt den = BigInt(1) << bits;
    if (r * r == scaled) return exact(BigRational(r, den));
    return {BigRational(r, den), BigRational(r + 1, den)};
}

RealInterval RealInterval::golden_ratio(unsigned bits) {
    RealInterval s5 = sqrt_of(5, bits);
    return {(s5.lo + 1) / 2, (s5.hi + 1) / 2};
}

RealInterval RealInterval::e_minus_two(unsigned terms) {
    // Σ_{k>=2} 1/k!; the tail after K terms is below 2/(K+1)!.
    BigRational sum = 0;
    BigInt fact = 1;
    unsigned k = 1;
    for (; k <= terms; ++k) {
        fact *= k;
        if (k >= 2) sum += BigRational(BigInt(1), fact);
    }
    fact *= k;
    return {sum, sum + BigRational(BigInt(2), fact)};
}

double RealInterval::to_double() const { return rational_to_double(midpoint()); }

DoubleDouble RealInterval::to_double_double() const {
    const BigRational m = midpoint();
    const double hi = rational_to_double(m);
    const double lo = rational_to_double(m - rational_from_double(hi));
    return {hi, lo};
}

RealInterval operator+(const RealInterval& a, const BigRational& b) { return {a.lo + b, a.hi + b}; }
RealInterval operator-(const RealInterval& a, const BigRational& b) { return {a.lo - b, a.hi - b}; }

BigRational ContinuedFraction::value() const {
    if (digits.empty()) return BigRational(a0);
    BigRational v = BigRational(digits.back());
    for (std::size_t i = digits.size() - 1; i-- > 0;) v = BigRational(digits[i]) + 1 / v;
    return BigRational(a0) + 1 / v;
}

ContinuedFraction cf_expand(const RealInterval& x, std::size_t depth) {
    ContinuedFraction cf;
    BigRational lo = x.lo, hi = x.hi;
    if (lo > hi) std::swap(lo, hi);
    cf.a0 = floor_of(lo);
    if (floor_of(hi) != cf.a0) throw PrecisionExhausted("integer part not determined by the input interval");
    lo -= cf.a0;
    hi -= cf.a0;
    for (std::size_t k = 1; k <= depth; ++k) {
        if (lo == 0 && hi == 0) break;  // exact rational, expansion finished
        if (lo == 0)
            throw PrecisionExhausted("digit " + std::to_string(k) + " not determined (interval touches a rational)");
        const BigRational nlo = 1 / hi, nhi = 1 / lo;
        const BigInt a = floor_of(nlo);
        if (floor_of(nhi) != a)
            throw PrecisionExhausted("digit " + std::to_string(k) + " not determined by the input precision");
        cf.digits.push_back(a);
        lo = nlo - a;
        hi = nhi - a;
    }
    return cf;
}

ContinuedFraction cf_expand(const BigRational& x, std::size_t depth) { return cf_expand(RealInterval::exact(x), depth); }

ContinuedFraction cf_expand(double x, std::size_t depth) {
    if (depth > 60) throw PreconditionViolated("binary64 continued fractions are capped at depth 60");
    return cf_expand(RealInterval::from_double(x), depth);
}

std::vector<RationalApprox> convergents(const ContinuedFraction& cf) {
    std::vector<BigInt> p, q;
    p.reserve(cf.depth() + 1);
    q.reserve(cf.depth() + 1);
    BigInt pm2 = 0, pm1 = 1, qm2 = 1, qm1 = 0;
    auto push = [&](const BigInt& a) {
        BigInt pk = a * pm1 + pm2, qk = a * qm1 + qm2;
        pm2 = pm1;
        pm1 = pk;
        qm2 = qm1;
        qm1 = qk;
        p.push_back(pk);
        q.push_back(qk);
    };
    push(cf.a0);
    for (const auto& a : cf.digits) push(a);

    std::vector<RationalApprox> out(p.size());
    for (std::size_t k = 0; k < p.size(); ++k) {
        out[k].p = p[k];
        out[k].q = q[k];
        const double lq = log_big(q[k]);
        out[k].log_err_bound = k + 1 < p.size() ? -(lq + log_big(q[k + 1])) : -2 * lq;
        out[k].err_bound = std::exp(out[k].log_err_bound);
    }
    return out;
}

double dioph_type_estimate(const ContinuedFraction& cf) {
    const auto conv = convergents(cf);
    const std::size_t depth = cf.depth();
    double best = -1;
    for (std::size_t k = std::max<std::size_t>(1, (depth + 1) / 2); k + 1 <= depth; ++k) {
        if (conv[k].q < 2) continue;
        best = std::max(best, -conv[k].log_err_bound / log_big(conv[k].q));
    }
    if (best < 0) throw PreconditionViolated("expansion too short for a type estimate");
    return best;
}

double dioph_type_estimate(const RealInterval& x, std::size_t depth) {
    ContinuedFraction cf = cf_expand(x, depth);
    if (cf.depth() < depth)
        throw PrecisionExhausted("rational input: expansion terminated at depth " + std::to_string(cf.depth()));
    return dioph_type_estimate(cf);
}

bool is_badly_approximable(const RealInterval& x, std::size_t depth, long bound) {
    const ContinuedFraction cf = cf_expand(x, depth);
    return std::all_of(cf.digits.begin(), cf.digits.end(), [&](const BigInt& a) { return a <= bound; });
}

RealInterval NonDiophantine::enclosure() const {
    const auto conv = convergents(cf);
    if (conv.size() < 2) return RealInterval::exact(BigRational(conv.back().p, conv.back().q));
    BigRational u(conv[conv.size() - 2].p, conv[conv.size() - 2].q);
    BigRational v(conv.back().p, conv.back().q);
    if (u > v) std::swap(u, v);
    return {u, v};
}

NonDiophantine construct_non_dioph(int mu, std::size_t levels, const std::vector<long>& prefix) {
    if (mu < 2) throw PreconditionViolated("type exponent must be >= 2");
    if (prefix.empty()) throw PreconditionViolated("prefix needs at least a0");
    NonDiophantine out;
    out.mu = mu;
    out.cf.a0 = prefix[0];
    for (std::size_t i = 1; i < prefix.size(); ++i) {
        if (prefix[i] < 1) throw PreconditionViolated("partial quotients must be >= 1");
        out.cf.digits.push_back(prefix[i]);
    }
    // Denominator recurrence only; numerators come from convergents().
    BigInt qprev = 0, qcur = 1;
    for (std::size_t i = 1; i < prefix.size(); ++i) {
        BigInt next = BigInt(prefix[i]) * qcur + qprev;
        qprev = qcur;
        qcur = next;
    }
    const std::size_t first = prefix.size() - 1;
    for (std::size_t j = 0; j < levels; ++j) {
        BigInt a = mp::pow(qcur, static_cast<unsigned>(mu - 2));
        BigInt next = a * qcur + qprev;
        out.cf.digits.push_back(a);
        qprev = qcur;
        qcur = next;
    }
    const auto conv = convergents(out.cf);
    for (std::size_t j = 0; j < levels; ++j) {
        out.levels.push_back(first + j);
        out.approximants.push_back(conv[first + j]);
    }
    return out;
}

NonDiophantine construct_non_dioph_100() { return construct_non_dioph(100, 3, {0, 1}); }

double lambda_partial(const DoubleDouble& alpha, double s, std::size_t n) {
    if (!(s > 1)) throw PreconditionViolated("lambda_partial needs s > 1");
    Compensated acc;
    for (std::size_t m = 1; m <= n; ++m) {
        const double md = static_cast<double>(m);
        const double r = mul_mod(alpha, md, 1.0);
        const double dist = std::min(r, 1.0 - r);
        if (dist < 1e-15) throw DivisionNearZero("<n alpha> below 1e-15 at n=" + std::to_string(m));
        acc.add(1.0 / (dist * std::pow(md, s)));
    }
    return acc.value();
}

DiophProfile lattice_dioph_type(const LatticePoint& p, double t_max, std::size_t steps) {
    if (steps < 1 || !(t_max > 0)) throw PreconditionViolated("lattice_dioph_type needs t_max > 0 and steps >= 1");
    DiophProfile prof;
    std::vector<double> ts, logs;
    for (std::size_t j = 0; j <= steps; ++j) {
        const double t = t_max * static_cast<double>(j) / static_cast<double>(steps);
        const double eta = injectivity_eta(geodesic_flow(p, t));
        prof.samples.emplace_back(t, eta);
        ts.push_back(t);
        logs.push_back(std::log(eta));
    }
    const double slope = fit_slope(ts, logs, &prof.log_intercept);
    prof.kappa_slope = -slope;
    prof.kappa_hat = std::clamp(-slope, 0.0, 1.0);
    prof.mu_hat = std::numeric_limits<double>::quiet_NaN();
    return prof;
}

} // namespace horolab
