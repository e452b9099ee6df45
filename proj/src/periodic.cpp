#include "horolab/periodic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "horolab/error.hpp"

namespace horolab {

namespace {

using u128 = unsigned __int128;

std::uint64_t umod(std::int64_t a, std::uint64_t m) {
    const std::int64_t r = a % static_cast<std::int64_t>(m);
    return static_cast<std::uint64_t>(r < 0 ? r + static_cast<std::int64_t>(m) : r);
}

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>((static_cast<u128>(a) * b) % m);
}

std::int64_t inverse_mod(std::int64_t a, std::int64_t m) {
    if (m == 1) return 0;
    std::int64_t r0 = m, r1 = static_cast<std::int64_t>(umod(a, static_cast<std::uint64_t>(m)));
    std::int64_t t0 = 0, t1 = 1;
    while (r1 != 0) {
        const std::int64_t k = r0 / r1;
        std::int64_t tmp = r0 - k * r1;
        r0 = r1;
        r1 = tmp;
        tmp = t0 - k * t1;
        t0 = t1;
        t1 = tmp;
    }
    return t0 < 0 ? t0 + m : t0;
}

std::vector<std::int64_t> prime_divisors(std::int64_t n) {
    std::vector<std::int64_t> out;
    for (std::int64_t d = 2; d * d <= n; ++d) {
        if (n % d) continue;
        out.push_back(d);
        while (n % d == 0) n /= d;
    }
    if (n > 1) out.push_back(n);
    return out;
}

double log_abs_rational(const BigRational& r) {
    const BigInt n = boost::multiprecision::abs(boost::multiprecision::numerator(r));
    return log_big(n) - log_big(boost::multiprecision::denominator(r));
}

double log10_sum(double a, double b) {
    if (a < b) std::swap(a, b);
    return a + std::log10(1 + std::pow(10.0, b - a));
}

} // namespace

bool fixes_coset(std::int64_t p, std::int64_t q, std::int64_t s) {
    require(q >= 1, "q must be positive");
    const std::uint64_t uq = static_cast<std::uint64_t>(q);
    const std::uint64_t q2 = uq * uq;
    // q | s p
    if (mulmod(umod(s, uq), umod(p, uq), uq) != 0) return false;
    // q² | p² s
    const std::uint64_t p2 = mulmod(umod(p, q2), umod(p, q2), q2);
    return mulmod(p2, umod(s, q2), q2) == 0;
}

PeriodicPoint make_periodic_point(std::int64_t p, std::int64_t q) {
    require(q >= 1 && q <= kMaxPeriodicQ, "periodic points need 1 <= q <= 3e9");
    if (std::gcd(p, q) != 1) throw NotReduced("gcd(" + std::to_string(p) + ", " + std::to_string(q) + ") != 1");
    PeriodicPoint pt;
    pt.p = p;
    pt.q = q;
    pt.period = q * q;
    pt.b = inverse_mod(p, q);
    // The fixing set is a subgroup mZ; m = q² iff q² fixes and no q²/r does.
    bool ok = fixes_coset(p, q, pt.period);
    for (std::int64_t r : prime_divisors(q)) ok = ok && !fixes_coset(p, q, pt.period / r);
    if (!ok) throw std::logic_error("period certificate failed for p/q = " + std::to_string(p) + "/" + std::to_string(q));
    return pt;
}

HalfPlanePoint periodic_image(const PeriodicPoint& pt, double sigma, double scale) {
    const double q = static_cast<double>(pt.q);
    const double per = q * q;
    double s = std::fmod(sigma, per);
    if (s < 0) s += per;
    HalfPlanePoint z{centered_frac(-(static_cast<double>(pt.b) + s / q) / q), scale / per};
    reduce_point(z.x, z.y);
    return z;
}

std::vector<ApproxEntry> approx_periodic_sequence(const std::vector<RationalApprox>& candidates,
                                                  const RealInterval& x, double kappa) {
    require(kappa > 0 && kappa < 1, "approx_periodic_sequence needs 0 < kappa < 1");
    const double expo = 2 / (1 - kappa);
    const double rounded = std::nearbyint(expo);
    // κ arrives as a decimal string, so 2/(1−κ) = 20000 shows up as 20000.0000006.
    const bool exact = std::fabs(expo - rounded) < 1e-6 * std::max(1.0, expo);
    std::vector<ApproxEntry> out;
    for (const auto& c : candidates) {
        if (c.q < 2) continue;  // q = 1 meets every threshold trivially
        const BigRational r(c.p, c.q);
        BigRational gap = boost::multiprecision::abs(x.lo - r);
        const BigRational g2 = boost::multiprecision::abs(x.hi - r);
        if (g2 > gap) gap = g2;
        const double lq = log_big(c.q);
        bool ok;
        if (gap == 0) {
            ok = true;
        } else if (exact) {
            const BigInt qe = boost::multiprecision::pow(c.q, static_cast<unsigned>(rounded));
            ok = gap * BigRational(qe) <= 1;
        } else {
            ok = log_abs_rational(gap) <= -expo * lq;
        }
        if (!ok) continue;
        ApproxEntry e;
        e.p = c.p;
        e.q = c.q;
        e.log_gap = gap == 0 ? -INFINITY : log_abs_rational(gap);
        e.log_threshold = -expo * lq;
        if (c.q <= kMaxPeriodicQ && boost::multiprecision::abs(c.p) <= BigInt(INT64_MAX))
            e.point = make_periodic_point(c.p.convert_to<std::int64_t>(), c.q.convert_to<std::int64_t>());
        out.push_back(std::move(e));
    }
    if (out.empty())
        throw NoApproximantFound("no candidate within (q^2)^(-1/(1-kappa)); x is too Diophantine for this kappa");
    return out;
}

std::vector<ApproxEntry> approx_periodic_sequence(const NonDiophantine& x, double kappa) {
    return approx_periodic_sequence(x.approximants, x.enclosure(), kappa);
}

std::vector<ApproxEntry> approx_periodic_sequence(const RealInterval& x, std::size_t depth, double kappa) {
    auto conv = convergents(cf_expand(x, depth));
    if (!conv.empty()) conv.pop_back();  // the last level has no certified successor
    return approx_periodic_sequence(conv, x, kappa);
}

PeriodIntegral period_integral(const SurfaceFn& f, const PeriodicPoint& pt, std::uint64_t samples, double tol,
                               std::uint64_t max_samples, double scale, Exec exec) {
    const double per = static_cast<double>(pt.period);
    const std::uint64_t floor_n = 64 * static_cast<std::uint64_t>(pt.period);
    require(samples == 0 || samples >= floor_n, "period_integral needs samples >= 64 q^2");
    std::uint64_t n = std::max(samples, floor_n);
    auto level = [&](std::uint64_t m) {
        const double h = per / static_cast<double>(m);
        auto body = [&](std::size_t j, Compensated& acc) {
            acc.add(f(periodic_image(pt, (static_cast<double>(j) + 0.5) * h, scale)));
        };
        return reduce<Compensated>(exec, m, body).value() / static_cast<double>(m);
    };
    double prev = level(n);
    for (;;) {
        if (2 * n > max_samples)
            throw QuadratureUnderResolved("period integral not certified within " + std::to_string(max_samples) +
                                          " samples (q=" + std::to_string(pt.q) + ")");
        n *= 2;
        const double cur = level(n);
        if (std::fabs(cur - prev) < tol) return {cur, std::fabs(cur - prev), n};
        prev = cur;
    }
}

void ErrorBudget::add(std::string name, double log10_value) {
    terms.push_back({std::move(name), log10_value, std::pow(10.0, log10_value)});
    log10_total = terms.size() == 1 ? log10_value : log10_sum(log10_total, log10_value);
    total = std::pow(10.0, log10_total);
}

double orbit_divergence_bound(double s, double delta) {
    return std::max({s * s, std::fabs(s), 1.0}) * delta;
}

double shadow_bound_n5(double n, double gap) { return std::pow(n, 5) * gap; }

ErrorBudget error_budget_p23_log(double log10_n, double gamma, double log10_d_pq, double log10_d_q) {
    ErrorBudget b;
    b.add("orbit_shadow", (2 + 2 * gamma) * log10_n + log10_d_pq);
    b.add("closed_horocycle", 3 * log10_d_q + (gamma - 1) / 2 * log10_n);
    return b;
}

ErrorBudget error_budget_p23(double n, double gamma, double d_pq, double d_q) {
    require(n > 0 && d_pq > 0 && d_q > 0, "budget inputs must be positive");
    return error_budget_p23_log(std::log10(n), gamma, std::log10(d_pq), std::log10(d_q));
}

ErrorBudget error_budget_l45_log(double log10_n, double log10_gap, double log10_q, double eps) {
    ErrorBudget b;
    b.add("orbit_shadow", 4 * log10_n + log10_gap);
    b.add("closed_horocycle", 6 * log10_q + (-0.5 + eps) * log10_n);
    return b;
}

ErrorBudget error_budget_l45(double n, double gap, double q, double eps) {
    require(n > 0 && gap > 0 && q > 0, "budget inputs must be positive");
    return error_budget_l45_log(std::log10(n), std::log10(gap), std::log10(q), eps);
}

ErrorBudget error_budget_l45(double n, double x, double p, double q, double eps) {
    return error_budget_l45(n, std::fabs(x - p / q), q, eps);
}

} // namespace horolab
