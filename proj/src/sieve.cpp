#include "horolab/sieve.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <mutex>

#include "horolab/error.hpp"
#include "horolab/numeric.hpp"
#include "horolab/sequences.hpp"

namespace horolab {

namespace {

std::vector<std::uint32_t> primes_below(double z) {
    if (z <= 2) return {};
    auto table = shared_primes(static_cast<std::uint64_t>(std::ceil(z)));
    std::vector<std::uint32_t> out;
    for (std::uint32_t p : table->primes()) {
        if (static_cast<double>(p) >= z) break;
        out.push_back(p);
    }
    return out;
}

// Cumulative Σ −log(1 − 1/p) over the shared prime table.
struct LogPrefix {
    std::shared_ptr<const PrimeTable> table;
    std::vector<long double> prefix;  // prefix[i] = Σ_{j<i}
};

std::shared_ptr<const LogPrefix> shared_log_prefix(std::uint64_t limit) {
    static std::mutex mu;
    static std::shared_ptr<const LogPrefix> cache;
    std::lock_guard<std::mutex> lock(mu);
    if (!cache || cache->table->limit() < limit) {
        auto lp = std::make_shared<LogPrefix>();
        lp->table = shared_primes(limit);
        const auto& ps = lp->table->primes();
        lp->prefix.resize(ps.size() + 1, 0.0L);
        for (std::size_t i = 0; i < ps.size(); ++i)
            lp->prefix[i + 1] = lp->prefix[i] - std::log1p(-1.0L / static_cast<long double>(ps[i]));
        cache = lp;
    }
    return cache;
}

// Enumerate squarefree d | P(z) with d < limit, grouped by smallest prime.
// visit(d, mu) is called for every d including 1 (in group -1).
template <class Visit>
std::uint64_t dfs_from(const std::vector<std::uint32_t>& ps, std::size_t start, long double d, int mu,
                       long double limit, Visit& visit, std::uint64_t budget) {
    std::uint64_t count = 0;
    for (std::size_t i = start; i < ps.size(); ++i) {
        const long double nd = d * ps[i];
        if (nd >= limit) break;  // primes ascend, so later ones overshoot too
        visit(static_cast<std::uint64_t>(nd), -mu);
        ++count;
        if (count > budget) throw DivisorExplosion("more than 1e8 qualifying divisors");
        count += dfs_from(ps, i + 1, nd, -mu, limit, visit, budget - count);
    }
    return count;
}

template <class Term>
double divisor_sum(const std::vector<std::uint32_t>& ps, long double limit, Term term) {
    // term(d, mu) -> contribution; partitioned by leading prime, merged in order.
    std::vector<Compensated> parts(ps.size() + 1);
    if (1 < limit) parts[0].add(term(1, 1));
    const long long np = static_cast<long long>(ps.size());
    std::vector<std::uint64_t> counts(ps.size(), 0);
#pragma omp parallel for schedule(dynamic, 1)
    for (long long i = 0; i < np; ++i) {
        const std::size_t ui = static_cast<std::size_t>(i);
        const long double d = ps[ui];
        if (d >= limit) continue;
        Compensated& acc = parts[ui + 1];
        auto visit = [&](std::uint64_t dd, int mu) { acc.add(term(dd, mu)); };
        visit(static_cast<std::uint64_t>(d), -1);
        counts[ui] = 1 + dfs_from(ps, ui + 1, d, -1, limit, visit, kMaxDivisors);
    }
    std::uint64_t total = 0;
    for (auto c : counts) total += c;
    if (total > kMaxDivisors) throw DivisorExplosion("more than 1e8 qualifying divisors");
    Compensated out;
    for (const auto& p : parts) out.merge(p);
    return out.value();
}

} // namespace

SieveProblem SieveProblem::uniform(std::uint64_t n, double z, double D, double eps) {
    SieveProblem pb;
    pb.weights.assign(n + 1, 1.0);
    pb.weights[0] = 0;
    pb.z = z;
    pb.D = D;
    pb.eps = eps;
    return pb;
}

double SieveProblem::total() const {
    Compensated acc;
    for (std::size_t n = 1; n < weights.size(); ++n) acc.add(weights[n]);
    return acc.value();
}

double SieveProblem::log_Q() const {
    double s = 0;
    for (auto p : exceptional) s += std::log(static_cast<double>(p));
    return s;
}

void validate(const SieveProblem& pb) {
    require(pb.z >= 2, "sieve level z must be >= 2");
    require(pb.D >= pb.z, "sieve needs D >= z");
    require(pb.eps > 0 && pb.eps < 1.0 / 200, "sieve needs 0 < eps < 1/200");
    for (std::size_t n = 1; n < pb.weights.size(); ++n)
        require(pb.weights[n] >= 0 && std::isfinite(pb.weights[n]), "sieve weights must be finite and nonnegative");
    for (auto p : pb.exceptional) {
        require(p >= 2 && p <= 10000000ULL, "exceptional primes must lie in [2, 1e7]");
        require(shared_primes(p)->is_prime(p), "exceptional set must contain primes");
    }
}

double multiples_sum(const SieveProblem& pb, std::uint64_t d) {
    require(d >= 1, "divisor must be positive");
    Compensated acc;
    for (std::uint64_t m = d; m <= pb.n_max(); m += d) acc.add(pb.weights[m]);
    return acc.value();
}

double legendre_S(const SieveProblem& pb, SieveMethod method) {
    validate(pb);
    const std::uint64_t N = pb.n_max();
    if (method == SieveMethod::direct) {
        require(N <= 100000000ULL, "direct path supports support up to 1e8");
        const auto mask = rough_mask(pb.z, N);
        Compensated acc;
        for (std::uint64_t n = 1; n <= N; ++n)
            if (mask[n]) acc.add(pb.weights[n]);
        return acc.value();
    }
    require(pb.z <= 1e4, "inclusion-exclusion path supports z <= 1e4");
    const auto ps = primes_below(pb.z);
    // |A_d| = 0 for d > N, so the sum runs over d <= N.
    return divisor_sum(ps, static_cast<long double>(N) + 1,
                       [&](std::uint64_t d, int mu) { return mu * multiples_sum(pb, d); });
}

double V_of_z(double z) {
    require(z >= 2 && z <= 1e7, "V_of_z needs 2 <= z <= 1e7");
    double v = 1;
    for (std::uint32_t p : primes_below(z)) v *= 1 - 1.0 / p;
    return v;
}

double mertens_product(double u, double z) {
    require(u >= 2 && u < z && z <= 1e7, "mertens_check needs 2 <= u < z <= 1e7");
    auto lp = shared_log_prefix(static_cast<std::uint64_t>(std::ceil(z)));
    const auto& ps = lp->table->primes();
    auto lo = std::lower_bound(ps.begin(), ps.end(), u, [](std::uint32_t p, double v) { return p < v; });
    auto hi = std::lower_bound(ps.begin(), ps.end(), z, [](std::uint32_t p, double v) { return p < v; });
    const long double s = lp->prefix[static_cast<std::size_t>(hi - ps.begin())] -
                          lp->prefix[static_cast<std::size_t>(lo - ps.begin())];
    return static_cast<double>(std::exp(s));
}

bool mertens_check(double u, double z, double eps) {
    return mertens_product(u, z) < (1 + eps / 3) * std::log(z) / std::log(u);
}

double remainder_r(const SieveProblem& pb, std::uint64_t d) {
    require(d >= 1, "divisor must be positive");
    const auto f = factorize(d);
    for (std::size_t i = 0; i < f.factors.size(); ++i) {
        require(i == 0 || f.factors[i] != f.factors[i - 1], "remainder_r needs squarefree d");
        require(static_cast<double>(f.factors[i]) < pb.z, "remainder_r needs d | P(z)");
    }
    return multiples_sum(pb, d) - pb.total() / static_cast<double>(d);
}

double R_total(const SieveProblem& pb) {
    validate(pb);
    const auto ps = primes_below(pb.z);
    const double A = pb.total();
    const long double limit = std::exp(static_cast<long double>(std::log(pb.D) + pb.log_Q()));
    return divisor_sum(ps, limit, [&](std::uint64_t d, int) {
        const double Ad = d <= pb.n_max() ? multiples_sum(pb, d) : 0.0;
        return std::fabs(Ad - A / static_cast<double>(d));
    });
}

namespace {

constexpr double kTwoEg = 2 * 1.78107241799019798523;  // 2 e^{γ_E}

double gk(const std::function<double(double)>& f, double a, double b) {
    if (b <= a) return 0;
    return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 5, 1e-13);
}

} // namespace

double F0(double s) {
    if (!(s >= 1 && s <= 5)) throw RangeUnsupported("F0 implemented on [1,5], got s=" + std::to_string(s));
    if (s <= 3) return kTwoEg / s;
    // (sF(s))' = f(s−1) with f(t) = 2e^γ log(t−1)/t on [2,4]
    const double I = gk([](double t) { return kTwoEg * std::log(t - 2) / (t - 1); }, 3, s);
    return (kTwoEg + I) / s;
}

double f0(double s) {
    if (!(s >= 1 && s <= 5)) throw RangeUnsupported("f0 implemented on [1,5], got s=" + std::to_string(s));
    if (s <= 2) return 0;
    if (s <= 4) return kTwoEg * std::log(s - 1) / s;
    // (sf(s))' = F(s−1)
    const double I = gk([](double t) { return F0(t - 1); }, 4, s);
    return (4 * f0(4) + I) / s;
}

HypothesisCheck sieve_hypothesis(const SieveProblem& pb) {
    HypothesisCheck h;
    const auto ps = primes_below(pb.z);
    std::vector<std::uint32_t> kept;
    for (auto p : ps)
        if (std::find(pb.exceptional.begin(), pb.exceptional.end(), p) == pb.exceptional.end()) kept.push_back(p);
    // LHS is constant on (p_{i−1}, p_i] and RHS decreases in u, so u = p_i is the worst case.
    long double suffix = 0;
    const double lz = std::log(pb.z);
    for (std::size_t i = kept.size(); i-- > 0;) {
        suffix += -std::log1p(-1.0L / kept[i]);
        const double lhs = static_cast<double>(std::exp(suffix));
        const double rhs = (1 + pb.eps) * lz / std::log(static_cast<double>(kept[i]));
        const double ratio = lhs / rhs;
        if (ratio > h.worst_ratio) {
            h.worst_ratio = ratio;
            h.worst_u = kept[i];
        }
        if (!(lhs < rhs)) h.holds = false;
    }
    return h;
}

SieveReport jr_bounds(const SieveProblem& pb) {
    validate(pb);
    SieveReport r;
    r.s = std::log(pb.D) / std::log(pb.z);
    r.F0 = F0(r.s);
    r.f0 = f0(r.s);
    r.S = legendre_S(pb);
    r.V = V_of_z(pb.z);
    r.X = r.V * pb.total();
    r.R = R_total(pb);
    const double slack = pb.eps * std::exp(14 - r.s);
    r.upper = (r.F0 + slack) * r.X + r.R;
    r.lower_valid = pb.D >= pb.z * pb.z;
    r.lower = r.lower_valid ? (r.f0 - slack) * r.X - r.R : 0.0;
    r.hypothesis = sieve_hypothesis(pb);
    r.inside = r.lower <= r.S && r.S <= r.upper;
    return r;
}

} // namespace horolab
