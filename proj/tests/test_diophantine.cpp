#include <doctest.h>

#include <cmath>
#include <numeric>

#include "horolab/diophantine.hpp"
#include "horolab/error.hpp"

using namespace horolab;

namespace {

// Euclid on exact integers, independent of cf_expand.
std::vector<long> euclid(long p, long q) {
    std::vector<long> out;
    while (q != 0) {
        long a = p / q, r = p % q;
        if (r < 0) {
            a -= 1;
            r += q;
        }
        out.push_back(a);
        p = q;
        q = r;
    }
    return out;
}

std::vector<long> as_longs(const ContinuedFraction& cf) {
    std::vector<long> v{cf.a0.convert_to<long>()};
    for (const auto& d : cf.digits) v.push_back(d.convert_to<long>());
    return v;
}

// e − 2 = [0; 1, 2, 1, 1, 4, 1, 1, 6, ...]
std::vector<long> e_pattern(std::size_t n) {
    // digits after a0: 1, 2, 1, 1, 4, 1, 1, 6 ...
    std::vector<long> w{0, 1};
    for (std::size_t k = 1; w.size() <= n; ++k) {
        w.push_back(2 * static_cast<long>(k));
        w.push_back(1);
        w.push_back(1);
    }
    w.resize(n + 1);
    return w;
}

} // namespace

TEST_SUITE("diophantine") {
    TEST_CASE("continued fraction examples") {
        const auto s2 = cf_expand(RealInterval::sqrt_of(2), 40);
        CHECK(s2.a0 == 1);
        for (const auto& d : s2.digits) CHECK(d == 2);
        const auto phi = cf_expand(RealInterval::golden_ratio(), 40);
        CHECK(phi.a0 == 1);
        for (const auto& d : phi.digits) CHECK(d == 1);
        const auto r = cf_expand(BigRational(415, 93), 10);
        CHECK(as_longs(r) == std::vector<long>{4, 2, 6, 7});
        CHECK(as_longs(r) == euclid(415, 93));
        CHECK(r.value() == BigRational(415, 93));
        CHECK(as_longs(cf_expand(BigRational(-7, 3), 10)) == euclid(-7, 3));
        const auto e2 = cf_expand(RealInterval::e_minus_two(), 20);
        CHECK(as_longs(e2) == e_pattern(20));
    }

    TEST_CASE("binary64 expansions stop honestly") {
        const auto cf = cf_expand(std::sqrt(2.0), 10);
        for (const auto& d : cf.digits) CHECK(d == 2);
        CHECK_THROWS_AS(cf_expand(std::sqrt(2.0), 40), PrecisionExhausted);
        CHECK_THROWS_AS(cf_expand(0.5, 61), PreconditionViolated);
    }

    TEST_CASE("convergent examples") {
        ContinuedFraction f{1, {1, 1, 1, 1}};
        const auto c = convergents(f);
        const std::vector<std::pair<long, long>> want{{1, 1}, {2, 1}, {3, 2}, {5, 3}, {8, 5}};
        REQUIRE(c.size() == want.size());
        for (std::size_t k = 0; k < c.size(); ++k) {
            CHECK(c[k].p == want[k].first);
            CHECK(c[k].q == want[k].second);
        }
        ContinuedFraction g{0, {2, 2, 2}};
        const auto d = convergents(g);
        const std::vector<std::pair<long, long>> want2{{0, 1}, {1, 2}, {2, 5}, {5, 12}};
        for (std::size_t k = 0; k < d.size(); ++k) {
            CHECK(d[k].p == want2[k].first);
            CHECK(d[k].q == want2[k].second);
        }
    }

    TEST_CASE("convergent invariants hold exactly") {
        for (const RealInterval& x : {RealInterval::sqrt_of(2), RealInterval::golden_ratio(), RealInterval::e_minus_two(),
                                      RealInterval::sqrt_of(7), RealInterval::from_decimal("0.7182818284590452353602874713")}) {
            const auto c = convergents(cf_expand(x, 20));
            for (std::size_t k = 1; k < c.size(); ++k) {
                const BigInt det = c[k].p * c[k - 1].q - c[k - 1].p * c[k].q;
                // p_k q_{k-1} - p_{k-1} q_k = (-1)^{k-1}
                CHECK(det == ((k - 1) % 2 == 0 ? BigInt(1) : BigInt(-1)));
                CHECK(boost::multiprecision::gcd(c[k].p, c[k].q) == 1);
            }
            for (const auto& a : c) {
                const BigRational r(a.p, a.q);
                BigRational gap = boost::multiprecision::abs(x.lo - r);
                if (boost::multiprecision::abs(x.hi - r) > gap) gap = boost::multiprecision::abs(x.hi - r);
                CHECK(gap * BigRational(a.q * a.q) < 1);
            }
        }
    }

    TEST_CASE("type estimates") {
        const double g = dioph_type_estimate(RealInterval::golden_ratio(), 30);
        CHECK(g >= 2.0);
        CHECK(g <= 2.1);
        const double s = dioph_type_estimate(RealInterval::sqrt_of(2), 30);
        CHECK(s >= 2.0);
        CHECK(s <= 2.1);
        CHECK(dioph_type_estimate(construct_non_dioph_100().cf) >= 100);
        CHECK_THROWS_AS(dioph_type_estimate(RealInterval::exact(BigRational(415, 93)), 10), PrecisionExhausted);
    }

    TEST_CASE("badly approximable certificates") {
        CHECK(is_badly_approximable(RealInterval::sqrt_of(2), 40, 2));
        CHECK(is_badly_approximable(RealInterval::golden_ratio(), 40, 1));
        CHECK_FALSE(is_badly_approximable(RealInterval::e_minus_two(), 20, 3));
    }

    TEST_CASE("type-100 construction") {
        const NonDiophantine nd = construct_non_dioph_100();
        const auto conv = convergents(nd.cf);
        REQUIRE(conv.size() >= 4);
        CHECK(conv[0].q == 1);
        CHECK(conv[1].q == 1);
        CHECK(conv[2].q == 2);
        CHECK(conv[3].q == boost::multiprecision::pow(BigInt(2), 99) + 1);
        const RealInterval enc = nd.enclosure();
        CHECK(enc.lo < enc.hi);
        for (const auto& a : nd.approximants) {
            CHECK(boost::multiprecision::gcd(a.p, a.q) == 1);
            const BigRational r(a.p, a.q);
            BigRational gap = boost::multiprecision::abs(enc.lo - r);
            if (boost::multiprecision::abs(enc.hi - r) > gap) gap = boost::multiprecision::abs(enc.hi - r);
            CHECK(gap * BigRational(boost::multiprecision::pow(a.q, 100)) <= 1);
        }
        // The prefix used for Theorem 1.3 replays lands on q = 169.
        const NonDiophantine t13 = construct_non_dioph(100, 2, {0, 2, 2, 2, 2, 2, 2});
        CHECK(t13.approximants.front().q == 169);
        CHECK(t13.approximants.front().p == 70);
    }

    TEST_CASE("lambda partial sums") {
        CHECK(dist_to_int(1.3) == doctest::Approx(0.3));
        CHECK(dist_to_int(-0.2) == doctest::Approx(0.2));
        const DoubleDouble a = RealInterval::sqrt_of(2).to_double_double();
        const double l3 = lambda_partial(a, 2, 1000), l4 = lambda_partial(a, 2, 10000);
        CHECK(l4 > l3);
        CHECK(l4 - l3 < 0.5);
        // Direct summation oracle in long double.
        long double direct = 0;
        for (int n = 1; n <= 1000; ++n) {
            const long double v = n * std::sqrt(2.0L);
            const long double d = std::fabs(v - std::nearbyint(v));
            direct += 1 / (d * n * n);
        }
        CHECK(l3 == doctest::Approx(static_cast<double>(direct)).epsilon(1e-9));
        double prev = 0;
        for (std::size_t n : {100, 1000, 10000, 100000}) {
            const double v = lambda_partial(a, 1.2, n);
            CHECK(v > prev);
            CHECK(v < 200);
            prev = v;
        }
        const double l1k = lambda_partial(a, 2, 1000), l2k = lambda_partial(a, 2, 2000);
        CHECK(l2k - l1k < 2 * 2 / 1000.0 * 10);
        CHECK_THROWS_AS(lambda_partial({0.5, 0}, 2, 10), DivisionNearZero);
        CHECK_THROWS_AS(lambda_partial(a, 1, 10), PreconditionViolated);
    }

    TEST_CASE("lattice Diophantine profiles") {
        const auto generic = lattice_dioph_type(from_left_coset(lower(std::sqrt(2.0) - 1)), 8, 16);
        CHECK(generic.kappa_hat < 0.15);
        CHECK(generic.kappa_hat >= 0);
        const auto rational = lattice_dioph_type(from_left_coset(lower(0.5)), 6, 12);
        // Past the entry into the cusp η decays like e^{-t}.
        std::vector<double> ts, ls;
        for (const auto& [t, eta] : rational.samples)
            if (t >= 3) {
                ts.push_back(t);
                ls.push_back(std::log(eta));
            }
        CHECK(-fit_slope(ts, ls) == doctest::Approx(1).epsilon(0.02));
        CHECK(rational.kappa_hat > generic.kappa_hat);
        const auto id = lattice_dioph_type(identity_coset(), 2, 4);
        CHECK(id.samples.front().second == doctest::Approx(1));
    }
}
