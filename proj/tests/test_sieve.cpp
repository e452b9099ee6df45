#include <doctest.h>

#include <cmath>
#include <numeric>

#include "horolab/error.hpp"
#include "horolab/sieve.hpp"

using namespace horolab;

namespace {

constexpr double kEulerGamma = 0.57721566490153286061;

double simpson(double (*f)(double), double a, double b, int n = 20000) {
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int k = 1; k < n; ++k) s += (k % 2 ? 4 : 2) * f(a + k * h);
    return s * h / 3;
}

} // namespace

TEST_SUITE("sieve") {
    TEST_CASE("sifted sums") {
        const auto pb = SieveProblem::uniform(30, 5, 5);
        CHECK(legendre_S(pb) == 10);
        CHECK(legendre_S(pb, SieveMethod::inclusion_exclusion) == doctest::Approx(10));
        CHECK(legendre_S(SieveProblem::uniform(30, 2, 2)) == 30);
        auto odd = SieveProblem::uniform(30, 3, 3);
        for (std::size_t n = 2; n <= 30; n += 2) odd.weights[n] = 0;
        CHECK(legendre_S(odd) == odd.total());
        CHECK(odd.total() == 15);
    }

    TEST_CASE("inclusion-exclusion agrees with direct") {
        for (double z : {3.0, 7.5, 13.0, 30.0}) {
            auto pb = SieveProblem::uniform(5000, z, z);
            for (std::size_t n = 1; n <= 5000; ++n) pb.weights[n] = 1 + std::sin(static_cast<double>(n)) * 0.5;
            CHECK(legendre_S(pb, SieveMethod::inclusion_exclusion) ==
                  doctest::Approx(legendre_S(pb, SieveMethod::direct)).epsilon(1e-10));
        }
    }

    TEST_CASE("remainders") {
        const auto pb = SieveProblem::uniform(30, 7, 7);
        CHECK_THROWS_AS(remainder_r(pb, 4), PreconditionViolated);
        CHECK(multiples_sum(pb, 2) == 15);
        CHECK(remainder_r(pb, 2) == doctest::Approx(0));
        CHECK(multiples_sum(pb, 6) == 5);
        CHECK(remainder_r(pb, 6) == doctest::Approx(0));
        const auto pb31 = SieveProblem::uniform(31, 7, 7);
        CHECK(remainder_r(pb31, 6) == doctest::Approx(-1.0 / 6));
    }

    TEST_CASE("linear sieve functions") {
        const double eg2 = 2 * std::exp(kEulerGamma);
        CHECK(f0(2) == 0);
        CHECK(F0(2) == doctest::Approx(std::exp(kEulerGamma)));
        CHECK(F0(2) == doctest::Approx(1.7811).epsilon(1e-4));
        CHECK(f0(3) == doctest::Approx(eg2 * std::log(2.0) / 3));
        // Delay-equation oracle at s = 4 and s = 5
        const double i4 = simpson([](double t) { return std::log(t - 2) / (t - 1); }, 3, 4);
        CHECK(F0(4) == doctest::Approx((eg2 + eg2 * i4) / 4).epsilon(1e-9));
        const double i5 = simpson([](double t) { return std::log(t - 2) / (t - 1); }, 3, 5);
        CHECK(F0(5) == doctest::Approx((eg2 + eg2 * i5) / 5).epsilon(1e-9));
        // continuity at the seams and the ordering f < 1 < F
        CHECK(F0(3 - 1e-9) == doctest::Approx(F0(3 + 1e-9)));
        CHECK(f0(4 - 1e-9) == doctest::Approx(f0(4 + 1e-9)));
        double gap = 10;
        for (double s = 2; s <= 5; s += 0.25) {
            CHECK(F0(s) > 1);
            CHECK(f0(s) < 1);
            CHECK(F0(s) - f0(s) < gap);
            gap = F0(s) - f0(s);
        }
        CHECK_THROWS_AS(F0(5.5), RangeUnsupported);
        CHECK_THROWS_AS(f0(0.5), RangeUnsupported);
    }

    TEST_CASE("S is monotone in z") {
        double prev = 1e300;
        for (double z : {2.0, 3.0, 5.0, 10.0, 30.0, 100.0}) {
            const double s = legendre_S(SieveProblem::uniform(10000, z, z));
            CHECK(s <= prev);
            prev = s;
        }
    }

    TEST_CASE("upper and lower bounds sandwich S") {
        for (std::uint64_t n : {10000ULL, 100000ULL, 1000000ULL}) {
            const double z = std::pow(static_cast<double>(n), 0.125);
            const auto rep = jr_bounds(SieveProblem::uniform(n, z, std::pow(z, 4)));
            CHECK(rep.lower_valid);
            CHECK(rep.lower <= rep.S);
            CHECK(rep.S <= rep.upper);
            CHECK(rep.inside);
            CHECK(rep.s == doctest::Approx(4));
        }
    }

    TEST_CASE("Mertens-type product") {
        CHECK(mertens_product(2, 3) == doctest::Approx(2));
        CHECK(mertens_product(2, 6) == doctest::Approx(2 * 1.5 * 1.25));
        for (double u : {10.0, 100.0, 1000.0})
            for (double z = 10 * u; z <= 1e6; z *= 10) CHECK(mertens_check(u, z, 0.1));
        CHECK(V_of_z(6) == doctest::Approx(0.5 * 2.0 / 3 * 0.8));
    }

    TEST_CASE("preconditions") {
        CHECK_THROWS_AS(validate(SieveProblem::uniform(10, 5, 4)), PreconditionViolated);
        CHECK_THROWS_AS(validate(SieveProblem::uniform(10, 5, 5, 0.01)), PreconditionViolated);
        auto pb = SieveProblem::uniform(10, 5, 5);
        pb.exceptional = {4};
        CHECK_THROWS_AS(validate(pb), PreconditionViolated);
    }
}
