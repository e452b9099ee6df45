#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "horolab/error.hpp"
#include "horolab/sequences.hpp"

using namespace horolab;

namespace {

// Trial division, kept apart from the library's factorizer.
std::vector<std::uint64_t> trial(std::uint64_t n) {
    std::vector<std::uint64_t> f;
    for (std::uint64_t p = 2; p * p <= n; ++p)
        while (n % p == 0) {
            f.push_back(p);
            n /= p;
        }
    if (n > 1) f.push_back(n);
    return f;
}

std::vector<std::uint64_t> stream_ns(const SequenceSpec& s) {
    TimeStream ts(s);
    std::vector<std::uint64_t> out;
    while (auto x = ts.next()) out.push_back(x->n);
    return out;
}

} // namespace

TEST_SUITE("sequences") {
    TEST_CASE("time formulas") {
        const auto p = gen_times({PowerSparse{1, 0.1}, 3});
        REQUIRE(p.size() == 3);
        CHECK(p[0] == doctest::Approx(1));
        CHECK(p[1] == doctest::Approx(std::pow(2.0, 1.1)).epsilon(1e-14));
        CHECK(p[2] == doctest::Approx(std::pow(3.0, 1.1)).epsilon(1e-14));
        const auto q = gen_times({Squares{{1, 0}}, 4});
        CHECK(q == std::vector<double>{1, 4, 9, 16});
        const SequenceSpec ap{AlmostPrimes{2, 1}, 10};
        CHECK(stream_ns(ap) == std::vector<std::uint64_t>{1, 2, 3, 4, 5, 6, 7, 9, 10});
        const auto at = gen_times(ap);
        CHECK(at.size() == 9);
        CHECK(at.back() == 10);
    }

    TEST_CASE("invalid specs are rejected") {
        CHECK_THROWS_AS(validate({PowerSparse{1, -0.1}, 10}), PreconditionViolated);
        CHECK_THROWS_AS(validate({PowerSparse{0, 0.05}, 10}), PreconditionViolated);
        CHECK_THROWS_AS(validate({AlmostPrimes{0, 1}, 10}), PreconditionViolated);
    }

    TEST_CASE("factorization examples and oracle") {
        CHECK(factorize(12).factors == std::vector<std::uint64_t>{2, 2, 3});
        CHECK(factorize(12).omega_big == 3);
        CHECK(factorize(1).factors.empty());
        CHECK(factorize(1).omega_big == 0);
        CHECK(factorize(9991).factors == std::vector<std::uint64_t>{97, 103});
        std::mt19937_64 rng(7);
        for (int i = 0; i < 2000; ++i) {
            const std::uint64_t n = 1 + rng() % 100000000ULL;
            CHECK(factorize(n).factors == trial(n));
        }
        CHECK(factorize(999999999989ULL).factors.size() == 1);  // prime near the cap
        CHECK_THROWS_AS(factorize(kFactorizeMax + 1), FactorizationTooLarge);
    }

    TEST_CASE("Omega is completely additive") {
        OmegaSieve sieve(1000000);
        std::mt19937_64 rng(11);
        for (int i = 0; i < 10000; ++i) {
            const std::uint64_t a = 1 + rng() % 1000, b = 1 + rng() % 1000;
            CHECK(sieve.omega(a * b) == sieve.omega(a) + sieve.omega(b));
        }
        for (std::uint64_t n = 1; n <= 2000; ++n) CHECK(sieve.omega(n) == trial(n).size());
    }

    TEST_CASE("almost primes") {
        auto l1 = almost_primes(1, 20);
        CHECK(l1 == std::vector<std::uint64_t>{1, 2, 3, 5, 7, 11, 13, 17, 19});
        CHECK(almost_primes(2, 10) == std::vector<std::uint64_t>{1, 2, 3, 4, 5, 6, 7, 9, 10});
        // Nesting in L.
        const auto a2 = almost_primes(2, 5000), a3 = almost_primes(3, 5000);
        CHECK(std::includes(a3.begin(), a3.end(), a2.begin(), a2.end()));
        // Count of n <= 10^6 with Ω(n) <= 3 against a direct count.
        const auto big = almost_primes(3, 1000000);
        OmegaSieve sieve(1000000);
        std::size_t direct = 0;
        for (std::uint64_t n = 1; n <= 1000000; ++n) direct += sieve.omega(n) <= 3;
        CHECK(big.size() == direct);
        std::size_t spot = 0;
        for (std::uint64_t n = 999000; n <= 1000000; ++n) spot += trial(n).size() <= 3;
        CHECK(std::count_if(big.begin(), big.end(), [](std::uint64_t n) { return n >= 999000; }) ==
              static_cast<long>(spot));
    }

    TEST_CASE("rough numbers") {
        CHECK(rough_numbers(5, 30) == std::vector<std::uint64_t>{1, 5, 7, 11, 13, 17, 19, 23, 25, 29});
        const auto all = rough_numbers(2, 50);
        CHECK(all.size() == 50);
        const auto mask = rough_mask(11.5, 1000);
        for (std::uint64_t n = 1; n <= 1000; ++n)
            CHECK(static_cast<bool>(mask[n]) == (std::gcd(n, std::uint64_t{2 * 3 * 5 * 7 * 11}) == 1));
    }

    TEST_CASE("prime table") {
        PrimeTable t(100);
        CHECK(t.primes().size() == 25);
        CHECK(t.is_prime(97));
        CHECK_FALSE(t.is_prime(91));
        CHECK(shared_primes(1000)->limit() >= 1000);
        CHECK(shared_primes(1000)->primes()[167] == 997);
    }
}
