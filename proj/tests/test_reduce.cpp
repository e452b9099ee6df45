#include <doctest.h>

#include <cstring>
#include <random>

#include "horolab/expsum.hpp"
#include "horolab/numeric.hpp"
#include "horolab/orbit.hpp"
#include "horolab/periodic.hpp"
#include "horolab/reduce.hpp"

using namespace horolab;

namespace {

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

} // namespace

TEST_SUITE("reduce") {
    TEST_CASE("compensated sum of a badly conditioned series") {
        // 1 + 1e-16 * 1e6 loses everything in naive summation.
        auto body = [](std::size_t i, Compensated& acc) { acc.add(i == 0 ? 1.0 : 1e-16); };
        const double v = reduce<Compensated>(Exec::serial, 1000001, body).value();
        CHECK(v == doctest::Approx(1 + 1e-10).epsilon(1e-15));
    }

    TEST_CASE("serial and parallel paths agree bit for bit") {
        set_thread_count(4);
        auto body = [](std::size_t i, Compensated& acc) { acc.add(std::sin(static_cast<double>(i) * 0.37) / (1.0 + i)); };
        for (std::size_t n : {std::size_t{1}, kBlock - 1, kBlock, 3 * kBlock + 17, std::size_t{1000003}}) {
            const double s = reduce<Compensated>(Exec::serial, n, body).value();
            const double p = reduce<Compensated>(Exec::parallel, n, body).value();
            CHECK(same_bits(s, p));
        }
        const auto a = power_sum(1, 0.1, 3, 1, 1 << 18, Exec::serial).value;
        const auto b = power_sum(1, 0.1, 3, 1, 1 << 18, Exec::parallel).value;
        CHECK(same_bits(a.real(), b.real()));
        CHECK(same_bits(a.imag(), b.imag()));

        const PeriodicPoint pt = make_periodic_point(2, 7);
        const auto f = SurfaceFn::above(2);
        CHECK(same_bits(period_integral(f, pt, 0, 1e-4, kDefaultMaxSamples, 1, Exec::serial).value,
                        period_integral(f, pt, 0, 1e-4, kDefaultMaxSamples, 1, Exec::parallel).value));

        const Orbit orbit(OrbitPoint::generic(0.4142135623730950488L), SequenceSpec{PowerSparse{1, 0.05}, 100000});
        const auto fns = standard_test_functions();
        const auto bs = birkhoff(orbit, fns, 100000, CoverageGrid{}, Exec::serial);
        const auto bp = birkhoff(orbit, fns, 100000, CoverageGrid{}, Exec::parallel);
        for (std::size_t i = 0; i < fns.size(); ++i) CHECK(same_bits(bs.averages[i], bp.averages[i]));
        CHECK(bs.coverage == bp.coverage);
        set_thread_count(0);
    }

    TEST_CASE("mul_mod keeps alpha n^2 mod a period accurate") {
        const DoubleDouble alpha{1.4142135623730951, -9.667293313452913e-17};
        // √2·10^12 mod 28561 to 50 digits (mpmath).
        const double r = mul_mod(alpha, 1e12, 28561);
        CHECK(std::fabs(r - 24506.095048801688724) < 1e-9);
        CHECK(r >= 0);
        CHECK(r < 28561);
    }

    TEST_CASE("fit_slope and median") {
        CHECK(fit_slope({0, 1, 2, 3}, {1, 3, 5, 7}) == doctest::Approx(2));
        CHECK(median({3, 1, 2}) == 2);
        CHECK(median({4, 1, 2, 3}) == doctest::Approx(2.5));
    }
}
