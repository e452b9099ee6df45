#include <doctest.h>

#include <cmath>

#include "horolab/numeric.hpp"
#include "horolab/surface.hpp"

using namespace horolab;

namespace {

// Radial integral of the bump over a hyperbolic disc lying inside F:
// (3/π)·2π ∫_0^r φ(ρ/r) sinh ρ dρ, by composite Simpson.
double bump_oracle(double r) {
    const int n = 20000;
    const double h = r / n;
    double s = 0;
    for (int k = 0; k <= n; ++k) {
        const double rho = k * h;
        const double w = (k == 0 || k == n) ? 1 : (k % 2 ? 4 : 2);
        s += w * SurfaceFn::bump_profile(rho / r) * std::sinh(rho);
    }
    return 3 / kPi * 2 * kPi * s * h / 3;
}

} // namespace

TEST_SUITE("surface") {
    // Indicators converge at first order in the grid, hence the looser certificate.
    TEST_CASE("Haar integral closed forms") {
        CHECK(haar_integral(SurfaceFn::constant(1)).value == doctest::Approx(1).epsilon(1e-9));
        CHECK(haar_integral(SurfaceFn::above(2), 2048, 1e-4).value == doctest::Approx(3 / (2 * kPi)).epsilon(1e-4));
        CHECK(haar_integral(SurfaceFn::above(4), 2048, 1e-4).value == doctest::Approx(3 / (4 * kPi)).epsilon(1e-4));
        CHECK(haar_integral(SurfaceFn::above(1), 2048, 1e-4).value == doctest::Approx(3 / kPi).epsilon(1e-4));
    }

    TEST_CASE("disjoint indicators add") {
        const double band = haar_integral(SurfaceFn::band(2, 4), 2048, 1e-4).value;
        const double a2 = haar_integral(SurfaceFn::above(2), 2048, 1e-4).value, a4 = haar_integral(SurfaceFn::above(4), 2048, 1e-4).value;
        CHECK(band == doctest::Approx(a2 - a4).epsilon(1e-6));
        CHECK(band == doctest::Approx(3 / (4 * kPi)).epsilon(1e-4));
    }

    TEST_CASE("bump integral against a radial oracle") {
        const auto b = centered_bump();
        const double oracle = bump_oracle(0.15);
        CHECK(oracle == doctest::Approx(0.027273).epsilon(1e-4));
        CHECK(haar_integral(b).value == doctest::Approx(oracle).epsilon(1e-4));
        CHECK(b({0, 1.5}) == doctest::Approx(1));
        CHECK(b({0, 1.5 * std::exp(0.2)}) == 0);
    }

    TEST_CASE("standard functions sit inside F") {
        for (const auto& f : standard_test_functions()) {
            if (f.kind != SurfaceFn::Kind::bump) continue;
            // Disc of radius r around the centre stays in F: sample the boundary circle.
            for (int k = 0; k < 64; ++k) {
                const double th = 2 * kPi * k / 64;
                // hyperbolic circle: Euclidean centre (x, y cosh r), radius y sinh r
                const HalfPlanePoint z{f.center.x + f.center.y * std::sinh(f.radius) * std::cos(th),
                                       f.center.y * std::cosh(f.radius) + f.center.y * std::sinh(f.radius) * std::sin(th)};
                CHECK(in_fundamental_domain(z, 0));
            }
            CHECK(f.sup() == doctest::Approx(1));
            CHECK(std::isfinite(f.lipschitz()));
        }
        CHECK(std::isinf(SurfaceFn::above(2).lipschitz()));
    }

    TEST_CASE("certification resolution") {
        const auto r = haar_integral(SurfaceFn::above(2), 512, 1e-3);
        CHECK(std::fabs(r.value - r.coarse) <= 1e-3);
    }
}
