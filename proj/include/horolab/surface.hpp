#pragma once

// Test functions on the modular surface (pulled back from the base
// point) and the normalized Haar integral over the fundamental domain.

#include <string>
#include <vector>

#include "horolab/group.hpp"
#include "horolab/reduce.hpp"

namespace horolab {

// vol(Γ\H²) = π/3 for the modular group, so dμ = (3/π) y^{-2} dx dy.
inline constexpr double kHaarNormalization = 3.0 / 3.14159265358979323846;

struct SurfaceFn {
    enum class Kind { constant, band, bump };
    Kind kind = Kind::constant;
    std::string name = "one";
    double level = 1;                          // constant value
    double y_lo = 0, y_hi = 0;                 // band: y_lo < y <= y_hi (y_hi <= 0 means unbounded)
    HalfPlanePoint center{0, 1.5};             // bump centre, inside F
    double radius = 0.15;                      // bump hyperbolic radius

    static SurfaceFn constant(double v = 1);
    static SurfaceFn above(double c);          // indicator of y > c
    static SurfaceFn band(double lo, double hi);
    static SurfaceFn bump(HalfPlanePoint c, double r, std::string name);

    // f at an already reduced point.
    double operator()(const HalfPlanePoint& z) const {
        switch (kind) {
            case Kind::constant: return level;
            case Kind::band: return (z.y > y_lo && (y_hi <= 0 || z.y <= y_hi)) ? 1.0 : 0.0;
            case Kind::bump: return bump_profile(hyperbolic_distance(z, center) / radius);
        }
        return 0;
    }
    static double bump_profile(double rho);     // exp(1 − 1/(1 − ρ²)) on ρ < 1
    double sup() const;
    // Lipschitz constant in the hyperbolic metric (indicators report inf).
    double lipschitz() const;
    // ‖f‖_{∞,1} proxy: max(sup, Lipschitz constant).
    double sobolev_1() const;
};

// f ≡ 1, y > 2, y > 4 and four bumps of radius 0.15 inside F.
std::vector<SurfaceFn> standard_test_functions();
SurfaceFn centered_bump();

struct HaarResult {
    double value = 0;
    double coarse = 0;  // value at half the resolution
    std::size_t grid = 0;
};

// In coordinates x = sin θ, y = cos θ / u with θ ∈ [−π/6, π/6], u ∈ (0, 1]
// the normalized measure is uniform, so the integral is a plain average
// over a midpoint grid. Certified by comparing grid and grid/2.
HaarResult haar_integral(const SurfaceFn& f, std::size_t grid = 1024, double tol = 1e-5,
                         Exec exec = default_exec());

} // namespace horolab
