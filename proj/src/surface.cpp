#include "horolab/surface.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "horolab/error.hpp"
#include "horolab/numeric.hpp"

namespace horolab {

SurfaceFn SurfaceFn::constant(double v) {
    SurfaceFn f;
    f.kind = Kind::constant;
    f.level = v;
    f.name = v == 1 ? "one" : "const";
    return f;
}

SurfaceFn SurfaceFn::above(double c) {
    SurfaceFn f;
    f.kind = Kind::band;
    f.y_lo = c;
    f.y_hi = 0;
    char buf[32];
    std::snprintf(buf, sizeof buf, "y_gt_%g", c);
    f.name = buf;
    return f;
}

SurfaceFn SurfaceFn::band(double lo, double hi) {
    require(hi > lo, "band needs hi > lo");
    SurfaceFn f;
    f.kind = Kind::band;
    f.y_lo = lo;
    f.y_hi = hi;
    char buf[48];
    std::snprintf(buf, sizeof buf, "y_in_%g_%g", lo, hi);
    f.name = buf;
    return f;
}

SurfaceFn SurfaceFn::bump(HalfPlanePoint c, double r, std::string name) {
    require(r > 0, "bump radius must be positive");
    require(in_fundamental_domain(c, 0.0), "bump centre must lie in F");
    SurfaceFn f;
    f.kind = Kind::bump;
    f.center = c;
    f.radius = r;
    f.name = std::move(name);
    return f;
}

double SurfaceFn::bump_profile(double rho) {
    if (rho >= 1) return 0;
    return std::exp(1 - 1 / (1 - rho * rho));
}

double SurfaceFn::sup() const {
    switch (kind) {
        case Kind::constant: return std::fabs(level);
        case Kind::band: return 1;
        case Kind::bump: return 1;
    }
    return 0;
}

double SurfaceFn::lipschitz() const {
    switch (kind) {
        case Kind::constant: return 0;
        case Kind::band: return std::numeric_limits<double>::infinity();
        case Kind::bump: {
            // max_ρ |ψ'(ρ)| on a fine grid, divided by the radius
            double best = 0;
            for (int i = 1; i < 4000; ++i) {
                const double rho = i / 4000.0;
                const double d = 2 * rho / ((1 - rho * rho) * (1 - rho * rho)) * bump_profile(rho);
                best = std::max(best, d);
            }
            return best / radius;
        }
    }
    return 0;
}

double SurfaceFn::sobolev_1() const { return std::max(sup(), lipschitz()); }

std::vector<SurfaceFn> standard_test_functions() {
    return {SurfaceFn::constant(1),
            SurfaceFn::above(2),
            SurfaceFn::above(4),
            SurfaceFn::bump({0.0, 1.5}, 0.15, "bump_c"),
            SurfaceFn::bump({0.25, 1.25}, 0.15, "bump_r"),
            SurfaceFn::bump({-0.25, 1.25}, 0.15, "bump_l"),
            SurfaceFn::bump({0.0, 2.5}, 0.15, "bump_h")};
}

SurfaceFn centered_bump() { return SurfaceFn::bump({0.0, 1.5}, 0.15, "bump_c"); }

namespace {

double haar_grid(const SurfaceFn& f, std::size_t n, Exec exec) {
    const double dth = kPi / 3 / static_cast<double>(n);
    const double du = 1.0 / static_cast<double>(n);
    auto body = [&](std::size_t idx, Compensated& acc) {
        const std::size_t i = idx / n, j = idx % n;
        const double th = -kPi / 6 + (static_cast<double>(i) + 0.5) * dth;
        const double u = (static_cast<double>(j) + 0.5) * du;
        acc.add(f({std::sin(th), std::cos(th) / u}));
    };
    return reduce<Compensated>(exec, n * n, body).value() / static_cast<double>(n * n);
}

} // namespace

HaarResult haar_integral(const SurfaceFn& f, std::size_t grid, double tol, Exec exec) {
    require(grid >= 8 && grid % 2 == 0, "haar grid must be even and >= 8");
    HaarResult r;
    r.grid = grid;
    r.coarse = haar_grid(f, grid / 2, exec);
    r.value = haar_grid(f, grid, exec);
    if (std::fabs(r.value - r.coarse) > tol)
        throw QuadratureUnderResolved("haar integral of " + f.name + " moved by " +
                                      std::to_string(std::fabs(r.value - r.coarse)) + " between grids");
    return r;
}

} // namespace horolab
