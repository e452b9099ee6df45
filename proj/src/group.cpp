#include "horolab/group.hpp"

#include <cmath>
#include <limits>

#include "horolab/error.hpp"

namespace horolab {

GroupElement make_element(double a, double b, double c, double d) {
    if (c < 0 || (c == 0 && a < 0)) return {-a, -b, -c, -d};
    return {a, b, c, d};
}

GroupElement identity() { return {1, 0, 0, 1}; }
GroupElement u0(double s) { return {1, s, 0, 1}; }
GroupElement geodesic(double t) { return {std::exp(-t / 2), 0, 0, std::exp(t / 2)}; }
GroupElement omega() { return make_element(0, -1, 1, 0); }
GroupElement lower(double x) { return make_element(1, 0, x, 1); }

GroupElement compose(const GroupElement& g, const GroupElement& h) {
    return make_element(g.a * h.a + g.b * h.c, g.a * h.b + g.b * h.d,
                        g.c * h.a + g.d * h.c, g.c * h.b + g.d * h.d);
}

GroupElement invert(const GroupElement& g) { return make_element(g.d, -g.b, -g.c, g.a); }

double det(const GroupElement& g) { return g.a * g.d - g.b * g.c; }

double projective_distance(const GroupElement& g, const GroupElement& h) {
    auto dist = [&](double s) {
        return std::max(std::max(std::fabs(g.a - s * h.a), std::fabs(g.b - s * h.b)),
                        std::max(std::fabs(g.c - s * h.c), std::fabs(g.d - s * h.d)));
    };
    return std::min(dist(1.0), dist(-1.0));
}

HalfPlanePoint mobius_act(const GroupElement& g, const HalfPlanePoint& z) {
    // (az+b)/(cz+d) with Im = y/|cz+d|^2 for det 1.
    const double cx = g.c * z.x + g.d;
    const double cy = g.c * z.y;
    const double den = cx * cx + cy * cy;
    const double nx = g.a * z.x + g.b;
    const double ny = g.a * z.y;
    return {(nx * cx + ny * cy) / den, z.y / den};
}

double hyperbolic_distance(const HalfPlanePoint& z1, const HalfPlanePoint& z2) {
    const double dx = z1.x - z2.x;
    const double dy = z1.y - z2.y;
    // acosh(1 + u) through log1p keeps small distances accurate.
    const double u = (dx * dx + dy * dy) / (2 * z1.y * z2.y);
    return std::log1p(u + std::sqrt(u * (u + 2)));
}

bool in_fundamental_domain(const HalfPlanePoint& z, double tol) {
    return std::fabs(z.x) <= 0.5 + tol && z.x * z.x + z.y * z.y >= 1 - tol;
}

HalfPlanePoint LatticePoint::image() const { return mobius_act(reduced, {0, 1}); }

namespace {
constexpr double kReduceTol = 1e-13;
}

template <class Real>
void reduce_point(Real& x, Real& y) {
    if (!(y > 0) || !std::isfinite(x) || !std::isfinite(y)) throw ReductionStall("cannot reduce a non-finite point");
    for (std::size_t step = 0; step < kMaxReductionSteps; ++step) {
        if (std::fabs(x) > Real(0.5) + Real(kReduceTol)) {
            x -= std::nearbyint(x);
            continue;
        }
        const Real r2 = x * x + y * y;
        if (r2 < Real(1) - Real(kReduceTol)) {
            x = -x / r2;
            y = y / r2;
            continue;
        }
        return;
    }
    throw ReductionStall("point reduction exceeded step budget");
}

template void reduce_point<double>(double&, double&);
template void reduce_point<long double>(long double&, long double&);

HalfPlanePoint reduce_point(HalfPlanePoint z) {
    reduce_point(z.x, z.y);
    return z;
}

LatticePoint reduce_psl2z(const GroupElement& g) {
    LatticePoint p;
    p.g = g;
    double a = g.a, b = g.b, c = g.c, d = g.d;
    HalfPlanePoint z = mobius_act(g, {0, 1});
    if (!std::isfinite(z.x) || !std::isfinite(z.y) || !(z.y > 0))
        throw ReductionStall("non-finite or degenerate element cannot be reduced");
    std::size_t steps = 0;
    for (;;) {
        if (++steps > kMaxReductionSteps) throw ReductionStall("matrix reduction exceeded step budget");
        if (std::fabs(z.x) > 0.5 + kReduceTol) {
            const double n = std::nearbyint(z.x);
            z.x -= n;
            a -= n * c;
            b -= n * d;
            p.word.push_back({ReductionStep::translate, static_cast<std::int64_t>(n)});
            continue;
        }
        const double r2 = z.x * z.x + z.y * z.y;
        if (r2 < 1 - kReduceTol) {
            z = {-z.x / r2, z.y / r2};
            const double na = -c, nb = -d;
            c = a;
            d = b;
            a = na;
            b = nb;
            p.word.push_back({ReductionStep::invert, 0});
            continue;
        }
        break;
    }
    p.reduced = make_element(a, b, c, d);
    return p;
}

LatticePoint identity_coset() { return reduce_psl2z(identity()); }

LatticePoint from_left_coset(const GroupElement& h) { return reduce_psl2z(invert(h)); }

LatticePoint geodesic_flow(const LatticePoint& p, double t) {
    return reduce_psl2z(compose(p.g, geodesic(-t)));
}

GroupElement word_matrix(const std::vector<ReductionStep>& word) {
    GroupElement m = identity();
    for (const auto& s : word) {
        if (s.kind == ReductionStep::translate)
            m = compose(u0(-static_cast<double>(s.shift)), m);
        else
            m = compose(omega(), m);
    }
    return m;
}

BruhatFactors bruhat_decompose(const GroupElement& g) {
    BruhatFactors f;
    if (std::fabs(g.d) > 1e-14) {
        f.branch = BruhatFactors::Branch::uau;
        f.s = g.b / g.d;
        f.t = 2 * std::log(std::fabs(g.d));
        f.y = g.c / g.d;
    } else {
        // omega·a(t)·lower(y) = (-e^{t/2} y, -e^{t/2}; e^{-t/2}, 0)
        f.branch = BruhatFactors::Branch::omega_au;
        f.s = 0;
        f.t = 2 * std::log(std::fabs(g.b));
        f.y = g.a / g.b;
    }
    return f;
}

GroupElement bruhat_recompose(const BruhatFactors& f) {
    const GroupElement au = compose(geodesic(f.t), lower(f.y));
    if (f.branch == BruhatFactors::Branch::uau) return compose(u0(f.s), au);
    return compose(omega(), au);
}

double dist_to_base(const LatticePoint& p) { return hyperbolic_distance({0, 1}, p.image()); }

double cusp_excursion(const LatticePoint& p, double t) {
    require(t >= 0, "cusp_excursion needs t >= 0");
    const double et = std::exp(t);
    HalfPlanePoint z = reduce_point(mobius_act(p.reduced, {0, et}));
    return hyperbolic_distance({0, 1}, z);
}

double injectivity_eta(const LatticePoint& p) {
    const double dist = dist_to_base(p);
    const double bound_real = std::ceil(10 * std::exp(dist));
    if (!(bound_real <= 1e4))
        throw EnumerationOverflow("entry bound " + std::to_string(bound_real) + " exceeds 1e4");
    const long long B = static_cast<long long>(bound_real);

    // Reduced frame: reduced = u0(x)·diag(√y, 1/√y)·k, so the stabilizer
    // conjugated into the frame is D⁻¹u0(−x)γu0(x)D and k drops out of the
    // Frobenius norm.
    const HalfPlanePoint z = p.image();
    const double x = z.x, y = z.y;
    double best = 1.0 / y;  // γ = u0(±1)
    for (long long c = 1; c <= B; ++c) {
        const double cd = static_cast<double>(c);
        if (cd * y >= best) break;
        for (int sigma : {1, -1}) {
            const double ca = x * cd + sigma;
            const double cdd = sigma - x * cd;
            const long long a_lo = static_cast<long long>(std::ceil(ca - best));
            const long long a_hi = static_cast<long long>(std::floor(ca + best));
            const long long d_lo = static_cast<long long>(std::ceil(cdd - best));
            const long long d_hi = static_cast<long long>(std::floor(cdd + best));
            for (long long a = a_lo; a <= a_hi; ++a) {
                if (std::llabs(a) > B) continue;
                for (long long d = d_lo; d <= d_hi; ++d) {
                    if (std::llabs(d) > B) continue;
                    const long long num = a * d - 1;
                    if (num % c != 0) continue;
                    const long long b = num / c;
                    if (std::llabs(b) > B) continue;
                    const double A = static_cast<double>(a) - x * cd;
                    const double Bm = (A * x + static_cast<double>(b) - x * static_cast<double>(d)) / y;
                    const double Cm = cd * y;
                    const double Dm = cd * x + static_cast<double>(d);
                    const double e11 = sigma * A - 1, e12 = sigma * Bm, e21 = sigma * Cm, e22 = sigma * Dm - 1;
                    const double nrm = std::sqrt(e11 * e11 + e12 * e12 + e21 * e21 + e22 * e22);
                    if (nrm < best) best = nrm;
                }
            }
        }
    }
    return best;
}

} // namespace horolab
