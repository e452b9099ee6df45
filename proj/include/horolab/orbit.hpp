#pragma once

// Horocycle orbits u0(t)·E of points E = u0(shift)·a_λ·lower(x) of G/Γ,
// evaluated as reduced surface images. Arbitrary initial points reduce to
// this form through the Bruhat decomposition.

#include <cmath>
#include <cstdint>
#include <vector>

#include "horolab/group.hpp"
#include "horolab/periodic.hpp"
#include "horolab/reduce.hpp"
#include "horolab/sequences.hpp"
#include "horolab/surface.hpp"

namespace horolab {

struct OrbitPoint {
    enum class Mode { generic, periodic, matrix };
    Mode mode = Mode::generic;
    long double x = 0;            // generic: the U⁻ coordinate
    PeriodicPoint pp;             // periodic: x = p/q exactly (or a certified shadow)
    GroupElement g;               // matrix: Γg for the rare d = 0 Bruhat branch
    DoubleDouble lambda{1, 0};    // a_λ = diag(λ^{-1/2}, λ^{1/2})
    double shift = 0;             // u0(shift)

    static OrbitPoint generic(long double x, DoubleDouble lambda = {1, 0}, double shift = 0);
    static OrbitPoint periodic(const PeriodicPoint& pp, DoubleDouble lambda = {1, 0}, double shift = 0);
    // hΓ in G/Γ, put in canonical form by bruhat_decompose.
    static OrbitPoint from_group(const GroupElement& h);

    // Reduced surface image of u0(t)·E.
    HalfPlanePoint image(double t) const;
    // Same, with the time given as coef·m² for integral m (Squares sampling).
    HalfPlanePoint image_square(const DoubleDouble& coef, double m) const;
};

class Orbit {
public:
    Orbit(const OrbitPoint& pt, const SequenceSpec& seq);
    std::size_t size() const { return count_; }
    std::uint64_t index(std::size_t j) const { return indices_.empty() ? j + 1 : indices_[j]; }
    HalfPlanePoint at(std::size_t j) const;
    const OrbitPoint& point() const { return pt_; }
    const SequenceSpec& sequence() const { return seq_; }

private:
    OrbitPoint pt_;
    SequenceSpec seq_;
    std::size_t count_ = 0;
    std::vector<std::uint32_t> indices_;  // admissible n for AlmostPrimes
};

struct CoverageGrid {
    std::size_t nx = 32, ny = 32;
    double x_lo = -0.5, x_hi = 0.5, y_lo = 1, y_hi = 3;
    long cell(const HalfPlanePoint& z) const {
        if (z.x < x_lo || z.x > x_hi || z.y < y_lo || z.y > y_hi) return -1;
        auto ix = static_cast<std::size_t>((z.x - x_lo) / (x_hi - x_lo) * static_cast<double>(nx));
        auto iy = static_cast<std::size_t>((z.y - y_lo) / (y_hi - y_lo) * static_cast<double>(ny));
        ix = std::min(ix, nx - 1);
        iy = std::min(iy, ny - 1);
        return static_cast<long>(iy * nx + ix);
    }
};

struct BirkhoffResult {
    std::vector<double> averages;  // one per test function
    std::vector<double> sums;
    std::size_t n = 0;
    double coverage = 0;
};

// (1/n)Σ_{j<n} f(orbit[j]) for every f, plus visited-cell coverage.
BirkhoffResult birkhoff(const Orbit& orbit, const std::vector<SurfaceFn>& fns, std::size_t n,
                        const CoverageGrid& grid = {}, Exec exec = default_exec());

double birkhoff_average(const SurfaceFn& f, const Orbit& orbit, std::size_t n, Exec exec = default_exec());
double density_probe(const Orbit& orbit, std::size_t n, const CoverageGrid& grid, Exec exec = default_exec());

} // namespace horolab
