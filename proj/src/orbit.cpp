#include "horolab/orbit.hpp"

#include <algorithm>

#include "horolab/error.hpp"

namespace horolab {

namespace {

DoubleDouble dd_mul(const DoubleDouble& a, const DoubleDouble& b) {
    double p, e;
    two_prod(a.hi, b.hi, p, e);
    e += a.hi * b.lo + a.lo * b.hi;
    double s, t;
    two_sum(p, e, s, t);
    return {s, t};
}

HalfPlanePoint generic_image(long double x, long double lambda, long double tau) {
    // lower(−x)·(λ(i − τ)) = −1/x + A/(xD) + iλ/D with A = 1 + xλτ, D = A² + (xλ)².
    long double re, im;
    if (x == 0) {
        re = -lambda * tau;
        im = lambda;
    } else {
        const long double A = 1 + x * lambda * tau;
        const long double B = x * lambda;
        const long double D = A * A + B * B;
        re = -1 / x + A / (x * D);
        im = lambda / D;
    }
    re -= std::nearbyint(re);
    reduce_point(re, im);
    return {static_cast<double>(re), static_cast<double>(im)};
}

} // namespace

OrbitPoint OrbitPoint::generic(long double x, DoubleDouble lambda, double shift) {
    OrbitPoint p;
    p.mode = Mode::generic;
    p.x = x;
    p.lambda = lambda;
    p.shift = shift;
    return p;
}

OrbitPoint OrbitPoint::periodic(const PeriodicPoint& pp, DoubleDouble lambda, double shift) {
    OrbitPoint p;
    p.mode = Mode::periodic;
    p.pp = pp;
    p.lambda = lambda;
    p.shift = shift;
    return p;
}

OrbitPoint OrbitPoint::from_group(const GroupElement& h) {
    const BruhatFactors f = bruhat_decompose(h);
    if (f.branch == BruhatFactors::Branch::uau) return generic(f.y, {std::exp(f.t), 0}, f.s);
    OrbitPoint p;
    p.mode = Mode::matrix;
    p.g = invert(h);
    return p;
}

HalfPlanePoint OrbitPoint::image(double t) const {
    switch (mode) {
        case Mode::generic: {
            const long double lam = static_cast<long double>(lambda.hi) + lambda.lo;
            return generic_image(x, lam, static_cast<long double>(t) + shift);
        }
        case Mode::periodic: {
            const double per = static_cast<double>(pp.period);
            double sigma = std::fmod(lambda.hi * std::fmod(t + shift, per), per);
            if (lambda.hi != 1 || lambda.lo != 0) sigma = std::fmod(lambda.value() * (t + shift), per);
            return periodic_image(pp, sigma, lambda.value());
        }
        case Mode::matrix: {
            HalfPlanePoint z = mobius_act(g, {-t, 1});
            return reduce_point(z);
        }
    }
    return {};
}

HalfPlanePoint OrbitPoint::image_square(const DoubleDouble& coef, double m) const {
    const DoubleDouble c = dd_mul(coef, lambda);
    switch (mode) {
        case Mode::generic: {
            const long double m2 = static_cast<long double>(m) * m;
            const long double tau = (static_cast<long double>(coef.hi) + coef.lo) * m2 + shift;
            return generic_image(x, static_cast<long double>(lambda.hi) + lambda.lo, tau);
        }
        case Mode::periodic: {
            // σ = λ(coef·m² + shift) mod q², with the m² product kept exact.
            const double per = static_cast<double>(pp.period);
            double sigma = mul_mod(c, m * m, per) + std::fmod(lambda.value() * shift, per);
            return periodic_image(pp, sigma, lambda.value());
        }
        case Mode::matrix: return image(coef.value() * m * m);
    }
    return {};
}

Orbit::Orbit(const OrbitPoint& pt, const SequenceSpec& seq) : pt_(pt), seq_(seq) {
    validate(seq_);
    if (std::holds_alternative<AlmostPrimes>(seq_.kind)) {
        require(seq_.n_max < (std::uint64_t{1} << 32), "almost-prime orbits index with 32 bits");
        const OmegaSieve sieve(seq_.n_max);
        const unsigned L = std::get<AlmostPrimes>(seq_.kind).L;
        for (std::uint64_t n = 1; n <= seq_.n_max; ++n)
            if (sieve.omega(n) <= L) indices_.push_back(static_cast<std::uint32_t>(n));
        count_ = indices_.size();
    } else {
        count_ = seq_.n_max;
    }
    if (std::holds_alternative<Squares>(seq_.kind))
        require(seq_.n_max <= 90000000ULL, "square-time orbits need n <= 9e7 so n^2 stays exact");
}

HalfPlanePoint Orbit::at(std::size_t j) const {
    const std::uint64_t n = index(j);
    if (const auto* p = std::get_if<PowerSparse>(&seq_.kind)) return pt_.image(power_time(p->c, p->gamma, n));
    if (const auto* s = std::get_if<Squares>(&seq_.kind)) return pt_.image_square(s->alpha, static_cast<double>(n));
    const auto& a = std::get<AlmostPrimes>(seq_.kind);
    return pt_.image(a.c * static_cast<double>(n));
}

namespace {

struct BirkhoffAcc {
    std::vector<Compensated> sums;
    std::vector<std::uint8_t> cells;
    void merge(const BirkhoffAcc& o) {
        for (std::size_t i = 0; i < sums.size(); ++i) sums[i].merge(o.sums[i]);
        for (std::size_t i = 0; i < cells.size(); ++i) cells[i] |= o.cells[i];
    }
};

} // namespace

BirkhoffResult birkhoff(const Orbit& orbit, const std::vector<SurfaceFn>& fns, std::size_t n,
                        const CoverageGrid& grid, Exec exec) {
    require(n >= 1 && n <= orbit.size(), "birkhoff needs 1 <= n <= orbit size");
    require(grid.nx >= 4 && grid.ny >= 4, "coverage grid needs >= 4 cells per axis");
    BirkhoffAcc seed;
    seed.sums.resize(fns.size());
    seed.cells.assign(grid.nx * grid.ny, 0);
    auto body = [&](std::size_t j, BirkhoffAcc& acc) {
        const HalfPlanePoint z = orbit.at(j);
        for (std::size_t i = 0; i < fns.size(); ++i) acc.sums[i].add(fns[i](z));
        const long c = grid.cell(z);
        if (c >= 0) acc.cells[static_cast<std::size_t>(c)] = 1;
    };
    const BirkhoffAcc acc = reduce<BirkhoffAcc>(exec, n, body, seed);
    BirkhoffResult r;
    r.n = n;
    for (const auto& s : acc.sums) {
        r.sums.push_back(s.value());
        r.averages.push_back(s.value() / static_cast<double>(n));
    }
    std::size_t visited = 0;
    for (auto c : acc.cells) visited += c;
    r.coverage = static_cast<double>(visited) / static_cast<double>(acc.cells.size());
    return r;
}

double birkhoff_average(const SurfaceFn& f, const Orbit& orbit, std::size_t n, Exec exec) {
    return birkhoff(orbit, {f}, n, CoverageGrid{}, exec).averages[0];
}

double density_probe(const Orbit& orbit, std::size_t n, const CoverageGrid& grid, Exec exec) {
    return birkhoff(orbit, {}, n, grid, exec).coverage;
}

} // namespace horolab
