#include "horolab/expsum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "horolab/error.hpp"
#include "horolab/sequences.hpp"

namespace horolab {

namespace {

OscillatorySum finish(std::complex<double> v, std::uint64_t n, double bound) {
    OscillatorySum s;
    s.value = v;
    s.modulus = std::abs(v);
    s.n_terms = n;
    s.bound = bound;
    s.ratio = bound > 0 ? s.modulus / bound : 0;
    return s;
}

// Sampling grid for sup norms: enough points per shortest wavelength.
std::size_t norm_grid(long kmax) { return static_cast<std::size_t>(std::max<long>(2048, 64 * kmax)); }

} // namespace

OscillatorySum raw_exp_sum(const std::function<double(std::uint64_t)>& phase, std::uint64_t n, Exec exec) {
    require(n <= 1000000000ULL, "raw_exp_sum needs n <= 1e9");
    return finish(exp_sum(exec, 1, n, phase), n, 0);
}

OscillatorySum power_sum(double c, double gamma, long k, double l, std::uint64_t n, Exec exec) {
    require(c > 0 && l > 0, "power_sum needs c > 0 and l > 0");
    require(gamma > 0 && gamma < 1, "power_sum needs 0 < gamma < 1");
    require(k != 0, "power_sum needs k != 0");
    require(n <= 1000000000ULL, "power_sum needs n <= 1e9");
    const double kl = static_cast<double>(k) / l;
    auto phase = [=](std::uint64_t m) { return centered_frac(power_time(c, gamma, m) * kl); };
    const double N = static_cast<double>(n);
    const double ak = std::fabs(static_cast<double>(k));
    const double bound =
        (std::sqrt(ak) * std::pow(N, (1 + gamma) / 2) + std::pow(N, (1 - gamma) / 2) / std::sqrt(ak)) * std::sqrt(l);
    return finish(exp_sum(exec, 1, n, phase), n, bound);
}

OscillatorySum quad_sum(const DoubleDouble& alpha, long k, long l, std::uint64_t m, std::uint64_t n, double eps,
                        Exec exec) {
    require(m < n, "quad_sum needs M < N");
    require(k != 0 && l >= 1 && eps > 0, "quad_sum needs k != 0, l >= 1, eps > 0");
    require(n <= 90000000ULL, "quad_sum needs N <= 9e7 so that n^2 stays exact");
    const double ld = static_cast<double>(l);
    const double kd = static_cast<double>(k);
    auto phase = [=](std::uint64_t j) {
        const double jd = static_cast<double>(j);
        return kd * (mul_mod(alpha, jd * jd, ld) / ld);
    };
    const double len = static_cast<double>(n - m);
    const double bound = std::pow(len, 0.5 + eps) * std::pow(std::fabs(kd), 0.5 + eps) * std::sqrt(ld);
    return finish(exp_sum(exec, m + 1, n - m, phase), n - m, bound);
}

std::complex<double> vdc_double_sum(const DoubleDouble& alpha, long k, long l, std::uint64_t m, std::uint64_t n) {
    require(m < n && n <= 100000, "vdc_double_sum is a small-N consistency check");
    const long long M = static_cast<long long>(m), N = static_cast<long long>(n);
    const double ld = static_cast<double>(l), kd = static_cast<double>(k);
    CompensatedComplex acc;
    for (long long p = M + 1 - N; p <= N - 1 - M; ++p) {
        const long long q_lo = std::max(M + 1, M + 1 - p), q_hi = std::min(N, N - p);
        for (long long q = q_lo; q <= q_hi; ++q) {
            const long long v = p * (p + 2 * q);
            const double r = mul_mod(alpha, static_cast<double>(v < 0 ? -v : v), ld) / ld;
            acc.add(unit_phase(-kd * (v < 0 ? -r : r)));
        }
    }
    return acc.value();
}

PeriodicTestFn::Coeffs trapezoid_coefficients(const std::function<double(double)>& f, double l, long k_max,
                                              std::size_t samples) {
    std::vector<double> vals(samples);
    for (std::size_t j = 0; j < samples; ++j) vals[j] = f(l * static_cast<double>(j) / static_cast<double>(samples));
    PeriodicTestFn::Coeffs out;
    for (long k = -k_max; k <= k_max; ++k) {
        CompensatedComplex acc;
        for (std::size_t j = 0; j < samples; ++j)
            acc.add(vals[j] * unit_phase(-static_cast<double>(k) * static_cast<double>(j) / static_cast<double>(samples)));
        out[k] = acc.value() / static_cast<double>(samples);
    }
    return out;
}

PeriodicTestFn PeriodicTestFn::fourier(double l, Coeffs coeffs) {
    require(l > 0, "period must be positive");
    for (const auto& [k, a] : coeffs) {
        auto it = coeffs.find(-k);
        const std::complex<double> partner = it == coeffs.end() ? std::complex<double>(0) : it->second;
        require(std::abs(partner - std::conj(a)) <= 1e-15 * (1 + std::abs(a)),
                "Fourier coefficients must be conjugate symmetric");
    }
    PeriodicTestFn f;
    f.l_ = l;
    f.coeffs_ = std::move(coeffs);
    return f;
}

PeriodicTestFn PeriodicTestFn::closure(double l, std::function<double(double)> fn, long k_max, std::size_t samples) {
    require(l > 0, "period must be positive");
    PeriodicTestFn f;
    f.l_ = l;
    f.coeffs_ = trapezoid_coefficients(fn, l, k_max, samples);
    // enforce exact symmetry of the computed table
    for (long k = 1; k <= k_max; ++k) f.coeffs_[-k] = std::conj(f.coeffs_[k]);
    f.coeffs_[0] = f.coeffs_[0].real();
    f.f_ = std::move(fn);
    return f;
}

double PeriodicTestFn::mean() const {
    auto it = coeffs_.find(0);
    return it == coeffs_.end() ? 0.0 : it->second.real();
}

long PeriodicTestFn::max_frequency() const {
    long m = 0;
    for (const auto& [k, a] : coeffs_)
        if (a != std::complex<double>(0)) m = std::max(m, std::labs(k));
    return m;
}

double PeriodicTestFn::operator()(double x) const {
    if (f_) return f_(x);
    return derivative(0, x);
}

double PeriodicTestFn::derivative(unsigned order, double x) const {
    double s = 0;
    for (const auto& [k, a] : coeffs_) {
        if (k < 0) continue;
        const double w = kTwoPi * static_cast<double>(k) / l_;
        std::complex<double> term = a * unit_phase(static_cast<double>(k) * x / l_);
        term *= std::pow(std::complex<double>(0, w), static_cast<int>(order));
        s += k == 0 ? term.real() : 2 * term.real();
    }
    return s;
}

double PeriodicTestFn::sup_norm(unsigned order) const {
    const std::size_t grid = norm_grid(max_frequency());
    double best = 0;
    for (unsigned j = 0; j <= order; ++j)
        for (std::size_t i = 0; i < grid; ++i) {
            const double x = l_ * static_cast<double>(i) / static_cast<double>(grid);
            const double v = j == 0 ? (*this)(x) : derivative(j, x);
            best = std::max(best, std::fabs(v));
        }
    return best;
}

DeficitResult periodic_deficit_power(const PeriodicTestFn& f, double c, double gamma, std::uint64_t n, Exec exec) {
    std::complex<double> total = 0;
    for (const auto& [k, a] : f.coeffs()) {
        if (k <= 0 || a == std::complex<double>(0)) continue;
        total += a * power_sum(c, gamma, k, f.period(), n, exec).value;
    }
    DeficitResult r;
    r.deficit = std::fabs(2 * total.real());
    const double l = f.period();
    r.bound = l * l * l * std::pow(static_cast<double>(n), (1 + gamma) / 2) * f.sup_norm(2);
    return r;
}

double periodic_deficit_direct(const PeriodicTestFn& f, double c, double gamma, std::uint64_t n) {
    Compensated acc;
    for (std::uint64_t m = 1; m <= n; ++m) {
        const double t = power_time(c, gamma, m);
        acc.add(f(t - f.period() * std::floor(t / f.period())));
    }
    return std::fabs(acc.value() - static_cast<double>(n) * f.mean());
}

DeficitResult progression_deficit(const PeriodicTestFn& f, double c, std::uint64_t d, std::uint64_t k_steps,
                                  double mu) {
    require(k_steps >= 1 && d >= 1, "progression_deficit needs K >= 1 and d >= 1");
    require(mu >= 2, "type exponent must be >= 2");
    const double K = static_cast<double>(k_steps);
    std::complex<double> total = 0;
    for (const auto& [k, a] : f.coeffs()) {
        if (k <= 0 || a == std::complex<double>(0)) continue;
        const double theta = centered_frac(static_cast<double>(k) * c * static_cast<double>(d) / f.period());
        if (std::fabs(theta) < 1e-14)
            throw ResonanceDetected("<k c d / l> below 1e-14 at k=" + std::to_string(k));
        // Σ_{j=1}^{K} e^{2πijθ} = e^{2πiθ}(e^{2πiKθ} − 1)/(e^{2πiθ} − 1)
        const std::complex<double> e1 = unit_phase(theta);
        const std::complex<double> eK = unit_phase(centered_frac(K * theta));
        total += a * (e1 * (eK - 1.0) / (e1 - 1.0)) / K;
    }
    DeficitResult r;
    r.deficit = std::fabs(2 * total.real());
    const int order = static_cast<int>(std::floor(mu)) + 8;
    const double l = f.period();
    r.bound = std::pow(static_cast<double>(d), mu) * std::pow(l, order) / K * f.sup_norm(static_cast<unsigned>(order));
    return r;
}

double progression_deficit_direct(const PeriodicTestFn& f, double c, std::uint64_t d, std::uint64_t k_steps) {
    Compensated acc;
    const double l = f.period();
    for (std::uint64_t j = 1; j <= k_steps; ++j) {
        const double t = c * static_cast<double>(d) * static_cast<double>(j);
        acc.add(f(t - l * std::floor(t / l)));
    }
    return std::fabs(acc.value() / static_cast<double>(k_steps) - f.mean());
}

FourierDecayReport fourier_decay_check(const PeriodicTestFn& f, long k_max, std::size_t samples) {
    require(k_max >= 1, "fourier_decay_check needs k_max >= 1");
    auto fn = [&](double x) { return f(x); };
    const auto a1 = trapezoid_coefficients(fn, f.period(), k_max, samples);
    const auto a2 = trapezoid_coefficients(fn, f.period(), k_max, 2 * samples);
    for (long k = -k_max; k <= k_max; ++k)
        if (std::abs(a1.at(k) - a2.at(k)) > 1e-8)
            throw QuadratureUnderResolved("a_" + std::to_string(k) + " moved under sample doubling");

    FourierDecayReport rep;
    rep.norm = f.sup_norm(2);
    rep.min_margin = std::numeric_limits<double>::infinity();
    const double l = f.period();
    for (long k = 0; k <= k_max; ++k) {
        FourierDecayRow row;
        row.k = k;
        row.abs_coeff = std::abs(a2.at(k));
        row.envelope = k == 0 ? std::numeric_limits<double>::infinity()
                              : l * l / (4 * kPi * kPi * static_cast<double>(k * k)) * rep.norm;
        if (k > 0) {
            if (row.abs_coeff > row.envelope) rep.all_ok = false;
            if (row.abs_coeff > 1e-300) rep.min_margin = std::min(rep.min_margin, row.envelope / row.abs_coeff);
        }
        rep.rows.push_back(row);
    }
    return rep;
}

} // namespace horolab
