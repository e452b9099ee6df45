#pragma once

// Oscillatory sums with the attached bounds, and periodic test functions.

#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "horolab/numeric.hpp"
#include "horolab/reduce.hpp"

namespace horolab {

struct OscillatorySum {
    std::complex<double> value;
    double modulus = 0;
    std::uint64_t n_terms = 0;
    double bound = 0;  // 0 when no bound is attached
    double ratio = 0;  // modulus / bound
};

// Σ_{j<count} e^{2πi phase(first + j)} on the fixed reduction schedule.
template <class Phase>
std::complex<double> exp_sum(Exec exec, std::uint64_t first, std::uint64_t count, const Phase& phase) {
    auto body = [&](std::size_t j, CompensatedComplex& acc) { acc.add(unit_phase(phase(first + j))); };
    return reduce<CompensatedComplex>(exec, count, body).value();
}

// Σ_{n=1}^{N} e^{2πiφ(n)}.
OscillatorySum raw_exp_sum(const std::function<double(std::uint64_t)>& phase, std::uint64_t n,
                           Exec exec = default_exec());

// Σ_{n=1}^{N} e^{2πi k c n^{1+γ}/l}, bound (|k|^{1/2}N^{(1+γ)/2} + |k|^{-1/2}N^{(1-γ)/2}) l^{1/2}.
OscillatorySum power_sum(double c, double gamma, long k, double l, std::uint64_t n, Exec exec = default_exec());

// Σ_{n=M+1}^{N} e^{2πi k α n²/l}, bound (N−M)^{1/2+ε}|k|^{1/2+ε}l^{1/2}.
OscillatorySum quad_sum(const DoubleDouble& alpha, long k, long l, std::uint64_t m, std::uint64_t n,
                        double eps = 0.01, Exec exec = default_exec());

// The differenced form Σ_p Σ_q e^{−2πi(k/l)α(p² + 2qp)} of |quad_sum|²; O((N−M)²).
std::complex<double> vdc_double_sum(const DoubleDouble& alpha, long k, long l, std::uint64_t m, std::uint64_t n);

class PeriodicTestFn {
public:
    using Coeffs = std::map<long, std::complex<double>>;

    // Trigonometric polynomial Σ a_k e^{2πikx/l}; a_{−k} must equal conj(a_k).
    static PeriodicTestFn fourier(double l, Coeffs coeffs);
    // Smooth periodic closure; coefficients |k| <= k_max by trapezoid quadrature.
    static PeriodicTestFn closure(double l, std::function<double(double)> f, long k_max = 64,
                                  std::size_t samples = 4096);

    double period() const { return l_; }
    bool is_polynomial() const { return !f_; }
    const Coeffs& coeffs() const { return coeffs_; }
    double mean() const;
    double operator()(double x) const;
    // Derivative from the Fourier series (exact for polynomials).
    double derivative(unsigned order, double x) const;
    // max_{j <= order} sup_x |f^{(j)}(x)| over a dense sample grid.
    double sup_norm(unsigned order) const;
    long max_frequency() const;

private:
    double l_ = 1;
    Coeffs coeffs_;
    std::function<double(double)> f_;
};

// a_k by M-point trapezoid, k = -k_max..k_max.
PeriodicTestFn::Coeffs trapezoid_coefficients(const std::function<double(double)>& f, double l, long k_max,
                                              std::size_t samples);

struct DeficitResult {
    double deficit = 0;
    double bound = 0;
};

// |Σ_{n<=N} f(c n^{1+γ}) − N a_0| assembled from power_sum per frequency.
DeficitResult periodic_deficit_power(const PeriodicTestFn& f, double c, double gamma, std::uint64_t n,
                                     Exec exec = default_exec());
// Same quantity by direct evaluation of f (reference path).
double periodic_deficit_direct(const PeriodicTestFn& f, double c, double gamma, std::uint64_t n);

// |(1/K)Σ_{j<=K} f(c d j) − a_0| via closed geometric sums; bound d^μ l^{[μ]+8}/K ‖f‖_{∞,[μ]+8}.
DeficitResult progression_deficit(const PeriodicTestFn& f, double c, std::uint64_t d, std::uint64_t k_steps,
                                  double mu);
double progression_deficit_direct(const PeriodicTestFn& f, double c, std::uint64_t d, std::uint64_t k_steps);

struct FourierDecayRow {
    long k;
    double abs_coeff;
    double envelope;  // l²/(4π²k²) ‖f‖_{2,∞}
};

struct FourierDecayReport {
    std::vector<FourierDecayRow> rows;  // k = 0..k_max
    double norm = 0;                    // ‖f‖_{2,∞}
    bool all_ok = true;
    double min_margin = 0;              // min envelope/|a_k| over k >= 1 with a_k != 0
};

FourierDecayReport fourier_decay_check(const PeriodicTestFn& f, long k_max, std::size_t samples = 1024);

} // namespace horolab
