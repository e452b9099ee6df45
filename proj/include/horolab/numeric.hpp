#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace horolab {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 6.28318530717958647692;
inline constexpr double kEulerGamma = 0.57721566490153286061;

// Error-free transforms.
inline void two_sum(double a, double b, double& s, double& e) {
    s = a + b;
    double bb = s - a;
    e = (a - (s - bb)) + (b - bb);
}

inline void two_prod(double a, double b, double& p, double& e) {
    p = a * b;
    e = std::fma(a, b, -p);
}

// Unevaluated sum hi + lo, used for coefficients like α that must be
// multiplied by n² ~ 10^12 and then reduced mod a period.
struct DoubleDouble {
    double hi = 0.0;
    double lo = 0.0;
    double value() const { return hi + lo; }
};

// (a · m) mod modulus for integral m < 2^53 and modulus > 0, accurate to a
// few ulp of modulus. Result in [0, modulus).
inline double mul_mod(const DoubleDouble& a, double m, double modulus) {
    double p, e;
    two_prod(a.hi, m, p, e);
    double r = std::fmod(p, modulus);   // exact
    r += e + a.lo * m;
    r = std::fmod(r, modulus);
    if (r < 0) r += modulus;
    if (r >= modulus) r -= modulus;
    return r;
}

// x − round(x), in [−1/2, 1/2].
inline double centered_frac(double x) { return x - std::nearbyint(x); }

// ⟨x⟩: distance to the nearest integer.
inline double dist_to_int(double x) { return std::fabs(centered_frac(x)); }

// e^{2πiφ} with the argument reduced mod 1 first.
inline std::complex<double> unit_phase(double phi) {
    double r = centered_frac(phi);
    return {std::cos(kTwoPi * r), std::sin(kTwoPi * r)};
}

// Neumaier accumulator. merge() is an error-free combine of the leading
// parts, so a fixed merge tree gives a fixed bit pattern.
struct Compensated {
    double s = 0.0;
    double c = 0.0;

    void add(double x) {
        double t = s + x;
        if (std::fabs(s) >= std::fabs(x))
            c += (s - t) + x;
        else
            c += (x - t) + s;
        s = t;
    }
    void merge(const Compensated& o) {
        double t, e;
        two_sum(s, o.s, t, e);
        s = t;
        c += o.c + e;
    }
    double value() const { return s + c; }
};

struct CompensatedComplex {
    Compensated re, im;
    void add(std::complex<double> z) {
        re.add(z.real());
        im.add(z.imag());
    }
    void merge(const CompensatedComplex& o) {
        re.merge(o.re);
        im.merge(o.im);
    }
    std::complex<double> value() const { return {re.value(), im.value()}; }
};

// Least-squares line through (x_i, y_i); returns slope, writes intercept.
double fit_slope(const std::vector<double>& x, const std::vector<double>& y, double* intercept = nullptr);

double median(std::vector<double> v);

} // namespace horolab
