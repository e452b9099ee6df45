#pragma once

// Sampling sets: t_n = c n^{1+γ}, t_n = α n², L-almost primes; plus the
// prime table, Ω sieve and factorization they rest on.

#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include "horolab/numeric.hpp"

namespace horolab {

struct PowerSparse {
    double c = 1;
    double gamma = 0.1;
};
struct Squares {
    DoubleDouble alpha{1, 0};
};
struct AlmostPrimes {
    unsigned L = 1;
    double c = 1;
};

struct SequenceSpec {
    std::variant<PowerSparse, Squares, AlmostPrimes> kind;
    std::uint64_t n_max = 0;
};

void validate(const SequenceSpec& spec);

inline double power_time(double c, double gamma, std::uint64_t n) {
    return c * std::exp((1 + gamma) * std::log(static_cast<double>(n)));
}

class PrimeTable {
public:
    explicit PrimeTable(std::uint64_t limit);  // all primes <= limit
    std::uint64_t limit() const { return limit_; }
    const std::vector<std::uint32_t>& primes() const { return primes_; }
    bool is_prime(std::uint64_t n) const;  // n <= limit

private:
    std::uint64_t limit_;
    std::vector<std::uint32_t> primes_;
    std::vector<bool> composite_;
};

// Process-wide cache; grows on demand and hands out immutable tables.
std::shared_ptr<const PrimeTable> shared_primes(std::uint64_t limit);

class OmegaSieve {
public:
    explicit OmegaSieve(std::uint64_t n_max);
    std::uint64_t n_max() const { return omega_.size() - 1; }
    unsigned omega(std::uint64_t n) const { return omega_[n]; }
    std::vector<std::uint64_t> almost_primes(unsigned L) const;

private:
    std::vector<std::uint8_t> omega_;  // Ω(n), n <= n_max
};

struct TimeSample {
    std::uint64_t n;
    double t;
};

// Pull-based generator over the admissible indices of a SequenceSpec.
class TimeStream {
public:
    explicit TimeStream(const SequenceSpec& spec);
    std::optional<TimeSample> next();

private:
    SequenceSpec spec_;
    std::uint64_t n_ = 0;
    std::shared_ptr<const OmegaSieve> omega_;
};

std::vector<double> gen_times(const SequenceSpec& spec);

struct Factorization {
    std::uint64_t n = 1;
    std::vector<std::uint64_t> factors;  // ascending, with multiplicity
    unsigned omega_big = 0;
};

inline constexpr std::uint64_t kFactorizeMax = 1000000000000ULL;

Factorization factorize(std::uint64_t n);

std::vector<std::uint64_t> almost_primes(unsigned L, std::uint64_t n_max);

// mask[n] == 1 iff gcd(n, P(z)) == 1, for 0 < n <= n_max (mask[0] = 0).
std::vector<std::uint8_t> rough_mask(double z, std::uint64_t n_max);
std::vector<std::uint64_t> rough_numbers(double z, std::uint64_t n_max);

} // namespace horolab
