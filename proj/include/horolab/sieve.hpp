#pragma once

// Linear sieve with g(d) = 1/d: exact sifted sums, density products,
// remainders and the upper/lower bound assembly.

#include <cstdint>
#include <vector>

namespace horolab {

struct SieveProblem {
    std::vector<double> weights;               // weights[n] = a(n) for n >= 1; weights[0] ignored
    double z = 2;
    double D = 2;
    std::vector<std::uint64_t> exceptional;    // the prime set 𝒬; Q is their product
    double eps = 1e-3;

    static SieveProblem uniform(std::uint64_t n, double z, double D, double eps = 1e-3);
    std::uint64_t n_max() const { return weights.empty() ? 0 : weights.size() - 1; }
    double total() const;                      // |A|
    double log_Q() const;
};

void validate(const SieveProblem& pb);

enum class SieveMethod { direct, inclusion_exclusion };

// S(A, P, z) = Σ_{(n, P(z)) = 1} a(n).
double legendre_S(const SieveProblem& pb, SieveMethod method = SieveMethod::direct);

// |A_d| = Σ_{d | n} a(n).
double multiples_sum(const SieveProblem& pb, std::uint64_t d);

double V_of_z(double z);
// Π_{u<=p<z} (1 − 1/p)^{−1} and the displayed Mertens-type inequality.
double mertens_product(double u, double z);
bool mertens_check(double u, double z, double eps);

double remainder_r(const SieveProblem& pb, std::uint64_t d);
double R_total(const SieveProblem& pb);

inline constexpr std::uint64_t kMaxDivisors = 100000000ULL;

// Linear-sieve functions on [1, 5].
double F0(double s);
double f0(double s);

struct HypothesisCheck {
    bool holds = true;
    double worst_ratio = 0;     // max over u of LHS/RHS
    std::uint64_t worst_u = 0;  // prime attaining it (0 if no primes below z)
};

// Π_{u<=p<z, p∉𝒬}(1 − 1/p)^{−1} < (1+ε) log z / log u for all 1 < u < z.
HypothesisCheck sieve_hypothesis(const SieveProblem& pb);

struct SieveReport {
    double S = 0, X = 0, V = 0, R = 0, s = 0;
    double F0 = 0, f0 = 0;
    double lower = 0, upper = 0;
    bool lower_valid = false;    // D >= z²; otherwise lower is the trivial 0
    HypothesisCheck hypothesis;
    bool inside = false;         // lower <= S <= upper
};

SieveReport jr_bounds(const SieveProblem& pb);

} // namespace horolab
