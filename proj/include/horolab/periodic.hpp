#pragma once

// Closed horocycles through rational points, the approximating periodic
// sequence, period integrals and the error budgets.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "horolab/diophantine.hpp"
#include "horolab/group.hpp"
#include "horolab/surface.hpp"

namespace horolab {

// (1,0; p/q,1)Γ. Viewed as Γ\G point its orbit u0(σ)·point has surface
// image x = −(b + σ/q)/q mod 1, y = 1/q² with b = p⁻¹ mod q.
struct PeriodicPoint {
    std::int64_t p = 0;
    std::int64_t q = 1;
    std::int64_t period = 1;  // q², certified
    std::int64_t b = 0;       // p⁻¹ mod q
};

inline constexpr std::int64_t kMaxPeriodicQ = 3000000000LL;

// Exact test: u0(s)·lower(p/q) ∈ lower(p/q)·PSL(2,Z), i.e. the matrix
// (1+sp/q, s; −p²s/q², 1−ps/q) has integer entries.
bool fixes_coset(std::int64_t p, std::int64_t q, std::int64_t s);

PeriodicPoint make_periodic_point(std::int64_t p, std::int64_t q);

// Reduced surface image at orbit time sigma (any real; reduced mod q² internally),
// for the base point scaled to height `scale`/q².
HalfPlanePoint periodic_image(const PeriodicPoint& pt, double sigma, double scale = 1.0);

struct ApproxEntry {
    BigInt p, q;
    double log_gap = 0;          // natural log of the certified |x − p/q| upper bound
    double log_threshold = 0;    // natural log of (q²)^{−1/(1−κ)}
    std::optional<PeriodicPoint> point;  // present when q fits the periodic evaluator
};

// Candidates with |x − p/q| <= (q²)^{−1/(1−κ)}, compared exactly when
// 2/(1−κ) is an integer and in log space otherwise.
std::vector<ApproxEntry> approx_periodic_sequence(const std::vector<RationalApprox>& candidates,
                                                  const RealInterval& x, double kappa);
std::vector<ApproxEntry> approx_periodic_sequence(const NonDiophantine& x, double kappa);
std::vector<ApproxEntry> approx_periodic_sequence(const RealInterval& x, std::size_t depth, double kappa);

struct PeriodIntegral {
    double value = 0;
    double change = 0;          // |I_n − I_{n/2}| at acceptance
    std::uint64_t samples = 0;
};

inline constexpr std::uint64_t kDefaultMaxSamples = std::uint64_t{1} << 27;

PeriodIntegral period_integral(const SurfaceFn& f, const PeriodicPoint& pt, std::uint64_t samples = 0,
                               double tol = 1e-6, std::uint64_t max_samples = kDefaultMaxSamples,
                               double scale = 1.0, Exec exec = default_exec());

struct BudgetTerm {
    std::string name;
    double log10_value = 0;
    double value = 0;  // may under/overflow; log10_value is authoritative
};

struct ErrorBudget {
    std::vector<BudgetTerm> terms;
    double log10_total = 0;
    double total = 0;
    void add(std::string name, double log10_value);
};

double orbit_divergence_bound(double s, double delta);
// N⁵|x − p/q|, the intermediate shadowing bound.
double shadow_bound_n5(double n, double gap);

ErrorBudget error_budget_p23(double n, double gamma, double d_pq, double d_q);
ErrorBudget error_budget_p23_log(double log10_n, double gamma, double log10_d_pq, double log10_d_q);
ErrorBudget error_budget_l45(double n, double gap, double q, double eps);
ErrorBudget error_budget_l45(double n, double x, double p, double q, double eps);
ErrorBudget error_budget_l45_log(double log10_n, double log10_gap, double log10_q, double eps);

} // namespace horolab
