#pragma once

// Experiment drivers. Each run_* returns a DensityReport; emit() writes it.
// Density is measured two ways (Birkhoff deficits against Haar and grid
// coverage); neither proves density, they are finite-run proxies.

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "horolab/config.hpp"
#include "horolab/expsum.hpp"
#include "horolab/orbit.hpp"
#include "horolab/periodic.hpp"
#include "horolab/surface.hpp"

namespace horolab {

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct ReportRow {
    std::string experiment;
    std::string level;       // k, q_k or a grid label
    std::uint64_t n = 0;
    std::string test_fn;
    double value = kNaN;
    double reference = kNaN;
    double deficit = kNaN;
    double budget = kNaN;
    double coverage = kNaN;
};

struct BirkhoffEntry {
    double value = 0;
    double haar_value = 0;
    double deficit = 0;
};

struct DensityReport {
    std::string experiment;
    std::vector<ReportRow> rows;
    std::map<std::string, BirkhoffEntry> birkhoff;  // at the largest N run
    double coverage = kNaN;
    std::vector<std::pair<std::string, ErrorBudget>> budgets;
    std::map<std::string, bool> verdicts;
    nlohmann::json details = nlohmann::json::object();
    bool clamped = false;                            // some schedule entry exceeded max_n
    std::vector<std::string> warnings;
};

// Point of G/Γ described by a config, with the exact data behind it.
struct ResolvedPoint {
    OrbitPoint orbit;                       // what gets evaluated
    std::optional<RealInterval> x;          // the U⁻ coordinate when known
    std::optional<NonDiophantine> nd;
    std::optional<ApproxEntry> shadow;      // rational the orbit is evaluated on
    DoubleDouble alpha{1, 0};
    double s = 0;
    GroupElement h;                         // the point is hΓ
    std::string label;
};

// with_e applies u0(s)·a_α from the point spec. max_time bounds the orbit
// times so a shadowed evaluation can be certified (PrecisionExhausted otherwise).
ResolvedPoint resolve_point(const PointSpec& spec, bool with_e, double max_time);

std::vector<SurfaceFn> resolve_test_functions(const std::vector<std::string>& names);
// Closed form for constants and y > c with c >= 1, certified quadrature otherwise.
double haar_value(const SurfaceFn& f);
CoverageGrid coverage_grid(const CoverageConfig& c);

DensityReport run_th11(const ExperimentConfig& cfg);
DensityReport run_th12(const ExperimentConfig& cfg);
DensityReport run_th13(const ExperimentConfig& cfg);
DensityReport effective_probe(const ExperimentConfig& cfg);
DensityReport expsum_grid(const ExperimentConfig& cfg);
DensityReport sieve_grid(const ExperimentConfig& cfg);
DensityReport dioph_report(const ExperimentConfig& cfg);
DensityReport period_report(const ExperimentConfig& cfg);
DensityReport run_experiment(const ExperimentConfig& cfg);

// Deficit/budget ratios: constant fitted (median) on the first half of the
// schedule, bounded if no ratio exceeds `factor` times it.
struct RatioFit {
    double constant = kNaN;
    double max_ratio = kNaN;
    bool bounded = true;
};
RatioFit fit_ratio(const std::vector<double>& ratios, double factor = 5);

// Studies shared by the CLI grids and the acceptance checks.
struct WeylStudy {
    std::vector<long> ks;
    std::vector<std::uint64_t> ns;
    std::vector<std::vector<double>> modulus;  // [k][N]
    std::vector<std::vector<double>> ratio;    // modulus / bound
    std::vector<double> slopes;                // per k
    double pooled_slope = 0;                   // common slope, separate intercepts
    double grid_median_ratio = 0;
    double max_ratio = 0;
    std::vector<double> k_median_ratio;
    std::vector<double> k_max_ratio;
};
WeylStudy weyl_exponent_study(double c, double gamma, const std::vector<long>& ks,
                              const std::vector<std::uint64_t>& ns, double l = 1);

struct QuadStudy {
    std::vector<std::uint64_t> ns;
    std::vector<double> modulus;
    std::vector<double> bound;
    double slope = 0;
    std::vector<std::uint64_t> identity_ns;
    double max_identity_error = 0;             // relative, |S|² vs differenced sum
};
QuadStudy quad_sum_study(const DoubleDouble& alpha, const std::vector<std::uint64_t>& ns,
                         const std::vector<std::uint64_t>& identity_ns, double eps = 0.01);

struct FourierDeficitStudy {
    std::vector<std::uint64_t> ns;
    std::vector<double> deficit, bound, ratio;
    double constant = 0;                       // max ratio: deficit <= constant·bound everywhere
    double first_half_constant = 0, second_half_constant = 0;
    double stability = 0;                      // max/min of the two half constants
};
PeriodicTestFn five_frequency_polynomial();
FourierDeficitStudy fourier_deficit_study(const PeriodicTestFn& f, double c, double gamma,
                                          const std::vector<std::uint64_t>& ns);

struct MertensStudy {
    double eps = 0;
    double z_max = 0;
    std::uint64_t u1 = 2;          // smallest u with the inequality holding for all grid u' >= u
    std::uint64_t pairs = 0;
    std::uint64_t failures = 0;    // pairs failing overall (all with u < u1)
    std::vector<double> zs;
};
MertensStudy mertens_study(double eps, const std::vector<double>& zs);

} // namespace horolab
