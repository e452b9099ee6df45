#pragma once

// PSL(2,R), its action on the upper half plane and reduction mod PSL(2,Z).
//
// Conventions: u0(s) = (1 s; 0 1), a(t) = diag(e^{-t/2}, e^{t/2}) so that
// a(t)·z = e^{-t} z, omega = (0 -1; 1 0), lower(x) = (1 0; x 1).
// Lattice points are right cosets Γg; their surface image is Γ·(g·i).

#include <cstdint>
#include <vector>

namespace horolab {

struct GroupElement {
    double a = 1, b = 0, c = 0, d = 1;
};

struct HalfPlanePoint {
    double x = 0;
    double y = 1;
};

// Sign-normalized representative: c > 0, or c == 0 and a > 0.
GroupElement make_element(double a, double b, double c, double d);

GroupElement identity();
GroupElement u0(double s);
GroupElement geodesic(double t);  // a(t)
GroupElement omega();
GroupElement lower(double x);

GroupElement compose(const GroupElement& g, const GroupElement& h);
GroupElement invert(const GroupElement& g);
double det(const GroupElement& g);

// Max entrywise distance between g and ±h.
double projective_distance(const GroupElement& g, const GroupElement& h);

HalfPlanePoint mobius_act(const GroupElement& g, const HalfPlanePoint& z);
double hyperbolic_distance(const HalfPlanePoint& z1, const HalfPlanePoint& z2);

// Standard fundamental domain test with boundary tolerance.
bool in_fundamental_domain(const HalfPlanePoint& z, double tol = 1e-9);

// One reduction generator. translate: z -> z - shift; invert: z -> -1/z.
struct ReductionStep {
    enum Kind : std::uint8_t { translate, invert } kind;
    std::int64_t shift = 0;
};

struct LatticePoint {
    GroupElement g;
    GroupElement reduced;              // gamma · g
    std::vector<ReductionStep> word;   // gamma = word[k-1] ... word[0]
    HalfPlanePoint image() const;      // reduced · i
};

inline constexpr std::size_t kMaxReductionSteps = 1000000;

LatticePoint reduce_psl2z(const GroupElement& g);
LatticePoint identity_coset();

// gamma as an integer matrix, rebuilt from the word.
GroupElement word_matrix(const std::vector<ReductionStep>& word);

// Point-only reduction for hot loops (no word recorded). The long double
// instantiation is used where the input carries extra digits.
template <class Real>
void reduce_point(Real& x, Real& y);

HalfPlanePoint reduce_point(HalfPlanePoint z);

struct BruhatFactors {
    enum class Branch { uau, omega_au } branch = Branch::uau;
    double s = 0;
    double t = 0;
    double y = 0;
};

BruhatFactors bruhat_decompose(const GroupElement& g);
GroupElement bruhat_recompose(const BruhatFactors& f);

// Hyperbolic distance from i to the reduced image of Γg·a(−t).
double cusp_excursion(const LatticePoint& p, double t);
double dist_to_base(const LatticePoint& p);

// Frobenius-norm injectivity radius: min over nontrivial stabilizer
// elements v of ||v − I||, enumerated in the reduced frame.
double injectivity_eta(const LatticePoint& p);

} // namespace horolab

namespace horolab {

// The G/Γ point hΓ viewed as the right coset Γh⁻¹.
LatticePoint from_left_coset(const GroupElement& h);

// Γg·a(−t), i.e. the geodesic flow g_t applied to p.
LatticePoint geodesic_flow(const LatticePoint& p, double t);

} // namespace horolab
