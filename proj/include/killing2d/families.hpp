#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "killing2d/antiderivative.hpp"
#include "killing2d/geometry.hpp"

namespace killing2d {

/// Closed-form Killing families, one per classification case of the diagonal
/// metric. Each case is admissible only when the Lamé functions satisfy its
/// dependence hypothesis on the working region.
enum class FamilyCase {
  SeparableDiag,   // f1(x1), f2(x2):            V = c1 E1 + c2 E2
  BothX1_i,        // f1(x1), f2 const:           V = c1 E1 + c2 E2
  BothX1_ii,       // f1(x1), f2(x1):             V = (c2/f2) E2
  Crossed_case1,   // f1, f2 const:               V1 = k k1 x2 + c1, V2 = -k k2 x1 + c2
  Crossed_case2,   // f1 const, f2(x1):           V = (c/f2) E2
  Crossed_case3,   // f1(x2), f2 const:           V = (c/f1) E1
  Crossed_case4,   // f1(x2), f2(x1):             V = 0
  ConstF2_F1ofX1,  // f1(x1), f2 = k2:            V1 = -(k/k2) x2 + c1, V2 = k F2(x1) + c2, F2' = 1/f1
  ConstF2_F1ofX2,  // f1(x2), f2 = k2:            V2'' = k V2; V1 = -(F1/(k2 f1)) V2' + (lam v2 + c0)/f1
  BothConst,       // f1 = k1, f2 = k2:           V1 = -(k/k2) x2 + c1, V2 = (k/k1) x1 + c2
  Euclidean,       // f1 = f2 = 1:                coordinate (c0 x2 + c1, -(c0 x1 + c2))
};

/// Parameters of a family: the coupling constant k (only where the case uses
/// one), the free constants c (count fixed per case), and the anchor of the
/// antiderivatives F(anchor) = 0. Changing the anchor reshuffles the free
/// constants but not the family.
struct FamilyParams {
  double k = 0.0;
  std::vector<double> c;
  double anchor = 0.0;
};

struct CurvatureConstant {
  double k = 0.0;
  bool constant = false;
};

const char* family_name(FamilyCase c);
FamilyCase family_from_name(std::string_view name);  // throws InputError

/// Number of free constants (generators) of the case, k included where it is
/// free: SeparableDiag 2, BothX1_i 2, BothX1_ii 1, Crossed_case1 3,
/// Crossed_case2 1, Crossed_case3 1, Crossed_case4 0, ConstF2_F1ofX1 3,
/// ConstF2_F1ofX2 3, BothConst 3, Euclidean 3.
std::size_t family_constant_count(FamilyCase c);

/// Number of entries expected in FamilyParams::c.
std::size_t family_c_count(FamilyCase c);

struct FamilyProvenance {
  const char* hypothesis;    // dependence hypothesis on f1, f2
  const char* construction;  // component formulas used
};
FamilyProvenance family_provenance(FamilyCase c);

/// k(x2) = -k2^2 (f1'' f1 - (f1')^2) / f1^4 sampled at the given x2 values
/// (f2 = k2 constant required). constant is true iff max - min <= 1e-8 *
/// (1 + |mean|); k is the sample mean. The sign of k selects the linear,
/// exponential or trigonometric branch of ConstF2_F1ofX2.
CurvatureConstant curvature_constant_k(const DiagonalMetric& m, std::span<const double> samples);

/// Evenly spaced x2 sample values used by default for curvature checks.
std::vector<double> curvature_samples(const Region& region, int n = 10);

/// Builds the family member for the given parameters. The result is a frame
/// field (coordinate for Euclidean) whose Killing residual vanishes
/// identically on the region. Throws AdmissibilityError naming the failed
/// precondition when the case does not match the metric, when the parameter
/// count is wrong, or when a nonzero k is requested for a case that has none.
VectorField build_family(FamilyCase c, const FamilyParams& params, const DiagonalMetric& m,
                         const Region& region = {});

/// Generators: one free constant set to 1, the rest to 0, in the order
/// (k,) c1, c2, ... For ConstF2_F1ofX2 on a metric whose curvature constant
/// is not constant only the V2 = 0 generator c0/f1 exists.
std::vector<VectorField> enumerate_basis(FamilyCase c, const DiagonalMetric& m,
                                         const Region& region = {});

}  // namespace killing2d
