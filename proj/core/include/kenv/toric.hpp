#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kenv/potential.hpp"

namespace kenv {

// A complete fan, by its rays and maximal cones. Non-simplicial cones are
// allowed; completeness itself is not certified (only the necessary
// conditions below are checked).
struct Fan {
  int rank = 0;
  std::vector<IVec> rays;                   // primitive integer vectors
  std::vector<std::vector<int>> max_cones;  // 0-based ray index sets, sorted

  // Throws with a description when a ray is non-primitive, a cone index is
  // out of range, one maximal cone contains another, some ray lies in no
  // maximal cone, or the rays fail to span the lattice rationally.
  void validate() const;
};

struct FanGrading {
  GroupPtr group;
  std::vector<Degree> ray_degrees;
};

// The grading group A = coker(M -> ZZ^{rays}) with the class of each ray's
// coordinate function.
FanGrading grading_from_fan(const Fan& fan);

// Minimal ray subsets not contained in the closure of any maximal cone;
// their coordinate subspaces are the components of V(B). Each has >= 2
// elements for a complete fan.
std::vector<std::vector<int>> irrelevant_components(const Fan& fan);

struct CyResult {
  bool holds = false;
  std::optional<Degree> witness;  // the difference when it fails
};

// sum beta_j = sum alpha_rho in A.
CyResult cy_check(const std::vector<Degree>& alphas, const std::vector<Degree>& betas);

enum class OriginSupport { HoldsInWindow, Fails, Unknown };
std::string to_string(OriginSupport v);

struct StratumReport {
  std::vector<int> gamma;
  OriginSupport verdict = OriginSupport::Unknown;
  std::string note;
};

enum class ThickMode { Sheaves, Singularities };

struct ThickGenerator {
  std::vector<int> gamma;   // empty in the singularities mode
  std::string description;  // printable generator descriptor
};

struct ThickReport {
  std::vector<ThickGenerator> generators;
  std::vector<StratumReport> origin_support;
};

// Generators of the thick subcategories cut out by the irrelevant locus:
// for sheaves, one exterior-algebra module per minimal Gamma (with its
// Koszul-complex counterpart named); for singularities, the shifts of k.
// When `pot` is given, also reports the stratum-by-stratum windowed check
// that Z(J) meets V(B) only at the origin.
ThickReport thick_subcategory_generators(const Fan& fan, const Potential* pot, ThickMode mode,
                                         int probe_degree_cap = 6);

}  // namespace kenv
