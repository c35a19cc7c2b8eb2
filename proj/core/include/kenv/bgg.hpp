#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "kenv/ainfty.hpp"
#include "kenv/koszul.hpp"
#include "kenv/potential.hpp"

namespace kenv {

// ---------------------------------------------------------------------------
// Windows: the finite sets of bidegrees all functor computations run over.
struct Window {
  std::vector<Degree> degrees;
  int h_min = 0;
  int h_max = 0;

  std::vector<Bidegree> cells() const;
  bool contains_degree(const Degree& d) const;
};

// Window of all degrees gen - (sums of <= depth variable degrees), with
// homological range [0, depth]. The default window for Ext tables.
Window cone_window(const Potential& pot, const std::vector<Degree>& tops, int depth);

// ---------------------------------------------------------------------------
// Per-degree graded data of S_W and C_W with the dual bases of the perfect
// pairing S_W x C_W -> k.
class SWCache {
 public:
  explicit SWCache(std::shared_ptr<const Potential> pot);

  const Potential& pot() const { return *pot_; }

  struct DegreeData {
    std::vector<Monomial> monomials;  // basis of Sym(V*)_alpha
    RowSpan ideal;                    // component of (W_1..W_m) in that basis
    std::vector<int> rep_cols;        // non-pivot columns: S_W representatives
    std::vector<Polynomial> cw;       // basis of (C_W)_{-alpha}
    std::vector<Polynomial> cw_dual;  // dual to the S_W representatives
    DegreeData() : ideal(0) {}
  };

  const DegreeData& at(const Degree& alpha) const;
  int sw_dim(const Degree& alpha) const { return static_cast<int>(at(alpha).rep_cols.size()); }
  int cw_dim(const Degree& gamma) const { return static_cast<int>(at(-gamma).cw.size()); }

  // Coordinates of an x-polynomial (homogeneous of degree alpha) in the
  // S_W representative basis at alpha.
  QVec sw_coords(const Degree& alpha, const Polynomial& p) const;
  // The representative monomial polynomial of an S_W basis element.
  Polynomial sw_rep(const Degree& alpha, int index) const;
  // Coordinates of a C_W element in the cw basis at its degree; throws if
  // the element is not in the span (C_W must be a subcoalgebra).
  QVec cw_coords(const Degree& gamma, const Polynomial& c) const;

 private:
  std::shared_ptr<const Potential> pot_;
  mutable std::mutex mutex_;
  mutable std::map<Degree, DegreeData> cache_;
};

// ---------------------------------------------------------------------------
// Cocomplete C_W-comodules, presented through on-demand graded components.
// Index pairs (bidegree, basis index) name basis vectors.

struct VCoactionTerm {
  int v = 0;           // leg e_v; the target sits at bidegree (a + alpha_v, h)
  int target = 0;      // basis index in the target component
  Scalar coeff;
};

struct CoactionTerm {
  Degree leg_degree;   // A-degree of the C_W leg (an element of -A_+)
  int cw_index = 0;    // index into the cw basis at leg_degree
  int target = 0;      // basis index at bidegree (a - leg_degree, h)
  Scalar coeff;
};

class Comodule {
 public:
  virtual ~Comodule() = default;
  virtual int dim(const Bidegree& bd) const = 0;
  // Reduced coaction followed by tau: only the V-legs.
  virtual std::vector<VCoactionTerm> vcoaction(const Bidegree& bd, int index) const = 0;
  // Full coaction over the C_W basis, including the counit leg. Only needed
  // where the adjunction unit is built; the default refuses.
  virtual std::vector<CoactionTerm> coaction(const Bidegree& bd, int index) const;
  // Internal differential into (a, h+1); empty when the comodule is a plain
  // module dual.
  virtual std::map<int, Scalar> differential(const Bidegree& bd, int index) const;
  // Upper bound for phi over the A-degrees of nonzero components at fixed
  // homological degree; used to enumerate intersections of cones.
  virtual Scalar phi_max(int hdeg) const = 0;
  virtual std::pair<int, int> hdeg_range() const = 0;
};

// ---------------------------------------------------------------------------
// Finitely presented A-graded S_W-modules.
struct ModuleGenerator {
  std::string name;
  Degree degree;
  int hdeg = 0;
};

struct ModulePresentation {
  std::vector<ModuleGenerator> generators;
  std::vector<std::vector<Polynomial>> relations;  // rows over Sym(V*)
};

// Graded components of the module itself (exact degreewise linear algebra).
class ModuleComponents {
 public:
  ModuleComponents(std::shared_ptr<const SWCache> cache, ModulePresentation pres);

  const ModulePresentation& presentation() const { return pres_; }
  int dim(const Degree& beta) const;
  // Basis vectors are classes of (generator, S_W representative) columns.
  std::pair<int, int> basis_col(const Degree& beta, int t) const;
  // Coordinates at beta + deg(q) of q . (basis t at beta).
  QVec multiply(const Degree& beta, int t, const Polynomial& q) const;
  // Coordinates of sum_g p_g . gen_g with deg(p_g) + deg(gen_g) = beta.
  QVec coords(const Degree& beta, const std::vector<Polynomial>& cols) const;
  const SWCache& cache() const { return *cache_; }

 private:
  struct CompData {
    std::vector<std::pair<int, int>> cols;  // (generator, rep index at needed degree)
    RowSpan relspan;
    std::vector<int> basis_cols;  // non-pivot columns
    CompData() : relspan(0) {}
  };
  const CompData& comp(const Degree& beta) const;
  QVec reduce(const CompData& cd, QVec full) const;

  std::shared_ptr<const SWCache> cache_;
  ModulePresentation pres_;
  mutable std::mutex mutex_;
  mutable std::map<Degree, CompData> comps_;
};

// The graded dual of a finitely generated module, as a C_W-comodule: the
// contravariant embedding that makes f.g. modules cocomplete.
class DualModuleComodule : public Comodule {
 public:
  DualModuleComodule(std::shared_ptr<const ModuleComponents> mod);
  int dim(const Bidegree& bd) const override;
  std::vector<VCoactionTerm> vcoaction(const Bidegree& bd, int index) const override;
  std::vector<CoactionTerm> coaction(const Bidegree& bd, int index) const override;
  Scalar phi_max(int hdeg) const override;
  std::pair<int, int> hdeg_range() const override;
  const ModuleComponents& module() const { return *mod_; }

 private:
  std::shared_ptr<const ModuleComponents> mod_;
};

// ---------------------------------------------------------------------------
// Strictly unital A-infinity modules over E_W, through their graded
// components and action maps.
class AInftyModuleRef {
 public:
  virtual ~AInftyModuleRef() = default;
  virtual int dim(const Bidegree& bd) const = 0;
  // mu^M_k(m, args...) with k = args.size() + 1; the result is a linear
  // combination of basis vectors in the bidegree forced by the arguments.
  virtual std::map<std::pair<Bidegree, int>, Scalar> apply_mu(
      const Bidegree& bd, int index, const std::vector<Polynomial>& args) const = 0;
  virtual std::map<int, Scalar> differential(const Bidegree& bd, int index) const;
  virtual Scalar phi_max(int hdeg) const = 0;
  virtual std::pair<int, int> hdeg_range() const = 0;
};

// The trivial module k (augmentation action).
class TrivialModule : public AInftyModuleRef {
 public:
  explicit TrivialModule(std::shared_ptr<const EwAlgebra> ew);
  int dim(const Bidegree& bd) const override;
  std::map<std::pair<Bidegree, int>, Scalar> apply_mu(
      const Bidegree& bd, int index, const std::vector<Polynomial>& args) const override;
  Scalar phi_max(int hdeg) const override;
  std::pair<int, int> hdeg_range() const override;

 private:
  std::shared_ptr<const EwAlgebra> ew_;
};

// E_W as a module over itself.
class FreeEwModule : public AInftyModuleRef {
 public:
  explicit FreeEwModule(std::shared_ptr<const EwAlgebra> ew);
  int dim(const Bidegree& bd) const override;
  std::map<std::pair<Bidegree, int>, Scalar> apply_mu(
      const Bidegree& bd, int index, const std::vector<Polynomial>& args) const override;
  Scalar phi_max(int hdeg) const override;
  std::pair<int, int> hdeg_range() const override;

  const std::vector<Monomial>& basis(const Bidegree& bd) const;
  std::shared_ptr<const EwAlgebra> algebra() const { return ew_; }

 private:
  std::shared_ptr<const EwAlgebra> ew_;
  mutable std::mutex mutex_;
  mutable std::map<Bidegree, std::vector<Monomial>> basis_;
};

// Monomial basis of E_W at one bidegree (subsets of e's times z-monomials).
std::vector<Monomial> ew_basis(const Potential& pot, const Bidegree& bd);

// The Koszul complex (Lambda(L_Gamma) (x) S_W, d_Kos) of the coordinate
// sequence x_sigma, sigma in gamma_vars: componentwise dimension and the
// differential Lambda^t -> Lambda^(t-1) at one A-degree. Used to compare
// against the G-image of the exterior-quotient module.
int koszul_complex_dim(const SWCache& cache, const std::vector<int>& gamma_vars,
                       const Degree& adeg, int t);
QMat koszul_complex_differential(const SWCache& cache, const std::vector<int>& gamma_vars,
                                 const Degree& adeg, int t);

// Lambda(V / V_Gamma) with the E_W-action through the quotient to
// Lambda(V) (z_j -> 0) and then to the exterior algebra on the Gamma
// coordinates. Higher products vanish.
class ExteriorQuotientModule : public AInftyModuleRef {
 public:
  ExteriorQuotientModule(std::shared_ptr<const EwAlgebra> ew, std::vector<int> gamma_vars);
  int dim(const Bidegree& bd) const override;
  std::map<std::pair<Bidegree, int>, Scalar> apply_mu(
      const Bidegree& bd, int index, const std::vector<Polynomial>& args) const override;
  Scalar phi_max(int hdeg) const override;
  std::pair<int, int> hdeg_range() const override;

  // Basis at a bidegree: sorted index subsets of gamma_vars.
  const std::vector<std::vector<int>>& basis(const Bidegree& bd) const;

 private:
  std::shared_ptr<const EwAlgebra> ew_;
  std::vector<int> gamma_;
  mutable std::mutex mutex_;
  mutable std::map<Bidegree, std::vector<std::vector<int>>> basis_;
};

// ---------------------------------------------------------------------------
// The functor F: comodules -> A-infinity modules. F(N) = N (x) E_W with the
// twisted differential; action maps act on the E_W leg only.
class FModule : public AInftyModuleRef {
 public:
  FModule(std::shared_ptr<const SWCache> cache, std::shared_ptr<const EwAlgebra> ew,
          std::shared_ptr<const Comodule> n);

  struct BasisElt {
    Bidegree nbd;   // comodule bidegree
    int nidx = 0;   // comodule basis index
    Monomial ew;    // E_W monomial
  };
  const std::vector<BasisElt>& basis(const Bidegree& bd) const;

  int dim(const Bidegree& bd) const override;
  std::map<std::pair<Bidegree, int>, Scalar> apply_mu(
      const Bidegree& bd, int index, const std::vector<Polynomial>& args) const override;
  std::map<int, Scalar> differential(const Bidegree& bd, int index) const override;
  Scalar phi_max(int hdeg) const override;
  std::pair<int, int> hdeg_range() const override;

  const Comodule& comodule() const { return *n_; }

 private:
  std::shared_ptr<const SWCache> cache_;
  std::shared_ptr<const EwAlgebra> ew_;
  std::shared_ptr<const Comodule> n_;
  mutable std::mutex mutex_;
  mutable std::map<Bidegree, std::vector<BasisElt>> basis_;
};

// ---------------------------------------------------------------------------
// The functor G: A-infinity modules -> comodules with an S_W-structure.
// G(M) = M (x) C_W; the C_W leg sits in homological degree 0.
class GComodule : public Comodule {
 public:
  GComodule(std::shared_ptr<const SWCache> cache, std::shared_ptr<const EwAlgebra> ew,
            std::shared_ptr<const AInftyModuleRef> m);

  struct BasisElt {
    Bidegree mbd;
    int midx = 0;
    Degree cdeg;   // C_W-leg degree
    int cidx = 0;  // index into the cw basis at cdeg
  };
  const std::vector<BasisElt>& basis(const Bidegree& bd) const;

  int dim(const Bidegree& bd) const override;
  std::vector<VCoactionTerm> vcoaction(const Bidegree& bd, int index) const override;
  std::map<int, Scalar> differential(const Bidegree& bd, int index) const override;
  Scalar phi_max(int hdeg) const override;
  std::pair<int, int> hdeg_range() const override;

  const AInftyModuleRef& module() const { return *m_; }
  const SWCache& cache() const { return *cache_; }

 private:
  std::shared_ptr<const SWCache> cache_;
  std::shared_ptr<const EwAlgebra> ew_;
  std::shared_ptr<const AInftyModuleRef> m_;
  mutable std::mutex mutex_;
  mutable std::map<Bidegree, std::vector<BasisElt>> basis_;
};

// ---------------------------------------------------------------------------
// Cohomology and reports.

// Differential matrix of an A-infinity module's delta at a cell: rows index
// the (a, h+1) component, columns the (a, h) component.
QMat module_differential_matrix(const AInftyModuleRef& mod, const Bidegree& bd);
QMat comodule_differential_matrix(const Comodule& com, const Bidegree& bd);

// dim H at each cell of the window.
std::map<Bidegree, int> module_cohomology(const AInftyModuleRef& mod, const Window& win);
std::map<Bidegree, int> comodule_cohomology(const Comodule& com, const Window& win);

// delta^2 = 0 over the window; throws nothing, reports instead.
struct SquareZeroReport {
  bool passed = true;
  std::string first_failure;
};
SquareZeroReport check_module_square_zero(const AInftyModuleRef& mod, const Window& win);

// ---------------------------------------------------------------------------
// Twisted cochain verification: sum_s mu_s tau^{(x)s} Delta^{(s)} = 0 on
// every C_W basis element in the window degrees.
struct TwistedCochainReport {
  bool passed = true;
  long elements_checked = 0;
  std::string first_counterexample;
};
TwistedCochainReport verify_twisted_cochain(const SWCache& cache, const EwAlgebra& ew,
                                            const std::vector<Degree>& degrees);

// ---------------------------------------------------------------------------
// Independent Ext oracle: windowed minimal A-graded free resolution over
// S_W by degreewise linear algebra, then Hom(-, k). Shares no code with the
// functor path beyond the raw component machinery.
std::map<Bidegree, int> ext_oracle(const ModuleComponents& mod, const Window& win);

// Cohomology of F(N~) for the dual comodule of a module presentation,
// reported over the window; acceptance compares this with ext_oracle.
std::map<Bidegree, int> f_of_module_cohomology(std::shared_ptr<const SWCache> cache,
                                               std::shared_ptr<const EwAlgebra> ew,
                                               std::shared_ptr<const ModuleComponents> mod,
                                               const Window& win);

// ---------------------------------------------------------------------------
// Adjunction checks.
struct AdjunctionReport {
  bool chain_map = false;
  bool quasi_iso = false;
  std::string detail;
};

// Psi_1: F G (M) -> M built from the counit; checked as a chain map and for
// inducing an isomorphism on windowed cohomology.
AdjunctionReport check_counit(std::shared_ptr<const SWCache> cache,
                              std::shared_ptr<const EwAlgebra> ew,
                              std::shared_ptr<const AInftyModuleRef> m, const Window& win);

// Unit N -> G F (N) for a module presentation's dual comodule.
AdjunctionReport check_unit(std::shared_ptr<const SWCache> cache,
                            std::shared_ptr<const EwAlgebra> ew,
                            std::shared_ptr<const ModuleComponents> mod, const Window& win);

}  // namespace kenv
