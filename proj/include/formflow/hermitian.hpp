#pragma once

#include "formflow/errors.hpp"
#include "formflow/fields.hpp"

namespace formflow {

/// SPD metric with its pointwise-derived data; the carrier all metric-aware
/// operators take.
struct MetricField {
  TensorField g;         // (0,2)
  TensorField g_inv;     // (2,0)
  ScalarField sqrt_det;  // sqrt(det g)
  bool spd = false;      // Cholesky succeeded at every point

  MetricField() = default;
  explicit MetricField(const TensorField& g_in);
};

/// Endomorphism field with J^2 = -Id monitored.
struct AlmostComplexField {
  TensorField j;            // (1,1)
  double sq_defect = 0.0;   // max ||J^2 + Id||_inf over points

  AlmostComplexField() = default;
  explicit AlmostComplexField(TensorField j_in);
};

enum class PairStatus { invalid, tamed, compatible };

struct PairOptions {
  double tol_c = 1e-8;    // compatibility classification threshold (max norm)
  double eps_nd = 1e-8;   // nondegeneracy threshold on min |Pf(omega)|
  bool with_omega_inv = true;
};

/// A two-form and almost complex structure with the induced metric and its
/// caches, computed eagerly so the value is immutable after construction.
struct HermitianPair {
  FormField omega;        // degree 2
  TensorField j;          // (1,1)
  MetricField metric;     // from the symmetrized bilinear form (the (omega_J, J) metric)
  TensorField omega_inv;  // (2,0), omega_{ij} omega^{jk} = delta_i^k (empty if skipped)
  ScalarField pf;         // Pfaffian of omega
  double compat_inf = 0.0;   // max ||omega_{J-}||_inf
  double min_abs_pf = 0.0;
  double j_sq_defect = 0.0;
  PairStatus status = PairStatus::invalid;

  bool compatible() const { return status == PairStatus::compatible; }
  bool tamed_or_better() const { return status != PairStatus::invalid; }
};

HermitianPair make_hermitian_pair(const FormField& omega, const TensorField& j,
                                  const PairOptions& opt = {});

/// beta_J(x,y) = (beta(x,y) + beta(Jx,Jy)) / 2.
FormField invariant_part(const FormField& beta, const TensorField& j);
/// beta_{J-} = (beta(x,y) - beta(Jx,Jy)) / 2.
FormField anti_invariant_part(const FormField& beta, const TensorField& j);

/// g(x,y) = (omega(x,Jy) + omega(y,Jx)) / 2. Throws NotTamedError if the
/// result is not positive definite at some point.
TensorField metric_from_pair(const FormField& omega, const TensorField& j);

/// Endomorphism K with g(Kx,y) = m(x,y) for a bilinear (0,2) field m.
TensorField endo_from_bilinear(const MetricField& metric, const TensorField& m);
/// Bilinear g(Kx, y) of an endomorphism.
TensorField bilinear_from_endo(const MetricField& metric, const TensorField& k);

struct VariationPair {
  FormField theta;  // degree 2
  TensorField k;    // (1,1)
};

struct VariationDefects {
  double anti_commute;  // max ||JK + KJ||
  double pairing;       // max |omega(Kx,Jy) + omega(Jx,Ky) - theta(x,y) + theta(Jx,Jy)|
};

VariationDefects check_variation(const HermitianPair& pair, const VariationPair& var);

/// Nearest almost complex structure to j_raw: J = j_raw * S^{-1/2} with
/// S = -j_raw^2, by scaled Newton-Schulz iteration. Throws
/// RetractionDivergedError after 50 iterations without convergence.
AlmostComplexField retract_almost_complex(const TensorField& j_raw);

double j_squared_defect(const TensorField& j);

/// Projection of an endomorphism field onto the anti-J-invariant subspace:
/// P(K) = (K + J K J) / 2, which anti-commutes with J exactly when J^2 = -Id.
TensorField project_anti_j(const TensorField& k, const TensorField& j);

}  // namespace formflow
