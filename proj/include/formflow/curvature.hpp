#pragma once

#include "formflow/hermitian.hpp"

namespace formflow {

/// Levi-Civita Christoffel symbols, (1,2) field with components [k][i][j],
/// symmetric in (i,j).
TensorField christoffel(const MetricField& m);

/// Full Riemann tensor R_{ijkl} = (d_i G^p_{jk} - d_j G^p_{ik}) g_{pl} + G*G
/// as a (0,4) field. Materializes dim^4 components per point; intended for
/// dim <= 4 or small grids.
TensorField riemann(const MetricField& m, const TensorField& gamma);

/// Ricci tensor R_{jk} = g^{il} R_{ijkl}, assembled pointwise from the
/// Christoffel field (no (0,4) intermediate) and symmetrized.
TensorField ricci(const MetricField& m, const TensorField& gamma);

/// g(Bx,y) = Ric(Jx,y) + Ric(x,Jy); index form B^k_j = g^{ka}(J^b_a R_bj + J^b_j R_ba).
TensorField b_tensor(const HermitianPair& pair, const TensorField& ric);

/// h_{ij} = (theta_{ik} J^k_j + theta_{jk} J^k_i) / 2, the induced metric
/// variation of the compatible flow.
TensorField predicted_metric_variation(const FormField& theta, const TensorField& j);

/// dGamma^k_{ij}/dt = g^{kl}(nabla_i h_{lj} + nabla_j h_{li} - nabla_l h_{ij}) / 2.
TensorField predicted_connection_variation(const MetricField& m, const TensorField& gamma,
                                           const TensorField& h);

struct CurvatureMonitors {
  double max_rm = 0.0;          // max |Rm|_g
  double max_grad_omega = 0.0;  // max |nabla omega|_g
  double max_hess_omega = 0.0;  // max |nabla^2 omega|_g
  double min_eig_g = 0.0;       // min eigenvalue of g over points
};

CurvatureMonitors curvature_monitors(const HermitianPair& pair);

}  // namespace formflow
