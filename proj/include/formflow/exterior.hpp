#pragma once

#include "formflow/hermitian.hpp"

namespace formflow {

/// Exterior derivative, antisymmetrized centered differences; metric-free.
/// d(d(.)) vanishes exactly at the stencil level.
FormField exterior_d(const FormField& alpha);

/// Contravariant components alpha^I = det(g^{-1}[I,K]) alpha_K (Gram minors).
FormField raise_form(const FormField& alpha, const MetricField& m);

/// Hodge star for the metric m: alpha ^ *beta = <alpha, beta> dmu.
FormField hodge_star(const FormField& alpha, const MetricField& m);

/// Codifferential d* = -*d*, the production path for every degree.
FormField codiff(const FormField& alpha, const MetricField& m);

/// Covariant-index codifferential (d*eta)_{J} = -g^{pq} nabla_q eta_{pJ} for
/// degrees 2 and 3; verification oracle against the -*d* path.
FormField codiff_covariant(const FormField& alpha, const MetricField& m, const TensorField& gamma);

/// d*d omega via codiff(exterior_d(omega)) -- the production route.
FormField dstar_d(const FormField& omega, const MetricField& m);

/// d*d omega via the covariant formula
/// (d*d omega)_{ij} = -g^{pq}(nabla_p nabla_q w_{ij} - nabla_p nabla_i w_{qj}
///                     + nabla_p nabla_j w_{qi});  verification oracle.
FormField dstar_d_covariant(const FormField& omega, const MetricField& m,
                            const TensorField& gamma);

/// Hodge Laplacian d d* + d* d.
FormField hodge_laplacian(const FormField& alpha, const MetricField& m);

FormField wedge(const FormField& a, const FormField& b);

/// Pointwise <a, b> via the Gram form over increasing multi-indices.
ScalarField inner_density(const FormField& a, const FormField& b, const MetricField& m);

/// (a, b) = integral of <a,b> dmu.
double l2_inner(const FormField& a, const FormField& b, const MetricField& m);

/// Coefficient of omega^n / n! on dx^1...dx^D, i.e. the Pfaffian of the
/// component matrix.
ScalarField pfaffian_density(const FormField& omega);

struct Energies {
  double h0 = 0.0;      // (d omega, d omega)
  double h1 = 0.0;      // (d* omega, d* omega)
  double volume = 0.0;  // integral of omega^n / n!
  double h() const { return h0 + h1; }
};

Energies energies(const HermitianPair& pair);

/// iota_X alpha, X a (1,0) field.
FormField interior_product(const TensorField& x, const FormField& alpha);

/// Cartan formula L_X = d iota_X + iota_X d.
FormField lie_derivative_form(const TensorField& x, const FormField& alpha);

/// (L_X J)^j_i = X^k d_k J^j_i - J^k_i d_k X^j + J^j_k d_i X^k.
TensorField lie_derivative_j(const TensorField& x, const TensorField& j);

/// nabla omega as a (0,3) field, components [k][i][j] = nabla_k omega_{ij}.
TensorField covariant_grad_2form(const FormField& omega, const TensorField& gamma);

}  // namespace formflow
