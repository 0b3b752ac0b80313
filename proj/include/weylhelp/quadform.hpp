#pragma once

// Direct evaluation of the Volkmer quotient and of the form
//   J_λ(f) = |λ|²‖f‖² - 2 Re λ 𝔱[f] + ‖ℓ[f]‖²,   𝔱[f] = ∫ |r|⁻¹ |f'|² dx,
// on trial functions built from Weyl solutions at λ and λ̄:
//   f = Σ± (c₁± ψ±(·,λ) + c₂± ψ±(·,λ̄)) χ±,  ψ±(·,λ̄) = conj ψ±(·,λ).
// Interface conditions at 0 for dom(A): f(+0) = f(-0) and r⁻¹f' continuous,
// which in coefficients reads -D₊C₊ = D₋C₋ with D± = [[m±, conj m±], [1, 1]].

#include <memory>
#include <span>
#include <vector>

#include "weylhelp/criteria.hpp"
#include "weylhelp/mfun.hpp"

namespace weylhelp {

enum class TrialKind {
  weyl_plus,
  weyl_minus,
  deficiency_combo,
  domA_combo,
  /// |r|⁻¹f' continuous at 0 instead of r⁻¹f': a function of dom(L).
  domL_combo,
};
const char* to_string(TrialKind kind);

/// Per-side quadrature sums of the Weyl solution ψ at λ in the side coordinate:
/// ∫|ψ|² dx, ∫ψ² dx, ∫|ψ^[1]|² dR, ∫(ψ^[1])² dR.
struct SideSums {
  double psi_abs = 0.0;
  cplx psi_sq;
  double quasi_abs = 0.0;
  cplx quasi_sq;
};

/// Weyl solutions of both sides at one λ, shared by every trial built at λ.
struct DeficiencyBasis {
  cplx lambda;
  cplx m_plus;
  cplx m_minus;
  /// Boundary values at 0 in x orientation: (ψ(0), |r|⁻¹ψ'(0)).
  Vec2 at0_plus;
  Vec2 at0_minus;
  /// Sums on the 12-point rule and on the 8-point rule of the same panels.
  SideSums fine[2];
  SideSums coarse[2];
  std::shared_ptr<const WeylSolution> psi[2];
};

DeficiencyBasis deficiency_basis(const Weight& w, cplx lambda, double tol = kDefaultTol);

struct TrialSample {
  double x;
  cplx f;
  cplx quasi;  // |r|⁻¹ f' in x orientation
};

struct TrialFunction {
  TrialKind kind = TrialKind::weyl_plus;
  cplx lambda;
  Vec2 C_plus = Vec2::Zero();
  Vec2 C_minus = Vec2::Zero();
  /// |f(+0) - f(-0)| and the matching quasi-derivative mismatch, both relative
  /// to 1 + the larger side value.
  double interface_value_residual = 0.0;
  double interface_quasi_residual = 0.0;
  std::vector<TrialSample> samples;
  std::shared_ptr<const DeficiencyBasis> basis;
};

/// Trial of the given kind. C_plus is used for all kinds except weyl_minus;
/// C_minus only for deficiency_combo (domA/domL derive it from C_plus).
TrialFunction build_trial(const Weight& w, TrialKind kind, cplx lambda, Vec2 C_plus = {1.0, 0.0},
                          Vec2 C_minus = Vec2::Zero(), double tol = kDefaultTol);
TrialFunction build_trial(std::shared_ptr<const DeficiencyBasis> basis, TrialKind kind,
                          Vec2 C_plus = {1.0, 0.0}, Vec2 C_minus = Vec2::Zero());

/// C₋ = -D₋⁻¹D₊C₊.
Vec2 domA_minus_coefficients(cplx m_plus, cplx m_minus, const Vec2& C_plus);

struct FormValues {
  double t_f = 0.0;
  double norm_sq = 0.0;
  double af_norm_sq = 0.0;
  double j_lambda = 0.0;
  /// Largest relative change of the four integrals between the two rules.
  double quad_error = 0.0;
};

/// ℓ[f] is taken as λ c₁ψ + λ̄ c₂ψ̄ on each side (exact for Weyl trials).
/// Throws ToleranceMiss when quad_error exceeds quad_tol.
FormValues form_values(const TrialFunction& f, double quad_tol = 1e-8);

/// 𝔱[f] / √(‖f‖² ‖ℓ[f]‖²). Throws Error(degenerate_trial) on a zero denominator.
double volkmer_ratio(const TrialFunction& f, double quad_tol = 1e-8);

/// M± = -[[Re(λm), Re λ conj m], [Re λ m, Re(λm)]].
Eigen::Matrix2cd m_pm_matrix(cplx lambda, cplx m);
/// 2(M₊C₊,C₊) + 2(M₋C₋,C₋).
double j_matrix(cplx lambda, cplx m_plus, cplx m_minus, const Vec2& C_plus, const Vec2& C_minus);

/// n points on the unit sphere of ℂ², stratified in |c₁| and the two phases.
std::vector<Vec2> sphere_samples(int n = 16);

struct JScanPoint {
  cplx lambda;
  /// min over samples of J_λ / (|λ|²‖f‖² + ‖ℓ[f]‖²), quadrature route.
  double min_normalized;
  /// max over samples of |J_quad - J_matrix| / (1 + |J_matrix|).
  double max_discrepancy;
  Vec2 argmin_C_plus;
};

struct JScanReport {
  std::vector<JScanPoint> points;
  double min_normalized = INFINITY;
  double max_discrepancy = 0.0;
  cplx worst_lambda;
  Vec2 worst_C_plus = Vec2::Zero();
};

/// domA trials on both rays ±K. Besides the given samples, each point also
/// tries the lowest eigenvector of the induced 2×2 form in C₊.
JScanReport j_nonnegativity_scan(const Weight& w, const Ray& ray,
                                 std::span<const Vec2> coefficient_samples, const Grids& grids);

/// Largest volkmer_ratio over domA trials on the rays ±K and the given samples.
struct RatioScan {
  double max_ratio = 0.0;
  cplx lambda;
  Vec2 C_plus = Vec2::Zero();
  std::vector<std::vector<double>> curve;  // y, ray slope, max ratio over samples
};
RatioScan domA_ratio_scan(const Weight& w, const Ray& ray, std::span<const Vec2> coefficient_samples,
                          const Grids& grids, TrialKind kind = TrialKind::domA_combo);

}  // namespace weylhelp
