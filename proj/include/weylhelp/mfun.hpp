#pragma once

// Weyl–Titchmarsh m-functions of the two one-sided Neumann problems (ell form)
// and of the two one-sided Dirichlet problems for -y'' = λ|r|y (r form).
//
// Every side is integrated in its own coordinate ξ ∈ (0, L) with ξ = x on the
// right and ξ = -x on the left, so the same endpoint formulas give m₊ and m₋.
// The Weyl solutions are then mapped back to x:
//   ell form  ψ₋(x) = -ψ̂(-x),  ψ₋^[1](x) = ψ̂^[1](-x)   (ψ₋(0) = m₋, ψ₋^[1](0) = 1)
//   r form    ψ₋(x) =  ψ̂(-x),  ψ₋'(x) = -ψ̂'(-x)      (ψ₋(0) = 1, ψ₋'(0) = -m₋ʳ)

#include <span>
#include <string>
#include <vector>

#include "weylhelp/volterra.hpp"
#include "weylhelp/weight.hpp"

namespace weylhelp {

inline constexpr double kDefaultTol = 1e-10;

enum class MKind { m_plus, m_minus, mr_plus, mr_minus };
const char* to_string(MKind kind);

struct MValue {
  MKind which = MKind::m_plus;
  cplx lambda;
  cplx value;
  /// |denominator| of the defining endpoint ratio (c^[1](L) or s^r(L)).
  double denominator_magnitude = 0.0;
  double error_estimate = 0.0;
};

/// m±(λ) = ŝ^[1](L)/ĉ^[1](L). Real λ is accepted away from poles.
/// Throws NearPole when |den| < 1e-8 (1 + |num|).
MValue m_ell(Side side, const Weight& w, cplx lambda, double tol = kDefaultTol);
/// m±ʳ(λ) = -ĉʳ(L)/ŝʳ(L), same pole rule.
MValue m_r(Side side, const Weight& w, cplx lambda, double tol = kDefaultTol);
MValue m_value(MKind which, const Weight& w, cplx lambda, double tol = kDefaultTol);

struct WeylSample {
  double x;
  cplx psi;
  cplx quasi;
};

class WeylSolution {
 public:
  Side side = Side::plus;
  SystemForm form = SystemForm::ell_form;
  cplx lambda;
  cplx m;
  /// Mismatch between the solution carried back from the outer boundary
  /// condition and the endpoint ratio m, relative to 1 + |m|.
  double boundary_residual = 0.0;
  double error_estimate = 0.0;
  std::vector<WeylSample> samples;

  /// (ψ, x-oriented quasi-derivative) at x of the weight's coordinate.
  Vec2 at(double x) const;
  /// The solution in the side coordinate ξ.
  const Trajectory& local() const { return local_; }
  /// Quadrature nodes of the side in ξ.
  const std::vector<QuadNode>& nodes() const { return nodes_; }
  /// ∫|ψ|² dx (ell form) or ∫|ψ|² dR (r form) over the side.
  double norm_sq() const;

 private:
  friend WeylSolution weyl_solution(Side, const Weight&, cplx, std::span<const double>,
                                    SystemForm, double);
  explicit WeylSolution(Trajectory t) : local_(std::move(t)) {}
  Trajectory local_;
  std::vector<QuadNode> nodes_;
};

/// Samples on `grid` (x coordinates of the side; 65 uniform points if empty).
WeylSolution weyl_solution(Side side, const Weight& w, cplx lambda,
                           std::span<const double> grid = {},
                           SystemForm form = SystemForm::ell_form, double tol = kDefaultTol);

struct WeylDisk {
  cplx lambda;
  cplx center;
  double radius = 0.0;
};
WeylDisk weyl_disk(Side side, const Weight& w, cplx lambda, double tol = kDefaultTol);

struct AuditCheck {
  std::string name;
  bool pass = true;
  double worst = 0.0;
  cplx worst_lambda;
};

struct HerglotzReport {
  std::vector<AuditCheck> checks;
  bool all_pass() const;
};

/// Im m > 0 for all four m-functions on `grid` ⊂ ℂ₊, conjugate symmetry on the
/// mirrored grid, and the residue audit L·y·Im m±(iy) → 1 as y → 0⁺ (L the
/// side length).
HerglotzReport herglotz_audit(const Weight& w, std::span<const cplx> grid,
                              double tol = kDefaultTol);

struct EnvelopeReport {
  std::vector<double> y;
  std::vector<double> ratio;  // |m(iy)| / f(y)
  double band_lo = 0.0;
  double band_hi = 0.0;
  bool inside_band = true;
};

/// Band is [min/4, 4·max] of the ratio over the first decade of `y_grid`.
EnvelopeReport asymptotic_envelope(Side side, const Weight& w, std::span<const double> y_grid,
                                   double tol = kDefaultTol);

/// n points per decade from lo to hi inclusive.
std::vector<double> log_grid(double lo, double hi, int per_decade);

}  // namespace weylhelp
