#pragma once

// Fundamental system of the measure-driven first-order system
//
//   ell_form:  u1' = u2 dR,  u2' = -λ u1 dx     (-(|r|^{-1} y')' = λ y)
//   r_form:    u1' = u2 dx,  u2' = -λ u1 dR     (-y'' = λ |r| y)
//
// on one side (0, L) of the turning point. The interval is cut into panels:
// an exact jump for the atom at 0, a first-order Peano panel [0, x_min] for
// densities singular at 0, geometrically graded panels above it, and regular
// panels on the rest. Each density-carrying panel is stepped with 6-stage
// Gauss–Legendre collocation (order 12, preserves det U = 1) and refined by
// step doubling until the local propagator is resolved.

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "weylhelp/weight.hpp"

namespace weylhelp {

using Mat2 = Eigen::Matrix2cd;
using Vec2 = Eigen::Vector2cd;

enum class SystemForm { ell_form, r_form };
const char* to_string(SystemForm form);

/// M·2^exp2. Forward products grow like exp(√|λ|·x); the exponent is split off
/// so ratios of entries stay representable.
struct ScaledMat2 {
  Mat2 mantissa = Mat2::Identity();
  int exp2 = 0;
  Mat2 value() const;
};

struct IntegrateOptions {
  /// Target for the accumulated relative local error of the propagators.
  double tol = 1e-10;
  /// Positions in [0, L] that must be panel endpoints.
  std::vector<double> grid_request;
  std::size_t max_panels = 200000;
};

class FundamentalMatrix {
 public:
  enum class PanelKind { atom, peano, gauss, shear };
  struct Panel {
    double x0;
    double x1;
    PanelKind kind;
    Mat2 P;  // local propagator U(x1) U(x0)^{-1}
    double err;
  };

  cplx lambda() const noexcept { return lambda_; }
  SystemForm form() const noexcept { return form_; }
  const SideMeasure& side() const noexcept { return side_; }
  double length() const noexcept { return side_.length(); }
  double error_estimate() const noexcept { return error_; }

  /// 0, then every panel endpoint and requested position, increasing.
  const std::vector<double>& grid() const noexcept { return grid_; }
  /// U at each grid position; U(0) = I (before the atom).
  const std::vector<ScaledMat2>& entries() const noexcept { return entries_; }
  const ScaledMat2& end() const noexcept { return starts_.back(); }

  const std::vector<Panel>& panels() const noexcept { return panels_; }
  /// U at the start of panel k (k == panels().size() gives U(L)).
  const ScaledMat2& panel_start(std::size_t k) const { return starts_.at(k); }
  /// Panel containing x: the atom panel for x == 0, else the one with x0 < x ≤ x1.
  std::size_t panel_index(double x) const;
  /// Propagator from panels()[k].x0 to x inside that panel.
  Mat2 sub_propagator(std::size_t k, double x) const;
  ScaledMat2 evaluate(double x) const;

 private:
  friend FundamentalMatrix integrate(SystemForm, const SideMeasure&, cplx,
                                     const IntegrateOptions&);
  FundamentalMatrix(SystemForm form, SideMeasure side, cplx lambda)
      : form_(form), side_(std::move(side)), lambda_(lambda) {}

  SystemForm form_;
  SideMeasure side_;
  cplx lambda_;
  double error_ = 0.0;
  std::vector<Panel> panels_;
  std::vector<ScaledMat2> starts_;
  std::vector<double> grid_;
  std::vector<ScaledMat2> entries_;
};

/// Throws ToleranceMiss when max_panels is exceeded and OverflowError on
/// non-finite intermediate values.
FundamentalMatrix integrate(SystemForm form, const SideMeasure& side, cplx lambda,
                            const IntegrateOptions& options = {});

/// max over the grid of |det U - 1| / max(1, |u11 u22| + |u12 u21|). The
/// scale is the size of the two products whose difference is the determinant.
double wronskian_audit(const FundamentalMatrix& U);

/// One vector solution of the system carried along the panel chain.
class Trajectory {
 public:
  using System = std::shared_ptr<const FundamentalMatrix>;

  static Trajectory forward(System U, const Vec2& y0);
  /// Stable for solutions that decay toward the outer endpoint (Weyl solutions).
  static Trajectory backward(System U, const Vec2& y_end);

  /// (u1, u2) at x; at x == 0 this is the state before the atom.
  Vec2 at(double x) const;
  Vec2 at_end() const;
  /// Multiply the whole solution by c.
  void scale(cplx c);
  /// Rescale so that component `i` (0 → u1, 1 → u2) of at(x) equals 1.
  void normalize(double x, int i);
  const FundamentalMatrix& system() const noexcept { return *U_; }

 private:
  explicit Trajectory(System U) : U_(std::move(U)) {}

  System U_;
  std::vector<Vec2> mant_;
  std::vector<int> exp_;
  cplx factor_ = 1.0;
  int factor_exp_ = 0;
};

struct QuadNode {
  double x;
  double wdx;  // weight for ∫ · dx
  double wdR;  // weight for ∫ · dR (density and atom)
};

/// Composite Gauss–Legendre rule on the panel layout of U, `per_panel` points
/// on every regular or graded panel, a midpoint node on the Peano panel and a
/// dR-only node at 0 for the atom.
std::vector<QuadNode> quadrature_nodes(const FundamentalMatrix& U, int per_panel = 12);

/// G(j,k) = Σ w · y_j conj(y_k) per component and measure, for trajectories
/// sampled on shared nodes (all on the same side).
struct Moments {
  Eigen::MatrixXcd u1_dx, u1_dR, u2_dx, u2_dR;
};
Moments moments(std::span<const Trajectory* const> family, std::span<const QuadNode> nodes);

/// Gauss–Legendre nodes and weights on [0, 1].
struct GaussRule {
  std::vector<double> x;
  std::vector<double> w;
};
const GaussRule& gauss_rule(int n);

}  // namespace weylhelp
