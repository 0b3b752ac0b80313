#pragma once

// Validity criteria and best constants for the one-sided HELP and two-sided
// Volkmer inequalities, evaluated on documented finite grids.

#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "weylhelp/mfun.hpp"
#include "weylhelp/scan.hpp"
#include "weylhelp/weight.hpp"

namespace weylhelp {

enum class CriterionId {
  everitt,
  matrix_MA,
  imaginary_axis_volkmer,
  imaginary_axis_help,
  sector_quantity,
  lrg,
  bennewitz,
};
const char* to_string(CriterionId id);

enum class Verdict { valid, invalid_within_scan, inconclusive };
const char* to_string(Verdict v);

struct Grids {
  double y_min = 1e-3;
  double y_max = 1e6;
  int per_decade = 40;
  double tol = kDefaultTol;
  Exec exec = Exec::parallel;

  std::vector<double> y() const { return log_grid(y_min, y_max, per_decade); }
};

/// λ = (K + i)y, y > 0.
struct Ray {
  double K = 0.0;
  std::vector<double> y_grid;

  /// cos θ = |K|/√(1+K²).
  double theta() const;
  cplx at(double y) const { return {K * y, y}; }
};

struct Witness {
  cplx lambda;
  std::vector<double> values;
};

struct CriterionReport {
  CriterionId id = CriterionId::everitt;
  Verdict verdict = Verdict::inconclusive;
  double sup_value = 0.0;
  double growth_fit = 0.0;
  std::optional<double> best_K;
  Witness witness;
  Grids grids;
  /// Scanned curve for the CSV companion.
  std::vector<std::string> curve_columns;
  std::vector<std::vector<double>> curve;
};

// Tail classification shared by all scans.
inline constexpr double kValidGrowth = 0.02;
inline constexpr double kInvalidGrowth = 0.1;

struct TailGrowth {
  double fit = 0.0;  // least-squares slope of log10 v against log10 y over the top decade
  bool strictly_increasing = false;
};
TailGrowth tail_growth(std::span<const double> y, std::span<const double> v);
/// valid: fit ≤ 0.02 with finite sup; invalid_within_scan: fit > 0.1, or a
/// strictly increasing tail with fit > 0.02; inconclusive otherwise.
Verdict classify(double sup_value, const TailGrowth& g);

struct CriterionMatrices {
  cplx lambda;
  cplx m_plus;
  cplx m_minus;
  Eigen::Matrix2d Mtilde_plus;
  Eigen::Matrix2d Mtilde_minus;
  Eigen::Matrix2d M_A;
  double det_MA = 0.0;
  /// det M_A · Im m₊ Im m₋ / (Im λ)², the normalization under which the
  /// closed form holds.
  double Mtilde_A = 0.0;
  double Mtilde_A_formula = 0.0;
};

/// (1/Im m)·[[Im λ, -Im(λm)], [-Im(λm), Im λ |m|²]].
Eigen::Matrix2d mtilde(cplx lambda, cplx m);
CriterionMatrices matrices_from(cplx lambda, cplx m_plus, cplx m_minus);
CriterionMatrices matrices_at(const Weight& w, cplx lambda, double tol = kDefaultTol);

/// |m₊ - conj m₋|² - 4K Im(m₊m₋) - 4K² Im m₊ Im m₋.
double mtilde_A_formula(cplx m_plus, cplx m_minus, double K);

struct RayCheck {
  bool nonneg = true;
  /// min of M̃_A / |m₊ - conj m₋|² over both rays.
  double worst = INFINITY;
  cplx worst_lambda;
  /// Smallest y with a violation (∞ if none).
  double first_violation_y = INFINITY;
};

/// M_A ⪰ 0 on the rays ±K: M̃_A ≥ -band·|m₊ - conj m₋|² at every grid point,
/// with a golden-section refinement in log y around near-critical minima. With
/// `stop_at_first` the scan runs in increasing y and ends at the first violation.
RayCheck ray_positivity(const Weight& w, const Ray& ray, const Grids& grids,
                        double band = 1e-8, bool stop_at_first = false);

/// θ₀ by bisection in θ to 1e-4; best_K = 1/cos θ₀ on the passing side.
/// growth_fit compares best_K on the grid truncated at y_max/10 and y_max.
CriterionReport best_constant(const Weight& w, std::pair<double, double> theta_bracket,
                              const Grids& grids);

/// One-sided Everitt sector test -Im(λ m₊ʳ(λ)) ≥ 0 on the boundary rays ±K
/// and the imaginary axis, with the same bisection as best_constant.
CriterionReport everitt_sector(const Weight& w, std::pair<double, double> theta_bracket,
                               const Grids& grids);

/// Re(m₊(iy) + m₋(iy)) / |m₊(iy) - m₋(-iy)|, with m₋(-iy) = conj m₋(iy).
double volkmer_axis_ratio(const Weight& w, double y, double tol = kDefaultTol);
CriterionReport imaginary_axis_volkmer(const Weight& w, const Grids& grids);
/// Re m(iy)/Im m(iy) for one side.
CriterionReport imaginary_axis_help(Side side, const Weight& w, const Grids& grids);

/// |Im(m₊m₋)| / |m₊ - conj m₋|² on rays of slope K ∈ K_list ⊂ (0,1), flagged
/// against (1-K²)/(4K). A sufficient condition only: unbounded scans report
/// inconclusive, never invalid.
CriterionReport sector_quantity(const Weight& w, std::span<const double> K_list,
                                const Grids& grids);

/// max(Im m₊ʳ(λ), Im m₋ʳ(λ)) / |m₊ʳ(λ) + m₋ʳ(-λ)|, all values computed directly.
double lrg_ratio(const Weight& w, cplx lambda, double tol = kDefaultTol);
/// The same denominator with numerator Im(m₊ʳ(iy) + m₋ʳ(iy)).
double lrg_axis_ratio(const Weight& w, double y, double tol = kDefaultTol);

struct LrgGrid {
  double re_min = -1e3;
  double re_max = 1e3;
  int re_points = 64;
  double im_min = 1e-2;
  double im_max = 1e3;
  int im_per_decade = 40;
  /// Points within this distance of an excluded eigenvalue are skipped.
  double exclusion_radius = 1e-2;
};
std::vector<cplx> lrg_lambda_grid(const LrgGrid& g, std::span<const double> eigenvalues);

/// Scans `lambda_grid`, then the imaginary axis of `grids` where it also
/// checks lrg_axis_ratio against volkmer_axis_ratio. witness.values holds
/// {ratio at the witness, worst axis discrepancy (relative)}.
CriterionReport lrg_quantity(const Weight& w, std::span<const cplx> lambda_grid,
                             const Grids& grids);

/// Bennewitz verdict of one side as a report: satisfied → valid,
/// failed → invalid_within_scan.
CriterionReport bennewitz_report(const BennewitzVerdict& v, const Grids& grids);

struct BennewitzGrid {
  std::vector<double> t = {0.5, 0.25, 0.1};
  std::vector<double> x_decay = geometric_sequence(0.1, 0.1, 60);
  double margin = 0.05;
};

enum class SuiteStatus { consistent_valid, consistent_invalid, inconsistent };
const char* to_string(SuiteStatus s);

struct OddSuite {
  CriterionReport best_constant;  // (iii)
  BennewitzVerdict bennewitz;     // (iv)
  CriterionReport lrg_axis;       // (vi) Im m₊ʳ(iy)/|Re m₊ʳ(iy)|
  CriterionReport everitt;        // (vii)
  SuiteStatus status = SuiteStatus::inconsistent;
};

/// Requires parity_hint = odd (Error(domain) otherwise).
OddSuite odd_equivalence_suite(const Weight& w, const Grids& grids,
                               const BennewitzGrid& bgrid = {});

inline constexpr std::pair<double, double> kDefaultThetaBracket{0.01, 1.5607963267948966};

}  // namespace weylhelp
