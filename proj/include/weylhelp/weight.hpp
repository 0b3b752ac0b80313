#pragma once

// Sign-indefinite weights with a single turning point at 0.
//
// A weight r on [x_left, 1] is stored as two one-sided measures dR± on
// (0, length): the trace of r on the right and of |r| on the left, the latter
// in the reflected coordinate ξ = -x. Each side is an absolutely continuous
// density plus an optional point mass at 0.

#include <complex>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace weylhelp {

using cplx = std::complex<double>;

enum class Side { plus, minus };

const char* to_string(Side side);

class SideMeasure {
 public:
  using Function = std::function<double(double)>;

  struct Options {
    double length = 1.0;
    double atom = 0.0;
    /// Exact ∫₀ˣ density (without the atom). Used when present.
    Function antiderivative;
    /// Density is singular or non-smooth at 0; integrators grade toward 0.
    bool singular_at_zero = false;
    /// Interior positions where the density is not smooth (table knots).
    std::vector<double> breakpoints;
    std::string description;
  };

  /// `density` may be empty for a pure point mass.
  SideMeasure(Function density, Options options);

  double density(double x) const;
  bool has_density() const noexcept;
  double atom() const noexcept;
  double length() const noexcept;
  bool has_closed_form() const noexcept;
  bool singular_at_zero() const noexcept;
  const std::vector<double>& breakpoints() const noexcept;
  const std::string& description() const noexcept;

  /// R(x) = atom·[x > 0] + ∫₀ˣ density. Closed form when available, otherwise
  /// adaptive Gauss–Kronrod on panels refined geometrically toward 0.
  /// Throws ToleranceMiss if the quadrature cannot reach `tol` (relative).
  double antiderivative(double x, double tol = 1e-13) const;
  double total_mass() const;

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
};

// One-sided families.
SideMeasure constant_density(double value = 1.0, double length = 1.0);
/// x^α on (0,1), α > -1.
SideMeasure power_density(double alpha);
/// 1/(x ln²(e/x)); R(x) = 1/ln(e/x), so R(tx)/R(x) → 1 as x → 0.
SideMeasure logflat_density();
/// Piecewise-linear density through (x, density) samples; first x must be 0.
SideMeasure tabulated_density(std::vector<std::pair<double, double>> samples);
/// a·δ₀ with zero density on (0,1).
SideMeasure point_mass(double mass);
/// ξ ↦ a²·base(aξ) on (0, length/a); the point mass scales to a·atom.
SideMeasure rescaled(const SideMeasure& base, double a);

enum class Parity { odd, scaled, general };

struct ParityHint {
  Parity kind = Parity::general;
  double a = 1.0;  // scaling parameter when kind == scaled
};

class Weight {
 public:
  /// Throws Error(domain) if hint == odd and the two sides do not coincide on
  /// a 64-point sample grid.
  Weight(SideMeasure plus, SideMeasure minus, ParityHint hint,
         nlohmann::json spec = nlohmann::json::object());

  const SideMeasure& plus() const noexcept { return plus_; }
  const SideMeasure& minus() const noexcept { return minus_; }
  const SideMeasure& side(Side s) const noexcept { return s == Side::plus ? plus_ : minus_; }
  double x_left() const noexcept { return -minus_.length(); }
  const ParityHint& parity() const noexcept { return hint_; }
  bool is_odd() const noexcept { return hint_.kind == Parity::odd; }
  /// The JSON the weight was built from (or a synthesized description).
  const nlohmann::json& spec() const noexcept { return spec_; }

 private:
  SideMeasure plus_;
  SideMeasure minus_;
  ParityHint hint_;
  nlohmann::json spec_;
};

Weight odd_weight(const SideMeasure& side, nlohmann::json spec = nlohmann::json::object());
/// r̃ = r on (0,1), -a²r(-ax) on (-1/a, 0). a == 1 gives an odd weight.
Weight scale_weight(const SideMeasure& base, double a,
                    nlohmann::json spec = nlohmann::json::object());

/// {"kind": "constant"|"power"|"logflat"|"scaled"|"table"|"atom", ...}.
/// Throws Error(config) on schema violations, including unknown keys.
Weight weight_from_json(const nlohmann::json& spec);
SideMeasure side_from_json(const nlohmann::json& spec);

// Bennewitz ratio S(t,x) = R(tx)/R(x).
double bennewitz_ratio(const SideMeasure& side, double t, double x);

enum class BennewitzStatus { satisfied, failed, inconclusive };
const char* to_string(BennewitzStatus status);

struct BennewitzSample {
  double t;
  double x;
  double ratio;
};

struct BennewitzVerdict {
  Side side = Side::plus;
  double t_witness = 0.0;
  double s0_estimate = 0.0;
  BennewitzStatus status = BennewitzStatus::inconclusive;
  std::vector<BennewitzSample> samples;
};

/// limsup_{x→0} S(t,x) is estimated by the max over the last quarter of
/// `x_decay`. Satisfied if some t keeps that max ≤ 1 - margin, failed if every
/// t has its whole tail inside (1 - margin, 1].
BennewitzVerdict bennewitz_test(const SideMeasure& side, Side label,
                                std::span<const double> t_grid,
                                std::span<const double> x_decay, double margin = 0.05);

/// x0, x0·q, x0·q², ... (n points).
std::vector<double> geometric_sequence(double x0, double q, int n);

/// f(t) with 1/(R⁻¹(f(t)))² = t, i.e. f(t) = R(t^{-1/2}). Requires t ≥ 1/length².
double asymptotic_scale(const SideMeasure& side, double t);

}  // namespace weylhelp
