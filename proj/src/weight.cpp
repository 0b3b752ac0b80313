#include "weylhelp/weight.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "weylhelp/errors.hpp"

namespace weylhelp {

namespace {

constexpr double kParityTol = 1e-12;

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

const char* to_string(Side side) { return side == Side::plus ? "plus" : "minus"; }

const char* to_string(BennewitzStatus status) {
  switch (status) {
    case BennewitzStatus::satisfied: return "satisfied";
    case BennewitzStatus::failed: return "failed";
    case BennewitzStatus::inconclusive: return "inconclusive";
  }
  return "unknown";
}

struct SideMeasure::Impl {
  Function density;
  Options opt;
};

SideMeasure::SideMeasure(Function density, Options options) {
  if (!(options.length > 0.0) || !std::isfinite(options.length))
    throw Error(ErrorKind::domain, "side length must be positive and finite");
  if (!(options.atom >= 0.0) || !std::isfinite(options.atom))
    throw Error(ErrorKind::domain, "atom mass must be nonnegative and finite");
  if (!density && options.atom == 0.0)
    throw Error(ErrorKind::degenerate_weight, "side measure has neither density nor atom");
  std::sort(options.breakpoints.begin(), options.breakpoints.end());
  std::erase_if(options.breakpoints,
                [&](double b) { return !(b > 0.0 && b < options.length); });
  impl_ = std::make_shared<const Impl>(Impl{std::move(density), std::move(options)});
}

double SideMeasure::density(double x) const {
  return impl_->density ? impl_->density(x) : 0.0;
}
bool SideMeasure::has_density() const noexcept { return static_cast<bool>(impl_->density); }
double SideMeasure::atom() const noexcept { return impl_->opt.atom; }
double SideMeasure::length() const noexcept { return impl_->opt.length; }
bool SideMeasure::has_closed_form() const noexcept {
  return !impl_->density || static_cast<bool>(impl_->opt.antiderivative);
}
bool SideMeasure::singular_at_zero() const noexcept { return impl_->opt.singular_at_zero; }
const std::vector<double>& SideMeasure::breakpoints() const noexcept {
  return impl_->opt.breakpoints;
}
const std::string& SideMeasure::description() const noexcept { return impl_->opt.description; }

double SideMeasure::antiderivative(double x, double tol) const {
  const double len = length();
  if (!(x >= 0.0) || x > len * (1.0 + 1e-14))
    throw Error(ErrorKind::domain, "antiderivative: position outside [0, length]");
  x = std::min(x, len);
  if (x == 0.0) return 0.0;
  const double atom_part = atom();
  if (!impl_->density) return atom_part;
  if (impl_->opt.antiderivative) return atom_part + impl_->opt.antiderivative(x);

  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  const auto& f = impl_->density;
  double total = 0.0;
  double err_total = 0.0;

  // Regular part: split at breakpoints.
  double lo = impl_->opt.singular_at_zero ? x / 2 : 0.0;
  std::vector<double> cuts{lo};
  for (double b : breakpoints())
    if (b > lo && b < x) cuts.push_back(b);
  cuts.push_back(x);
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    double err = 0.0;
    total += GK::integrate(f, cuts[i], cuts[i + 1], 15, tol, &err);
    err_total += err;
  }

  if (impl_->opt.singular_at_zero) {
    // Dyadic panels toward 0 with a geometric tail estimate.
    double hi = lo;
    double prev = 0.0;
    bool converged = false;
    for (int k = 0; k < 400; ++k) {
      double err = 0.0;
      const double p = GK::integrate(f, hi / 2, hi, 15, tol, &err);
      total += p;
      err_total += err;
      hi /= 2;
      if (k > 2 && prev > 0.0) {
        const double q = p / prev;
        if (q < 1.0) {
          const double tail = p * q / (1.0 - q);
          if (tail <= tol * std::max(total, 1e-300)) {
            total += tail;
            converged = true;
            break;
          }
        }
      }
      prev = p;
    }
    if (!converged)
      throw ToleranceMiss("antiderivative: singular tail at 0 did not converge",
                          prev / std::max(total, 1e-300), hi);
  }
  if (err_total > tol * std::max(1.0, std::abs(total)))
    throw ToleranceMiss("antiderivative: quadrature tolerance not reached",
                        err_total / std::max(1.0, std::abs(total)), x);
  return atom_part + total;
}

double SideMeasure::total_mass() const { return antiderivative(length()); }

SideMeasure constant_density(double value, double length) {
  if (!(value > 0.0)) throw Error(ErrorKind::domain, "constant density must be positive");
  SideMeasure::Options o;
  o.length = length;
  o.antiderivative = [value](double x) { return value * x; };
  o.description = "constant(" + fmt_double(value) + ")";
  return SideMeasure([value](double) { return value; }, std::move(o));
}

SideMeasure power_density(double alpha) {
  if (!(alpha > -1.0) || !std::isfinite(alpha))
    throw Error(ErrorKind::domain, "power density requires alpha > -1");
  SideMeasure::Options o;
  const double p = alpha + 1.0;
  o.antiderivative = [alpha, p](double x) {
    return alpha == 0.0 ? x : std::pow(x, p) / p;
  };
  o.singular_at_zero = alpha < 0.0 || alpha != std::floor(alpha);
  o.description = "power(" + fmt_double(alpha) + ")";
  return SideMeasure([alpha](double x) { return std::pow(x, alpha); }, std::move(o));
}

SideMeasure logflat_density() {
  SideMeasure::Options o;
  o.antiderivative = [](double x) { return 1.0 / (1.0 - std::log(x)); };
  o.singular_at_zero = true;
  o.description = "logflat";
  return SideMeasure(
      [](double x) {
        const double l = 1.0 - std::log(x);
        return 1.0 / (x * l * l);
      },
      std::move(o));
}

SideMeasure tabulated_density(std::vector<std::pair<double, double>> samples) {
  if (samples.size() < 2) throw Error(ErrorKind::config, "table needs at least two samples");
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto [x, d] = samples[i];
    if (!std::isfinite(x) || !std::isfinite(d) || d < 0.0)
      throw Error(ErrorKind::config, "table samples must be finite with density >= 0");
    if (i > 0 && !(x > samples[i - 1].first))
      throw Error(ErrorKind::config, "table positions must be strictly increasing");
  }
  if (samples.front().first != 0.0)
    throw Error(ErrorKind::config, "table must start at x = 0");
  if (std::abs(samples.back().first - 1.0) > 1e-12)
    throw Error(ErrorKind::config, "table must end at x = 1");
  samples.back().first = 1.0;

  // Cumulative trapezoid masses at the knots.
  auto cum = std::make_shared<std::vector<double>>(samples.size(), 0.0);
  for (std::size_t i = 1; i < samples.size(); ++i)
    (*cum)[i] = (*cum)[i - 1] + 0.5 * (samples[i].first - samples[i - 1].first) *
                                    (samples[i].second + samples[i - 1].second);
  if (!(cum->back() > 0.0))
    throw Error(ErrorKind::degenerate_weight, "table has zero total mass");
  auto tab = std::make_shared<const std::vector<std::pair<double, double>>>(std::move(samples));

  auto locate = [tab](double x) {
    const auto& t = *tab;
    auto it = std::upper_bound(t.begin(), t.end(), x,
                               [](double v, const auto& s) { return v < s.first; });
    std::size_t i = it == t.begin() ? 0 : static_cast<std::size_t>(it - t.begin()) - 1;
    return std::min(i, t.size() - 2);
  };
  auto density = [tab, locate](double x) {
    const auto& t = *tab;
    const std::size_t i = locate(x);
    const double w = (x - t[i].first) / (t[i + 1].first - t[i].first);
    return (1.0 - w) * t[i].second + w * t[i + 1].second;
  };

  SideMeasure::Options o;
  o.antiderivative = [tab, cum, locate, density](double x) {
    const auto& t = *tab;
    const std::size_t i = locate(x);
    return (*cum)[i] + 0.5 * (x - t[i].first) * (t[i].second + density(x));
  };
  for (std::size_t i = 1; i + 1 < tab->size(); ++i) o.breakpoints.push_back((*tab)[i].first);
  o.description = "table(" + std::to_string(tab->size()) + " samples)";
  return SideMeasure(density, std::move(o));
}

SideMeasure point_mass(double mass) {
  if (!(mass > 0.0)) throw Error(ErrorKind::domain, "atom mass must be positive");
  SideMeasure::Options o;
  o.atom = mass;
  o.description = "atom(" + fmt_double(mass) + ")";
  return SideMeasure({}, std::move(o));
}

SideMeasure rescaled(const SideMeasure& base, double a) {
  if (!(a > 0.0) || !std::isfinite(a)) throw Error(ErrorKind::domain, "scaling requires a > 0");
  SideMeasure::Options o;
  o.length = base.length() / a;
  o.atom = a * base.atom();
  o.singular_at_zero = base.singular_at_zero();
  for (double b : base.breakpoints()) o.breakpoints.push_back(b / a);
  o.description = "rescaled(" + base.description() + ", " + fmt_double(a) + ")";
  SideMeasure::Function density;
  if (base.has_density()) {
    density = [base, a](double xi) { return a * a * base.density(a * xi); };
    const double atom = base.atom();
    o.antiderivative = [base, a, atom](double xi) {
      return a * (base.antiderivative(std::min(a * xi, base.length())) - atom);
    };
  }
  return SideMeasure(std::move(density), std::move(o));
}

Weight::Weight(SideMeasure plus, SideMeasure minus, ParityHint hint, nlohmann::json spec)
    : plus_(std::move(plus)), minus_(std::move(minus)), hint_(hint), spec_(std::move(spec)) {
  if (std::abs(plus_.length() - 1.0) > 1e-15)
    throw Error(ErrorKind::domain, "plus side must live on (0, 1)");
  if (hint_.kind == Parity::odd) {
    if (std::abs(minus_.length() - 1.0) > 1e-15)
      throw Error(ErrorKind::domain, "odd weight requires x_left = -1");
    if (std::abs(plus_.atom() - minus_.atom()) > kParityTol * (1.0 + plus_.atom()))
      throw Error(ErrorKind::domain, "odd weight requires equal atoms");
    for (int k = 0; k < 64; ++k) {
      const double x = (k + 0.5) / 64.0;
      const double dp = plus_.density(x);
      const double dm = minus_.density(x);
      if (std::abs(dp - dm) > kParityTol * (1.0 + std::abs(dp)))
        throw Error(ErrorKind::domain, "odd parity hint but densities differ at x = " +
                                           fmt_double(x));
    }
  }
  if (hint_.kind == Parity::scaled) {
    if (!(hint_.a > 0.0)) throw Error(ErrorKind::domain, "scaled parity requires a > 0");
    if (std::abs(minus_.length() * hint_.a - 1.0) > 1e-14)
      throw Error(ErrorKind::domain, "scaled parity requires x_left = -1/a");
  }
}

Weight odd_weight(const SideMeasure& side, nlohmann::json spec) {
  return Weight(side, side, {Parity::odd, 1.0}, std::move(spec));
}

Weight scale_weight(const SideMeasure& base, double a, nlohmann::json spec) {
  if (!(a > 0.0) || !std::isfinite(a)) throw Error(ErrorKind::domain, "scaling requires a > 0");
  if (a == 1.0) return odd_weight(base, std::move(spec));
  return Weight(base, rescaled(base, a), {Parity::scaled, a}, std::move(spec));
}

namespace {

void check_keys(const nlohmann::json& spec, std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : spec.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw Error(ErrorKind::config, "weight: unknown key '" + key + "'");
  }
}

double get_number(const nlohmann::json& spec, const char* key) {
  if (!spec.contains(key)) throw Error(ErrorKind::config, std::string("weight: missing '") + key + "'");
  const auto& v = spec.at(key);
  if (!v.is_number()) throw Error(ErrorKind::config, std::string("weight: '") + key + "' must be a number");
  return v.get<double>();
}

std::string get_kind(const nlohmann::json& spec) {
  if (!spec.is_object()) throw Error(ErrorKind::config, "weight: expected an object");
  if (!spec.contains("kind") || !spec.at("kind").is_string())
    throw Error(ErrorKind::config, "weight: missing string 'kind'");
  return spec.at("kind").get<std::string>();
}

// Wraps library domain errors as config errors so the CLI maps them uniformly.
template <class F>
auto as_config(F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::domain || e.kind() == ErrorKind::degenerate_weight)
      throw Error(ErrorKind::config, std::string("weight: ") + e.what());
    throw;
  }
}

}  // namespace

SideMeasure side_from_json(const nlohmann::json& spec) {
  const std::string kind = get_kind(spec);
  return as_config([&]() -> SideMeasure {
    if (kind == "constant") {
      check_keys(spec, {"kind"});
      return constant_density();
    }
    if (kind == "power") {
      check_keys(spec, {"kind", "alpha"});
      return power_density(get_number(spec, "alpha"));
    }
    if (kind == "logflat") {
      check_keys(spec, {"kind"});
      return logflat_density();
    }
    if (kind == "atom") {
      check_keys(spec, {"kind", "a"});
      return point_mass(get_number(spec, "a"));
    }
    if (kind == "table") {
      check_keys(spec, {"kind", "samples"});
      if (!spec.contains("samples") || !spec.at("samples").is_array())
        throw Error(ErrorKind::config, "weight: 'samples' must be an array of [x, density]");
      std::vector<std::pair<double, double>> s;
      for (const auto& row : spec.at("samples")) {
        if (!row.is_array() || row.size() != 2 || !row[0].is_number() || !row[1].is_number())
          throw Error(ErrorKind::config, "weight: each sample must be [x, density]");
        s.emplace_back(row[0].get<double>(), row[1].get<double>());
      }
      return tabulated_density(std::move(s));
    }
    if (kind == "scaled")
      throw Error(ErrorKind::config, "weight: 'scaled' describes a full weight, not a side");
    throw Error(ErrorKind::config, "weight: unknown kind '" + kind + "'");
  });
}

Weight weight_from_json(const nlohmann::json& spec) {
  const std::string kind = get_kind(spec);
  return as_config([&]() -> Weight {
    if (kind == "scaled") {
      check_keys(spec, {"kind", "a", "base"});
      const double a = get_number(spec, "a");
      SideMeasure base =
          spec.contains("base") ? side_from_json(spec.at("base")) : constant_density();
      return scale_weight(base, a, spec);
    }
    nlohmann::json side_spec = spec;
    side_spec.erase("minus");
    SideMeasure plus = side_from_json(side_spec);
    if (!spec.contains("minus")) return odd_weight(plus, spec);
    return Weight(plus, side_from_json(spec.at("minus")), {Parity::general, 1.0}, spec);
  });
}

double bennewitz_ratio(const SideMeasure& side, double t, double x) {
  if (!(t > 0.0 && t < 1.0)) throw Error(ErrorKind::domain, "bennewitz_ratio: t must lie in (0,1)");
  if (!(x > 0.0 && x <= side.length()))
    throw Error(ErrorKind::domain, "bennewitz_ratio: x must lie in (0, length]");
  const double rx = side.antiderivative(x);
  if (!(rx > 0.0)) throw Error(ErrorKind::degenerate_weight, "bennewitz_ratio: R(x) = 0");
  return side.antiderivative(t * x) / rx;
}

std::vector<double> geometric_sequence(double x0, double q, int n) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(std::max(n, 0)));
  for (int k = 0; k < n; ++k) out.push_back(x0 * std::pow(q, k));
  return out;
}

BennewitzVerdict bennewitz_test(const SideMeasure& side, Side label,
                                std::span<const double> t_grid,
                                std::span<const double> x_decay, double margin) {
  if (t_grid.empty()) throw Error(ErrorKind::domain, "bennewitz_test: empty t grid");
  if (x_decay.size() < 8) throw Error(ErrorKind::domain, "bennewitz_test: need >= 8 x points");
  for (std::size_t i = 1; i < x_decay.size(); ++i)
    if (!(x_decay[i] < x_decay[i - 1]))
      throw Error(ErrorKind::domain, "bennewitz_test: x grid must be strictly decreasing");
  if (!(x_decay.back() > 0.0) || x_decay.front() / x_decay.back() < 1e4 * (1 - 1e-12))
    throw Error(ErrorKind::domain, "bennewitz_test: x grid must span >= 4 decades");
  if (!(margin > 0.0 && margin < 1.0)) throw Error(ErrorKind::domain, "bennewitz_test: bad margin");

  BennewitzVerdict v;
  v.side = label;
  const std::size_t n = x_decay.size();
  const std::size_t tail_start = n - std::max<std::size_t>(2, (n + 3) / 4);
  bool all_failed = true;
  double best_tail_max = 2.0;
  for (double t : t_grid) {
    double tail_max = 0.0;
    double tail_min = 2.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double s = bennewitz_ratio(side, t, x_decay[i]);
      v.samples.push_back({t, x_decay[i], s});
      if (i >= tail_start) {
        tail_max = std::max(tail_max, s);
        tail_min = std::min(tail_min, s);
      }
    }
    if (tail_max < best_tail_max) {
      best_tail_max = tail_max;
      v.t_witness = t;
    }
    all_failed = all_failed && tail_min > 1.0 - margin;
  }
  v.s0_estimate = best_tail_max;
  if (best_tail_max < 1.0 - margin)
    v.status = BennewitzStatus::satisfied;
  else if (all_failed)
    v.status = BennewitzStatus::failed;
  else
    v.status = BennewitzStatus::inconclusive;
  return v;
}

double asymptotic_scale(const SideMeasure& side, double t) {
  const double len = side.length();
  if (!(t * len * len >= 1.0 * (1 - 1e-15)) || !std::isfinite(t))
    throw Error(ErrorKind::range, "asymptotic_scale: t below attainable range");
  return side.antiderivative(std::min(1.0 / std::sqrt(t), len));
}

}  // namespace weylhelp
