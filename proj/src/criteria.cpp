#include "weylhelp/criteria.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <map>

#include "weylhelp/errors.hpp"

namespace weylhelp {

namespace {

constexpr double kThetaResolution = 1e-4;
constexpr int kChunk = 16;
// Relative step below which consecutive best_K values count as equal.
constexpr double kKIncreaseMargin = 1e-3;

void require_decades(std::span<const double> y, double decades, const char* what) {
  if (y.size() < 2 || !(y.front() > 0.0) || y.back() / y.front() < std::pow(10.0, decades) * (1 - 1e-12))
    throw Error(ErrorKind::domain, std::string(what) + ": y grid must span enough decades");
  for (std::size_t i = 1; i < y.size(); ++i)
    if (!(y[i] > y[i - 1])) throw Error(ErrorKind::domain, std::string(what) + ": y grid not increasing");
}

std::vector<double> truncate(const std::vector<double>& y, double top) {
  std::vector<double> out;
  for (double v : y)
    if (v <= top * (1 + 1e-12)) out.push_back(v);
  return out;
}

double safe_div(double a, double b) { return b == 0.0 ? INFINITY : a / b; }

// A pointwise signed quantity on the upper half plane; ≥ -band means "passes".
using PointEval = std::function<double(cplx)>;

// Both rays ±K in increasing y. K == 0 scans the imaginary axis once.
RayCheck scan_rays(const PointEval& f, double K, std::span<const double> y, Exec exec, double band,
                   bool stop_at_first) {
  std::vector<double> slopes = {K};
  if (K != 0.0) slopes.push_back(-K);
  const std::size_t ns = slopes.size();
  RayCheck rc;
  std::size_t arg = 0;
  double arg_slope = K;
  std::vector<double> all;
  all.reserve(y.size() * ns);
  const std::size_t chunk = stop_at_first ? kChunk : y.size();
  for (std::size_t start = 0; start < y.size(); start += chunk) {
    const std::size_t len = std::min(chunk, y.size() - start);
    const auto vals = ordered_map(
        len * ns,
        [&](std::size_t i) {
          const double yy = y[start + i / ns];
          return f(cplx(slopes[i % ns] * yy, yy));
        },
        exec);
    for (std::size_t i = 0; i < vals.size(); ++i) {
      const std::size_t iy = start + i / ns;
      all.push_back(vals[i]);
      if (vals[i] < rc.worst) {
        rc.worst = vals[i];
        rc.worst_lambda = cplx(slopes[i % ns] * y[iy], y[iy]);
        arg = iy;
        arg_slope = slopes[i % ns];
      }
      if (vals[i] < -band) rc.first_violation_y = std::min(rc.first_violation_y, y[iy]);
    }
    if (stop_at_first && std::isfinite(rc.first_violation_y)) break;
  }
  if (!std::isfinite(rc.first_violation_y) && rc.worst <= 0.05 && y.size() >= 2) {
    // Golden section in log y around a near-critical grid minimum.
    const double lo0 = std::log(y[arg == 0 ? 0 : arg - 1]);
    const double hi0 = std::log(y[std::min(arg + 1, y.size() - 1)]);
    auto g = [&](double t) { return f(cplx(arg_slope * std::exp(t), std::exp(t))); };
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo0, b = hi0;
    double c = b - phi * (b - a), d = a + phi * (b - a);
    double gc = g(c), gd = g(d);
    for (int it = 0; it < 30 && b - a > 1e-9; ++it) {
      if (gc < gd) {
        b = d;
        d = c;
        gd = gc;
        c = b - phi * (b - a);
        gc = g(c);
      } else {
        a = c;
        c = d;
        gc = gd;
        d = a + phi * (b - a);
        gd = g(d);
      }
    }
    const double t = gc < gd ? c : d;
    const double gm = std::min(gc, gd);
    if (gm < rc.worst) {
      rc.worst = gm;
      rc.worst_lambda = cplx(arg_slope * std::exp(t), std::exp(t));
    }
    if (gm < -band) rc.first_violation_y = std::exp(t);
  }
  rc.nonneg = !std::isfinite(rc.first_violation_y);
  return rc;
}

double normalized_mtilde_A(const Weight& w, cplx lambda, double tol) {
  const CriterionMatrices cm = matrices_at(w, lambda, tol);
  return cm.Mtilde_A / std::norm(cm.m_plus - std::conj(cm.m_minus));
}

double everitt_value(const Weight& w, cplx lambda, double tol) {
  const cplx v = lambda * m_r(Side::plus, w, lambda, tol).value;
  return -v.imag() / std::abs(v);
}

// θ₀ search shared by best_constant and everitt_sector. Results per θ are
// cached with the largest y scanned, so truncated grids reuse earlier scans.
struct ThetaSearch {
  ThetaSearch(PointEval f_, std::vector<double> y, Exec e)
      : f(std::move(f_)), y_full(std::move(y)), exec(e) {}

  PointEval f;
  std::vector<double> y_full;
  Exec exec;
  double band = 1e-8;

  struct Entry {
    double first_violation;
    double scanned_to;
    RayCheck check;
  };
  std::map<double, Entry> cache;

  bool passes(double theta, double top, RayCheck* out = nullptr) {
    auto it = cache.find(theta);
    if (it != cache.end()) {
      const Entry& e = it->second;
      if (e.first_violation <= top * (1 + 1e-12) || e.scanned_to >= top * (1 - 1e-12)) {
        if (out) *out = e.check;
        return e.first_violation > top * (1 + 1e-12);
      }
    }
    const std::vector<double> y = truncate(y_full, top);
    const RayCheck rc = scan_rays(f, 1.0 / std::tan(theta), y, exec, band, true);
    cache[theta] = {rc.first_violation_y, y.back(), rc};
    if (out) *out = rc;
    return rc.nonneg;
  }

  struct Result {
    bool any_pass = false;
    bool bracket_limited = false;
    double theta_lo = 0.0;
    double theta_hi = 0.0;
    RayCheck at_lo;
  };

  Result bisect(std::pair<double, double> bracket, double top) {
    Result r;
    double lo = bracket.first, hi = bracket.second;
    RayCheck rc;
    if (!passes(hi, top, &rc)) {
      r.theta_lo = r.theta_hi = hi;
      r.at_lo = rc;
      return r;
    }
    r.any_pass = true;
    if (passes(lo, top, &rc)) {
      r.bracket_limited = true;
      r.theta_lo = r.theta_hi = lo;
      r.at_lo = rc;
      return r;
    }
    r.at_lo = rc;
    while (hi - lo > kThetaResolution) {
      const double mid = 0.5 * (lo + hi);
      RayCheck m;
      if (passes(mid, top, &m)) {
        hi = mid;
      } else {
        lo = mid;
        r.at_lo = m;
      }
    }
    r.theta_lo = lo;
    r.theta_hi = hi;
    return r;
  }
};

CriterionReport theta_report(CriterionId id, ThetaSearch& search,
                             std::pair<double, double> bracket, const Grids& grids) {
  if (!(bracket.first > 0.0) || !(bracket.second < M_PI / 2) || !(bracket.first < bracket.second))
    throw Error(ErrorKind::domain, "theta bracket must lie in (0, pi/2)");
  const double tops[3] = {grids.y_max / 100.0, grids.y_max / 10.0, grids.y_max};
  ThetaSearch::Result res[3];
  double K[3];
  // Full grid first: its cached scans answer most truncated queries.
  for (int k = 2; k >= 0; --k) {
    res[k] = search.bisect(bracket, tops[k]);
    K[k] = res[k].any_pass ? 1.0 / std::cos(res[k].theta_hi) : INFINITY;
  }
  CriterionReport rep;
  rep.id = id;
  rep.grids = grids;
  rep.sup_value = K[2];
  TailGrowth g;
  if (std::isfinite(K[2]) && std::isfinite(K[1])) {
    g.fit = std::log10(K[2] / K[1]);
    g.strictly_increasing =
        K[1] > K[0] * (1 + kKIncreaseMargin) && K[2] > K[1] * (1 + kKIncreaseMargin);
  }
  rep.growth_fit = g.fit;
  rep.verdict = classify(K[2], g);
  if (res[2].any_pass) rep.best_K = K[2];
  const auto& r = res[2];
  rep.witness.lambda = r.at_lo.worst_lambda;
  rep.witness.values = {r.theta_lo,
                        r.theta_hi,
                        1.0 / std::cos(r.theta_lo),
                        K[2],
                        r.bracket_limited ? 1.0 : 0.0,
                        r.at_lo.worst};
  rep.curve_columns = {"y_max", "theta0", "best_K"};
  for (int k = 0; k < 3; ++k)
    rep.curve.push_back({tops[k], res[k].any_pass ? res[k].theta_hi : NAN, K[k]});
  return rep;
}

CriterionReport axis_report(CriterionId id, const Grids& grids, const std::vector<double>& y,
                            const std::vector<double>& v, std::vector<std::vector<double>> extra,
                            std::vector<std::string> columns) {
  CriterionReport rep;
  rep.id = id;
  rep.grids = grids;
  std::size_t arg = 0;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] > v[arg] || std::isnan(v[arg])) arg = i;
  rep.sup_value = v.empty() ? NAN : v[arg];
  const TailGrowth g = tail_growth(y, v);
  rep.growth_fit = g.fit;
  rep.verdict = classify(rep.sup_value, g);
  rep.witness.lambda = cplx(0.0, y.empty() ? 0.0 : y[arg]);
  rep.witness.values = extra.empty() ? std::vector<double>{rep.sup_value} : extra[arg];
  rep.curve_columns = std::move(columns);
  for (std::size_t i = 0; i < y.size(); ++i) {
    std::vector<double> row = {y[i], v[i]};
    if (!extra.empty()) row.insert(row.end(), extra[i].begin(), extra[i].end());
    rep.curve.push_back(std::move(row));
  }
  return rep;
}

}  // namespace

const char* to_string(CriterionId id) {
  switch (id) {
    case CriterionId::everitt: return "everitt";
    case CriterionId::matrix_MA: return "matrix_MA";
    case CriterionId::imaginary_axis_volkmer: return "imaginary_axis_volkmer";
    case CriterionId::imaginary_axis_help: return "imaginary_axis_help";
    case CriterionId::sector_quantity: return "sector_quantity";
    case CriterionId::lrg: return "lrg";
    case CriterionId::bennewitz: return "bennewitz";
  }
  return "unknown";
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::valid: return "valid";
    case Verdict::invalid_within_scan: return "invalid_within_scan";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "unknown";
}

const char* to_string(SuiteStatus s) {
  switch (s) {
    case SuiteStatus::consistent_valid: return "consistent_valid";
    case SuiteStatus::consistent_invalid: return "consistent_invalid";
    case SuiteStatus::inconsistent: return "inconsistent";
  }
  return "unknown";
}

double Ray::theta() const { return std::atan2(1.0, std::abs(K)); }

TailGrowth tail_growth(std::span<const double> y, std::span<const double> v) {
  if (y.size() != v.size()) throw Error(ErrorKind::domain, "tail_growth: size mismatch");
  TailGrowth g;
  if (y.size() < 2) return g;
  const double cut = y.back() / 10.0 * (1 - 1e-12);
  std::size_t first = y.size() - 1;
  while (first > 0 && y[first - 1] >= cut) --first;
  if (y.size() - first < 2) first = y.size() - 2;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  g.strictly_increasing = true;
  for (std::size_t i = first; i < y.size(); ++i) {
    if (i > first && !(v[i] > v[i - 1])) g.strictly_increasing = false;
    if (!(v[i] > 0.0) || !std::isfinite(v[i])) continue;
    const double lx = std::log10(y[i]), ly = std::log10(v[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  if (n >= 2) {
    const double den = n * sxx - sx * sx;
    g.fit = den > 0.0 ? (n * sxy - sx * sy) / den : 0.0;
  }
  return g;
}

Verdict classify(double sup_value, const TailGrowth& g) {
  if (!std::isfinite(sup_value)) return Verdict::invalid_within_scan;
  if (g.fit > kInvalidGrowth) return Verdict::invalid_within_scan;
  if (g.strictly_increasing && g.fit > kValidGrowth) return Verdict::invalid_within_scan;
  if (g.fit <= kValidGrowth) return Verdict::valid;
  return Verdict::inconclusive;
}

Eigen::Matrix2d mtilde(cplx lambda, cplx m) {
  const double im = m.imag();
  const double off = -(lambda * m).imag();
  Eigen::Matrix2d M;
  M << lambda.imag(), off, off, lambda.imag() * std::norm(m);
  return M / im;
}

CriterionMatrices matrices_from(cplx lambda, cplx m_plus, cplx m_minus) {
  CriterionMatrices cm;
  cm.lambda = lambda;
  cm.m_plus = m_plus;
  cm.m_minus = m_minus;
  cm.Mtilde_plus = mtilde(lambda, m_plus);
  cm.Mtilde_minus = mtilde(lambda, m_minus);
  cm.M_A = cm.Mtilde_plus + cm.Mtilde_minus;
  cm.det_MA = cm.M_A(0, 0) * cm.M_A(1, 1) - cm.M_A(0, 1) * cm.M_A(1, 0);
  const double y = lambda.imag();
  cm.Mtilde_A = cm.det_MA * m_plus.imag() * m_minus.imag() / (y * y);
  cm.Mtilde_A_formula = mtilde_A_formula(m_plus, m_minus, lambda.real() / y);
  return cm;
}

CriterionMatrices matrices_at(const Weight& w, cplx lambda, double tol) {
  if (!(lambda.imag() > 0.0)) throw Error(ErrorKind::domain, "matrices_at: lambda must lie in C+");
  return matrices_from(lambda, m_ell(Side::plus, w, lambda, tol).value,
                       m_ell(Side::minus, w, lambda, tol).value);
}

double mtilde_A_formula(cplx m_plus, cplx m_minus, double K) {
  return std::norm(m_plus - std::conj(m_minus)) - 4.0 * K * (m_plus * m_minus).imag() -
         4.0 * K * K * m_plus.imag() * m_minus.imag();
}

RayCheck ray_positivity(const Weight& w, const Ray& ray, const Grids& grids, double band,
                        bool stop_at_first) {
  require_decades(ray.y_grid, 4.0, "ray_positivity");
  const double tol = grids.tol;
  return scan_rays([&](cplx l) { return normalized_mtilde_A(w, l, tol); }, ray.K, ray.y_grid,
                   grids.exec, band, stop_at_first);
}

CriterionReport best_constant(const Weight& w, std::pair<double, double> theta_bracket,
                              const Grids& grids) {
  const double tol = grids.tol;
  ThetaSearch s{[&w, tol](cplx l) { return normalized_mtilde_A(w, l, tol); }, grids.y(), grids.exec};
  require_decades(truncate(s.y_full, grids.y_max / 100.0), 4.0, "best_constant");
  return theta_report(CriterionId::matrix_MA, s, theta_bracket, grids);
}

CriterionReport everitt_sector(const Weight& w, std::pair<double, double> theta_bracket,
                               const Grids& grids) {
  const double tol = grids.tol;
  const PointEval f = [&w, tol](cplx l) { return everitt_value(w, l, tol); };
  ThetaSearch s{f, grids.y(), grids.exec};
  require_decades(truncate(s.y_full, grids.y_max / 100.0), 4.0, "everitt_sector");
  const RayCheck axis = scan_rays(f, 0.0, s.y_full, grids.exec, s.band, false);
  CriterionReport rep = theta_report(CriterionId::everitt, s, theta_bracket, grids);
  if (!axis.nonneg) {
    rep.verdict = Verdict::invalid_within_scan;
    rep.best_K.reset();
    rep.sup_value = INFINITY;
    rep.witness.lambda = axis.worst_lambda;
  }
  rep.witness.values.push_back(axis.worst);
  return rep;
}

double volkmer_axis_ratio(const Weight& w, double y, double tol) {
  const cplx lam(0.0, y);
  const cplx mp = m_ell(Side::plus, w, lam, tol).value;
  const cplx mm = m_ell(Side::minus, w, lam, tol).value;
  return safe_div((mp + mm).real(), std::abs(mp - std::conj(mm)));
}

CriterionReport imaginary_axis_volkmer(const Weight& w, const Grids& grids) {
  const std::vector<double> y = grids.y();
  require_decades(y, 5.0, "imaginary_axis_volkmer");
  const auto ms = ordered_map(
      y.size(),
      [&](std::size_t i) {
        const cplx lam(0.0, y[i]);
        return std::pair{m_ell(Side::plus, w, lam, grids.tol).value,
                         m_ell(Side::minus, w, lam, grids.tol).value};
      },
      grids.exec);
  std::vector<double> v;
  std::vector<std::vector<double>> extra;
  for (const auto& [mp, mm] : ms) {
    v.push_back(safe_div((mp + mm).real(), std::abs(mp - std::conj(mm))));
    extra.push_back({mp.real(), mp.imag(), mm.real(), mm.imag()});
  }
  return axis_report(CriterionId::imaginary_axis_volkmer, grids, y, v, std::move(extra),
                     {"y", "ratio", "re_m_plus", "im_m_plus", "re_m_minus", "im_m_minus"});
}

CriterionReport imaginary_axis_help(Side side, const Weight& w, const Grids& grids) {
  const std::vector<double> y = grids.y();
  require_decades(y, 5.0, "imaginary_axis_help");
  const auto ms = ordered_map(
      y.size(), [&](std::size_t i) { return m_ell(side, w, cplx(0.0, y[i]), grids.tol).value; },
      grids.exec);
  std::vector<double> v;
  std::vector<std::vector<double>> extra;
  for (cplx m : ms) {
    v.push_back(m.real() / m.imag());
    extra.push_back({m.real(), m.imag()});
  }
  return axis_report(CriterionId::imaginary_axis_help, grids, y, v, std::move(extra),
                     {"y", "ratio", "re_m", "im_m"});
}

CriterionReport sector_quantity(const Weight& w, std::span<const double> K_list,
                                const Grids& grids) {
  if (K_list.empty()) throw Error(ErrorKind::domain, "sector_quantity: empty K list");
  for (double K : K_list)
    if (!(K > 0.0 && K < 1.0)) throw Error(ErrorKind::domain, "sector_quantity: K must lie in (0,1)");
  const std::vector<double> y = grids.y();
  require_decades(y, 4.0, "sector_quantity");
  const std::size_t ny = y.size();
  const auto q = ordered_map(
      K_list.size() * ny,
      [&](std::size_t i) {
        const cplx lam(K_list[i / ny] * y[i % ny], y[i % ny]);
        const cplx mp = m_ell(Side::plus, w, lam, grids.tol).value;
        const cplx mm = m_ell(Side::minus, w, lam, grids.tol).value;
        return std::abs((mp * mm).imag()) / std::norm(mp - std::conj(mm));
      },
      grids.exec);

  CriterionReport rep;
  rep.id = CriterionId::sector_quantity;
  rep.grids = grids;
  rep.sup_value = -INFINITY;
  rep.curve_columns = {"K", "y", "quantity", "threshold"};
  TailGrowth agg;
  bool any_bounded = false;
  for (std::size_t k = 0; k < K_list.size(); ++k) {
    const double K = K_list[k];
    const double thr = (1.0 - K * K) / (4.0 * K);
    const std::span<const double> row(q.data() + k * ny, ny);
    double sup = -INFINITY;
    for (std::size_t i = 0; i < ny; ++i) {
      rep.curve.push_back({K, y[i], row[i], thr});
      sup = std::max(sup, row[i]);
      if (row[i] > rep.sup_value) {
        rep.sup_value = row[i];
        rep.witness.lambda = cplx(K * y[i], y[i]);
      }
    }
    const TailGrowth g = tail_growth(y, row);
    agg.fit = std::max(agg.fit, g.fit);
    if (classify(sup, g) == Verdict::valid) any_bounded = true;
    rep.witness.values.insert(rep.witness.values.end(), {K, sup, thr, sup < thr ? 1.0 : 0.0});
  }
  rep.growth_fit = agg.fit;
  rep.verdict = any_bounded ? Verdict::valid : Verdict::inconclusive;
  return rep;
}

namespace {

struct LrgParts {
  cplx mp, mm, mm_neg;
};

LrgParts lrg_parts(const Weight& w, cplx lambda, double tol) {
  return {m_r(Side::plus, w, lambda, tol).value, m_r(Side::minus, w, lambda, tol).value,
          m_r(Side::minus, w, -lambda, tol).value};
}

void check_secular(const LrgParts& p, cplx lambda) {
  const double den = std::abs(p.mp + p.mm_neg);
  if (!(den >= 1e-8 * (1.0 + std::abs(p.mp) + std::abs(p.mm_neg))))
    throw NearPole("lrg: secular denominator vanishes", lambda, den);
}

double lrg_max_ratio(const LrgParts& p) {
  return std::max(p.mp.imag(), p.mm.imag()) / std::abs(p.mp + p.mm_neg);
}

double lrg_sum_ratio(const LrgParts& p) {
  return (p.mp.imag() + p.mm.imag()) / std::abs(p.mp + p.mm_neg);
}

}  // namespace

double lrg_ratio(const Weight& w, cplx lambda, double tol) {
  const LrgParts p = lrg_parts(w, lambda, tol);
  check_secular(p, lambda);
  return lrg_max_ratio(p);
}

double lrg_axis_ratio(const Weight& w, double y, double tol) {
  const cplx lam(0.0, y);
  const LrgParts p = lrg_parts(w, lam, tol);
  check_secular(p, lam);
  return lrg_sum_ratio(p);
}

std::vector<cplx> lrg_lambda_grid(const LrgGrid& g, std::span<const double> eigenvalues) {
  if (g.re_points < 2 || !(g.re_max > g.re_min))
    throw Error(ErrorKind::domain, "lrg_lambda_grid: bad real range");
  std::vector<cplx> out;
  for (double im : log_grid(g.im_min, g.im_max, g.im_per_decade))
    for (int k = 0; k < g.re_points; ++k) {
      const cplx lam(g.re_min + (g.re_max - g.re_min) * k / (g.re_points - 1), im);
      const bool near = std::any_of(eigenvalues.begin(), eigenvalues.end(), [&](double e) {
        return std::abs(lam - cplx(e, 0.0)) < g.exclusion_radius;
      });
      if (!near) out.push_back(lam);
    }
  return out;
}

CriterionReport lrg_quantity(const Weight& w, std::span<const cplx> lambda_grid,
                             const Grids& grids) {
  const std::vector<double> y = grids.y();
  require_decades(y, 4.0, "lrg_quantity");
  const auto field = ordered_map(
      lambda_grid.size(), [&](std::size_t i) { return lrg_ratio(w, lambda_grid[i], grids.tol); },
      grids.exec);
  const auto axis = ordered_map(
      y.size(),
      [&](std::size_t i) {
        const cplx lam(0.0, y[i]);
        const LrgParts p = lrg_parts(w, lam, grids.tol);
        check_secular(p, lam);
        const double sum = lrg_sum_ratio(p);
        const double vr = volkmer_axis_ratio(w, y[i], grids.tol);
        return std::array<double, 3>{lrg_max_ratio(p), sum, vr};
      },
      grids.exec);

  std::vector<double> v;
  std::vector<std::vector<double>> extra;
  double worst_disc = 0.0;
  for (const auto& a : axis) {
    v.push_back(a[0]);
    const double disc = std::abs(a[1] - a[2]) / std::max(std::abs(a[2]), 1e-300);
    worst_disc = std::max(worst_disc, disc);
    extra.push_back({a[1], a[2], disc});
  }
  CriterionReport rep = axis_report(CriterionId::lrg, grids, y, v, std::move(extra),
                                    {"y", "ratio", "axis_sum_ratio", "volkmer_ratio", "discrepancy"});
  for (std::size_t i = 0; i < field.size(); ++i)
    if (field[i] > rep.sup_value) {
      rep.sup_value = field[i];
      rep.witness.lambda = lambda_grid[i];
    }
  rep.verdict = classify(rep.sup_value, {rep.growth_fit, tail_growth(y, v).strictly_increasing});
  rep.witness.values = {rep.sup_value, worst_disc};
  return rep;
}

CriterionReport bennewitz_report(const BennewitzVerdict& v, const Grids& grids) {
  CriterionReport rep;
  rep.id = CriterionId::bennewitz;
  rep.grids = grids;
  rep.sup_value = v.s0_estimate;
  rep.verdict = v.status == BennewitzStatus::satisfied ? Verdict::valid
                : v.status == BennewitzStatus::failed  ? Verdict::invalid_within_scan
                                                       : Verdict::inconclusive;
  rep.witness.values = {v.t_witness, v.s0_estimate};
  rep.curve_columns = {"t", "x", "ratio"};
  for (const auto& s : v.samples) rep.curve.push_back({s.t, s.x, s.ratio});
  return rep;
}

OddSuite odd_equivalence_suite(const Weight& w, const Grids& grids, const BennewitzGrid& bgrid) {
  if (!w.is_odd()) throw Error(ErrorKind::domain, "odd_equivalence_suite: weight is not odd");
  OddSuite s;
  s.best_constant = best_constant(w, kDefaultThetaBracket, grids);
  s.bennewitz = bennewitz_test(w.plus(), Side::plus, bgrid.t, bgrid.x_decay, bgrid.margin);

  const std::vector<double> y = grids.y();
  require_decades(y, 5.0, "odd_equivalence_suite");
  const auto mr = ordered_map(
      y.size(), [&](std::size_t i) { return m_r(Side::plus, w, cplx(0.0, y[i]), grids.tol).value; },
      grids.exec);
  std::vector<double> v;
  std::vector<std::vector<double>> extra;
  for (cplx m : mr) {
    v.push_back(safe_div(m.imag(), std::abs(m.real())));
    extra.push_back({m.real(), m.imag()});
  }
  s.lrg_axis = axis_report(CriterionId::lrg, grids, y, v, std::move(extra),
                           {"y", "ratio", "re_mr_plus", "im_mr_plus"});
  s.everitt = everitt_sector(w, kDefaultThetaBracket, grids);

  const bool benn_pos = s.bennewitz.status == BennewitzStatus::satisfied;
  const bool benn_neg = s.bennewitz.status == BennewitzStatus::failed;
  const Verdict vs[] = {s.best_constant.verdict, s.lrg_axis.verdict, s.everitt.verdict};
  const bool all_valid =
      benn_pos && std::all_of(std::begin(vs), std::end(vs), [](Verdict x) { return x == Verdict::valid; });
  const bool all_invalid = benn_neg && std::all_of(std::begin(vs), std::end(vs), [](Verdict x) {
                             return x == Verdict::invalid_within_scan;
                           });
  s.status = all_valid     ? SuiteStatus::consistent_valid
             : all_invalid ? SuiteStatus::consistent_invalid
                           : SuiteStatus::inconsistent;
  return s;
}

}  // namespace weylhelp
