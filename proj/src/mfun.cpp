#include "weylhelp/mfun.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "weylhelp/errors.hpp"

namespace weylhelp {

namespace {

constexpr double kPoleFloor = 1e-8;

struct Ratio {
  cplx value;
  double den_mag;
  double err;
};

// num/den of two entries sharing the exponent e, with the near-pole rule
// applied to the unscaled magnitudes.
Ratio endpoint_ratio(cplx num, cplx den, int e, double err_u, cplx lambda, const char* what) {
  const long double scale = std::ldexp(1.0L, e);
  const long double dn = std::abs(den) * scale;
  const long double nn = std::abs(num) * scale;
  if (!(dn >= kPoleFloor * (1.0L + nn)))
    throw NearPole(std::string(what) + ": endpoint denominator below conditioning floor", lambda,
                   static_cast<double>(dn));
  const cplx v = num / den;
  const double cond = (std::abs(num) + std::abs(v) * std::abs(den)) / std::abs(den);
  return {v, static_cast<double>(std::min(dn, static_cast<long double>(1e300))), err_u * cond};
}

Ratio ell_ratio(const FundamentalMatrix& U) {
  const ScaledMat2& E = U.end();
  return endpoint_ratio(E.mantissa(1, 1), E.mantissa(1, 0), E.exp2, U.error_estimate(),
                        U.lambda(), "m_ell");
}

Ratio r_ratio(const FundamentalMatrix& U) {
  const ScaledMat2& E = U.end();
  return endpoint_ratio(-E.mantissa(0, 0), E.mantissa(0, 1), E.exp2, U.error_estimate(),
                        U.lambda(), "m_r");
}

MKind kind_of(Side side, SystemForm form) {
  if (form == SystemForm::ell_form) return side == Side::plus ? MKind::m_plus : MKind::m_minus;
  return side == Side::plus ? MKind::mr_plus : MKind::mr_minus;
}

}  // namespace

const char* to_string(MKind kind) {
  switch (kind) {
    case MKind::m_plus: return "m_plus";
    case MKind::m_minus: return "m_minus";
    case MKind::mr_plus: return "mr_plus";
    case MKind::mr_minus: return "mr_minus";
  }
  return "unknown";
}

MValue m_ell(Side side, const Weight& w, cplx lambda, double tol) {
  const auto U = integrate(SystemForm::ell_form, w.side(side), lambda, {tol, {}});
  const Ratio r = ell_ratio(U);
  return {kind_of(side, SystemForm::ell_form), lambda, r.value, r.den_mag, r.err};
}

MValue m_r(Side side, const Weight& w, cplx lambda, double tol) {
  const auto U = integrate(SystemForm::r_form, w.side(side), lambda, {tol, {}});
  const Ratio r = r_ratio(U);
  return {kind_of(side, SystemForm::r_form), lambda, r.value, r.den_mag, r.err};
}

MValue m_value(MKind which, const Weight& w, cplx lambda, double tol) {
  switch (which) {
    case MKind::m_plus: return m_ell(Side::plus, w, lambda, tol);
    case MKind::m_minus: return m_ell(Side::minus, w, lambda, tol);
    case MKind::mr_plus: return m_r(Side::plus, w, lambda, tol);
    case MKind::mr_minus: return m_r(Side::minus, w, lambda, tol);
  }
  throw Error(ErrorKind::domain, "m_value: unknown kind");
}

Vec2 WeylSolution::at(double x) const {
  const bool minus = side == Side::minus;
  const Vec2 v = local_.at(minus ? -x : x);
  if (!minus) return v;
  if (form == SystemForm::ell_form) return {-v(0), v(1)};
  return {v(0), -v(1)};
}

double WeylSolution::norm_sq() const {
  double acc = 0.0;
  for (const auto& q : nodes_) {
    const double w = form == SystemForm::ell_form ? q.wdx : q.wdR;
    if (w != 0.0) acc += w * std::norm(local_.at(q.x)(0));
  }
  return acc;
}

WeylSolution weyl_solution(Side side, const Weight& w, cplx lambda, std::span<const double> grid,
                           SystemForm form, double tol) {
  const SideMeasure& sm = w.side(side);
  const double L = sm.length();
  const double sign = side == Side::plus ? 1.0 : -1.0;
  std::vector<double> xs(grid.begin(), grid.end());
  if (xs.empty())
    for (int k = 0; k <= 64; ++k) xs.push_back(sign * L * k / 64.0);
  std::vector<double> xi;
  for (double x : xs) {
    if (sign * x < -1e-15 || sign * x > L * (1 + 1e-14))
      throw Error(ErrorKind::domain, "weyl_solution: grid point outside the side");
    xi.push_back(std::clamp(sign * x, 0.0, L));
  }

  auto U = std::make_shared<const FundamentalMatrix>(integrate(form, sm, lambda, {tol, xi}));
  const bool ell = form == SystemForm::ell_form;
  const Ratio r = ell ? ell_ratio(*U) : r_ratio(*U);
  Trajectory t = Trajectory::backward(U, ell ? Vec2(1.0, 0.0) : Vec2(0.0, 1.0));
  t.normalize(0.0, ell ? 1 : 0);

  WeylSolution out(std::move(t));
  out.side = side;
  out.form = form;
  out.lambda = lambda;
  out.m = r.value;
  out.error_estimate = U->error_estimate();
  const Vec2 y0 = out.local_.at(0.0);
  out.boundary_residual =
      (ell ? std::abs(y0(0) + r.value) : std::abs(y0(1) - r.value)) / (1.0 + std::abs(r.value));
  out.nodes_ = quadrature_nodes(*U);
  out.samples.reserve(xs.size());
  for (double x : xs) {
    const Vec2 v = out.at(x);
    out.samples.push_back({x, v(0), v(1)});
  }
  return out;
}

WeylDisk weyl_disk(Side side, const Weight& w, cplx lambda, double tol) {
  if (lambda.imag() == 0.0) throw Error(ErrorKind::domain, "weyl_disk: lambda must be non-real");
  auto U = std::make_shared<const FundamentalMatrix>(
      integrate(SystemForm::ell_form, w.side(side), lambda, {tol, {}}));
  const Mat2& E = U->end().mantissa;
  const cplx c = E(0, 0), s = E(0, 1), c1 = E(1, 0), s1 = E(1, 1);
  const cplx center = (s * std::conj(c1) - s1 * std::conj(c)) /
                      (c * std::conj(c1) - c1 * std::conj(c));
  const Trajectory tc = Trajectory::forward(U, Vec2(1.0, 0.0));
  const Trajectory* fam[] = {&tc};
  const auto nodes = quadrature_nodes(*U);
  const Moments mom = moments(fam, nodes);
  const double cc = mom.u1_dx(0, 0).real();
  return {lambda, center, 1.0 / (2.0 * std::abs(lambda.imag()) * cc)};
}

bool HerglotzReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const AuditCheck& c) { return c.pass; });
}

HerglotzReport herglotz_audit(const Weight& w, std::span<const cplx> grid, double tol) {
  HerglotzReport rep;
  for (MKind k : {MKind::m_plus, MKind::m_minus, MKind::mr_plus, MKind::mr_minus}) {
    AuditCheck pos{std::string("im_positive:") + to_string(k), true, INFINITY, {}};
    AuditCheck sym{std::string("conjugate_symmetry:") + to_string(k), true, 0.0, {}};
    for (cplx lam : grid) {
      if (!(lam.imag() > 0.0)) throw Error(ErrorKind::domain, "herglotz_audit: grid must lie in C+");
      const cplx m = m_value(k, w, lam, tol).value;
      const cplx mc = m_value(k, w, std::conj(lam), tol).value;
      if (m.imag() < pos.worst) {
        pos.worst = m.imag();
        pos.worst_lambda = lam;
      }
      const double d = std::abs(mc - std::conj(m)) / (1.0 + std::abs(m));
      if (d > sym.worst) {
        sym.worst = d;
        sym.worst_lambda = lam;
      }
    }
    pos.pass = pos.worst > 0.0;
    sym.pass = sym.worst <= 10.0 * tol;
    rep.checks.push_back(pos);
    rep.checks.push_back(sym);
  }
  for (MKind k : {MKind::m_plus, MKind::m_minus}) {
    AuditCheck res{std::string("residue:") + to_string(k), true, 0.0, {}};
    // c^[1](L) ≈ -λL near 0, so m ≈ -1/(λL).
    const double L = w.side(k == MKind::m_plus ? Side::plus : Side::minus).length();
    double prev = INFINITY;
    for (double y : {1e-2, 1e-3, 1e-4, 1e-5, 1e-6}) {
      const cplx lam(0.0, y);
      const double dev = std::abs(L * y * m_value(k, w, lam, tol).value.imag() - 1.0);
      res.pass = res.pass && dev <= prev + 1e-12;
      prev = dev;
      res.worst = dev;
      res.worst_lambda = lam;
    }
    res.pass = res.pass && res.worst <= 1e-3;
    rep.checks.push_back(res);
  }
  return rep;
}

EnvelopeReport asymptotic_envelope(Side side, const Weight& w, std::span<const double> y_grid,
                                   double tol) {
  if (y_grid.size() < 2 || y_grid.back() / y_grid.front() < 1e4 * (1 - 1e-12))
    throw Error(ErrorKind::domain, "asymptotic_envelope: grid must span >= 4 decades");
  EnvelopeReport rep;
  const SideMeasure& sm = w.side(side);
  for (double y : y_grid) {
    const double f = asymptotic_scale(sm, y);
    rep.y.push_back(y);
    rep.ratio.push_back(std::abs(m_ell(side, w, cplx(0.0, y), tol).value) / f);
  }
  double lo = INFINITY, hi = 0.0;
  for (std::size_t i = 0; i < rep.y.size() && rep.y[i] <= 10.0 * rep.y.front() * (1 + 1e-12); ++i) {
    lo = std::min(lo, rep.ratio[i]);
    hi = std::max(hi, rep.ratio[i]);
  }
  rep.band_lo = lo / 4.0;
  rep.band_hi = hi * 4.0;
  for (double r : rep.ratio)
    rep.inside_band = rep.inside_band && std::isfinite(r) && r >= rep.band_lo && r <= rep.band_hi;
  return rep;
}

std::vector<double> log_grid(double lo, double hi, int per_decade) {
  if (!(lo > 0.0) || !(hi >= lo) || per_decade < 1)
    throw Error(ErrorKind::domain, "log_grid: need 0 < lo <= hi and per_decade >= 1");
  const double decades = std::log10(hi / lo);
  const int n = static_cast<int>(std::lround(decades * per_decade));
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k)
    out.push_back(k == n ? hi : lo * std::pow(10.0, static_cast<double>(k) / per_decade));
  return out;
}

}  // namespace weylhelp
