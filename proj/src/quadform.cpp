#include "weylhelp/quadform.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "weylhelp/errors.hpp"

namespace weylhelp {

namespace {

constexpr int kFine = 12;
constexpr int kCoarse = 8;
constexpr std::size_t kPlus = 0, kMinus = 1;

SideSums side_sums(const Trajectory& t, std::span<const QuadNode> nodes) {
  SideSums s;
  for (const auto& q : nodes) {
    const Vec2 v = t.at(q.x);
    if (q.wdx != 0.0) {
      s.psi_abs += q.wdx * std::norm(v(0));
      s.psi_sq += q.wdx * v(0) * v(0);
    }
    if (q.wdR != 0.0) {
      s.quasi_abs += q.wdR * std::norm(v(1));
      s.quasi_sq += q.wdR * v(1) * v(1);
    }
  }
  return s;
}

// ∫|c₁g + c₂ḡ|² from ∫|g|² and ∫g² (ζ multiplies the g² cross term).
double combo(double abs_int, cplx sq_int, const Vec2& C, cplx zeta = 1.0) {
  return (std::norm(C(0)) + std::norm(C(1))) * abs_int +
         2.0 * (C(0) * std::conj(C(1)) * zeta * sq_int).real();
}

struct Integrals {
  double norm = 0.0, t = 0.0, af = 0.0;
};

Integrals integrals(const SideSums (&sums)[2], cplx lambda, const Vec2& Cp, const Vec2& Cm) {
  Integrals out;
  const double l2 = std::norm(lambda);
  const cplx lsq = lambda * lambda;
  for (std::size_t s : {kPlus, kMinus}) {
    const Vec2& C = s == kPlus ? Cp : Cm;
    out.norm += combo(sums[s].psi_abs, sums[s].psi_sq, C);
    out.t += combo(sums[s].quasi_abs, sums[s].quasi_sq, C);
    out.af += l2 * (std::norm(C(0)) + std::norm(C(1))) * sums[s].psi_abs +
              2.0 * (C(0) * std::conj(C(1)) * lsq * sums[s].psi_sq).real();
  }
  return out;
}

Eigen::Matrix2cd d_matrix(cplx m) {
  Eigen::Matrix2cd D;
  D << m, std::conj(m), 1.0, 1.0;
  return D;
}

cplx eval(const Vec2& C, cplx g) { return C(0) * g + C(1) * std::conj(g); }

double rel(double a, double b) {
  const double s = std::max(std::abs(a), std::abs(b));
  return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

}  // namespace

const char* to_string(TrialKind kind) {
  switch (kind) {
    case TrialKind::weyl_plus: return "weyl_plus";
    case TrialKind::weyl_minus: return "weyl_minus";
    case TrialKind::deficiency_combo: return "deficiency_combo";
    case TrialKind::domA_combo: return "domA_combo";
    case TrialKind::domL_combo: return "domL_combo";
  }
  return "unknown";
}

DeficiencyBasis deficiency_basis(const Weight& w, cplx lambda, double tol) {
  if (!(lambda.imag() > 0.0))
    throw Error(ErrorKind::domain, "deficiency_basis: lambda must lie in C+");
  DeficiencyBasis b;
  b.lambda = lambda;
  for (Side side : {Side::plus, Side::minus}) {
    const std::size_t k = side == Side::plus ? kPlus : kMinus;
    auto ws = std::make_shared<const WeylSolution>(
        weyl_solution(side, w, lambda, {}, SystemForm::ell_form, tol));
    b.fine[k] = side_sums(ws->local(), ws->nodes());
    b.coarse[k] = side_sums(ws->local(), quadrature_nodes(ws->local().system(), kCoarse));
    (k == kPlus ? b.m_plus : b.m_minus) = ws->m;
    (k == kPlus ? b.at0_plus : b.at0_minus) = ws->at(0.0);
    b.psi[k] = std::move(ws);
  }
  return b;
}

Vec2 domA_minus_coefficients(cplx m_plus, cplx m_minus, const Vec2& C_plus) {
  return -d_matrix(m_minus).inverse() * d_matrix(m_plus) * C_plus;
}

TrialFunction build_trial(const Weight& w, TrialKind kind, cplx lambda, Vec2 C_plus, Vec2 C_minus,
                          double tol) {
  return build_trial(std::make_shared<const DeficiencyBasis>(deficiency_basis(w, lambda, tol)), kind,
                     C_plus, C_minus);
}

TrialFunction build_trial(std::shared_ptr<const DeficiencyBasis> basis, TrialKind kind, Vec2 C_plus,
                          Vec2 C_minus) {
  TrialFunction f;
  f.kind = kind;
  f.lambda = basis->lambda;
  switch (kind) {
    case TrialKind::weyl_plus:
      f.C_plus = {1.0, 0.0};
      break;
    case TrialKind::weyl_minus:
      f.C_minus = {1.0, 0.0};
      break;
    case TrialKind::deficiency_combo:
      f.C_plus = C_plus;
      f.C_minus = C_minus;
      break;
    case TrialKind::domA_combo:
      f.C_plus = C_plus;
      f.C_minus = domA_minus_coefficients(basis->m_plus, basis->m_minus, C_plus);
      break;
    case TrialKind::domL_combo: {
      const Eigen::Matrix2cd flip = Eigen::Vector2cd(-1.0, 1.0).asDiagonal();
      f.C_plus = C_plus;
      f.C_minus =
          d_matrix(basis->m_minus).inverse() * flip * d_matrix(basis->m_plus) * C_plus;
      break;
    }
  }
  if (kind == TrialKind::domA_combo || kind == TrialKind::domL_combo) {
    const cplx vp = eval(f.C_plus, basis->at0_plus(0)), vm = eval(f.C_minus, basis->at0_minus(0));
    const cplx qp = eval(f.C_plus, basis->at0_plus(1)), qm = eval(f.C_minus, basis->at0_minus(1));
    const double sv = 1.0 + std::max(std::abs(vp), std::abs(vm));
    const double sq = 1.0 + std::max(std::abs(qp), std::abs(qm));
    f.interface_value_residual = std::abs(vp - vm) / sv;
    // dom(A) matches r⁻¹f', which flips sign against |r|⁻¹f' across 0.
    f.interface_quasi_residual =
        (kind == TrialKind::domA_combo ? std::abs(qp + qm) : std::abs(qp - qm)) / sq;
  }
  const auto& minus = basis->psi[kMinus]->samples;
  for (auto it = minus.rbegin(); it != minus.rend(); ++it)
    f.samples.push_back({it->x, eval(f.C_minus, it->psi), eval(f.C_minus, it->quasi)});
  for (const auto& s : basis->psi[kPlus]->samples)
    f.samples.push_back({s.x, eval(f.C_plus, s.psi), eval(f.C_plus, s.quasi)});
  f.basis = std::move(basis);
  return f;
}

FormValues form_values(const TrialFunction& f, double quad_tol) {
  const DeficiencyBasis& b = *f.basis;
  const Integrals fine = integrals(b.fine, b.lambda, f.C_plus, f.C_minus);
  const Integrals coarse = integrals(b.coarse, b.lambda, f.C_plus, f.C_minus);
  FormValues v;
  v.norm_sq = fine.norm;
  v.t_f = fine.t;
  v.af_norm_sq = fine.af;
  v.j_lambda = std::norm(b.lambda) * fine.norm - 2.0 * b.lambda.real() * fine.t + fine.af;
  v.quad_error = std::max({rel(fine.norm, coarse.norm), rel(fine.t, coarse.t), rel(fine.af, coarse.af)});
  if (!(v.quad_error <= quad_tol))
    throw ToleranceMiss("form_values: quadrature rules disagree", v.quad_error, 0.0);
  return v;
}

double volkmer_ratio(const TrialFunction& f, double quad_tol) {
  const FormValues v = form_values(f, quad_tol);
  const double den = std::sqrt(v.norm_sq * v.af_norm_sq);
  if (!(den > 0.0)) throw Error(ErrorKind::degenerate_trial, "volkmer_ratio: zero denominator");
  return v.t_f / den;
}

Eigen::Matrix2cd m_pm_matrix(cplx lambda, cplx m) {
  const double d = (lambda * m).real();
  const double re = lambda.real();
  Eigen::Matrix2cd M;
  M << d, re * std::conj(m), re * m, d;
  return -M;
}

double j_matrix(cplx lambda, cplx m_plus, cplx m_minus, const Vec2& C_plus, const Vec2& C_minus) {
  const cplx jp = C_plus.adjoint() * m_pm_matrix(lambda, m_plus) * C_plus;
  const cplx jm = C_minus.adjoint() * m_pm_matrix(lambda, m_minus) * C_minus;
  return 2.0 * (jp + jm).real();
}

std::vector<Vec2> sphere_samples(int n) {
  if (n < 1) throw Error(ErrorKind::domain, "sphere_samples: n must be positive");
  const double golden = 0.5 * (std::sqrt(5.0) - 1.0);
  std::vector<Vec2> out;
  for (int k = 0; k < n; ++k) {
    const double alpha = (k + 0.5) / n * (M_PI / 2);
    const double p1 = 2 * M_PI * std::fmod(k * golden, 1.0);
    const double p2 = 2 * M_PI * std::fmod(k * std::sqrt(2.0), 1.0);
    out.emplace_back(std::polar(std::cos(alpha), p1), std::polar(std::sin(alpha), p2));
  }
  return out;
}

namespace {

std::vector<cplx> ray_points(const Ray& ray) {
  std::vector<cplx> out;
  for (double y : ray.y_grid) {
    out.push_back(ray.at(y));
    if (ray.K != 0.0) out.emplace_back(-ray.K * y, y);
  }
  return out;
}

}  // namespace

JScanReport j_nonnegativity_scan(const Weight& w, const Ray& ray,
                                 std::span<const Vec2> coefficient_samples, const Grids& grids) {
  const std::vector<cplx> pts = ray_points(ray);
  const std::vector<Vec2> samples(coefficient_samples.begin(), coefficient_samples.end());
  JScanReport rep;
  rep.points = ordered_map(
      pts.size(),
      [&](std::size_t i) {
        const cplx lam = pts[i];
        auto b = std::make_shared<const DeficiencyBasis>(deficiency_basis(w, lam, grids.tol));
        const Eigen::Matrix2cd T =
            -d_matrix(b->m_minus).inverse() * d_matrix(b->m_plus);
        const Eigen::Matrix2cd Q =
            2.0 * (m_pm_matrix(lam, b->m_plus) + T.adjoint() * m_pm_matrix(lam, b->m_minus) * T);
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(0.5 * (Q + Q.adjoint()));
        std::vector<Vec2> cs = samples;
        cs.push_back(es.eigenvectors().col(0));
        JScanPoint p{lam, INFINITY, 0.0, Vec2::Zero()};
        for (const Vec2& C : cs) {
          const TrialFunction f = build_trial(b, TrialKind::domA_combo, C);
          const FormValues v = form_values(f, 1e-6);
          const double jm = j_matrix(lam, b->m_plus, b->m_minus, f.C_plus, f.C_minus);
          const double scale = std::norm(lam) * v.norm_sq + v.af_norm_sq;
          const double nv = v.j_lambda / scale;
          if (nv < p.min_normalized) {
            p.min_normalized = nv;
            p.argmin_C_plus = C;
          }
          p.max_discrepancy = std::max(p.max_discrepancy, std::abs(v.j_lambda - jm) / (1.0 + std::abs(jm)));
        }
        return p;
      },
      grids.exec);
  for (const auto& p : rep.points) {
    if (p.min_normalized < rep.min_normalized) {
      rep.min_normalized = p.min_normalized;
      rep.worst_lambda = p.lambda;
      rep.worst_C_plus = p.argmin_C_plus;
    }
    rep.max_discrepancy = std::max(rep.max_discrepancy, p.max_discrepancy);
  }
  return rep;
}

RatioScan domA_ratio_scan(const Weight& w, const Ray& ray, std::span<const Vec2> coefficient_samples,
                          const Grids& grids, TrialKind kind) {
  if (kind != TrialKind::domA_combo && kind != TrialKind::domL_combo)
    throw Error(ErrorKind::domain, "domA_ratio_scan: kind must be domA_combo or domL_combo");
  const std::vector<cplx> pts = ray_points(ray);
  struct Best {
    double ratio;
    Vec2 C;
  };
  const auto best = ordered_map(
      pts.size(),
      [&](std::size_t i) {
        auto b = std::make_shared<const DeficiencyBasis>(deficiency_basis(w, pts[i], grids.tol));
        Best out{-INFINITY, Vec2::Zero()};
        for (const Vec2& C : coefficient_samples) {
          const double r = volkmer_ratio(build_trial(b, kind, C), 1e-6);
          if (r > out.ratio) out = {r, C};
        }
        return out;
      },
      grids.exec);
  RatioScan rep;
  rep.max_ratio = -INFINITY;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    rep.curve.push_back({pts[i].imag(), pts[i].real() / pts[i].imag(), best[i].ratio});
    if (best[i].ratio > rep.max_ratio) {
      rep.max_ratio = best[i].ratio;
      rep.lambda = pts[i];
      rep.C_plus = best[i].C;
    }
  }
  return rep;
}

}  // namespace weylhelp
