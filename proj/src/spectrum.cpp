#include "weylhelp/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/tools/roots.hpp>
#include <Eigen/Eigenvalues>

#include "weylhelp/errors.hpp"

namespace weylhelp {

namespace {

constexpr std::size_t kPlus = 0, kMinus = 1;
constexpr int kScanChunk = 64;

// Endpoint (cʳ, sʳ) of one side at μ, scaled by 1/‖U(L)‖.
struct Endpoint {
  double c;
  double s;
};

Endpoint endpoint(const SideMeasure& side, double mu, double tol) {
  const FundamentalMatrix U = integrate(SystemForm::r_form, side, cplx(mu, 0.0), {tol, {}});
  const Mat2& M = U.end().mantissa;
  const double n = M.norm();
  return {M(0, 0).real() / n, M(0, 1).real() / n};
}

// Δ/‖U₊‖‖U₋‖ at λ, plus the one-sided Dirichlet factor whose zeros are the
// poles on this branch (s₊ʳ(λ) for λ > 0, s₋ʳ(-λ) for λ < 0).
struct Probe {
  double delta;
  double pole_factor;
};

Probe probe(const Weight& w, double lambda, double tol) {
  const Endpoint p = endpoint(w.plus(), lambda, tol);
  const Endpoint m = endpoint(w.minus(), -lambda, tol);
  return {-(p.c * m.s + m.c * p.s), lambda >= 0.0 ? p.s : m.s};
}

double sqrt_mass(const SideMeasure& side) {
  if (!side.has_density()) return 0.0;
  boost::math::quadrature::tanh_sinh<double> ts;
  return ts.integrate([&](double x) { return std::sqrt(std::abs(side.density(x))); }, 0.0,
                      side.length());
}

// Root of g on [a, b] with g(a), g(b) of opposite signs, in σ.
double refine(const std::function<double(double)>& g, double a, double b) {
  boost::uintmax_t it = 200;
  const auto r = boost::math::tools::toms748_solve(g, a, b, boost::math::tools::eps_tolerance<double>(50), it);
  return 0.5 * (r.first + r.second);
}

struct Branch {
  std::vector<double> roots;  // λ values, increasing |λ|
  std::vector<double> poles;
  bool interlacing_ok = true;
};

Branch scan_branch(const Weight& w, int sign, int count, const SpectrumOptions& opts) {
  const double spread = std::max({1.0, sqrt_mass(w.plus()), sqrt_mass(w.minus())});
  const double h = M_PI / (16.0 * spread);
  const double sigma_max = std::sqrt(opts.lambda_max);
  auto lambda_of = [sign](double s) { return sign * s * s; };

  Branch out;
  Probe prev = probe(w, 0.0, opts.tol);
  double s_prev = 0.0;
  std::vector<int> roots_per_gap(1, 0);
  for (long k0 = 1; static_cast<int>(out.roots.size()) < count; k0 += kScanChunk) {
    if (s_prev >= sigma_max)
      throw Error(ErrorKind::scan_range, "eigenvalues: fewer eigenvalues than requested within range");
    const auto probes = ordered_map(
        kScanChunk,
        [&](std::size_t i) {
          const double s = std::min(sigma_max, h * static_cast<double>(k0 + static_cast<long>(i)));
          return std::pair{s, probe(w, lambda_of(s), opts.tol)};
        },
        opts.exec);
    for (const auto& [s, pr] : probes) {
      if (s <= s_prev) continue;
      if ((prev.pole_factor > 0.0) != (pr.pole_factor > 0.0)) {
        const double ps = refine(
            [&](double x) { return probe(w, lambda_of(x), opts.tol).pole_factor; }, s_prev, s);
        out.poles.push_back(lambda_of(ps));
        roots_per_gap.push_back(0);
      }
      if ((prev.delta > 0.0) != (pr.delta > 0.0) && static_cast<int>(out.roots.size()) < count) {
        const double rs =
            refine([&](double x) { return probe(w, lambda_of(x), opts.tol).delta; }, s_prev, s);
        out.roots.push_back(lambda_of(rs));
        ++roots_per_gap.back();
      }
      prev = pr;
      s_prev = s;
    }
  }
  // A root and a pole falling in the same scan step may be recorded in either
  // order, so only more than one root per gap flags a violation.
  out.interlacing_ok =
      std::all_of(roots_per_gap.begin(), roots_per_gap.end(), [](int n) { return n <= 1; });
  return out;
}

}  // namespace

double secular(const Weight& w, double lambda, double tol) {
  return (m_r(Side::plus, w, cplx(lambda, 0.0), tol).value +
          m_r(Side::minus, w, cplx(-lambda, 0.0), tol).value)
      .real();
}

double secular_entire(const Weight& w, double lambda, double tol) {
  return probe(w, lambda, tol).delta;
}

EigenScan eigenvalues(const Weight& w, int n_pos, int n_neg, const SpectrumOptions& opts) {
  if (n_pos < 1 || n_neg < 1) throw Error(ErrorKind::domain, "eigenvalues: counts must be >= 1");
  const Branch pos = scan_branch(w, +1, n_pos, opts);
  const Branch neg = scan_branch(w, -1, n_neg, opts);
  EigenScan out;
  for (int k = n_neg; k >= 1; --k) {
    EigenPair p;
    p.index = -k;
    p.lambda = neg.roots[static_cast<std::size_t>(k - 1)];
    out.pairs.push_back(std::move(p));
  }
  for (int k = 1; k <= n_pos; ++k) {
    EigenPair p;
    p.index = k;
    p.lambda = pos.roots[static_cast<std::size_t>(k - 1)];
    out.pairs.push_back(std::move(p));
  }
  for (auto it = neg.poles.rbegin(); it != neg.poles.rend(); ++it) out.poles.push_back(*it);
  out.poles.insert(out.poles.end(), pos.poles.begin(), pos.poles.end());
  out.interlacing_ok = pos.interlacing_ok && neg.interlacing_ok;
  for (auto& p : out.pairs) {
    const double mp = m_r(Side::plus, w, cplx(p.lambda, 0.0), opts.tol).value.real();
    const double mm = m_r(Side::minus, w, cplx(-p.lambda, 0.0), opts.tol).value.real();
    p.secular_residual = std::abs(mp + mm);
  }
  return out;
}

EigenPair eigenfunction(const Weight& w, double eigen_lambda, int index, double tol) {
  EigenPair p;
  p.index = index;
  p.lambda = eigen_lambda;
  for (Side side : {Side::plus, Side::minus}) {
    const std::size_t k = side == Side::plus ? kPlus : kMinus;
    const double mu = side == Side::plus ? eigen_lambda : -eigen_lambda;
    p.piece[k] = std::make_shared<const WeylSolution>(
        weyl_solution(side, w, cplx(mu, 0.0), {}, SystemForm::r_form, tol));
  }
  const WeylSolution& P = *p.piece[kPlus];
  const WeylSolution& M = *p.piece[kMinus];
  p.secular_residual = std::abs((P.m + M.m).real());
  p.norm_weighted = P.norm_sq() + M.norm_sq();
  // Both pieces are 1 at 0; match derivatives from the carried solutions.
  const Vec2 a = P.at(0.0), b = M.at(0.0);
  p.interface_residual = std::abs(a(1) - b(1)) / (1.0 + std::abs(a(1)) + std::abs(b(1)));
  const double inv = 1.0 / std::sqrt(p.norm_weighted);
  p.boundary_residual =
      inv * std::max(std::abs(P.at(w.plus().length())(0)), std::abs(M.at(-w.minus().length())(0)));
  for (auto it = M.samples.rbegin(); it != M.samples.rend(); ++it)
    p.samples.push_back({it->x, inv * it->psi.real(), inv * it->quasi.real()});
  for (const auto& s : P.samples) p.samples.push_back({s.x, inv * s.psi.real(), inv * s.quasi.real()});
  return p;
}

Eigen::MatrixXd gram_matrix(const std::vector<EigenPair>& pairs) {
  const auto n = static_cast<Eigen::Index>(pairs.size());
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(n, n);
  if (n == 0) return G;
  for (std::size_t s : {kPlus, kMinus}) {
    // Finest panel layout on this side carries every eigenfunction.
    std::size_t finest = 0;
    for (std::size_t j = 0; j < pairs.size(); ++j) {
      if (!pairs[j].piece[s]) throw Error(ErrorKind::domain, "gram_matrix: eigenfunction not built");
      if (pairs[j].piece[s]->nodes().size() > pairs[finest].piece[s]->nodes().size()) finest = j;
    }
    const auto& nodes = pairs[finest].piece[s]->nodes();
    Eigen::VectorXd v(n);
    for (const auto& q : nodes) {
      if (q.wdR == 0.0) continue;
      for (Eigen::Index j = 0; j < n; ++j) {
        const EigenPair& p = pairs[static_cast<std::size_t>(j)];
        v(j) = p.piece[s]->local().at(q.x)(0).real() / std::sqrt(p.norm_weighted);
      }
      G.noalias() += q.wdR * v * v.transpose();
    }
  }
  return G;
}

RieszDiagnostic riesz_diagnostic(const Weight& w, const std::vector<int>& Ns,
                                 const SpectrumOptions& opts) {
  if (Ns.empty()) throw Error(ErrorKind::domain, "riesz_diagnostic: empty N list");
  const int nmax = *std::max_element(Ns.begin(), Ns.end());
  const EigenScan scan = eigenvalues(w, nmax, nmax, opts);
  const auto built = ordered_map(
      scan.pairs.size(),
      [&](std::size_t i) {
        return eigenfunction(w, scan.pairs[i].lambda, scan.pairs[i].index, opts.tol);
      },
      opts.exec);

  RieszDiagnostic out;
  for (int N : Ns) {
    std::vector<EigenPair> sel;
    for (const auto& p : built)
      if (std::abs(p.index) <= N) sel.push_back(p);
    const Eigen::MatrixXd G = gram_matrix(sel);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G, Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    out.N.push_back(N);
    out.gram_condition.push_back(ev.maxCoeff() / ev.minCoeff());
    if (N == nmax) out.diagonal_error = (G.diagonal().array() - 1.0).abs().maxCoeff();
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(out.N.size());
  out.strictly_increasing = out.N.size() > 1;
  for (std::size_t i = 0; i < out.N.size(); ++i) {
    const double lx = std::log10(out.N[i]), ly = std::log10(out.gram_condition[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    if (i > 0 && !(out.gram_condition[i] > out.gram_condition[i - 1])) out.strictly_increasing = false;
  }
  const double den = n * sxx - sx * sx;
  out.trend = den > 0.0 ? (n * sxy - sx * sy) / den : 0.0;
  return out;
}

}  // namespace weylhelp
