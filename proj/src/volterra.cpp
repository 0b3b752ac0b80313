#include "weylhelp/volterra.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include <boost/math/special_functions/legendre.hpp>

#include "weylhelp/errors.hpp"

namespace weylhelp {

namespace {

constexpr int kStages = 6;
constexpr int kMaxRule = 40;
constexpr double kEps = std::numeric_limits<double>::epsilon();
// Neglected term of the Peano panel: |λ|·x_min·ΔR(x_min).
constexpr double kPeanoFloor = 1e-18;
constexpr double kGradedTop = 0.125;  // graded region is (x_min, L/8]
constexpr double kRoundoffFloor = 5e-14;
constexpr double kAsymptoticGate = 1e-6;

GaussRule make_rule(int n) {
  GaussRule r;
  const auto zeros = boost::math::legendre_p_zeros<double>(n);  // nonnegative zeros
  std::vector<double> z;
  for (double v : zeros) {
    z.push_back(v);
    if (v != 0.0) z.push_back(-v);
  }
  std::sort(z.begin(), z.end());
  for (double v : z) {
    const double dp = boost::math::legendre_p_prime(n, v);
    r.x.push_back(0.5 * (1.0 + v));
    r.w.push_back(1.0 / ((1.0 - v * v) * dp * dp));
  }
  return r;
}

struct Tableau {
  std::array<double, kStages> c{};
  std::array<double, kStages> b{};
  std::array<std::array<double, kStages>, kStages> a{};
};

// a_ij = ∫_0^{c_i} ℓ_j, with ℓ_j the Lagrange basis on the Gauss nodes.
Tableau make_tableau() {
  const GaussRule& g = gauss_rule(kStages);
  Tableau t;
  for (int i = 0; i < kStages; ++i) {
    t.c[i] = g.x[i];
    t.b[i] = g.w[i];
  }
  auto lagrange = [&](int j, double s) {
    double v = 1.0;
    for (int k = 0; k < kStages; ++k)
      if (k != j) v *= (s - t.c[k]) / (t.c[j] - t.c[k]);
    return v;
  };
  for (int i = 0; i < kStages; ++i)
    for (int j = 0; j < kStages; ++j) {
      double acc = 0.0;
      for (int k = 0; k < kStages; ++k) acc += g.w[k] * lagrange(j, t.c[i] * g.x[k]);
      t.a[i][j] = t.c[i] * acc;
    }
  return t;
}

const Tableau& tableau() {
  static const Tableau t = make_tableau();
  return t;
}

double max_abs(const Mat2& m) { return m.cwiseAbs().maxCoeff(); }

// The off-diagonal entries of a propagator differ by a factor ~|λ|/density;
// errors are measured after the diagonal similarity that balances them.
Mat2 balanced(const Mat2& ref, const Mat2& m) {
  const double lo = 1e-300;
  const double s = std::sqrt(std::max(std::abs(ref(1, 0)), lo) / std::max(std::abs(ref(0, 1)), lo));
  Mat2 out = m;
  out(0, 1) *= s;
  out(1, 0) /= s;
  return out;
}

bool finite(const Mat2& m) {
  for (int i = 0; i < 4; ++i)
    if (!std::isfinite(m(i).real()) || !std::isfinite(m(i).imag())) return false;
  return true;
}

cplx ldexp_c(cplx z, int e) { return {std::ldexp(z.real(), e), std::ldexp(z.imag(), e)}; }

// Keeps the mantissa's largest entry in [2^-64, 2^64].
template <class M>
void renormalize(M& mant, int& exp2) {
  const double m = mant.cwiseAbs().maxCoeff();
  if (!(m > 0.0)) return;
  int e = 0;
  std::frexp(m, &e);
  if (e > 64 || e < -64) {
    mant *= std::ldexp(1.0, -e);
    exp2 += e;
  }
}

class Stepper {
 public:
  Stepper(SystemForm form, const SideMeasure& side, cplx lambda)
      : form_(form), side_(side), lambda_(lambda) {}

  Mat2 colloc(double x0, double h) const {
    const Tableau& t = tableau();
    std::array<Mat2, kStages> A;
    for (int j = 0; j < kStages; ++j) {
      const double rho = side_.density(x0 + h * t.c[j]);
      const double alpha = form_ == SystemForm::ell_form ? rho : 1.0;
      const double beta = form_ == SystemForm::ell_form ? 1.0 : rho;
      A[j] << 0.0, alpha, -lambda_ * beta, 0.0;
    }
    Eigen::Matrix<cplx, 2 * kStages, 2 * kStages> M;
    M.setIdentity();
    Eigen::Matrix<cplx, 2 * kStages, 2> rhs;
    for (int i = 0; i < kStages; ++i) {
      rhs.block<2, 2>(2 * i, 0).setIdentity();
      for (int j = 0; j < kStages; ++j) M.block<2, 2>(2 * i, 2 * j) -= (h * t.a[i][j]) * A[j];
    }
    const Eigen::Matrix<cplx, 2 * kStages, 2> K = M.partialPivLu().solve(rhs);
    Mat2 P = Mat2::Identity();
    for (int j = 0; j < kStages; ++j) P += (h * t.b[j]) * A[j] * K.block<2, 2>(2 * j, 0);
    return P;
  }

  Mat2 shear(double h) const {
    Mat2 P = Mat2::Identity();
    if (form_ == SystemForm::ell_form)
      P(1, 0) = -lambda_ * h;
    else
      P(0, 1) = h;
    return P;
  }

  Mat2 peano(double x) const {
    const double dR = side_.antiderivative(x) - side_.atom();
    Mat2 P = Mat2::Identity();
    if (form_ == SystemForm::ell_form) {
      P(0, 1) = dR;
      P(1, 0) = -lambda_ * x;
    } else {
      P(0, 1) = x;
      P(1, 0) = -lambda_ * dR;
    }
    return P;
  }

  Mat2 jump() const {
    Mat2 P = Mat2::Identity();
    if (form_ == SystemForm::ell_form)
      P(0, 1) = side_.atom();
    else
      P(1, 0) = -lambda_ * side_.atom();
    return P;
  }

 private:
  SystemForm form_;
  const SideMeasure& side_;
  cplx lambda_;
};

class Builder {
 public:
  using Panel = FundamentalMatrix::Panel;
  using Kind = FundamentalMatrix::PanelKind;

  Builder(SystemForm form, const SideMeasure& side, cplx lambda, const IntegrateOptions& opt)
      : step_(form, side, lambda), side_(side), lambda_(lambda), opt_(opt) {}

  std::vector<Panel> build() {
    const double L = side_.length();
    std::vector<double> cuts;
    for (double b : side_.breakpoints()) cuts.push_back(b);
    for (double g : opt_.grid_request) {
      if (!(g >= 0.0 && g <= L * (1 + 1e-14)))
        throw Error(ErrorKind::domain, "integrate: grid_request outside [0, L]");
      if (g > 0.0 && g < L) cuts.push_back(g);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    if (side_.atom() > 0.0) push({0.0, 0.0, Kind::atom, step_.jump(), 4 * kEps});

    if (!side_.has_density()) {
      double a = 0.0;
      for (double c : cuts) {
        push({a, c, Kind::shear, step_.shear(c - a), 4 * kEps});
        a = c;
      }
      push({a, L, Kind::shear, step_.shear(L - a), 4 * kEps});
      return std::move(panels_);
    }

    double start = 0.0;
    if (side_.singular_at_zero()) {
      const double lam = std::max(std::abs(lambda_), 1.0);
      double x_min = 1e-8 * L;
      while (lam * x_min * (side_.antiderivative(x_min) - side_.atom()) > kPeanoFloor &&
             x_min > 1e-280)
        x_min /= 16.0;
      push({0.0, x_min, Kind::peano, step_.peano(x_min), 4 * kEps});
      const double top = kGradedTop * L;
      std::vector<double> pts;
      for (double x = x_min; x < top; x *= 4.0) pts.push_back(x);
      for (double c : cuts)
        if (c > x_min && c < top) pts.push_back(c);
      pts.push_back(top);
      std::sort(pts.begin(), pts.end());
      pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
      for (std::size_t i = 0; i + 1 < pts.size(); ++i) seed(pts[i], pts[i + 1], false);
      start = top;
    }

    std::vector<double> pts{start};
    for (double c : cuts)
      if (c > start) pts.push_back(c);
    pts.push_back(L);
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) seed(pts[i], pts[i + 1], true);
    return std::move(panels_);
  }

 private:
  void push(Panel p) {
    if (!finite(p.P)) throw OverflowError("integrate: non-finite propagator", p.x0);
    if (panels_.size() >= opt_.max_panels)
      throw ToleranceMiss("integrate: panel budget exhausted", p.err, p.x0);
    panels_.push_back(std::move(p));
  }

  // Initial subdivision from the local oscillation scale √(|λ|·mean density).
  void seed(double a, double b, bool regular) {
    if (!(b > a)) return;
    const double L = side_.length();
    const double mean = (side_.antiderivative(b) - side_.antiderivative(a)) / (b - a);
    const double omega = std::sqrt(std::abs(lambda_) * std::max(mean, 0.0));
    double n = std::ceil((b - a) * omega / 2.0);
    if (regular) n = std::max(n, std::ceil((b - a) / (0.25 * L) - 1e-12));
    const int count = static_cast<int>(std::max(1.0, n));
    for (int k = 0; k < count; ++k) {
      const double x0 = a + (b - a) * k / count;
      const double x1 = k + 1 == count ? b : a + (b - a) * (k + 1) / count;
      adapt(x0, x1, step_.colloc(x0, x1 - x0), 0);
    }
  }

  void adapt(double a, double b, const Mat2& full, int depth) {
    const double m = 0.5 * (a + b);
    const Mat2 Pa = step_.colloc(a, m - a);
    const Mat2 Pb = step_.colloc(m, b - m);
    const Mat2 P2 = Pb * Pa;
    if (!finite(P2)) throw OverflowError("integrate: non-finite propagator", a);
    const double scale = max_abs(balanced(P2, P2));
    const double err = max_abs(balanced(P2, P2 - full)) / scale;
    const double target =
        std::max(opt_.tol * std::max((b - a) / side_.length(), 1e-3), kRoundoffFloor);
    // Step doubling for an order-12 scheme: the halves carry about err/2^12.
    // The estimate is trusted only once the full step is itself resolved.
    const double halves = err / 4096.0;
    if (halves <= target && err <= kAsymptoticGate) {
      const double each = std::max(halves / 2.0, 4 * kEps * scale * scale);
      push({a, m, FundamentalMatrix::PanelKind::gauss, Pa, each});
      push({m, b, FundamentalMatrix::PanelKind::gauss, Pb, each});
      return;
    }
    if (depth >= 60 || panels_.size() >= opt_.max_panels)
      throw ToleranceMiss("integrate: local error target not reached", err, a);
    adapt(a, m, Pa, depth + 1);
    adapt(m, b, Pb, depth + 1);
  }

  Stepper step_;
  const SideMeasure& side_;
  cplx lambda_;
  const IntegrateOptions& opt_;
  std::vector<Panel> panels_;
};

}  // namespace

const char* to_string(SystemForm form) {
  return form == SystemForm::ell_form ? "ell_form" : "r_form";
}

const GaussRule& gauss_rule(int n) {
  static const std::array<GaussRule, kMaxRule + 1> rules = [] {
    std::array<GaussRule, kMaxRule + 1> r;
    for (int k = 1; k <= kMaxRule; ++k) r[k] = make_rule(k);
    return r;
  }();
  if (n < 1 || n > kMaxRule) throw Error(ErrorKind::domain, "gauss_rule: unsupported order");
  return rules[n];
}

Mat2 ScaledMat2::value() const {
  Mat2 out;
  for (int i = 0; i < 4; ++i) out(i) = ldexp_c(mantissa(i), exp2);
  return out;
}

std::size_t FundamentalMatrix::panel_index(double x) const {
  if (x <= 0.0) return 0;
  auto it = std::lower_bound(panels_.begin(), panels_.end(), x,
                             [](const Panel& p, double v) { return p.x1 < v; });
  if (it == panels_.end()) return panels_.size() - 1;
  return static_cast<std::size_t>(it - panels_.begin());
}

Mat2 FundamentalMatrix::sub_propagator(std::size_t k, double x) const {
  const Panel& p = panels_.at(k);
  if (x <= p.x0) return Mat2::Identity();
  if (x >= p.x1) return p.P;
  Stepper s(form_, side_, lambda_);
  switch (p.kind) {
    case PanelKind::atom: return Mat2::Identity();
    case PanelKind::peano: return s.peano(x);
    case PanelKind::shear: return s.shear(x - p.x0);
    case PanelKind::gauss: return s.colloc(p.x0, x - p.x0);
  }
  return Mat2::Identity();
}

ScaledMat2 FundamentalMatrix::evaluate(double x) const {
  if (!(x >= 0.0) || x > length() * (1 + 1e-14))
    throw Error(ErrorKind::domain, "evaluate: position outside [0, L]");
  const std::size_t k = panel_index(x);
  ScaledMat2 out{sub_propagator(k, x) * starts_[k].mantissa, starts_[k].exp2};
  renormalize(out.mantissa, out.exp2);
  return out;
}

FundamentalMatrix integrate(SystemForm form, const SideMeasure& side, cplx lambda,
                            const IntegrateOptions& options) {
  if (!(options.tol > 0.0)) throw Error(ErrorKind::domain, "integrate: tol must be positive");
  if (!std::isfinite(lambda.real()) || !std::isfinite(lambda.imag()))
    throw Error(ErrorKind::domain, "integrate: non-finite lambda");

  FundamentalMatrix U(form, side, lambda);
  U.panels_ = Builder(form, U.side_, lambda, options).build();

  U.starts_.reserve(U.panels_.size() + 1);
  U.starts_.push_back(ScaledMat2{});
  for (const auto& p : U.panels_) {
    ScaledMat2 next{p.P * U.starts_.back().mantissa, U.starts_.back().exp2};
    if (!finite(next.mantissa)) throw OverflowError("integrate: non-finite state", p.x1);
    renormalize(next.mantissa, next.exp2);
    U.starts_.push_back(next);
    U.error_ += p.err;
  }

  std::vector<double> g{0.0};
  for (const auto& p : U.panels_)
    if (p.x1 > 0.0) g.push_back(p.x1);
  for (double x : options.grid_request) g.push_back(std::min(x, side.length()));
  std::sort(g.begin(), g.end());
  g.erase(std::unique(g.begin(), g.end()), g.end());
  U.grid_ = std::move(g);
  U.entries_.reserve(U.grid_.size());
  for (double x : U.grid_) U.entries_.push_back(x == 0.0 ? ScaledMat2{} : U.evaluate(x));
  return U;
}

double wronskian_audit(const FundamentalMatrix& U) {
  double worst = 0.0;
  for (const auto& e : U.entries()) {
    const Mat2& M = e.mantissa;
    const cplx det = ldexp_c(M.determinant(), 2 * e.exp2);
    const double scale =
        std::ldexp(std::abs(M(0, 0) * M(1, 1)) + std::abs(M(0, 1) * M(1, 0)), 2 * e.exp2);
    worst = std::max(worst, std::abs(det - 1.0) / std::max(1.0, scale));
  }
  return worst;
}

Trajectory Trajectory::forward(System U, const Vec2& y0) {
  Trajectory t(std::move(U));
  const auto& panels = t.U_->panels();
  t.mant_.reserve(panels.size() + 1);
  t.exp_.reserve(panels.size() + 1);
  Vec2 v = y0;
  int e = 0;
  renormalize(v, e);
  t.mant_.push_back(v);
  t.exp_.push_back(e);
  for (const auto& p : panels) {
    v = p.P * v;
    renormalize(v, e);
    t.mant_.push_back(v);
    t.exp_.push_back(e);
  }
  return t;
}

Trajectory Trajectory::backward(System U, const Vec2& y_end) {
  Trajectory t(std::move(U));
  const auto& panels = t.U_->panels();
  const std::size_t n = panels.size();
  t.mant_.assign(n + 1, Vec2::Zero());
  t.exp_.assign(n + 1, 0);
  Vec2 v = y_end;
  int e = 0;
  renormalize(v, e);
  t.mant_[n] = v;
  t.exp_[n] = e;
  for (std::size_t k = n; k-- > 0;) {
    const Mat2& P = panels[k].P;
    Mat2 adj;
    adj << P(1, 1), -P(0, 1), -P(1, 0), P(0, 0);
    v = adj * v / P.determinant();
    renormalize(v, e);
    t.mant_[k] = v;
    t.exp_[k] = e;
  }
  return t;
}

Vec2 Trajectory::at(double x) const {
  const std::size_t k = U_->panel_index(x);
  const Vec2 v = U_->sub_propagator(k, x) * mant_[k];
  const int e = exp_[k] + factor_exp_;
  return {factor_ * ldexp_c(v(0), e), factor_ * ldexp_c(v(1), e)};
}

Vec2 Trajectory::at_end() const {
  const int e = exp_.back() + factor_exp_;
  return {factor_ * ldexp_c(mant_.back()(0), e), factor_ * ldexp_c(mant_.back()(1), e)};
}

void Trajectory::scale(cplx c) { factor_ *= c; }

void Trajectory::normalize(double x, int i) {
  const std::size_t k = U_->panel_index(x);
  const Vec2 v = U_->sub_propagator(k, x) * mant_[k];
  if (v(i) == 0.0) throw Error(ErrorKind::degenerate_trial, "normalize: component vanishes");
  factor_ = 1.0 / v(i);
  factor_exp_ = -exp_[k];
}

std::vector<QuadNode> quadrature_nodes(const FundamentalMatrix& U, int per_panel) {
  const GaussRule& g = gauss_rule(per_panel);
  std::vector<QuadNode> out;
  const SideMeasure& side = U.side();
  for (const auto& p : U.panels()) {
    const double h = p.x1 - p.x0;
    switch (p.kind) {
      case FundamentalMatrix::PanelKind::atom:
        out.push_back({0.0, 0.0, side.atom()});
        break;
      case FundamentalMatrix::PanelKind::peano:
        out.push_back({0.5 * p.x1, p.x1, side.antiderivative(p.x1) - side.atom()});
        break;
      case FundamentalMatrix::PanelKind::shear:
      case FundamentalMatrix::PanelKind::gauss:
        for (std::size_t j = 0; j < g.x.size(); ++j) {
          const double x = p.x0 + h * g.x[j];
          const double rho = p.kind == FundamentalMatrix::PanelKind::gauss ? side.density(x) : 0.0;
          out.push_back({x, h * g.w[j], h * g.w[j] * rho});
        }
        break;
    }
  }
  return out;
}

Moments moments(std::span<const Trajectory* const> family, std::span<const QuadNode> nodes) {
  const auto n = static_cast<Eigen::Index>(family.size());
  Moments out;
  for (auto* m : {&out.u1_dx, &out.u1_dR, &out.u2_dx, &out.u2_dR}) m->setZero(n, n);
  Eigen::VectorXcd a(n), b(n);
  for (const auto& q : nodes) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const Vec2 y = family[static_cast<std::size_t>(j)]->at(q.x);
      a(j) = y(0);
      b(j) = y(1);
    }
    const Eigen::MatrixXcd aa = a * a.adjoint();
    const Eigen::MatrixXcd bb = b * b.adjoint();
    if (q.wdx != 0.0) {
      out.u1_dx += q.wdx * aa;
      out.u2_dx += q.wdx * bb;
    }
    if (q.wdR != 0.0) {
      out.u1_dR += q.wdR * aa;
      out.u2_dR += q.wdR * bb;
    }
  }
  return out;
}

}  // namespace weylhelp
