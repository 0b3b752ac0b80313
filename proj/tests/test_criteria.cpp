#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "weylhelp/criteria.hpp"
#include "weylhelp/errors.hpp"

using namespace weylhelp;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

Grids small_grid() {
  Grids g;
  g.y_min = 1e-2;
  g.y_max = 1e4;
  g.per_decade = 10;
  return g;
}

// Entries of M_A·Im m₊ Im m₋ / y, expanded by hand; the determinant of that
// matrix divided by Im m₊ Im m₋ is M̃_A.
double mtilde_A_entrywise(cplx mp, cplx mm, double K) {
  const double ip = mp.imag(), im = mm.imag();
  const cplx kI(K, 1.0);
  const double M11 = ip + im;
  const double M22 = ip * std::norm(mm) + im * std::norm(mp);
  const double M12 = -ip * (kI * mm).imag() - im * (kI * mp).imag();
  return (M11 * M22 - M12 * M12) / (ip * im);
}

}  // namespace

TEST_CASE("determinant closed form against the entrywise expansion") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> re(-5.0, 5.0), im(0.01, 5.0), kk(-4.0, 4.0), yy(0.01, 100.0);
  for (int i = 0; i < 200; ++i) {
    const cplx mp(re(rng), im(rng)), mm(re(rng), im(rng));
    const double K = kk(rng), y = yy(rng);
    const double f = mtilde_A_formula(mp, mm, K);
    CHECK_THAT(f, WithinRel(mtilde_A_entrywise(mp, mm, K), 1e-10));
    const CriterionMatrices cm = matrices_from(cplx(K * y, y), mp, mm);
    CHECK_THAT(cm.Mtilde_A, WithinRel(cm.Mtilde_A_formula, 1e-9));
    CHECK_THAT(cm.Mtilde_A_formula, WithinRel(f, 1e-12));
  }
}

TEST_CASE("mtilde matches its definition") {
  const cplx lam(2.0, 3.0), m(0.4, 1.7);
  const Eigen::Matrix2d M = mtilde(lam, m);
  CHECK_THAT(M(0, 0), WithinRel(lam.imag() / m.imag(), 1e-15));
  CHECK_THAT(M(0, 1), WithinRel(-(lam * m).imag() / m.imag(), 1e-15));
  CHECK_THAT(M(1, 1), WithinRel(lam.imag() * std::norm(m) / m.imag(), 1e-15));
}

TEST_CASE("tail growth and classification") {
  const auto y = log_grid(1e-2, 1e4, 20);
  std::vector<double> flat(y.size(), 3.0), root(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) root[i] = std::sqrt(y[i]);
  const TailGrowth gf = tail_growth(y, flat);
  CHECK_THAT(gf.fit, WithinAbs(0.0, 1e-12));
  CHECK(classify(3.0, gf) == Verdict::valid);
  const TailGrowth gr = tail_growth(y, root);
  CHECK_THAT(gr.fit, WithinRel(0.5, 1e-10));
  CHECK(gr.strictly_increasing);
  CHECK(classify(100.0, gr) == Verdict::invalid_within_scan);
  CHECK(classify(INFINITY, gf) == Verdict::invalid_within_scan);
  CHECK(classify(1.0, {0.05, false}) == Verdict::inconclusive);
  CHECK(classify(1.0, {0.05, true}) == Verdict::invalid_within_scan);
}

TEST_CASE("imaginary-axis ratios for sgn x") {
  const Weight w = odd_weight(constant_density());
  const Grids g = small_grid();
  // Odd weight: the Volkmer ratio reduces to Re m / Im m, which tends to 1.
  for (double y : {1.0, 100.0}) {
    const cplx m = m_ell(Side::plus, w, cplx(0.0, y)).value;
    CHECK_THAT(volkmer_axis_ratio(w, y), WithinRel(m.real() / m.imag(), 1e-10));
  }
  const CriterionReport v = imaginary_axis_volkmer(w, g);
  CHECK(v.verdict == Verdict::valid);
  CHECK(v.sup_value < 1.1);
  const CriterionReport h = imaginary_axis_help(Side::plus, w, g);
  CHECK(h.verdict == Verdict::valid);
  CHECK(h.curve.size() == g.y().size());
  Grids short_grid = g;
  short_grid.y_max = 1.0;
  CHECK_THROWS_AS(imaginary_axis_volkmer(w, short_grid), Error);
}

TEST_CASE("log-flat axis ratio grows") {
  const Weight w = odd_weight(logflat_density());
  const double r3 = volkmer_axis_ratio(w, 1e3), r6 = volkmer_axis_ratio(w, 1e6);
  CHECK(r6 > r3);
  CHECK(r3 > 1.5);
}

TEST_CASE("ray positivity") {
  const Weight w = odd_weight(constant_density());
  const Grids g = small_grid();
  Ray r;
  r.K = 0.0;
  r.y_grid = g.y();
  CHECK(ray_positivity(w, r, g).nonneg);
  r.K = 50.0;  // far beyond any admissible constant
  const RayCheck bad = ray_positivity(w, r, g, 1e-8, true);
  CHECK_FALSE(bad.nonneg);
  CHECK(std::isfinite(bad.first_violation_y));
  Ray t;
  t.K = 1.0;
  CHECK_THAT(t.theta(), WithinRel(M_PI / 4, 1e-15));
}

TEST_CASE("best constant of the scaled log-flat weight") {
  // a = 2: the best constant is |(1+a)/(1-a)| = 3.
  const Weight w = scale_weight(logflat_density(), 2.0);
  Grids g;
  g.per_decade = 20;
  const CriterionReport r = best_constant(w, kDefaultThetaBracket, g);
  REQUIRE(r.best_K);
  CHECK_THAT(*r.best_K, WithinRel(3.0, 0.01));
  CHECK(r.verdict == Verdict::valid);
}

TEST_CASE("sector quantity is never invalid") {
  const Weight w = odd_weight(logflat_density());
  const std::vector<double> Ks = {0.3, 0.7};
  const CriterionReport r = sector_quantity(w, Ks, small_grid());
  CHECK(r.verdict != Verdict::invalid_within_scan);
  CHECK(r.witness.values.size() == 8);
  const std::vector<double> badK = {1.5};
  CHECK_THROWS_AS(sector_quantity(w, badK, small_grid()), Error);
}

TEST_CASE("LRG axis ratio equals the Volkmer axis ratio") {
  for (const Weight& w : {odd_weight(constant_density()), scale_weight(power_density(0.5), 3.0),
                          Weight(constant_density(), logflat_density(), {Parity::general, 1.0})}) {
    for (double y : {0.01, 1.0, 1e3, 1e5})
      CHECK_THAT(lrg_axis_ratio(w, y), WithinRel(volkmer_axis_ratio(w, y), 1e-8));
  }
}

TEST_CASE("LRG grid and quantity") {
  LrgGrid lg;
  lg.re_points = 5;
  lg.im_per_decade = 2;
  const std::vector<double> eig = {0.0};
  const auto pts = lrg_lambda_grid(lg, eig);
  CHECK_FALSE(pts.empty());
  for (cplx z : pts) CHECK(std::abs(z) >= lg.exclusion_radius);
  const Weight w = odd_weight(constant_density());
  const CriterionReport r = lrg_quantity(w, pts, small_grid());
  CHECK(std::isfinite(r.sup_value));
  CHECK(r.witness.values.size() == 2);
  CHECK(r.witness.values[1] < 1e-8);
}

TEST_CASE("odd suite and Bennewitz reports") {
  Grids g = small_grid();
  const OddSuite s = odd_equivalence_suite(odd_weight(constant_density()), g);
  // A short grid is enough for sgn x; everything is valid.
  CHECK(s.bennewitz.status == BennewitzStatus::satisfied);
  CHECK(s.lrg_axis.verdict == Verdict::valid);
  CHECK(s.best_constant.verdict == Verdict::valid);
  CHECK(s.everitt.verdict == Verdict::valid);
  CHECK(s.status == SuiteStatus::consistent_valid);
  CHECK_THROWS_AS(odd_equivalence_suite(scale_weight(constant_density(), 2.0), g), Error);
  const BennewitzGrid bg;
  const BennewitzVerdict bv = bennewitz_test(logflat_density(), Side::plus, bg.t, bg.x_decay, bg.margin);
  CHECK(bennewitz_report(bv, g).verdict == Verdict::invalid_within_scan);
}

TEST_CASE("matrix structure for odd and scaled weights") {
  const cplx lam(2.0, 3.0);
  const CriterionMatrices odd = matrices_at(odd_weight(power_density(0.5)), lam);
  CHECK((odd.M_A - 2.0 * odd.Mtilde_plus).norm() < 1e-9 * odd.M_A.norm());
  const double a = 2.0;
  const CriterionMatrices sc = matrices_at(scale_weight(logflat_density(), a), lam);
  CHECK_THAT(sc.M_A(0, 0), WithinRel((1.0 + 1.0 / a) * lam.imag() / sc.m_plus.imag(), 1e-9));
}

TEST_CASE("rays around the admissible slope of the scaled weight") {
  // Best constant ≈ 3 gives the slope bound 1/√(3² - 1) = √0.125 ≈ 0.354.
  const Weight w = scale_weight(logflat_density(), 2.0);
  Grids g;
  g.per_decade = 10;
  CHECK(ray_positivity(w, Ray{0.345, g.y()}, g).nonneg);
  CHECK_FALSE(ray_positivity(w, Ray{0.362, g.y()}, g).nonneg);
}

TEST_CASE("point mass axis ratio is linear in y") {
  const double a = 0.5;
  const Weight w = odd_weight(point_mass(a));
  for (double y : {0.1, 10.0, 1e4}) CHECK_THAT(volkmer_axis_ratio(w, y), WithinRel(a * y, 1e-10));
  CHECK(imaginary_axis_volkmer(w, small_grid()).verdict == Verdict::invalid_within_scan);
}
