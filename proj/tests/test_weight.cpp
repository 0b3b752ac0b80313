#include <catch_amalgamated.hpp>

#include <cmath>

#include "weylhelp/errors.hpp"
#include "weylhelp/weight.hpp"

using namespace weylhelp;
using Catch::Matchers::WithinRel;
using nlohmann::json;

TEST_CASE("closed-form antiderivatives") {
  CHECK_THAT(constant_density(2.0).antiderivative(0.25), WithinRel(0.5, 1e-15));
  CHECK_THAT(power_density(0.5).antiderivative(0.49), WithinRel(std::pow(0.49, 1.5) / 1.5, 1e-13));
  const SideMeasure lf = logflat_density();
  for (double x : {1e-8, 1e-3, 0.3, 1.0}) CHECK_THAT(lf.antiderivative(x), WithinRel(1.0 / (1.0 - std::log(x)), 1e-13));
  const SideMeasure pm = point_mass(0.7);
  CHECK(pm.antiderivative(0.0) == 0.0);
  CHECK_THAT(pm.antiderivative(0.5), WithinRel(0.7, 1e-15));
}

TEST_CASE("tabulated density integrates piecewise-linearly") {
  const SideMeasure t = tabulated_density({{0.0, 1.0}, {0.5, 3.0}, {1.0, 1.0}});
  CHECK_THAT(t.antiderivative(0.5), WithinRel(1.0, 1e-12));
  CHECK_THAT(t.total_mass(), WithinRel(2.0, 1e-12));
}

TEST_CASE("rescaling keeps the mass of each interval") {
  // ξ ↦ a²·r(aξ) on (0, 1/a): R̃(ξ) = a·R(aξ).
  const double a = 3.0;
  const SideMeasure s = rescaled(power_density(1.0), a);
  CHECK_THAT(s.length(), WithinRel(1.0 / a, 1e-15));
  const double xi = 0.2;
  CHECK_THAT(s.antiderivative(xi), WithinRel(a * (a * xi) * (a * xi) / 2.0, 1e-12));
}

TEST_CASE("weight construction and parity") {
  const Weight w = odd_weight(constant_density());
  CHECK(w.is_odd());
  CHECK(w.x_left() == -1.0);
  const Weight s = scale_weight(constant_density(), 2.0);
  CHECK_FALSE(s.is_odd());
  CHECK_THAT(s.x_left(), WithinRel(-0.5, 1e-15));
  CHECK_THROWS_AS(Weight(constant_density(), power_density(0.5), {Parity::odd, 1.0}), Error);
}

TEST_CASE("JSON schema") {
  const Weight w = weight_from_json(json{{"kind", "power"}, {"alpha", 0.5}});
  CHECK(w.is_odd());
  CHECK_THAT(w.minus().antiderivative(1.0), WithinRel(1.0 / 1.5, 1e-13));
  const Weight g =
      weight_from_json(json{{"kind", "constant"}, {"minus", {{"kind", "atom"}, {"a", 0.5}}}});
  CHECK_FALSE(g.is_odd());
  CHECK(g.minus().atom() == 0.5);
  try {
    weight_from_json(json{{"kind", "constant"}, {"colour", 1}});
    FAIL("unknown key accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::config);
  }
  CHECK_THROWS_AS(weight_from_json(json{{"kind", "spline"}}), Error);
  CHECK_THROWS_AS(weight_from_json(json{{"kind", "power"}, {"alpha", -2.0}}), Error);
}

TEST_CASE("Bennewitz ratio") {
  // x^α: S(t,x) = t^{1+α} for every x.
  const SideMeasure p = power_density(0.5);
  CHECK_THAT(bennewitz_ratio(p, 0.25, 1e-6), WithinRel(std::pow(0.25, 1.5), 1e-11));
  const auto xs = geometric_sequence(0.1, 0.1, 60);
  const std::vector<double> ts = {0.5, 0.25, 0.1};
  const BennewitzVerdict ok = bennewitz_test(constant_density(), Side::plus, ts, xs);
  CHECK(ok.status == BennewitzStatus::satisfied);
  CHECK_THAT(ok.s0_estimate, WithinRel(0.1, 1e-9));
  // Log-flat: R(tx)/R(x) → 1, so every t has its tail inside the margin.
  const BennewitzVerdict bad = bennewitz_test(logflat_density(), Side::plus, ts, xs);
  CHECK(bad.status == BennewitzStatus::failed);
}

TEST_CASE("asymptotic scale inverts R") {
  const SideMeasure c = constant_density();
  // R(x) = x, so f(t) = t^{-1/2}.
  CHECK_THAT(asymptotic_scale(c, 100.0), WithinRel(0.1, 1e-12));
}

TEST_CASE("power-law Bennewitz limit") {
  // x²: R = x³/3, S(t,x) = t³.
  const auto xs = geometric_sequence(0.1, 0.1, 60);
  const std::vector<double> ts = {0.5, 0.25, 0.1};
  const BennewitzVerdict v = bennewitz_test(power_density(2.0), Side::plus, ts, xs);
  CHECK(v.status == BennewitzStatus::satisfied);
  CHECK_THAT(v.s0_estimate, WithinRel(std::pow(v.t_witness, 3), 1e-9));
  CHECK_THAT(bennewitz_ratio(power_density(1.0), 0.5, 0.3), WithinRel(0.25, 1e-12));
  // Log-flat: S(t,x) = ln(e/x)/ln(e/(tx)).
  const double x = 1e-50;
  CHECK_THAT(bennewitz_ratio(logflat_density(), 0.5, x),
             WithinRel(std::log(std::exp(1.0) / x) / std::log(std::exp(1.0) / (0.5 * x)), 1e-10));
}

TEST_CASE("scaled constant base") {
  const Weight w = scale_weight(constant_density(), 2.0);
  CHECK_THAT(w.minus().density(0.3), WithinRel(4.0, 1e-15));
  CHECK_THAT(w.minus().total_mass(), WithinRel(2.0, 1e-14));
  const Weight one = scale_weight(logflat_density(), 1.0);
  for (double x : {1e-6, 0.2, 0.9}) CHECK_THAT(one.minus().density(x), WithinRel(one.plus().density(x), 1e-14));
}

TEST_CASE("asymptotic scale is decreasing with t·f(t) increasing") {
  const SideMeasure lf = logflat_density();
  CHECK_THAT(asymptotic_scale(constant_density(), 4.0), WithinRel(0.5, 1e-14));
  double prev_f = INFINITY, prev_tf = 0.0;
  for (double t : geometric_sequence(1.0, 10.0, 12)) {
    const double f = asymptotic_scale(lf, t);
    CHECK(f < prev_f);
    CHECK(t * f > prev_tf);
    prev_f = f;
    prev_tf = t * f;
  }
}
