#include <catch_amalgamated.hpp>

#include <cmath>

#include "weylhelp/errors.hpp"
#include "weylhelp/quadform.hpp"

using namespace weylhelp;
using Catch::Matchers::WithinRel;

namespace {

Grids small_grid() {
  Grids g;
  g.y_min = 1e-2;
  g.y_max = 1e3;
  g.per_decade = 6;
  return g;
}

}  // namespace

TEST_CASE("Weyl trial identities on the imaginary axis") {
  for (const Weight& w : {odd_weight(constant_density()), odd_weight(power_density(0.5)),
                          scale_weight(logflat_density(), 2.0)}) {
    for (double y : {0.1, 1.0, 10.0, 100.0}) {
      const TrialFunction f = build_trial(w, TrialKind::weyl_plus, cplx(0.0, y));
      const FormValues v = form_values(f);
      const cplx m = f.basis->m_plus;
      CHECK_THAT(v.norm_sq, WithinRel(m.imag() / y, 1e-6));
      CHECK_THAT(v.t_f, WithinRel(m.real(), 1e-6));
      CHECK_THAT(v.af_norm_sq, WithinRel(y * m.imag(), 1e-6));
      CHECK_THAT(volkmer_ratio(f), WithinRel(m.real() / m.imag(), 1e-6));
    }
  }
}

TEST_CASE("quadrature and matrix routes to J agree") {
  const Weight w = odd_weight(power_density(0.5));
  for (cplx lam : {cplx(0.5, 1.0), cplx(-20.0, 4.0), cplx(300.0, 100.0)}) {
    auto b = std::make_shared<const DeficiencyBasis>(deficiency_basis(w, lam));
    for (const Vec2& C : sphere_samples(8)) {
      const TrialFunction f = build_trial(b, TrialKind::deficiency_combo, C, C.reverse());
      const FormValues v = form_values(f);
      const double jm = j_matrix(lam, b->m_plus, b->m_minus, f.C_plus, f.C_minus);
      CHECK(std::abs(v.j_lambda - jm) <= 1e-6 * std::abs(jm));
    }
  }
}

TEST_CASE("M± matrix is Hermitian") {
  const Eigen::Matrix2cd M = m_pm_matrix(cplx(1.5, 2.0), cplx(-0.3, 0.8));
  CHECK((M - M.adjoint()).norm() < 1e-15);
}

TEST_CASE("interface conditions of dom(A) and dom(L) trials") {
  const Weight w = scale_weight(constant_density(), 2.0);
  const cplx lam(3.0, 1.0);
  auto b = std::make_shared<const DeficiencyBasis>(deficiency_basis(w, lam));
  for (TrialKind k : {TrialKind::domA_combo, TrialKind::domL_combo}) {
    const TrialFunction f = build_trial(b, k, Vec2(cplx(0.6, 0.1), cplx(-0.2, 0.7)));
    CHECK(f.interface_value_residual < 1e-12);
    CHECK(f.interface_quasi_residual < 1e-12);
  }
  // dom(A): |r|⁻¹f' flips sign at 0.
  const TrialFunction a = build_trial(b, TrialKind::domA_combo, Vec2(1.0, 0.0));
  const Vec2 Cm = domA_minus_coefficients(b->m_plus, b->m_minus, Vec2(1.0, 0.0));
  CHECK((a.C_minus - Cm).norm() < 1e-14);
}

TEST_CASE("dom(L) ratios stay below one") {
  // For functions in the form domain of the self-adjoint |r|-problem the
  // Cauchy-Schwarz bound holds.
  const Weight w = odd_weight(logflat_density());
  Ray r;
  r.K = 0.7;
  r.y_grid = small_grid().y();
  const auto S = sphere_samples(8);
  const RatioScan s = domA_ratio_scan(w, r, S, small_grid(), TrialKind::domL_combo);
  CHECK(s.max_ratio <= 1.0 + 1e-8);
  CHECK_THROWS_AS(domA_ratio_scan(w, r, S, small_grid(), TrialKind::weyl_plus), Error);
}

TEST_CASE("J nonnegativity on an admissible ray") {
  // sgn x has best constant ≈ 2.338, so rays with slope below
  // 1/√(K² - 1) ≈ 0.47 are admissible and slope 1 is not.
  const Weight w = odd_weight(constant_density());
  Ray r;
  r.K = 0.3;
  r.y_grid = small_grid().y();
  const JScanReport j = j_nonnegativity_scan(w, r, sphere_samples(8), small_grid());
  CHECK(j.min_normalized >= -1e-8);
  CHECK(j.max_discrepancy < 1e-6);
  r.K = 1.0;
  CHECK(j_nonnegativity_scan(w, r, sphere_samples(8), small_grid()).min_normalized < 0.0);
}

TEST_CASE("sphere samples are unit vectors") {
  const auto S = sphere_samples(16);
  CHECK(S.size() == 16);
  for (const Vec2& c : S) CHECK_THAT(c.norm(), WithinRel(1.0, 1e-14));
}

TEST_CASE("zero trial is degenerate") {
  const Weight w = odd_weight(constant_density());
  const TrialFunction f =
      build_trial(w, TrialKind::deficiency_combo, cplx(0.0, 1.0), Vec2::Zero(), Vec2::Zero());
  try {
    volkmer_ratio(f);
    FAIL("zero trial accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::degenerate_trial);
  }
}

TEST_CASE("deficiency basis boundary values") {
  const TrialFunction f = build_trial(odd_weight(logflat_density()), TrialKind::weyl_plus, cplx(1.0, 2.0));
  CHECK(std::abs(f.basis->at0_plus(0) + f.basis->m_plus) < 1e-10 * (1.0 + std::abs(f.basis->m_plus)));
  CHECK(std::abs(f.basis->at0_plus(1) - 1.0) < 1e-10);
}

TEST_CASE("scaled weight ratios and a negative J beyond the slope bound") {
  const Weight w = scale_weight(logflat_density(), 2.0);
  const auto samples = sphere_samples();
  const RatioScan r = domA_ratio_scan(w, Ray{0.0, small_grid().y()}, samples, small_grid());
  CHECK(r.max_ratio <= 3.0 + 1e-6);
  const JScanReport j = j_nonnegativity_scan(w, Ray{0.6, small_grid().y()}, samples, small_grid());
  CHECK(j.min_normalized < 0.0);
}
