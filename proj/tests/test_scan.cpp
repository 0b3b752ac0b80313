#include <catch_amalgamated.hpp>

#include <stdexcept>

#include "weylhelp/criteria.hpp"
#include "weylhelp/scan.hpp"
#include "weylhelp/spectrum.hpp"

using namespace weylhelp;

TEST_CASE("ordered_map keeps the input order") {
  for (Exec e : {Exec::serial, Exec::parallel}) {
    const auto v = ordered_map(1000, [](std::size_t i) { return 3 * i; }, e);
    REQUIRE(v.size() == 1000);
    for (std::size_t i = 0; i < v.size(); ++i) CHECK(v[i] == 3 * i);
  }
}

TEST_CASE("ordered_map rethrows the first failure by index") {
  for (Exec e : {Exec::serial, Exec::parallel}) {
    try {
      ordered_map(
          200,
          [](std::size_t i) -> int {
            if (i == 17 || i == 150) throw std::runtime_error(std::to_string(i));
            return 0;
          },
          e);
      FAIL("no exception");
    } catch (const std::runtime_error& err) {
      CHECK(std::string(err.what()) == "17");
    }
  }
}

TEST_CASE("serial and parallel m-scans agree bitwise") {
  const Weight w = odd_weight(logflat_density());
  const auto y = log_grid(1e-2, 1e5, 10);
  auto run = [&](Exec e) {
    return ordered_map(y.size(), [&](std::size_t i) { return m_ell(Side::plus, w, cplx(0.3 * y[i], y[i])).value; }, e);
  };
  CHECK(run(Exec::serial) == run(Exec::parallel));
}

TEST_CASE("serial and parallel criterion reports agree bitwise") {
  const Weight w = odd_weight(power_density(0.5));
  Grids g;
  g.y_min = 1e-2;
  g.y_max = 1e4;
  g.per_decade = 8;
  Grids s = g;
  s.exec = Exec::serial;
  const CriterionReport a = imaginary_axis_volkmer(w, g), b = imaginary_axis_volkmer(w, s);
  CHECK(a.sup_value == b.sup_value);
  CHECK(a.growth_fit == b.growth_fit);
  CHECK(a.curve == b.curve);
  const std::vector<double> Ks = {0.5};
  CHECK(sector_quantity(w, Ks, g).curve == sector_quantity(w, Ks, s).curve);
}

TEST_CASE("serial and parallel eigenvalue scans agree bitwise") {
  const Weight w = scale_weight(constant_density(), 2.0);
  SpectrumOptions p, s;
  s.exec = Exec::serial;
  const EigenScan a = eigenvalues(w, 4, 4, p), b = eigenvalues(w, 4, 4, s);
  for (std::size_t i = 0; i < a.pairs.size(); ++i) CHECK(a.pairs[i].lambda == b.pairs[i].lambda);
}
