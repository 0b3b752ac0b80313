#include "weylhelp/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

namespace weylhelp {

namespace {

void dump(std::ostringstream& os, const ojson& j, int depth) {
  const std::string pad(static_cast<std::size_t>(2 * depth), ' ');
  const std::string inner(static_cast<std::size_t>(2 * depth + 2), ' ');
  switch (j.type()) {
    case ojson::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << ",\n";
        first = false;
        os << inner << ojson(it.key()).dump() << ": ";
        dump(os, it.value(), depth + 1);
      }
      os << "\n" << pad << "}";
      return;
    }
    case ojson::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      // Arrays of scalars stay on one line.
      const bool flat = std::all_of(j.begin(), j.end(), [](const ojson& e) { return e.is_primitive(); });
      os << "[";
      bool first = true;
      for (const auto& e : j) {
        if (!first) os << (flat ? ", " : ",");
        if (!flat) os << "\n" << inner;
        first = false;
        dump(os, e, depth + 1);
      }
      if (!flat) os << "\n" << pad;
      os << "]";
      return;
    }
    case ojson::value_t::number_float:
      os << format_number(j.get<double>());
      return;
    default:
      os << j.dump();
      return;
  }
}

ojson number(double v) { return std::isfinite(v) ? ojson(v) : ojson(nullptr); }

ojson numbers(const std::vector<double>& v) {
  ojson a = ojson::array();
  for (double x : v) a.push_back(number(x));
  return a;
}

}  // namespace

std::string format_number(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string dump_json(const ojson& j) {
  std::ostringstream os;
  dump(os, j, 0);
  os << "\n";
  return os.str();
}

void write_csv(std::ostream& os, const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows) {
  for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
  os << "\n";
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i) os << ",";
      if (std::isfinite(r[i])) os << format_number(r[i]);
    }
    os << "\n";
  }
}

ojson to_json(cplx z) { return ojson::array({number(z.real()), number(z.imag())}); }

ojson to_json(const Grids& g) {
  return {{"y_min", number(g.y_min)},
          {"y_max", number(g.y_max)},
          {"per_decade", g.per_decade},
          {"tol", number(g.tol)}};
}

ojson to_json(const CriterionReport& r) {
  ojson j;
  j["criterion_id"] = to_string(r.id);
  j["verdict"] = to_string(r.verdict);
  j["sup_value"] = number(r.sup_value);
  j["growth_fit"] = number(r.growth_fit);
  j["best_K"] = r.best_K ? number(*r.best_K) : ojson(nullptr);
  j["witness"] = {{"lambda", to_json(r.witness.lambda)}, {"values", numbers(r.witness.values)}};
  j["grids"] = to_json(r.grids);
  return j;
}

ojson to_json(const BennewitzVerdict& v) {
  return {{"side", v.side == Side::plus ? "plus" : "minus"},
          {"status", to_string(v.status)},
          {"t_witness", number(v.t_witness)},
          {"s0_estimate", number(v.s0_estimate)}};
}

ojson to_json(const OddSuite& s) {
  return {{"status", to_string(s.status)},
          {"best_constant", to_json(s.best_constant)},
          {"bennewitz", to_json(s.bennewitz)},
          {"lrg_axis", to_json(s.lrg_axis)},
          {"everitt", to_json(s.everitt)}};
}

ojson to_json(const EigenScan& s) {
  ojson pairs = ojson::array();
  for (const auto& p : s.pairs)
    pairs.push_back({{"index", p.index},
                     {"lambda", number(p.lambda)},
                     {"secular_residual", number(p.secular_residual)}});
  return {{"pairs", pairs}, {"poles", numbers(s.poles)}, {"interlacing_ok", s.interlacing_ok}};
}

ojson to_json(const RieszDiagnostic& d) {
  ojson rows = ojson::array();
  for (std::size_t i = 0; i < d.N.size(); ++i)
    rows.push_back({{"N", d.N[i]}, {"gram_condition", number(d.gram_condition[i])}});
  return {{"sweep", rows},
          {"trend", number(d.trend)},
          {"strictly_increasing", d.strictly_increasing},
          {"diagonal_error", number(d.diagonal_error)}};
}

ojson to_json(const HerglotzReport& h) {
  ojson checks = ojson::array();
  for (const auto& c : h.checks)
    checks.push_back({{"name", c.name},
                      {"pass", c.pass},
                      {"worst", number(c.worst)},
                      {"worst_lambda", to_json(c.worst_lambda)}});
  return {{"all_pass", h.all_pass()}, {"checks", checks}};
}

}  // namespace weylhelp
