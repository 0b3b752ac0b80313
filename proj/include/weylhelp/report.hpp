#pragma once

// JSON and CSV emission. Numbers are rendered with %.17g and non-finite
// values as null, so identical inputs give byte-identical files.

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "weylhelp/criteria.hpp"
#include "weylhelp/quadform.hpp"
#include "weylhelp/spectrum.hpp"

namespace weylhelp {

using ojson = nlohmann::ordered_json;

/// %.17g, or "null" for NaN and ±∞.
std::string format_number(double v);

/// Deterministic pretty printer (two-space indent, keys in insertion order).
std::string dump_json(const ojson& j);

/// Header row then one row per entry; non-finite values are written empty.
void write_csv(std::ostream& os, const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows);

ojson to_json(cplx z);
ojson to_json(const Grids& g);
ojson to_json(const CriterionReport& r);
ojson to_json(const BennewitzVerdict& v);
ojson to_json(const OddSuite& s);
ojson to_json(const EigenScan& s);
ojson to_json(const RieszDiagnostic& d);
ojson to_json(const HerglotzReport& h);

}  // namespace weylhelp
