#include "weylhelp/errors.hpp"

namespace weylhelp {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::domain: return "domain";
    case ErrorKind::degenerate_weight: return "degenerate_weight";
    case ErrorKind::tolerance_miss: return "tolerance_miss";
    case ErrorKind::overflow: return "overflow";
    case ErrorKind::near_pole: return "near_pole";
    case ErrorKind::range: return "range";
    case ErrorKind::scan_range: return "scan_range";
    case ErrorKind::degenerate_trial: return "degenerate_trial";
    case ErrorKind::config: return "config";
    case ErrorKind::consistency: return "consistency";
  }
  return "unknown";
}

}  // namespace weylhelp
