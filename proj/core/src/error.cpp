#include "qplab/error.hpp"

namespace qplab {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Domain: return "domain error";
    case ErrorKind::Index: return "index error";
    case ErrorKind::Size: return "size error";
    case ErrorKind::InsufficientData: return "insufficient data";
    case ErrorKind::Shape: return "shape error";
    case ErrorKind::Regime: return "regime error";
    case ErrorKind::Convergence: return "convergence error";
    case ErrorKind::Conditioning: return "conditioning error";
    case ErrorKind::DataQuality: return "data-quality error";
    case ErrorKind::NumericalQuality: return "numerical-quality error";
  }
  return "error";
}

void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, std::string(to_string(kind)) + ": " + what);
}

}  // namespace qplab
