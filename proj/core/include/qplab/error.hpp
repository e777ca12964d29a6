#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qplab {

enum class ErrorKind {
  Domain,            // argument outside the mathematical domain
  Index,             // index outside an available prefix
  Size,              // representable or computational size exceeded
  InsufficientData,
  Shape,             // incompatible matrix dimensions
  Regime,            // a solver was called outside its regime
  Convergence,
  Conditioning,
  DataQuality,       // samples violate a structural property (e.g. convexity)
  NumericalQuality,  // an internal consistency probe failed
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

inline void require(bool ok, ErrorKind kind, const std::string& what) {
  if (!ok) fail(kind, what);
}

}  // namespace qplab
