#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace gamevi {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

enum class Errc {
  DimensionMismatch,
  NonFiniteIterate,
  InvalidConfig,
  UnknownVariant,
  NoConvergence,
  ZeroNormal,
  SingularSystem,
  InvalidK,
  FileNotFound,
  NoNumericRows,
  UnknownColumn,
  ColumnMismatch,
  InvalidFraction,
  ParseError,
};

std::string_view to_string(Errc code);

/// Library-wide exception. Every failure carries one of the codes above so
/// callers (and tests) can branch on the category without parsing text.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

inline void require_dims(bool ok, const char* what) {
  if (!ok) throw Error(Errc::DimensionMismatch, what);
}

}  // namespace gamevi
