#include "gamevi/error.hpp"

namespace gamevi {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::NonFiniteIterate: return "NonFiniteIterate";
    case Errc::InvalidConfig: return "InvalidConfig";
    case Errc::UnknownVariant: return "UnknownVariant";
    case Errc::NoConvergence: return "NoConvergence";
    case Errc::ZeroNormal: return "ZeroNormal";
    case Errc::SingularSystem: return "SingularSystem";
    case Errc::InvalidK: return "InvalidK";
    case Errc::FileNotFound: return "FileNotFound";
    case Errc::NoNumericRows: return "NoNumericRows";
    case Errc::UnknownColumn: return "UnknownColumn";
    case Errc::ColumnMismatch: return "ColumnMismatch";
    case Errc::InvalidFraction: return "InvalidFraction";
    case Errc::ParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace gamevi
