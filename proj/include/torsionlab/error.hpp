#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace torsionlab {

enum class Errc {
  NonUnitModulus,
  InvalidModulus,
  ZeroPolynomial,
  RootRefinementFailed,
  DegreeBoundViolated,
  NotIsotropic,
  NotSymmetric,
  NotTorelliLike,
  NonPrimitiveRoot,
  NotSymplectic,
  EmptyGeneratorSet,
  DegenerateNorm,
  InvalidInput,
};

constexpr std::string_view errc_name(Errc e) {
  switch (e) {
    case Errc::NonUnitModulus: return "NonUnitModulus";
    case Errc::InvalidModulus: return "InvalidModulus";
    case Errc::ZeroPolynomial: return "ZeroPolynomial";
    case Errc::RootRefinementFailed: return "RootRefinementFailed";
    case Errc::DegreeBoundViolated: return "DegreeBoundViolated";
    case Errc::NotIsotropic: return "NotIsotropic";
    case Errc::NotSymmetric: return "NotSymmetric";
    case Errc::NotTorelliLike: return "NotTorelliLike";
    case Errc::NonPrimitiveRoot: return "NonPrimitiveRoot";
    case Errc::NotSymplectic: return "NotSymplectic";
    case Errc::EmptyGeneratorSet: return "EmptyGeneratorSet";
    case Errc::DegenerateNorm: return "DegenerateNorm";
    case Errc::InvalidInput: return "InvalidInput";
  }
  return "Unknown";
}

/// Every recoverable failure in the library is reported through this type.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace torsionlab
