#pragma once

#include <array>
#include <string_view>

namespace ckn {

enum class InequalityKind {
  ClassicalHardy,
  LocalizedHardy,
  GeneralizedSobolev,
  Interpolation,
  HardySobolev,
  GeneralizedCKN,
  EndpointLog,
  EndpointCKN,
  TrudingerMoser,
  KMethod,
};

inline constexpr std::array<InequalityKind, 10> kAllInequalityKinds = {
    InequalityKind::ClassicalHardy,  InequalityKind::LocalizedHardy,
    InequalityKind::GeneralizedSobolev, InequalityKind::Interpolation,
    InequalityKind::HardySobolev,    InequalityKind::GeneralizedCKN,
    InequalityKind::EndpointLog,     InequalityKind::EndpointCKN,
    InequalityKind::TrudingerMoser,  InequalityKind::KMethod,
};

std::string_view to_string(InequalityKind kind);

/// Inverse of to_string. Throws DomainError for an unknown name.
InequalityKind parse_kind(std::string_view name);

}  // namespace ckn
