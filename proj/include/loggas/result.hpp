#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "loggas/errors.hpp"

namespace loggas {

enum class Regime { Oracle, FixedV, BulkTheorem1, BulkDysonTheta4, DiagonalTheorem2, GUEGap };

inline std::string_view regime_name(Regime r) {
  switch (r) {
    case Regime::Oracle: return "oracle";
    case Regime::FixedV: return "fixedv";
    case Regime::BulkTheorem1: return "theorem1";
    case Regime::BulkDysonTheta4: return "theorem1-theta4";
    case Regime::DiagonalTheorem2: return "theorem2";
    case Regime::GUEGap: return "gue";
  }
  return "unknown";
}

inline Regime regime_from_name(std::string_view name) {
  for (Regime r : {Regime::Oracle, Regime::FixedV, Regime::BulkTheorem1, Regime::BulkDysonTheta4,
                   Regime::DiagonalTheorem2, Regime::GUEGap})
    if (regime_name(r) == name) return r;
  throw InvalidArgument("unknown regime tag: " + std::string(name));
}

// ln det(I - gamma K_s) from one method, with whatever the method knows about
// its own accuracy.
struct LogDetResult {
  double log_det = 0.0;
  Regime regime = Regime::Oracle;
  std::optional<double> error_bound;
  std::map<std::string, double> diagnostics;
  std::vector<std::string> flags;

  bool has_flag(std::string_view f) const {
    for (const auto& x : flags)
      if (x == f) return true;
    return false;
  }
};

}  // namespace loggas
