#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace perc {

enum class VerdictStatus { vacuous, holds, violation };

// Enough to rebuild the offending configuration and re-run the check.
struct Witness {
  std::uint64_t seed = 0;
  std::uint64_t trial = 0;
  std::string params;
  std::string detail;
};

struct Verdict {
  VerdictStatus status = VerdictStatus::vacuous;
  std::optional<Witness> witness;

  static Verdict vacuous() { return {VerdictStatus::vacuous, std::nullopt}; }
  static Verdict holds() { return {VerdictStatus::holds, std::nullopt}; }
  static Verdict violation(Witness w) { return {VerdictStatus::violation, std::move(w)}; }

  bool violated() const { return status == VerdictStatus::violation; }
};

inline std::string to_string(VerdictStatus s) {
  switch (s) {
    case VerdictStatus::vacuous: return "vacuous";
    case VerdictStatus::holds: return "holds";
    case VerdictStatus::violation: return "violation";
  }
  return "?";
}

}  // namespace perc
