#pragma once

// One verification outcome. slack >= -tolerance means the inequality (or
// identity) held; otherwise the witness holds everything needed to replay it.

#include "lstft/lattice.hpp"
#include "lstft/stft.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace lstft {

enum class Status { Pass, Fail, NotApplicable };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::Pass: return "pass";
    case Status::Fail: return "fail";
    case Status::NotApplicable: return "not_applicable";
  }
  return "?";
}

struct Witness {
  std::map<std::string, double> params;
  std::map<std::string, LatticeSignal<double>> signals;
  std::vector<LatticeSignal<double>> family;
  std::optional<TileSet> sigma;
  std::vector<MultiIndex> lattice_set;
  std::vector<PhasePoint<double>> points;  // pairs are stored flattened
};

struct InequalityReport {
  std::string name;
  double lhs = 0;
  double rhs = 0;
  double slack = 0;
  double tolerance = 0;
  Status status = Status::Pass;
  std::uint64_t seed = 0;
  Witness witness;
  std::map<std::string, double> extras;
  std::vector<std::string> notes;

  bool failed() const { return status == Status::Fail; }

  /// Sets status from slack and tolerance.
  InequalityReport& judge() {
    status = slack >= -tolerance ? Status::Pass : Status::Fail;
    return *this;
  }
};

}  // namespace lstft
