#pragma once

#include <string>
#include <vector>

#include "qfk/config.hpp"

namespace qfk {

inline constexpr const char* kVersion = "0.1.0";

/// One verified property: the observed value against its target. For
/// two-sided (window) checks the target column carries the upper edge
/// and the window is recorded alongside.
struct CheckRecord {
  std::string check;
  std::string anchor;  // which structural property the check certifies
  double observed = 0.0;
  double target = 0.0;
  bool pass = false;
  bool has_window = false;
  double window_lo = 0.0;
  double window_hi = 0.0;

  static CheckRecord upper(std::string check, std::string anchor, double observed,
                           double target);
  static CheckRecord lower(std::string check, std::string anchor, double observed,
                           double target);
  static CheckRecord window(std::string check, std::string anchor, double observed,
                            double lo, double hi);
};

/// Error-versus-step-size table entry from a convergence run.
struct OrderRow {
  std::string study;
  double h = 0.0;
  double error = 0.0;
  double order = 0.0;  // NaN when not defined at this rung
};

/// Quantity reported without an assertion attached.
struct Observation {
  std::string name;
  double value = 0.0;
};

struct RunReport {
  std::string version = kVersion;
  std::string preset;
  int n = 0, d = 0, num_slices = 0;
  double h = 0.0;
  std::uint64_t seed = 0;
  std::vector<CheckRecord> checks;
  std::vector<OrderRow> orders;
  std::vector<Observation> observations;

  bool all_pass() const;
  std::string to_json() const;  // byte-stable for identical inputs
  std::string to_csv() const;   // check,anchor,observed,target,pass
};

void write_report_files(const RunReport& report, const std::string& out_dir);

}  // namespace qfk
