#pragma once

#include <map>
#include <string>
#include <vector>

namespace lambdasim {

// One sampled point of an experiment curve.  Populations are those of the
// Lambda-system basis states; trace records sum of populations (less than 1
// only when the leak channel is enabled).
struct ScanPoint {
  double x = 0.0;
  double pop_g1 = 0.0;
  double pop_g2 = 0.0;
  double pop_e = 0.0;
  double trace = 0.0;
};

using Curve = std::vector<ScanPoint>;

struct ScanResult {
  std::string scan_variable;  // e.g. "duration"
  std::string unit;           // e.g. "us"
  Curve points;               // sorted by x
  std::map<std::string, std::string> metadata;  // resolved configuration
};

// Throws ValidationError unless populations are within [-1e-9, 1+1e-9],
// their sum is <= trace + 1e-9, and points are sorted by x.
void check_scan_invariants(const ScanResult& scan);

}  // namespace lambdasim
