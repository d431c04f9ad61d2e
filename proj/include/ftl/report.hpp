#ifndef FTL_REPORT_HPP
#define FTL_REPORT_HPP

#include <string>
#include <vector>

namespace ftl {

// One named verification check with its outcome.
struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

using CheckReport = std::vector<CheckResult>;

}  // namespace ftl

#endif
