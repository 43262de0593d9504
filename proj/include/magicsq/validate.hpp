#ifndef MAGICSQ_VALIDATE_HPP
#define MAGICSQ_VALIDATE_HPP

#include <string>
#include <vector>

namespace magicsq {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

// Sub-minute self-check suite: kernel backend equivalence, scaling
// properties, permanent oracle equivalence and bound sandwiches, formula
// pins, exact-count cross checks.
std::vector<CheckResult> run_validation();

}  // namespace magicsq

#endif
