#pragma once

#include <map>
#include <string>

namespace fbmlab {

/// Outcome of one inequality verification. Verification is one-sided: PASS
/// certifies non-violation within the statistical window, never tightness.
/// `exact` marks comparisons made on a shared sample where the inequality
/// holds deterministically (Jensen-type degenerate cases).
struct CheckResult {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    double se_combined = 0.0;  // 1-sigma combined standard error of the comparison
    bool pass = false;
    bool exact = false;
    std::map<std::string, double> details;
};

}  // namespace fbmlab
