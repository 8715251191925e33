#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qosc/qcore.hpp"

namespace qosc {

struct VerifyContext {
  QParameters params;
  double b;
  std::optional<double> b_prime;
  Tolerance tol;
};

struct CheckOutcome {
  double measured = 0.0;
  double tolerance = 0.0;
  std::string detail;

  bool pass() const { return measured <= tolerance; }
};

struct Check {
  std::string name;
  std::function<CheckOutcome(const VerifyContext&)> run;
};

/// Invariant checks run by `qosc verify`, in report order. New checks
/// register here.
const std::vector<Check>& verification_checks();

struct CheckResult {
  std::string name;
  CheckOutcome outcome;
  bool errored = false;  // the check threw; detail holds the message
};

std::vector<CheckResult> run_verification(const VerifyContext& ctx);

}  // namespace qosc
