#include "fraclab/report.hpp"

namespace fraclab {

const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass:
      return "PASS";
    case CheckStatus::Fail:
      return "FAIL";
    case CheckStatus::PremiseFail:
      return "PREMISE-FAIL";
    case CheckStatus::Degenerate:
      return "DEGENERATE";
  }
  return "UNKNOWN";
}

double VerificationReport::metric_or(const std::string& name, double fallback) const {
  for (const auto& [k, v] : metrics)
    if (k == name) return v;
  return fallback;
}

void VerificationReport::add_witness(std::string label, Eigen::VectorXd point, double value) {
  witnesses.push_back(Witness{std::move(label), std::move(point), value});
}

}  // namespace fraclab
