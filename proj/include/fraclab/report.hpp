#pragma once

#include <Eigen/Core>

#include <string>
#include <utility>
#include <vector>

namespace fraclab {

enum class CheckStatus { Pass, Fail, PremiseFail, Degenerate };

const char* to_string(CheckStatus s);

struct Witness {
  std::string label;
  Eigen::VectorXd point;
  double value = 0.0;
};

/// Structured outcome of a principle check. Status is determined solely by
/// the recorded numerics; metrics keep insertion order so serialized
/// reports are bit-reproducible.
struct VerificationReport {
  std::string scenario;
  std::string check;
  CheckStatus status = CheckStatus::Pass;
  std::vector<std::pair<std::string, double>> metrics;
  std::vector<Witness> witnesses;
  std::vector<std::string> notes;
  std::string config_echo;
  double elapsed_seconds = 0.0;

  void metric(std::string name, double value) { metrics.emplace_back(std::move(name), value); }
  double metric_or(const std::string& name, double fallback) const;
  void add_witness(std::string label, Eigen::VectorXd point, double value);

  /// Pass and Degenerate both count as non-failures.
  bool acceptable() const {
    return status == CheckStatus::Pass || status == CheckStatus::Degenerate;
  }
};

}  // namespace fraclab
