#pragma once

#include <cstdint>
#include <functional>
#include <optional>

namespace fraclab {

/// Reaction term f(u) with its regularity metadata.
class Nonlinearity {
 public:
  enum class Kind { CubicBistable, Linear, Tabulated };

  /// f(u) = u - u^3. Nonincreasing on [-1, -1+delta] and [1-delta, 1]
  /// exactly when delta <= 1 - 1/sqrt(3); larger declarations are rejected.
  static Nonlinearity cubic_bistable(double flat_delta = 0.4);
  static Nonlinearity linear(double slope, double intercept);
  /// Derivatives fall back to central differences; the declared Lipschitz
  /// constant is spot-checked on 1000 random pairs of [range_lo, range_hi].
  static Nonlinearity tabulated(std::function<double(double)> f, double lipschitz_const,
                                double range_lo = -1.5, double range_hi = 1.5,
                                std::optional<double> flat_delta = std::nullopt);

  double operator()(double u) const;
  double derivative(double u) const;

  Kind kind() const { return kind_; }
  std::optional<double> lipschitz() const { return lipschitz_; }
  std::optional<double> flat_delta() const { return flat_delta_; }

 private:
  Kind kind_ = Kind::Linear;
  double slope_ = 0.0, intercept_ = 0.0;
  std::function<double(double)> f_;
  std::optional<double> lipschitz_;
  std::optional<double> flat_delta_;
};

}  // namespace fraclab
