#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "bclab/event_model.hpp"

namespace bclab {

/// p_n = c for all n.
struct ConstantMarginal {
  double c = 0.0;
  friend bool operator==(const ConstantMarginal&, const ConstantMarginal&) = default;
};

/// p_n = c / (n + shift)^alpha.
struct PowerMarginal {
  double c = 1.0;
  double alpha = 2.0;
  double shift = 0.0;
  friend bool operator==(const PowerMarginal&, const PowerMarginal&) = default;
};

/// p_n = c / (n + shift).
struct HarmonicMarginal {
  double c = 1.0;
  double shift = 0.0;
  friend bool operator==(const HarmonicMarginal&, const HarmonicMarginal&) = default;
};

/// p_n = values[n-1] for n <= values.size(), then `tail` forever.
struct ExplicitMarginal {
  std::vector<double> values;
  double tail = 0.0;
  friend bool operator==(const ExplicitMarginal&, const ExplicitMarginal&) = default;
};

/// Closed family of marginal sequences. Each member has an analytic tail sum,
/// which is what makes tail bounds certified; arbitrary callbacks are not
/// accepted.
using MarginalSpec = std::variant<ConstantMarginal, PowerMarginal, HarmonicMarginal, ExplicitMarginal>;

/// Throws ValueError unless every p_n lies in [0, 1].
void validate(const MarginalSpec& spec);

double marginal_value(const MarginalSpec& spec, Index n);

/// Certified upper bound on sum_{n >= tail_start} p_n, or nullopt when the
/// series diverges.
std::optional<double> marginal_tail_sum_upper(const MarginalSpec& spec, Index tail_start);

/// Upper bound on sum_{k >= 0} c (x + k)^(-alpha) for alpha > 1, x > 0: exact
/// summation up to a switch point, then the Euler-Maclaurin expansion cut
/// after the f' term (an upper bound for completely monotone summands).
double power_series_tail_upper(double c, double alpha, double x);

}  // namespace bclab
