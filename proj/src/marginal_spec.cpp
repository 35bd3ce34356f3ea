#include "bclab/marginal_spec.hpp"

#include <cmath>
#include <string>

#include "bclab/error.hpp"
#include "bclab/kernels.hpp"

namespace bclab {

namespace {

constexpr double kEulerMaclaurinSwitch = 1000.0;
// Relative slack covering rounding in the bound's own evaluation.
constexpr double kRoundingSlack = 1e-13;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_probability(double p, const char* what) {
  if (!std::isfinite(p) || p < 0.0 || p > 1.0) {
    throw Error(ErrorCode::ValueError, std::string(what) + " = " + std::to_string(p) + " is not in [0, 1]");
  }
}

void validate_power(double c, double alpha, double shift) {
  if (!std::isfinite(c) || c < 0.0) throw Error(ErrorCode::ValueError, "c must be finite and >= 0");
  if (!std::isfinite(alpha) || alpha < 0.0) throw Error(ErrorCode::ValueError, "alpha must be finite and >= 0");
  if (!std::isfinite(shift) || shift <= -1.0) throw Error(ErrorCode::ValueError, "shift must be > -1");
  require_probability(c / std::pow(1.0 + shift, alpha), "p_1");
}

}  // namespace

double power_series_tail_upper(double c, double alpha, double x) {
  if (c == 0.0) return 0.0;
  kernels::CompensatedSum sum;
  while (x < kEulerMaclaurinSwitch) {
    sum.add(c * std::pow(x, -alpha));
    x += 1.0;
  }
  const double f = c * std::pow(x, -alpha);
  const double integral = c * std::pow(x, 1.0 - alpha) / (alpha - 1.0);
  const double minus_fprime = alpha * f / x;
  sum.add(integral);
  sum.add(f / 2.0);
  sum.add(minus_fprime / 12.0);
  return sum.value() * (1.0 + kRoundingSlack);
}

void validate(const MarginalSpec& spec) {
  std::visit(overloaded{
                 [](const ConstantMarginal& m) { require_probability(m.c, "c"); },
                 [](const PowerMarginal& m) { validate_power(m.c, m.alpha, m.shift); },
                 [](const HarmonicMarginal& m) { validate_power(m.c, 1.0, m.shift); },
                 [](const ExplicitMarginal& m) {
                   for (double v : m.values) require_probability(v, "explicit marginal");
                   require_probability(m.tail, "tail");
                 },
             },
             spec);
}

double marginal_value(const MarginalSpec& spec, Index n) {
  return std::visit(
      overloaded{
          [](const ConstantMarginal& m) { return m.c; },
          [n](const PowerMarginal& m) {
            return m.c * std::pow(static_cast<double>(n) + m.shift, -m.alpha);
          },
          [n](const HarmonicMarginal& m) { return m.c / (static_cast<double>(n) + m.shift); },
          [n](const ExplicitMarginal& m) { return n <= m.values.size() ? m.values[n - 1] : m.tail; },
      },
      spec);
}

std::optional<double> marginal_tail_sum_upper(const MarginalSpec& spec, Index tail_start) {
  const double x = static_cast<double>(tail_start);
  return std::visit(
      overloaded{
          [](const ConstantMarginal& m) -> std::optional<double> {
            if (m.c == 0.0) return 0.0;
            return std::nullopt;
          },
          [x](const PowerMarginal& m) -> std::optional<double> {
            if (m.c == 0.0) return 0.0;
            if (m.alpha <= 1.0) return std::nullopt;
            return power_series_tail_upper(m.c, m.alpha, x + m.shift);
          },
          [](const HarmonicMarginal& m) -> std::optional<double> {
            if (m.c == 0.0) return 0.0;
            return std::nullopt;
          },
          [tail_start](const ExplicitMarginal& m) -> std::optional<double> {
            if (m.tail > 0.0) return std::nullopt;
            kernels::CompensatedSum sum;
            for (Index n = tail_start; n <= m.values.size(); ++n) sum.add(m.values[n - 1]);
            return sum.value();
          },
      },
      spec);
}

}  // namespace bclab
