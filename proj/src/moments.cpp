#include "bclab/moments.hpp"

#include <algorithm>

#include "bclab/error.hpp"
#include "bclab/kernels.hpp"

namespace bclab {

MomentTable moments(const EventSequenceModel& model, Index m_max) {
  if (m_max == 0) throw Error(ErrorCode::IndexOutOfRange, "m_max must be >= 1");
  if (auto len = model.length(); len && m_max > *len) {
    throw Error(ErrorCode::IndexOutOfRange, "m_max exceeds the sequence length");
  }
  MomentTable table;
  table.rows.reserve(m_max);
  std::vector<double> marginals;
  marginals.reserve(m_max);
  std::vector<double> cov_row;
  cov_row.reserve(m_max);
  kernels::CompensatedSum mean;
  kernels::CompensatedSum variance;
  for (Index m = 1; m <= m_max; ++m) {
    const double p = model.marginal(m);
    cov_row.clear();
    for (Index i = 1; i < m; ++i) cov_row.push_back(model.pair(i, m) - marginals[i - 1] * p);
    // Var S_m = Var S_{m-1} + Var 1_{A_m} + 2 sum_{i<m} Cov(1_{A_i}, 1_{A_m})
    variance.add(p * (1.0 - p));
    variance.add(2.0 * kernels::compensated_sum(cov_row));
    marginals.push_back(p);
    mean.add(p);

    MomentRow row;
    row.m = m;
    row.mean = mean.value();
    row.variance = std::max(0.0, variance.value());
    if (row.mean > 0.0) row.ratio = row.variance / (row.mean * row.mean);
    table.rows.push_back(row);
  }
  return table;
}

}  // namespace bclab
