#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "bclab/models.hpp"

namespace bclab {

/// Built-in models reachable from a single name.
///
///   paper_s3    finite_static  X uniform on {1,2,3}; A_{2n-1} = {X != 1},
///                              A_{2n} = {X != 2}. Infinitely many A_n occur
///                              surely, yet no single-index subsequence has a
///                              vanishing Kochen-Stone ratio.
///   power_law   independent    p_n = 1/(n+1)^2, summable.
///   fair_coin   independent    p_n = 1/2.
///   symmetric   markov         start (1/2, 1/2), flip probability 0.2 both ways.
struct PresetInfo {
  std::string name;
  std::string family;
  std::string description;
};

const std::vector<PresetInfo>& preset_registry();

/// Throws ValueError for unknown names or a family/name mismatch (pass an
/// empty family to skip that check).
ModelPtr make_preset(std::string_view family, std::string_view name);

std::shared_ptr<const FiniteStaticModel> paper_s3_model();

}  // namespace bclab
