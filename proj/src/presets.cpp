#include "bclab/presets.hpp"

#include "bclab/error.hpp"

namespace bclab {

const std::vector<PresetInfo>& preset_registry() {
  static const std::vector<PresetInfo> registry{
      {"paper_s3", "finite_static",
       "X uniform on {1,2,3}; odd n -> {X != 1}, even n -> {X != 2}"},
      {"power_law", "independent", "independent, p_n = 1/(n+1)^2"},
      {"fair_coin", "independent", "independent, p_n = 1/2"},
      {"symmetric", "markov", "two-state chain, initial (0.5, 0.5), P(0->1) = P(1->0) = 0.2"},
  };
  return registry;
}

std::shared_ptr<const FiniteStaticModel> paper_s3_model() {
  auto space = make_finite_space({{"1", 1.0 / 3.0}, {"2", 1.0 / 3.0}, {"3", 1.0 / 3.0}});
  auto not_one = Event::make(space, {1, 2});
  auto not_two = Event::make(space, {0, 2});
  return std::make_shared<const FiniteStaticModel>(space, std::vector<Event>{},
                                                   std::vector<Event>{not_one, not_two});
}

ModelPtr make_preset(std::string_view family, std::string_view name) {
  for (const auto& info : preset_registry()) {
    if (info.name != name) continue;
    if (!family.empty() && info.family != family) {
      throw Error(ErrorCode::ValueError,
                  "preset '" + std::string(name) + "' belongs to family '" + info.family + "'");
    }
    if (name == "paper_s3") return paper_s3_model();
    if (name == "power_law") return std::make_shared<const IndependentModel>(PowerMarginal{1.0, 2.0, 1.0});
    if (name == "fair_coin") return std::make_shared<const IndependentModel>(ConstantMarginal{0.5});
    if (name == "symmetric") {
      return std::make_shared<const TwoStateMarkovModel>(TwoStateMarkovModel::Vector{0.5, 0.5},
                                                         TwoStateMarkovModel::Matrix{0.8, 0.2, 0.2, 0.8});
    }
  }
  throw Error(ErrorCode::ValueError, "unknown preset '" + std::string(name) + "'");
}

}  // namespace bclab
