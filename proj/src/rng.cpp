#include "bclab/rng.hpp"

namespace bclab {

static_assert(mix64(0) == 0);
static_assert(CounterRng(0).uniform() >= 0.0);

}  // namespace bclab
