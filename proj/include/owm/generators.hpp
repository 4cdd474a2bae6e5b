#pragma once

#include <cstdint>
#include <string>

#include "owm/instance.hpp"

namespace owm {

// Named instance families. figure1..figure3 and cascade are fixed fixtures;
// worstcase_pair is the classic ratio-1/2 greedy trap; triangular and random are
// sized families, reproducible from the seed.
struct GeneratorSpec {
  std::string family;  // figure1 | figure2 | figure3 | cascade | worstcase_pair |
                       // triangular | random
  int n = 0;           // advertisers (triangular size; random width)
  int m = 0;           // impressions (random only)
  std::string weight_law = "uniform";  // uniform | ints (random only)
  std::uint64_t seed = 1;
};

Instance generate(const GeneratorSpec& spec);

}  // namespace owm
