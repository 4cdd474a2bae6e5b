#pragma once

#include <cstdint>
#include <string>

namespace owm {

enum class Variant { Greedy, SG, OSG };
enum class Engine { Enum, Dist, MC };

// Algorithm parameters. p is read only by the OSG fallback split.
struct AlgoParams {
  double eps = 0.082;
  double delta = 0.445;
  double p = 0.8613;
};

struct RunConfig {
  Variant variant = Variant::SG;
  AlgoParams algo;
  Engine engine = Engine::Dist;
  std::uint64_t seed = 1;
  int replicas = 10000;
};

std::string to_string(Variant v);
std::string to_string(Engine e);
bool variant_from_string(const std::string& s, Variant& out);
bool engine_from_string(const std::string& s, Engine& out);

}  // namespace owm
