#include "owm/params.hpp"

namespace owm {

std::string to_string(Variant v) {
  switch (v) {
    case Variant::Greedy:
      return "greedy";
    case Variant::SG:
      return "sg";
    case Variant::OSG:
      return "osg";
  }
  return "sg";
}

std::string to_string(Engine e) {
  switch (e) {
    case Engine::Enum:
      return "enum";
    case Engine::Dist:
      return "dist";
    case Engine::MC:
      return "mc";
  }
  return "dist";
}

bool variant_from_string(const std::string& s, Variant& out) {
  if (s == "greedy") {
    out = Variant::Greedy;
  } else if (s == "sg") {
    out = Variant::SG;
  } else if (s == "osg") {
    out = Variant::OSG;
  } else {
    return false;
  }
  return true;
}

bool engine_from_string(const std::string& s, Engine& out) {
  if (s == "enum") {
    out = Engine::Enum;
  } else if (s == "dist") {
    out = Engine::Dist;
  } else if (s == "mc") {
    out = Engine::MC;
  } else {
    return false;
  }
  return true;
}

}  // namespace owm
