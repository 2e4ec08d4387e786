#include "icf/fraction.hpp"

namespace icf {

std::string_view to_string(ArgKind k) {
  switch (k) {
    case ArgKind::scalar: return "scalar";
    case ArgKind::vector: return "vector";
    case ArgKind::grid: return "grid";
  }
  return "?";
}

ArgKind arg_kind_from_string(std::string_view s) {
  if (s == "scalar") return ArgKind::scalar;
  if (s == "vector") return ArgKind::vector;
  if (s == "grid") return ArgKind::grid;
  throw ValidationError("unknown arg_kind '" + std::string(s) + "'");
}

std::string_view to_string(Orientation o) {
  return o == Orientation::tail_right ? "tail_right" : "tail_left";
}

Orientation orientation_from_string(std::string_view s) {
  if (s == "tail_right") return Orientation::tail_right;
  if (s == "tail_left") return Orientation::tail_left;
  throw ValidationError("unknown orientation '" + std::string(s) + "'");
}

}  // namespace icf
