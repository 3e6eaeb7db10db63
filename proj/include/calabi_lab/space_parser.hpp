#pragma once

#include <string>

#include "calabi_lab/model_spaces.hpp"

namespace calab {

// Grammar of --space:
//   space   := product | file | simple
//   simple  := name ':' key '=' value (',' key '=' value)*
//   product := 'product:[' space (';' space)* ']'
//   file    := 'file:' path
// Names: chsc (n, c=1), quadric (n, scale=1), flat (k), random (n, seed=0),
// random-ke (n, seed=0). Errors carry the 0-based offset of the problem.
SpaceDescriptor parse_space(const std::string& text);

}  // namespace calab
