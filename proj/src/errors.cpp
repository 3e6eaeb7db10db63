#include "calabi_lab/errors.hpp"

#include <sstream>

namespace calab {

namespace {
std::string symmetry_message(const std::string& identity, const std::string& worst, double residual) {
  std::ostringstream os;
  os << "symmetry violation (" << identity << "): residual " << residual << " at " << worst;
  return os.str();
}
}  // namespace

SymmetryViolation::SymmetryViolation(std::string identity, std::string worst_index, double residual)
    : Error(symmetry_message(identity, worst_index, residual)),
      identity_(std::move(identity)),
      worst_index_(std::move(worst_index)),
      residual_(residual) {}

ParseError::ParseError(const std::string& message, std::size_t position)
    : Error(message + " (at position " + std::to_string(position) + ")"), position_(position) {}

}  // namespace calab
