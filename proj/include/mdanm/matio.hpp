#pragma once

#include "mdanm/types.hpp"

#include <stdexcept>
#include <string>

namespace mdanm {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Complex matrix text format: header "rows cols", then one row per line of
/// whitespace-separated "re im" pairs, written with round-trippable
/// precision.
void save_matrix(const std::string& path, const CMat& A);
CMat load_matrix(const std::string& path);

/// Shortest decimal representation that round-trips to the same double.
std::string format_double(double x);

}  // namespace mdanm
