#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <variant>

#include "tricrit/state.hpp"

namespace tricrit::io {

// Pure state:    {"dims":[n1,n2,n3], "amplitudes":[[re,im],...]}
// Density file:  {"dims":[n1,n2,n3], "matrix":[[[re,im],...],...]}   (row-major)
// Complex entries are [re, im] pairs in composite-index order, k fastest.

std::string to_json(const PureState& s);
std::string to_json(const DensityMatrix& rho);

PureState parse_pure_state(std::string_view text);
DensityMatrix parse_density(std::string_view text);

using StateFile = std::variant<PureState, DensityMatrix>;

/// Dispatches on the presence of "amplitudes" or "matrix".
StateFile parse_state_file(std::string_view text);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace tricrit::io
