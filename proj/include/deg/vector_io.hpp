#pragma once

#include <string>

#include "deg/hybrid.hpp"

namespace deg {

// HVEC: "HVEC" | u32 count | u32 dim | count*dim f32, little-endian, row-major.

void write_hvec(const std::string &path, const VectorSet &vectors);
VectorSet read_hvec(const std::string &path);

} // namespace deg
