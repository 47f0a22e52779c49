#pragma once

#include "hamcap/json_io.hpp"

namespace hamcap {

// CLI entry points; exit-code contract: 0 pass, 1 assertion failure,
// 2 config / bracket error.
int cmd_profiles(const RunConfig& cfg);
int cmd_orbits(const RunConfig& cfg);
int cmd_capacity(const RunConfig& cfg);
int cmd_verify(const RunConfig& cfg);

}  // namespace hamcap
