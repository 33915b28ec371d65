#pragma once

namespace iotrisk {

inline constexpr const char* kVersion = "1.0.0";

// Identifier of the counter-based generator behind simulate_losses. Recorded
// in every distribution's metadata so results can be reproduced later even if
// the default generator ever changes.
inline constexpr const char* kGeneratorId = "philox4x32-10";

}  // namespace iotrisk
