#pragma once

namespace meshscore {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace meshscore
