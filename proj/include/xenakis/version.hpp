#pragma once

namespace xenakis {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace xenakis
