#pragma once

namespace chebmel {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace chebmel
