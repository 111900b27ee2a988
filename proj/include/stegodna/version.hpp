#pragma once

namespace stegodna {

inline constexpr const char* kToolkitVersion = "0.1.0";

}  // namespace stegodna
