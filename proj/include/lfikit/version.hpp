#pragma once

namespace lfikit {

// Keep in step with the CMake project version.
inline constexpr const char* kLibraryVersion = "0.1.0";

} // namespace lfikit
