#pragma once

namespace tablekit {

/// Version of this toolkit.
inline constexpr const char* kToolkitVersion = "0.1.0";

/// Version of the markup format the writer stamps into document declarations.
inline constexpr const char* kFormatVersion = "1.0.0";

}  // namespace tablekit
