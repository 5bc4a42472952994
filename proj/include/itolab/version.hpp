#pragma once

#define ITOLAB_VERSION_MAJOR 0
#define ITOLAB_VERSION_MINOR 1
#define ITOLAB_VERSION_PATCH 0
#define ITOLAB_VERSION_STRING "0.1.0"

namespace itolab {

inline const char* version() { return ITOLAB_VERSION_STRING; }

}  // namespace itolab
