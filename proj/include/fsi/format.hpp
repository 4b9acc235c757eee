#pragma once

#include <cstdio>
#include <string>

namespace fsi {

/// Round-trip decimal representation used in every output file.
inline std::string fmt17(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace fsi
