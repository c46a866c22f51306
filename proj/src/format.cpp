#include "ckn/format.hpp"

#include <cstdio>

namespace ckn {

std::string format_double17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

} // namespace ckn
