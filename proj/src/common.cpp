#include "rszeta/common.hpp"

#include <cstdio>

namespace rszeta {

std::string fmt15(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  // snprintf honors the C locale; the CLI pins LC_ALL=C, and library users
  // that change the locale would get ',' separators, so normalize here.
  for (char* p = buf; *p; ++p) {
    if (*p == ',') *p = '.';
  }
  return buf;
}

}  // namespace rszeta
