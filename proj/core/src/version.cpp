#include "mfe/version.hpp"

namespace mfe {

const char* version_string() {
#ifdef MFE_VERSION_STRING
  return MFE_VERSION_STRING;
#else
  return "0.0.0";
#endif
}

}  // namespace mfe
