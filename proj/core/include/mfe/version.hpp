#pragma once

namespace mfe {

const char* version_string();

}  // namespace mfe
