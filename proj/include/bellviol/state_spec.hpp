#pragma once

#include <string_view>

#include "bellviol/states.hpp"

namespace bellviol {

// Textual state descriptors:
//   ghz:n=<int>[,alpha=<float>]      alpha defaults to pi/4
//   w:n=<int>
//   mixed:x=<float>,a=<spec>,b=<spec>   x a + (1 - x) b
//   w4noise:x=<float>                 (x/16) I + (1 - x) |W4><W4|
//   file:<path>
// A nested spec may be wrapped in parentheses. Syntax errors throw
// ParseError with the offending position; out-of-range parameters and
// invalid file contents throw ValidationError.
DensityMatrix parse_state_spec(std::string_view text);

}  // namespace bellviol
