#pragma once

#include <stdexcept>
#include <string>

namespace figcap {

// Base class for every error raised by the toolkit. Messages name the
// offending input (file + line, figure id, ...) so the CLI can print them
// verbatim.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace figcap
