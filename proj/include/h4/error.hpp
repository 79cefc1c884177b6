#pragma once

#include <stdexcept>
#include <string>

namespace h4 {

/// Raised for every contract violation in the library: malformed input files,
/// invalid frequency tables, unencodable text, out-of-order keystrokes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace h4
