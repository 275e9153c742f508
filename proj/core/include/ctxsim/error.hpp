#pragma once

#include <stdexcept>
#include <string>

namespace ctxsim {

// Raised for malformed inputs and violated data contracts (bad corpus layout,
// mismatched bag sizes, asymmetric matrices, ...). The CLI maps it to exit 2.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw DataError(message);
}

}  // namespace ctxsim
