#ifndef OEM_ERROR_HPP
#define OEM_ERROR_HPP

#include <stdexcept>
#include <string>

namespace oem {

// Bad or malformed input data (ragged files, non-numeric cells, zero columns).
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// A numerical routine failed to produce an answer.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace oem

#endif  // OEM_ERROR_HPP
