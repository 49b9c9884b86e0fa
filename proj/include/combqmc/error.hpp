#pragma once

#include <stdexcept>
#include <string>

namespace combqmc {

/// Contract violation or unsupported request. The message is the single-line
/// diagnostic shown by the command line front end.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when a dense representation would exceed the configured size cap.
class VolumeTooLarge : public Error {
 public:
  explicit VolumeTooLarge(const std::string& what) : Error(what) {}
};

}  // namespace combqmc
