#pragma once

#include <stdexcept>
#include <string>

namespace concierge {

// Error categories map onto CLI exit codes and HTTP statuses in one place.
enum class ErrorCode {
  kInvalidArgument,  // user error: bad flag, bad field value
  kNotFound,
  kContract,         // precondition on the data violated
  kValidation,       // input file fails its schema
  kIo,
  kInternal,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::string detail = {})
      : std::runtime_error(message), code_(code), detail_(std::move(detail)) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

const char* error_code_name(ErrorCode code);

}  // namespace concierge
