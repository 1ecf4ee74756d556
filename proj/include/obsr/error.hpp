#pragma once

#include <stdexcept>
#include <string>

namespace obsr {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// No element structure could be recovered from the input text.
class UnparseableInput : public Error {
 public:
  using Error::Error;
};

class UnknownBid : public Error {
 public:
  explicit UnknownBid(const std::string& bid) : Error("unknown bid '" + bid + "'"), bid_(bid) {}
  const std::string& bid() const noexcept { return bid_; }

 private:
  std::string bid_;
};

class InvalidRule : public Error {
 public:
  using Error::Error;
};

class MissingK : public Error {
 public:
  explicit MissingK(const std::string& method)
      : Error("method '" + method + "' requires a selection budget k") {}
};

class ProviderUnavailable : public Error {
 public:
  using Error::Error;
};

class MalformedResponse : public Error {
 public:
  using Error::Error;
};

class PreconditionViolated : public Error {
 public:
  using Error::Error;
};

class DegenerateInput : public Error {
 public:
  using Error::Error;
};

class InsufficientData : public Error {
 public:
  using Error::Error;
};

// Invalid user configuration (unknown method, bad flag combination, bad file).
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace obsr
