#pragma once

#include <stdexcept>
#include <string>

namespace tb {

// Broad classes map onto CLI exit codes: parse errors 2, mathematical
// preconditions 3, internal invariant breaches 4.
enum class ErrorClass { Parse, Precondition, Internal };

class TwistError : public std::runtime_error {
 public:
  TwistError(ErrorClass cls, std::string kind, const std::string& message,
             std::string payload = {})
      : std::runtime_error(kind + ": " + message),
        cls_(cls),
        kind_(std::move(kind)),
        payload_(std::move(payload)) {}

  ErrorClass error_class() const { return cls_; }
  const std::string& kind() const { return kind_; }
  // Extra machine-readable data: the discovered factor of a zero divisor,
  // the failing triple of a cocycle violation, and similar witnesses.
  const std::string& payload() const { return payload_; }

 private:
  ErrorClass cls_;
  std::string kind_;
  std::string payload_;
};

[[noreturn]] inline void fail_parse(const std::string& msg) {
  throw TwistError(ErrorClass::Parse, "parse-error", msg);
}

[[noreturn]] inline void fail_pre(const std::string& kind, const std::string& msg,
                                  std::string payload = {}) {
  throw TwistError(ErrorClass::Precondition, kind, msg, std::move(payload));
}

[[noreturn]] inline void fail_internal(const std::string& kind, const std::string& msg) {
  throw TwistError(ErrorClass::Internal, kind, msg);
}

}  // namespace tb
