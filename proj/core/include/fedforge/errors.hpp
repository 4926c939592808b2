#pragma once

#include <stdexcept>
#include <string>

namespace fedforge {

// Root of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// transport
class EncodingError : public Error { using Error::Error; };
class FramingError : public Error { using Error::Error; };
class ProtocolError : public Error { using Error::Error; };
class TransportError : public Error { using Error::Error; };
class BindError : public TransportError { using TransportError::TransportError; };
class StartupTimeoutError : public TransportError { using TransportError::TransportError; };
class TransportClosedError : public TransportError { using TransportError::TransportError; };
class ScheduleError : public Error { using Error::Error; };

// Raised by the FL executors; the message carries round and phase context.
class EngineError : public Error {
 public:
  EngineError(int round, int phase, const std::string& what);

  int round() const noexcept { return round_; }
  int phase() const noexcept { return phase_; }

 private:
  int round_;
  int phase_;
};

// launcher
class UsageError : public Error { using Error::Error; };
class LauncherError : public Error { using Error::Error; };
class WatchdogTimeoutError : public LauncherError { using LauncherError::LauncherError; };

// logreg
class ParseError : public Error { using Error::Error; };
class DomainError : public Error { using Error::Error; };
class SplitError : public Error { using Error::Error; };
class PartitionError : public Error { using Error::Error; };
class DivergenceError : public Error { using Error::Error; };
class DecodeError : public Error { using Error::Error; };
class CallbackError : public Error { using Error::Error; };

// paradigm
class ComparisonError : public Error { using Error::Error; };
class SuiteError : public Error { using Error::Error; };

}  // namespace fedforge
