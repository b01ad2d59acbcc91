#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace volkit {

enum class ErrorKind {
  // input data / validation
  MalformedRow,
  DuplicateDate,
  NonPositivePrice,
  CrossedQuote,
  NegativeOpenInterest,
  ExpiryBeforeQuote,
  DuplicateQuote,
  EmptyWindow,
  InvalidSpec,
  TooFewObservations,
  WindowTooLarge,
  DegenerateSeries,
  NoQuotesForDate,
  InsufficientDates,
  MissingSpot,
  InvalidTransition,
  ReducibleChain,
  // numerical failures
  ZeroVariance,
  SingularRegression,
  NonPositiveVariance,
  ExplosiveModel,
  SingularHessian,
  NegativeLR,
};

enum class ErrorCategory { data, numerical };

std::string_view to_string(ErrorKind kind);
ErrorCategory category(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);

  [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& detail);

}  // namespace volkit
