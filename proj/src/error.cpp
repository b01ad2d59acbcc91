#include "volkit/error.hpp"

namespace volkit {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::MalformedRow: return "MalformedRow";
    case ErrorKind::DuplicateDate: return "DuplicateDate";
    case ErrorKind::NonPositivePrice: return "NonPositivePrice";
    case ErrorKind::CrossedQuote: return "CrossedQuote";
    case ErrorKind::NegativeOpenInterest: return "NegativeOpenInterest";
    case ErrorKind::ExpiryBeforeQuote: return "ExpiryBeforeQuote";
    case ErrorKind::DuplicateQuote: return "DuplicateQuote";
    case ErrorKind::EmptyWindow: return "EmptyWindow";
    case ErrorKind::InvalidSpec: return "InvalidSpec";
    case ErrorKind::TooFewObservations: return "TooFewObservations";
    case ErrorKind::WindowTooLarge: return "WindowTooLarge";
    case ErrorKind::DegenerateSeries: return "DegenerateSeries";
    case ErrorKind::NoQuotesForDate: return "NoQuotesForDate";
    case ErrorKind::InsufficientDates: return "InsufficientDates";
    case ErrorKind::MissingSpot: return "MissingSpot";
    case ErrorKind::InvalidTransition: return "InvalidTransition";
    case ErrorKind::ReducibleChain: return "ReducibleChain";
    case ErrorKind::ZeroVariance: return "ZeroVariance";
    case ErrorKind::SingularRegression: return "SingularRegression";
    case ErrorKind::NonPositiveVariance: return "NonPositiveVariance";
    case ErrorKind::ExplosiveModel: return "ExplosiveModel";
    case ErrorKind::SingularHessian: return "SingularHessian";
    case ErrorKind::NegativeLR: return "NegativeLR";
  }
  return "Unknown";
}

ErrorCategory category(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ZeroVariance:
    case ErrorKind::SingularRegression:
    case ErrorKind::NonPositiveVariance:
    case ErrorKind::ExplosiveModel:
    case ErrorKind::SingularHessian:
    case ErrorKind::NegativeLR:
      return ErrorCategory::numerical;
    default:
      return ErrorCategory::data;
  }
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

void fail(ErrorKind kind, const std::string& detail) { throw Error(kind, detail); }

}  // namespace volkit
