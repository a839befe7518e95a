#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace ednr {

/// Exact integer used for losses. Reduction instances push (sum d)^2 * sum r
/// far past 64 bits, so all loss arithmetic goes through this type.
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

using VertexId = std::uint32_t;

enum class ErrorCode {
  Disconnected,
  DuplicateEdge,
  SelfLoop,
  NegativeValue,
  RootDemandPresent,
  VertexOutOfRange,
  NotAGrid,
  ParseError,
  NotSpanning,
  InvalidShape,
  MergeInfeasible,
  ZeroMinDemand,
  CapExceeded,
  BetaAbsent,
  TooLarge,
  WindowViolated,
  NonDivisible,
  NotAPartition,
  Unbalanced,
  RoutingFailed,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Decimal rendering of a rational: "p/q", or "p" when q == 1.
std::string format_rational(const Rational& value);

/// Nearest double; for reporting only.
double to_double(const Rational& value);

}  // namespace ednr
