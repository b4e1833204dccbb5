#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pmfix {

enum class ErrorKind {
  MalformedTable,
  UnknownPoint,
  InvalidSpace,
  NonPositiveRadius,
  NegativeArgument,
  ExpressionDomainError,
  NonPositivePoint,
  SyntaxError,
  EmptyPrefix,
  SamplerExhausted,
  InvalidArgument,
  ParseError,
};

const char* to_string(ErrorKind kind) noexcept;

/// Base of every error raised by the library. The kind is stable and is what
/// the CLI prints after the `error:` prefix.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Parse failure in the expression grammar. `position` is a byte offset into
/// the source; `expected` lists the token classes that would have been legal.
class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t position, std::string expected, const std::string& what)
      : Error(ErrorKind::SyntaxError, what),
        position_(position),
        expected_(std::move(expected)) {}

  std::size_t position() const noexcept { return position_; }
  const std::string& expected() const noexcept { return expected_; }

 private:
  std::size_t position_;
  std::string expected_;
};

}  // namespace pmfix
