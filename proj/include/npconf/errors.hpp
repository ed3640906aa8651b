#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace npconf {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A net, marking or model refers to something that does not exist or breaks
/// a structural invariant.
struct StructuralError : Error {
  using Error::Error;
};

struct MultisetUnderflow : Error {
  using Error::Error;
};

struct NotEnabledError : Error {
  NotEnabledError(std::string transition, std::vector<std::string> missing)
      : Error(make_message(transition, missing)),
        transition(std::move(transition)),
        missing(std::move(missing)) {}

  std::string transition;
  /// Places (or place:value demands) that are not covered by the marking.
  std::vector<std::string> missing;

 private:
  static std::string make_message(const std::string& t, const std::vector<std::string>& missing) {
    std::string msg = "transition '" + t + "' is not enabled";
    if (!missing.empty()) {
      msg += "; missing:";
      for (const auto& m : missing) msg += " " + m;
    }
    return msg;
  }
};

struct BindingError : Error {
  using Error::Error;
};

struct RosterError : Error {
  explicit RosterError(std::string agent)
      : Error("unknown agent '" + agent + "'"), agent(std::move(agent)) {}
  std::string agent;
};

struct ParseError : Error {
  ParseError(const std::string& message, std::size_t line, std::size_t column)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        line(line),
        column(column) {}
  std::size_t line;
  std::size_t column;
};

struct GenerationError : Error {
  GenerationError(const std::string& message, std::size_t failed, std::size_t requested)
      : Error(message), failed(failed), requested(requested) {}
  std::size_t failed;
  std::size_t requested;
};

}  // namespace npconf
