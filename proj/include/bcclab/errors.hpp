#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace bcclab {

// Invalid arguments are reported with std::invalid_argument. The types below
// cover the remaining failure classes.

/// A configured enumeration or memory limit would be exceeded.
class ResourceLimitError : public std::runtime_error {
public:
  ResourceLimitError(const std::string& what, std::size_t limit)
      : std::runtime_error(what + " (limit " + std::to_string(limit) + ")"), limit_(limit) {}
  std::size_t limit() const noexcept { return limit_; }

private:
  std::size_t limit_;
};

/// Malformed partition text. position() is a 0-based character offset.
class ParseError : public std::invalid_argument {
public:
  ParseError(const std::string& what, std::size_t position)
      : std::invalid_argument(what + " at position " + std::to_string(position)),
        position_(position) {}
  std::size_t position() const noexcept { return position_; }

private:
  std::size_t position_;
};

/// A vertex program broke the BCC(b) bandwidth contract.
class ProtocolViolation : public std::runtime_error {
public:
  ProtocolViolation(const std::string& what, std::uint64_t vertex_id, std::size_t round)
      : std::runtime_error(what + " (vertex id " + std::to_string(vertex_id) + ", round " +
                           std::to_string(round) + ")"),
        vertex_id_(vertex_id), round_(round) {}
  std::uint64_t vertex_id() const noexcept { return vertex_id_; }
  std::size_t round() const noexcept { return round_; }

private:
  std::uint64_t vertex_id_;
  std::size_t round_;
};

/// An operation was called outside its documented precondition.
class PreconditionViolation : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

/// The operation is not defined for this kind of input (e.g. crossing a KT-1 instance).
class UnsupportedOperation : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

/// Two internal routes disagreed; always a bug.
class InternalConsistencyError : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

} // namespace bcclab
