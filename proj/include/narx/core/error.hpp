#pragma once

#include <stdexcept>
#include <string>

namespace narx {

/// Broad error categories. The CLI prints the category name on stderr so
/// scripts can branch on it without parsing messages.
enum class ErrorKind {
  Dimension,
  Domain,
  Index,
  Contract,
  Config,
  Format,
  Transfer,
  Ingestion,
  Training,
  Generation,
  Usage,
  FeatureNotEnabled,
  Io,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }
  const char* category() const noexcept { return to_string(kind_); }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

inline void require(bool cond, ErrorKind kind, const std::string& what) {
  if (!cond) throw Error(kind, what);
}

}  // namespace narx
