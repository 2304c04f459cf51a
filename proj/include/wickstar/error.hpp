#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace wickstar {

// Error categories double as CLI exit codes.
enum class errc {
  usage = 2,      // bad command line or mismatched shapes
  spec_file = 3,  // unreadable or ill-formed manifold spec file
  syntax = 4,     // expression parse error
  domain = 5,     // log of series with constant term != 1, division by a
                  // series with zero constant term, degenerate metric
  budget = 6,     // requested output exceeds the trusted truncation region,
                  // or a solve ran out of equations at the given caps
  internal = 7,   // a constructed object failed its own defining equation;
                  // indicates a bug, never a user error
};

class error : public std::runtime_error {
public:
  error(errc c, std::string msg) : std::runtime_error(std::move(msg)), code_(c) {}
  errc code() const noexcept { return code_; }

private:
  errc code_;
};

[[noreturn]] inline void fail(errc c, const std::string& msg) {
  throw error(c, msg);
}

inline void require(bool ok, errc c, const std::string& msg) {
  if (!ok) fail(c, msg);
}

}  // namespace wickstar
