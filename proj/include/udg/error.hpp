#pragma once

#include <stdexcept>
#include <string>

namespace udg {

enum class ErrorCode {
  duplicate_insert,
  unknown_vertex,
  self_adjacency,
  not_a_root,
  is_a_root,
  same_tree,
  not_isolated,
  disconnected,
  bad_parameter,
  inconsistent_state,
  oracle_guard,
  parse_error,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace udg
