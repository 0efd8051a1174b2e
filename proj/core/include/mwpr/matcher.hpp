#pragma once

// Structural matching of normalized expression trees.
//
// Two trees match when their postorder streams align position by position:
// operators must carry the same symbol, any variable matches any variable
// and the constant placeholder matches itself. Because every operator is
// binary, that stream also pins down the tree shape, so the stream itself
// (with variable indices erased) is a canonical key for hash bucketing.

#include <compare>
#include <functional>
#include <string>

#include "mwpr/expr.hpp"

namespace mwpr {

struct Signature {
  std::string canonical;  // e.g. "VAR VAR OP:+"

  friend auto operator<=>(const Signature&, const Signature&) = default;
};

bool trees_match(const ExprTree& a, const ExprTree& b);

Signature signature(const ExprTree& tree);

/// Checks the alphabet and the postfix-shape invariants of a signature.
bool is_valid_signature(const std::string& canonical);

}  // namespace mwpr

template <>
struct std::hash<mwpr::Signature> {
  std::size_t operator()(const mwpr::Signature& s) const noexcept {
    return std::hash<std::string>{}(s.canonical);
  }
};
