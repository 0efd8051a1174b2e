#include "mwpr/matcher.hpp"

#include <sstream>

namespace mwpr {

bool trees_match(const ExprTree& a, const ExprTree& b) {
  if (a.size() != b.size()) return false;
  const auto pa = a.postorder_indices();
  const auto pb = b.postorder_indices();
  for (std::size_t i = 0; i < pa.size(); ++i) {
    const Node& x = a.node(pa[i]);
    const Node& y = b.node(pb[i]);
    if (x.kind != y.kind) return false;
    if (x.kind == NodeKind::Operator && x.op != y.op) return false;
  }
  return true;
}

Signature signature(const ExprTree& tree) {
  Signature sig;
  sig.canonical.reserve(tree.size() * 5);
  for (int idx : tree.postorder_indices()) {
    if (!sig.canonical.empty()) sig.canonical += ' ';
    const Node& n = tree.node(idx);
    switch (n.kind) {
      case NodeKind::Operator:
        sig.canonical += "OP:";
        sig.canonical += symbol(n.op);
        break;
      case NodeKind::Variable:
        sig.canonical += "VAR";
        break;
      case NodeKind::Constant:
        sig.canonical += "CONST";
        break;
    }
  }
  return sig;
}

bool is_valid_signature(const std::string& canonical) {
  if (canonical.empty() || canonical.front() == ' ' || canonical.back() == ' ' ||
      canonical.find("  ") != std::string::npos) {
    return false;
  }
  std::istringstream in(canonical);
  std::string tok;
  long depth = 0;
  bool any = false;
  while (in >> tok) {
    any = true;
    if (tok == "VAR" || tok == "CONST") {
      ++depth;
    } else if (tok.size() == 4 && tok.compare(0, 3, "OP:") == 0 &&
               operator_from_symbol(tok[3])) {
      if (depth < 2) return false;
      --depth;
    } else {
      return false;
    }
  }
  return any && depth == 1;
}

}  // namespace mwpr
