#include "mwpr/expr.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>

#include "mwpr/error.hpp"
#include "mwpr/record.hpp"

namespace mwpr {

std::optional<Operator> operator_from_symbol(char c) noexcept {
  switch (c) {
    case '+': return Operator::Add;
    case '-': return Operator::Sub;
    case '*': return Operator::Mul;
    case '/': return Operator::Div;
    case '^': return Operator::Pow;
    default: return std::nullopt;
  }
}

Token Token::number(double value, std::string lexeme) {
  Token t;
  t.kind = TokenKind::Number;
  t.value = value;
  if (lexeme.empty()) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, value);
    lexeme.assign(buf, res.ptr);
  }
  t.lexeme = std::move(lexeme);
  return t;
}

Token Token::variable(int index) {
  Token t;
  t.kind = TokenKind::Variable;
  t.var_index = index;
  t.lexeme = "N" + std::to_string(index);
  return t;
}

Token Token::constant() {
  Token t;
  t.kind = TokenKind::Constant;
  t.lexeme = std::string(kConstantPlaceholder);
  return t;
}

Token Token::make_operator(Operator op) {
  Token t;
  t.kind = TokenKind::Operator;
  t.op = op;
  t.lexeme = std::string(1, symbol(op));
  return t;
}

Token Token::left_paren() {
  Token t;
  t.kind = TokenKind::LeftParen;
  t.lexeme = "(";
  return t;
}

Token Token::right_paren() {
  Token t;
  t.kind = TokenKind::RightParen;
  t.lexeme = ")";
  return t;
}

std::string to_string(std::span<const Token> tokens) {
  std::string out;
  for (const auto& t : tokens) {
    if (!out.empty()) out += ' ';
    out += t.lexeme;
  }
  return out;
}

bool numbers_equal(double a, double b) noexcept {
  const double scale = std::max(std::fabs(a), std::fabs(b));
  return std::fabs(a - b) <= std::max(1e-6 * scale, 1e-9);
}

// ---------------------------------------------------------------------------
// ExprTree

ExprTree ExprTree::variable(int index) {
  ExprTree t;
  t.nodes_.push_back(Node{NodeKind::Variable, Operator::Add, index, -1, -1});
  return t;
}

ExprTree ExprTree::constant() {
  ExprTree t;
  t.nodes_.push_back(Node{NodeKind::Constant, Operator::Add, -1, -1, -1});
  return t;
}

ExprTree ExprTree::combine(Operator op, const ExprTree& left,
                           const ExprTree& right) {
  ExprTree t;
  t.nodes_.reserve(left.size() + right.size() + 1);
  t.nodes_ = left.nodes_;
  const int offset = static_cast<int>(left.size());
  for (Node n : right.nodes_) {
    if (n.left >= 0) n.left += offset;
    if (n.right >= 0) n.right += offset;
    t.nodes_.push_back(n);
  }
  t.nodes_.push_back(Node{NodeKind::Operator, op, -1, left.root_index(),
                          offset + right.root_index()});
  return t;
}

std::size_t ExprTree::operator_count() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(nodes_.begin(), nodes_.end(), [](const Node& n) {
        return n.kind == NodeKind::Operator;
      }));
}

std::size_t ExprTree::depth() const {
  // Children always precede their parent in the flat layout.
  std::vector<std::size_t> d(nodes_.size(), 1);
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const Node& n = nodes_[i];
    if (n.kind == NodeKind::Operator) {
      d[i] = 1 + std::max(d[n.left], d[n.right]);
    }
  }
  return d.empty() ? 0 : d.back();
}

std::vector<int> ExprTree::postorder_indices() const {
  std::vector<int> out;
  out.reserve(nodes_.size());
  if (nodes_.empty()) return out;
  // Iterative postorder: (node, children-visited) pairs.
  std::vector<std::pair<int, bool>> stack{{root_index(), false}};
  while (!stack.empty()) {
    auto [idx, expanded] = stack.back();
    stack.pop_back();
    const Node& n = nodes_[idx];
    if (n.kind != NodeKind::Operator || expanded) {
      out.push_back(idx);
      continue;
    }
    stack.emplace_back(idx, true);
    stack.emplace_back(n.right, false);
    stack.emplace_back(n.left, false);
  }
  return out;
}

std::vector<Token> ExprTree::postorder_tokens() const {
  std::vector<Token> out;
  for (int idx : postorder_indices()) {
    const Node& n = nodes_[idx];
    switch (n.kind) {
      case NodeKind::Operator: out.push_back(Token::make_operator(n.op)); break;
      case NodeKind::Variable: out.push_back(Token::variable(n.var_index)); break;
      case NodeKind::Constant: out.push_back(Token::constant()); break;
    }
  }
  return out;
}

namespace {

void sexpr(const std::vector<Node>& nodes, int idx, std::string& out) {
  const Node& n = nodes[idx];
  switch (n.kind) {
    case NodeKind::Variable:
      out += "V" + std::to_string(n.var_index);
      return;
    case NodeKind::Constant:
      out += kConstantPlaceholder;
      return;
    case NodeKind::Operator:
      out += '(';
      out += symbol(n.op);
      out += ' ';
      sexpr(nodes, n.left, out);
      out += ' ';
      sexpr(nodes, n.right, out);
      out += ')';
      return;
  }
}

}  // namespace

std::string ExprTree::to_sexpr() const {
  std::string out;
  if (!nodes_.empty()) sexpr(nodes_, root_index(), out);
  return out;
}

// ---------------------------------------------------------------------------
// Lexing

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)); }
bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)); }
bool is_alpha(char c) { return std::isalpha(static_cast<unsigned char>(c)); }

bool unary_minus_allowed(const std::vector<Token>& out) {
  return out.empty() || out.back().kind == TokenKind::LeftParen ||
         out.back().kind == TokenKind::Operator;
}

// Length of an `N<k>` / `number<k>` variable starting at `pos`, or 0.
std::size_t variable_length(std::string_view s, std::size_t pos) {
  std::size_t prefix = 0;
  if (s.substr(pos, 6) == "number") {
    prefix = 6;
  } else if (s[pos] == 'N') {
    prefix = 1;
  } else {
    return 0;
  }
  std::size_t end = pos + prefix;
  while (end < s.size() && is_digit(s[end])) ++end;
  if (end == pos + prefix) return 0;
  if (end < s.size() && (is_alpha(s[end]) || s[end] == '_')) return 0;
  return end - pos;
}

bool is_lone_unknown(std::string_view side) {
  if (side.empty()) return false;
  return std::all_of(side.begin(), side.end(), is_alpha);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

}  // namespace

std::vector<Token> tokenize(std::string_view equation) {
  if (trim(equation).empty()) {
    throw Error(ErrorCode::EmptyInput, "equation is empty", "tokenize");
  }
  std::vector<Token> out;
  std::size_t i = 0;
  const std::size_t n = equation.size();
  while (i < n) {
    const char c = equation[i];
    if (is_space(c)) {
      ++i;
      continue;
    }
    const bool negative_literal =
        c == '-' && unary_minus_allowed(out) && i + 1 < n &&
        (is_digit(equation[i + 1]) || equation[i + 1] == '.');
    if (is_digit(c) || c == '.' || negative_literal) {
      const std::size_t start = i;
      if (negative_literal) ++i;
      int dots = 0;
      bool any_digit = false;
      while (i < n && (is_digit(equation[i]) || equation[i] == '.')) {
        if (equation[i] == '.') ++dots;
        else any_digit = true;
        ++i;
      }
      std::string lexeme(equation.substr(start, i - start));
      if (dots > 1 || !any_digit) {
        throw Error(ErrorCode::MalformedNumber,
                    "bad numeral '" + lexeme + "'", "tokenize");
      }
      std::string digits = lexeme;
      const bool neg = digits.front() == '-';
      if (neg) digits.erase(digits.begin());
      if (digits.front() == '.') digits.insert(digits.begin(), '0');
      if (digits.back() == '.') digits.pop_back();
      double value = 0.0;
      auto res =
          std::from_chars(digits.data(), digits.data() + digits.size(), value);
      if (res.ec != std::errc{} || res.ptr != digits.data() + digits.size() ||
          !std::isfinite(value)) {
        throw Error(ErrorCode::MalformedNumber,
                    "bad numeral '" + lexeme + "'", "tokenize");
      }
      out.push_back(Token::number(neg ? -value : value, std::move(lexeme)));
      continue;
    }
    if (auto op = operator_from_symbol(c)) {
      out.push_back(Token::make_operator(*op));
      ++i;
      continue;
    }
    if (c == '(') {
      out.push_back(Token::left_paren());
      ++i;
      continue;
    }
    if (c == ')') {
      out.push_back(Token::right_paren());
      ++i;
      continue;
    }
    if (std::size_t len = variable_length(equation, i); len > 0) {
      const std::size_t prefix = equation[i] == 'N' ? 1 : 6;
      int index = 0;
      std::from_chars(equation.data() + i + prefix, equation.data() + i + len,
                      index);
      Token t = Token::variable(index);
      t.lexeme = std::string(equation.substr(i, len));
      out.push_back(std::move(t));
      i += len;
      continue;
    }
    throw Error(ErrorCode::UnknownCharacter,
                "unexpected '" + std::string(1, c) + "' at offset " +
                    std::to_string(i),
                "tokenize");
  }
  return out;
}

std::string strip_unknown(std::string_view equation) {
  const auto eq = equation.find('=');
  if (eq == std::string_view::npos) return std::string(equation);
  if (equation.find('=', eq + 1) != std::string_view::npos) {
    throw Error(ErrorCode::UnsupportedEquationForm,
                "more than one '=' in '" + std::string(equation) + "'",
                "strip_unknown");
  }
  const auto lhs = trim(equation.substr(0, eq));
  const auto rhs = trim(equation.substr(eq + 1));
  const bool lhs_unknown = is_lone_unknown(lhs);
  const bool rhs_unknown = is_lone_unknown(rhs);
  if (lhs_unknown && !rhs_unknown) return std::string(rhs);
  if (rhs_unknown && !lhs_unknown) return std::string(lhs);
  throw Error(ErrorCode::UnsupportedEquationForm,
              "expected exactly one side to be a lone unknown in '" +
                  std::string(equation) + "'",
              "strip_unknown");
}

// ---------------------------------------------------------------------------
// Infix -> postfix

namespace {

int precedence(Operator op) {
  switch (op) {
    case Operator::Pow: return 3;
    case Operator::Mul:
    case Operator::Div: return 2;
    case Operator::Add:
    case Operator::Sub: return 1;
  }
  return 0;
}

bool right_associative(Operator op) { return op == Operator::Pow; }

}  // namespace

std::vector<Token> to_postfix(std::span<const Token> tokens) {
  constexpr const char* kStage = "to_postfix";
  if (tokens.empty()) {
    throw Error(ErrorCode::EmptyInput, "no tokens", kStage);
  }
  std::vector<Token> out;
  std::vector<Token> ops;
  out.reserve(tokens.size());
  bool expect_operand = true;
  const Token* prev = nullptr;

  for (const Token& t : tokens) {
    switch (t.kind) {
      case TokenKind::Number:
      case TokenKind::Variable:
      case TokenKind::Constant:
        if (!expect_operand) {
          throw Error(ErrorCode::MalformedExpression,
                      "missing operator before '" + t.lexeme + "'", kStage);
        }
        out.push_back(t);
        expect_operand = false;
        break;
      case TokenKind::Operator:
        if (expect_operand) {
          throw Error(ErrorCode::MalformedExpression,
                      "operator '" + t.lexeme + "' is missing its left operand",
                      kStage);
        }
        while (!ops.empty() && ops.back().kind == TokenKind::Operator) {
          const int top = precedence(ops.back().op);
          const int cur = precedence(t.op);
          if (top > cur || (top == cur && !right_associative(t.op))) {
            out.push_back(ops.back());
            ops.pop_back();
          } else {
            break;
          }
        }
        ops.push_back(t);
        expect_operand = true;
        break;
      case TokenKind::LeftParen:
        if (!expect_operand) {
          throw Error(ErrorCode::MalformedExpression,
                      "missing operator before '('", kStage);
        }
        ops.push_back(t);
        break;
      case TokenKind::RightParen: {
        if (expect_operand) {
          const bool empty_parens =
              prev != nullptr && prev->kind == TokenKind::LeftParen;
          throw Error(ErrorCode::MalformedExpression,
                      empty_parens ? "empty parentheses"
                                   : "dangling operator before ')'",
                      kStage);
        }
        bool matched = false;
        while (!ops.empty()) {
          Token top = ops.back();
          ops.pop_back();
          if (top.kind == TokenKind::LeftParen) {
            matched = true;
            break;
          }
          out.push_back(std::move(top));
        }
        if (!matched) {
          throw Error(ErrorCode::MismatchedParentheses, "unmatched ')'",
                      kStage);
        }
        break;
      }
    }
    prev = &t;
  }
  if (expect_operand) {
    throw Error(ErrorCode::MalformedExpression,
                "expression ends with a dangling operator", kStage);
  }
  while (!ops.empty()) {
    if (ops.back().kind == TokenKind::LeftParen) {
      throw Error(ErrorCode::MismatchedParentheses, "unmatched '('", kStage);
    }
    out.push_back(ops.back());
    ops.pop_back();
  }
  return out;
}

// ---------------------------------------------------------------------------
// Normalization and tree construction

std::vector<Token> normalize(std::span<const Token> tokens,
                             NormalizationContext& ctx) {
  if (ctx.consumed.size() != ctx.text_numbers.size()) ctx.reset();
  std::vector<Token> out;
  out.reserve(tokens.size());
  for (const Token& t : tokens) {
    if (t.kind == TokenKind::Variable) {
      out.push_back(Token::variable(t.var_index));
      continue;
    }
    if (t.kind != TokenKind::Number) {
      out.push_back(t);
      continue;
    }
    bool mapped = false;
    for (std::size_t j = 0; j < ctx.text_numbers.size(); ++j) {
      if (!ctx.consumed[j] && numbers_equal(t.value, ctx.text_numbers[j])) {
        ctx.consumed[j] = true;
        out.push_back(Token::variable(static_cast<int>(j)));
        mapped = true;
        break;
      }
    }
    if (!mapped) out.push_back(Token::constant());
  }
  return out;
}

ExprTree build_tree(std::span<const Token> postfix) {
  constexpr const char* kStage = "build_tree";
  if (postfix.empty()) {
    throw Error(ErrorCode::EmptyInput, "empty postfix sequence", kStage);
  }
  ExprTree tree;
  tree.nodes_.reserve(postfix.size());
  std::vector<int> stack;
  for (const Token& t : postfix) {
    Node node;
    switch (t.kind) {
      case TokenKind::Variable:
        node.kind = NodeKind::Variable;
        node.var_index = t.var_index;
        break;
      case TokenKind::Constant:
        node.kind = NodeKind::Constant;
        break;
      case TokenKind::Operator: {
        if (stack.size() < 2) {
          throw Error(ErrorCode::StackUnderflow,
                      "operator '" + t.lexeme + "' needs two operands",
                      kStage);
        }
        node.kind = NodeKind::Operator;
        node.op = t.op;
        node.right = stack.back();
        stack.pop_back();
        node.left = stack.back();
        stack.pop_back();
        break;
      }
      case TokenKind::Number:
        throw Error(ErrorCode::MalformedExpression,
                    "numeral '" + t.lexeme + "' was not normalized", kStage);
      case TokenKind::LeftParen:
      case TokenKind::RightParen:
        throw Error(ErrorCode::MalformedExpression,
                    "parenthesis in postfix input", kStage);
    }
    tree.nodes_.push_back(node);
    stack.push_back(static_cast<int>(tree.nodes_.size()) - 1);
  }
  if (stack.size() != 1) {
    throw Error(ErrorCode::LeftoverOperands,
                std::to_string(stack.size()) + " operands left on the stack",
                kStage);
  }
  return tree;
}

ParsedEquation parse_equation(std::string_view equation,
                              std::span<const double> text_numbers) {
  if (trim(equation).empty()) {
    throw Error(ErrorCode::EmptyInput, "equation is empty", "strip_unknown");
  }
  const std::string expression = strip_unknown(equation);
  const auto infix = tokenize(expression);
  const auto postfix = to_postfix(infix);
  NormalizationContext ctx(
      std::vector<double>(text_numbers.begin(), text_numbers.end()));
  auto normalized = normalize(postfix, ctx);
  auto tree = build_tree(normalized);
  return ParsedEquation{std::move(normalized), std::move(tree)};
}

ExprTree parse_problem(const MWPRecord& record) {
  try {
    return parse_equation(record.equation, record.text_numbers).tree;
  } catch (const Error& e) {
    throw Error(e.code(), e.message(), "record " + record.id + "/" + e.stage());
  }
}

}  // namespace mwpr
