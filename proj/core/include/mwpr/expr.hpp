#pragma once

// Equation front-end: lexing, infix -> postfix conversion, numeral
// normalization and expression-tree construction.

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mwpr {

enum class Operator : char {
  Add = '+',
  Sub = '-',
  Mul = '*',
  Div = '/',
  Pow = '^',
};

inline constexpr Operator kOperators[] = {Operator::Add, Operator::Sub,
                                          Operator::Mul, Operator::Div,
                                          Operator::Pow};

constexpr char symbol(Operator op) noexcept { return static_cast<char>(op); }
std::optional<Operator> operator_from_symbol(char c) noexcept;

enum class TokenKind {
  Number,
  Variable,
  Constant,  // the <CONSTANT> placeholder, produced by normalize()
  Operator,
  LeftParen,
  RightParen,
};

inline constexpr std::string_view kConstantPlaceholder = "<CONSTANT>";

struct Token {
  TokenKind kind = TokenKind::Number;
  std::string lexeme;
  double value = 0.0;  // Number only
  Operator op = Operator::Add;  // Operator only
  int var_index = -1;  // Variable only

  static Token number(double value, std::string lexeme = {});
  static Token variable(int index);
  static Token constant();
  static Token make_operator(Operator op);
  static Token left_paren();
  static Token right_paren();

  bool is_operand() const noexcept {
    return kind == TokenKind::Number || kind == TokenKind::Variable ||
           kind == TokenKind::Constant;
  }

  friend bool operator==(const Token&, const Token&) = default;
};

/// Space-joined rendering, e.g. "N0 N1 <CONSTANT> * +".
std::string to_string(std::span<const Token> tokens);

/// Per-run state for numeral normalization. `consumed` is sized lazily.
struct NormalizationContext {
  std::vector<double> text_numbers;
  std::vector<bool> consumed;

  explicit NormalizationContext(std::vector<double> numbers = {})
      : text_numbers(std::move(numbers)),
        consumed(text_numbers.size(), false) {}

  void reset() { consumed.assign(text_numbers.size(), false); }
};

/// Relative tolerance 1e-6 with an absolute floor of 1e-9.
bool numbers_equal(double a, double b) noexcept;

enum class NodeKind { Operator, Variable, Constant };

struct Node {
  NodeKind kind = NodeKind::Constant;
  Operator op = Operator::Add;
  int var_index = -1;
  int left = -1;
  int right = -1;

  friend bool operator==(const Node&, const Node&) = default;
};

/// Binary expression tree. Nodes live in a flat vector laid out in
/// postorder; the root is always the last node.
class ExprTree {
 public:
  static ExprTree variable(int index);
  static ExprTree constant();
  static ExprTree combine(Operator op, const ExprTree& left,
                          const ExprTree& right);

  const std::vector<Node>& nodes() const noexcept { return nodes_; }
  const Node& node(int index) const { return nodes_.at(index); }
  int root_index() const noexcept {
    return static_cast<int>(nodes_.size()) - 1;
  }
  const Node& root() const { return nodes_.back(); }
  std::size_t size() const noexcept { return nodes_.size(); }
  std::size_t operator_count() const noexcept;
  std::size_t depth() const;

  /// Node indices in postorder, found by walking from the root.
  std::vector<int> postorder_indices() const;
  /// Postorder traversal rendered back to tokens (Variable / Constant /
  /// Operator only).
  std::vector<Token> postorder_tokens() const;
  /// S-expression form, e.g. "(+ V0 (* V1 <CONSTANT>))".
  std::string to_sexpr() const;

  friend bool operator==(const ExprTree&, const ExprTree&) = default;

 private:
  friend ExprTree build_tree(std::span<const Token> postfix);
  ExprTree() = default;

  std::vector<Node> nodes_;
};

std::vector<Token> tokenize(std::string_view equation);

/// Drops a lone unknown ("x = 5 + 6" -> "5 + 6"). Input without '=' is
/// returned unchanged.
std::string strip_unknown(std::string_view equation);

/// Operator-precedence conversion. ^ binds tightest and is
/// right-associative; * / and + - are left-associative.
std::vector<Token> to_postfix(std::span<const Token> tokens);

/// Numerals matching the first unconsumed text number become variables;
/// the rest become the constant placeholder.
std::vector<Token> normalize(std::span<const Token> tokens,
                             NormalizationContext& ctx);

ExprTree build_tree(std::span<const Token> postfix);

struct ParsedEquation {
  std::vector<Token> postfix;  // normalized
  ExprTree tree;
};

/// strip_unknown -> tokenize -> to_postfix -> normalize -> build_tree.
/// Errors carry the failing stage name.
ParsedEquation parse_equation(std::string_view equation,
                              std::span<const double> text_numbers);

struct MWPRecord;

/// parse_equation over a record; errors are annotated with the record id.
ExprTree parse_problem(const MWPRecord& record);

}  // namespace mwpr
