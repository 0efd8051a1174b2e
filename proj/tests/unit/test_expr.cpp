#include <gtest/gtest.h>

#include <vector>

#include "gtest_helpers.hpp"
#include "mwpr/expr.hpp"
#include "mwpr/record.hpp"
#include "test_support.hpp"

using namespace mwpr;

namespace {

std::string postfix_of(std::string_view infix) {
  return to_string(to_postfix(tokenize(infix)));
}

std::vector<Token> normalized(std::string_view infix, std::vector<double> numbers) {
  NormalizationContext ctx(std::move(numbers));
  return normalize(to_postfix(tokenize(infix)), ctx);
}

// Kind, operator and variable index; ignores lexeme spelling.
bool same_meaning(const Token& a, const Token& b) {
  if (a.kind != b.kind) return false;
  if (a.kind == TokenKind::Operator) return a.op == b.op;
  if (a.kind == TokenKind::Variable) return a.var_index == b.var_index;
  return true;
}

}  // namespace

TEST(Tokenize, SimpleSum) {
  const auto t = tokenize("5 + 6");
  ASSERT_EQ(t.size(), 3u);
  EXPECT_EQ(t[0].kind, TokenKind::Number);
  EXPECT_DOUBLE_EQ(t[0].value, 5.0);
  EXPECT_EQ(t[1].kind, TokenKind::Operator);
  EXPECT_EQ(t[1].op, Operator::Add);
  EXPECT_EQ(t[2].kind, TokenKind::Number);
  EXPECT_DOUBLE_EQ(t[2].value, 6.0);
}

TEST(Tokenize, VariablesAndParens) {
  const auto t = tokenize("(N0 - N1) / N2");
  const std::vector<TokenKind> kinds = {
      TokenKind::LeftParen, TokenKind::Variable,   TokenKind::Operator,
      TokenKind::Variable,  TokenKind::RightParen, TokenKind::Operator,
      TokenKind::Variable};
  ASSERT_EQ(t.size(), kinds.size());
  for (std::size_t i = 0; i < t.size(); ++i) EXPECT_EQ(t[i].kind, kinds[i]) << i;
  EXPECT_EQ(t[1].var_index, 0);
  EXPECT_EQ(t[2].op, Operator::Sub);
  EXPECT_EQ(t[3].var_index, 1);
  EXPECT_EQ(t[5].op, Operator::Div);
  EXPECT_EQ(t[6].var_index, 2);
}

TEST(Tokenize, DoesNotEnforceSyntax) {
  const auto t = tokenize("5 + + 6");
  ASSERT_EQ(t.size(), 4u);
  EXPECT_EQ(t[1].kind, TokenKind::Operator);
  EXPECT_EQ(t[2].kind, TokenKind::Operator);
  EXPECT_MWPR_ERROR(to_postfix(t), ErrorCode::MalformedExpression);
}

TEST(Tokenize, NumberVariableSpelling) {
  const auto t = tokenize("number3*N12");
  ASSERT_EQ(t.size(), 3u);
  EXPECT_EQ(t[0].var_index, 3);
  EXPECT_EQ(t[2].var_index, 12);
}

TEST(Tokenize, DecimalsAndUnaryMinus) {
  const auto t = tokenize("-2.5 * (-.5 - 3)");
  ASSERT_EQ(t.size(), 7u);
  EXPECT_DOUBLE_EQ(t[0].value, -2.5);
  EXPECT_DOUBLE_EQ(t[3].value, -0.5);
  EXPECT_EQ(t[4].kind, TokenKind::Operator);
  EXPECT_DOUBLE_EQ(t[5].value, 3.0);
}

TEST(Tokenize, BinaryMinusAfterOperand) {
  const auto t = tokenize("7-2");
  ASSERT_EQ(t.size(), 3u);
  EXPECT_EQ(t[1].op, Operator::Sub);
}

TEST(Tokenize, Errors) {
  EXPECT_MWPR_ERROR(tokenize(""), ErrorCode::EmptyInput);
  EXPECT_MWPR_ERROR(tokenize("   "), ErrorCode::EmptyInput);
  EXPECT_MWPR_ERROR(tokenize("5 + y"), ErrorCode::UnknownCharacter);
  EXPECT_MWPR_ERROR(tokenize("5 % 2"), ErrorCode::UnknownCharacter);
  EXPECT_MWPR_ERROR(tokenize("1.2.3 + 4"), ErrorCode::MalformedNumber);
  EXPECT_MWPR_ERROR(tokenize(". + 4"), ErrorCode::MalformedNumber);
}

TEST(StripUnknown, LoneUnknownEitherSide) {
  EXPECT_EQ(strip_unknown("x = 5 + 6"), "5 + 6");
  EXPECT_EQ(strip_unknown("5 + 6 = x"), "5 + 6");
  EXPECT_EQ(strip_unknown("N0 + N1"), "N0 + N1");
}

TEST(StripUnknown, Unsupported) {
  EXPECT_MWPR_ERROR(strip_unknown("N0 + x = N1 * x"), ErrorCode::UnsupportedEquationForm);
  EXPECT_MWPR_ERROR(strip_unknown("x = y = 5"), ErrorCode::UnsupportedEquationForm);
  EXPECT_MWPR_ERROR(strip_unknown("x = y"), ErrorCode::UnsupportedEquationForm);
}

TEST(ToPostfix, Precedence) {
  EXPECT_EQ(postfix_of("N0 + N1 * N2"), "N0 N1 N2 * +");
  EXPECT_EQ(postfix_of("(N0 + N1) * N2"), "N0 N1 + N2 *");
  EXPECT_EQ(postfix_of("N0 - N1 - N2"), "N0 N1 - N2 -");
}

TEST(ToPostfix, PowerIsRightAssociativeAndTightest) {
  EXPECT_EQ(postfix_of("N0 ^ N1 ^ N2"), "N0 N1 N2 ^ ^");
  EXPECT_EQ(postfix_of("N0 * N1 ^ N2"), "N0 N1 N2 ^ *");
  EXPECT_EQ(postfix_of("N0 / N1 / N2"), "N0 N1 / N2 /");
}

TEST(ToPostfix, Errors) {
  EXPECT_MWPR_ERROR(to_postfix(tokenize("(N0 + N1")), ErrorCode::MismatchedParentheses);
  EXPECT_MWPR_ERROR(to_postfix(tokenize("N0 + N1)")), ErrorCode::MismatchedParentheses);
  EXPECT_MWPR_ERROR(to_postfix(tokenize("N0 +")), ErrorCode::MalformedExpression);
  EXPECT_MWPR_ERROR(to_postfix(tokenize("* N0")), ErrorCode::MalformedExpression);
  EXPECT_MWPR_ERROR(to_postfix(tokenize("N0 N1")), ErrorCode::MalformedExpression);
  EXPECT_MWPR_ERROR(to_postfix(tokenize("()")), ErrorCode::MalformedExpression);
  EXPECT_MWPR_ERROR(to_postfix(std::vector<Token>{}), ErrorCode::EmptyInput);
}

TEST(Normalize, TextNumbersBecomeVariables) {
  const auto t = normalized("5 + 6", {5, 6});
  EXPECT_EQ(to_string(t), "N0 N1 +");
  EXPECT_EQ(t[0].kind, TokenKind::Variable);
  EXPECT_EQ(t[1].var_index, 1);
}

TEST(Normalize, FirstUnconsumedRule) {
  const auto t = normalized("5 + 2 * 2", {5, 2});
  ASSERT_EQ(t.size(), 5u);
  EXPECT_EQ(t[0].var_index, 0);
  EXPECT_EQ(t[1].var_index, 1);
  EXPECT_EQ(t[2].kind, TokenKind::Constant);
  EXPECT_EQ(to_string(t), "N0 N1 <CONSTANT> * +");
}

TEST(Normalize, RepeatedTextNumbersMapInOrder) {
  EXPECT_EQ(to_string(normalized("2 * 2", {2, 2})), "N0 N1 *");
}

TEST(Normalize, NoTextNumbers) {
  const auto t = normalized("3.14 * N0", {});
  EXPECT_EQ(t[0].kind, TokenKind::Constant);
  EXPECT_EQ(t[1].kind, TokenKind::Variable);
}

TEST(Normalize, ToleranceIsRelative) {
  EXPECT_EQ(to_string(normalized("1000000.0001", {1000000})), "N0");
  EXPECT_EQ(to_string(normalized("0.5", {0.5000001})), "N0");
  EXPECT_EQ(to_string(normalized("0.5", {0.51})), "<CONSTANT>");
}

TEST(Normalize, Idempotent) {
  NormalizationContext ctx({5, 6, 2});
  const auto once = normalize(to_postfix(tokenize("5 + (6 * 2 - 2)")), ctx);
  NormalizationContext ctx2({5, 6, 2});
  const auto twice = normalize(once, ctx2);
  EXPECT_EQ(once, twice);
}

TEST(BuildTree, Examples) {
  const std::vector<Token> sum = {Token::variable(0), Token::variable(1),
                                  Token::make_operator(Operator::Add)};
  EXPECT_EQ(build_tree(sum).to_sexpr(), "(+ V0 V1)");

  const std::vector<Token> nested = {
      Token::variable(0), Token::variable(1), Token::variable(2),
      Token::make_operator(Operator::Mul), Token::make_operator(Operator::Add)};
  EXPECT_EQ(build_tree(nested).to_sexpr(), "(+ V0 (* V1 V2))");
}

TEST(BuildTree, Errors) {
  EXPECT_MWPR_ERROR(build_tree(std::vector<Token>{Token::variable(0),
                                                  Token::make_operator(Operator::Add)}),
                    ErrorCode::StackUnderflow);
  EXPECT_MWPR_ERROR(build_tree(std::vector<Token>{Token::variable(0), Token::variable(1)}),
                    ErrorCode::LeftoverOperands);
  EXPECT_MWPR_ERROR(build_tree(std::vector<Token>{}), ErrorCode::EmptyInput);
  EXPECT_MWPR_ERROR(build_tree(std::vector<Token>{Token::number(3)}),
                    ErrorCode::MalformedExpression);
}

TEST(ParseProblem, JohnAndMary) {
  const auto r = make_record(
      "q1", "John had 5 apples, and Mary had 6 oranges. Find the total number of fruits",
      "x = 5 + 6");
  EXPECT_EQ(r.text_numbers, (std::vector<double>{5, 6}));
  EXPECT_EQ(parse_problem(r).to_sexpr(), "(+ V0 V1)");
}

TEST(ParseProblem, SingleLeaf) {
  MWPRecord r;
  r.id = "leaf";
  r.equation = "N0";
  r.text_numbers = {7};
  const ExprTree t = parse_problem(r);
  EXPECT_EQ(t.size(), 1u);
  EXPECT_EQ(t.root().kind, NodeKind::Variable);
  EXPECT_EQ(t.root().var_index, 0);
}

TEST(ParseProblem, ExtraOperators) {
  MWPRecord r;
  r.id = "q2";
  r.equation = "x = 5 + (6 * 2 - 2)";
  r.text_numbers = {5, 6, 2};
  EXPECT_EQ(parse_problem(r).to_sexpr(), "(+ V0 (- (* V1 V2) <CONSTANT>))");
}

TEST(ParseProblem, ErrorCarriesRecordStage) {
  MWPRecord r;
  r.id = "bad";
  r.equation = "x = 5 +";
  try {
    parse_problem(r);
    FAIL() << "expected a parse error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MalformedExpression);
    EXPECT_NE(e.stage().find("bad"), std::string::npos);
    EXPECT_NE(e.stage().find("to_postfix"), std::string::npos);
  }
}

TEST(ParseProblem, Deterministic) {
  MWPRecord r;
  r.id = "d";
  r.equation = "x = (3 + 4) * 2 / 7";
  r.text_numbers = {3, 4, 7};
  const ExprTree first = parse_problem(r);
  for (int i = 0; i < 20; ++i) EXPECT_EQ(parse_problem(r), first);
}

TEST(ExprTreeProps, DepthAndOperatorCount) {
  const auto t = ExprTree::combine(
      Operator::Add, ExprTree::variable(0),
      ExprTree::combine(Operator::Mul, ExprTree::variable(1), ExprTree::constant()));
  EXPECT_EQ(t.depth(), 3u);
  EXPECT_EQ(t.operator_count(), 2u);
  EXPECT_EQ(t.size(), 5u);
  EXPECT_EQ(t.to_sexpr(), "(+ V0 (* V1 <CONSTANT>))");
}

// Random trees rendered to infix, parsed back: same postfix, same tree.
TEST(ExprProperties, RandomRoundTrip) {
  Rng rng(1234);
  const std::vector<std::string> constants = {"3.5", "100", "0.25", "-7", "42"};
  for (int i = 0; i < 500; ++i) {
    const ExprTree original = test::random_tree(rng, {});
    const std::string infix = test::render_infix(original, rng, constants);
    SCOPED_TRACE(infix);

    const auto tokens = tokenize(infix);
    const auto postfix = to_postfix(tokens);

    // Operator count preservation.
    std::size_t ops = 0;
    for (const auto& t : tokens) ops += t.kind == TokenKind::Operator;
    NormalizationContext ctx;
    const auto norm = normalize(postfix, ctx);
    const ExprTree rebuilt = build_tree(norm);
    EXPECT_EQ(rebuilt.operator_count(), ops);

    // Postorder of the rebuilt tree equals the normalized postfix.
    const auto post = rebuilt.postorder_tokens();
    ASSERT_EQ(post.size(), norm.size());
    for (std::size_t j = 0; j < post.size(); ++j) EXPECT_EQ(post[j], norm[j]) << j;

    // Full structural round trip.
    EXPECT_EQ(rebuilt, original);

    // Idempotence of normalize.
    NormalizationContext ctx2;
    EXPECT_EQ(normalize(norm, ctx2), norm);
  }
}

// Without numerals the postfix needs no normalization to build a tree.
TEST(ExprProperties, VariableOnlyRoundTripWithoutNormalize) {
  Rng rng(99);
  test::TreeGenOptions opt;
  opt.constant_probability = 0.0;
  for (int i = 0; i < 300; ++i) {
    const ExprTree original = test::random_tree(rng, opt);
    const auto postfix = to_postfix(tokenize(test::render_infix(original, rng, {"1"})));
    const auto post = build_tree(postfix).postorder_tokens();
    ASSERT_EQ(post.size(), postfix.size());
    for (std::size_t j = 0; j < post.size(); ++j) {
      EXPECT_TRUE(same_meaning(post[j], postfix[j])) << j;
    }
  }
}
