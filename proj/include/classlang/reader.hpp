#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "classlang/ast.hpp"

namespace classlang {

enum class TokenKind {
  lparen,
  rparen,
  dot,
  identifier,
  number_literal,
  string_literal,
  boolean_literal,
};

struct Token {
  TokenKind kind;
  std::string text;  // source slice; for strings, the quoted source text
  SourcePos pos;
  std::size_t offset = 0;
};

// Comments run from ';' to end of line and are dropped. '[' and ']' are
// parentheses. A '.' is a dot token when it stands alone, or when it prefixes
// an identifier (".sum" reads as ". sum").
std::vector<Token> tokenize(std::string_view source);

// s-expression tree built from tokens, before level-checked parsing.
struct Datum {
  enum class Kind { atom, list };
  Kind kind = Kind::atom;
  Token token;                // atoms
  std::vector<Datum> items;   // lists
  char open = '(';            // lists: '(' or '['
  SourcePos pos;

  bool is_atom(TokenKind k) const { return kind == Kind::atom && token.kind == k; }
  bool is_identifier(std::string_view name) const {
    return is_atom(TokenKind::identifier) && token.text == name;
  }
  bool is_dot() const { return is_atom(TokenKind::dot); }
};

std::vector<Datum> read_data(const std::vector<Token>& tokens);

// `#lang class/N` on the first non-blank line; returns N when present.
std::optional<int> lang_header_level(std::string_view source);
// Replaces a recognised `#lang` line with blanks, keeping positions intact.
std::string strip_lang_header(std::string_view source);

Program parse_program(const std::vector<Token>& tokens, LanguageLevel level);

// Convenience: strip header, tokenize and parse.
Program parse_source(std::string_view source, LanguageLevel level);

// Parses a single expression (no definitions), as used in method bodies.
ExprPtr parse_expression(std::string_view source, LanguageLevel level, bool in_method = false);

// Expands a parenthesized group containing standalone dots:
// (e . m a ... . n b ...) => (send (send e m a ...) n b ...).
// The caller has already checked that dot notation is allowed.
ExprPtr desugar_dot(const Datum& form, LanguageLevel level, bool in_method);

// Source text using explicit `send`, which re-parses at any level to an
// identical tree.
std::string to_source(const Expr& e);
std::string to_source(const Program& program);

}  // namespace classlang
