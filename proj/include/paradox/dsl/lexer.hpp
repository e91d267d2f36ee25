// Copyright 2026 The paradox-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cctype>
#include <charconv>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace paradox::dsl {

enum class ErrorKind { kLexical, kSyntax };

/// First error in a source text. Not a physics error: the CLI reports it
/// as a usage problem.
class ParseError : public std::runtime_error {
 public:
  ParseError(ErrorKind kind, int line, int column, std::string message, std::set<std::string> expected = {})
      : std::runtime_error(format(kind, line, column, message, expected)),
        kind_(kind),
        line_(line),
        column_(column),
        message_(std::move(message)),
        expected_(std::move(expected)) {}

  ErrorKind kind() const { return kind_; }
  int line() const { return line_; }
  int column() const { return column_; }
  const std::string& message() const { return message_; }
  const std::set<std::string>& expected() const { return expected_; }

 private:
  static std::string format(ErrorKind kind, int line, int column, const std::string& message,
                            const std::set<std::string>& expected) {
    std::string s = std::string(kind == ErrorKind::kLexical ? "lexical" : "syntax") + " error at line " +
                    std::to_string(line) + ", column " + std::to_string(column) + ": " + message;
    if (!expected.empty()) {
      s += " (expected ";
      bool first = true;
      for (const auto& e : expected) {
        s += (first ? "" : ", ") + e;
        first = false;
      }
      s += ")";
    }
    return s;
  }

  ErrorKind kind_;
  int line_;
  int column_;
  std::string message_;
  std::set<std::string> expected_;
};

enum class TokenKind { kKeyword, kIdent, kNumber, kSymbol };

struct Token {
  TokenKind kind = TokenKind::kIdent;
  std::string text;
  int line = 0;
  int column = 0;
};

/// The tokens of one non-blank source line.
struct SourceLine {
  int number = 0;
  std::vector<Token> tokens;
};

inline const std::set<std::string>& block_keywords() {
  static const std::set<std::string> k{"THEORY", "STATE", "AGENTS", "EVENTS", "MODEL", "TRUST", "SELECT", "QUERY"};
  return k;
}

/// Words that structure a line and cannot name anything.
inline const std::set<std::string>& reserved_words() {
  static const std::set<std::string> k{"system", "init",    "time",    "memory", "measures", "lab",
                                       "setting", "basis", "outcome", "models", "update",   "by"};
  return k;
}

inline std::string describe(const Token& t) {
  switch (t.kind) {
    case TokenKind::kKeyword:
      return "keyword " + t.text;
    case TokenKind::kNumber:
      return "number " + t.text;
    case TokenKind::kSymbol:
      return "'" + t.text + "'";
    default:
      return "identifier '" + t.text + "'";
  }
}

namespace detail {

inline bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
inline bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

inline void check_number(std::string_view digits, int line, int column) {
  long long v = 0;
  auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
  if (ec != std::errc() || p != digits.data() + digits.size() || v > 1'000'000'000) {
    throw ParseError(ErrorKind::kLexical, line, column, "number '" + std::string(digits) + "' is too large");
  }
}

}  // namespace detail

/// Splits `source` into lines of tokens. `#` starts a comment; blank lines
/// are dropped. Identifiers may contain '-' between word characters and may
/// end in '~'.
inline std::vector<SourceLine> lex(std::string_view source) {
  std::vector<SourceLine> out;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= source.size()) {
    std::size_t end = source.find('\n', pos);
    if (end == std::string_view::npos) end = source.size();
    std::string_view text = source.substr(pos, end - pos);
    ++line_no;
    SourceLine line{line_no, {}};
    std::size_t i = 0;
    while (i < text.size()) {
      char c = text[i];
      int col = static_cast<int>(i) + 1;
      if (c == '#') break;
      if (c == ' ' || c == '\t' || c == '\r') {
        ++i;
        continue;
      }
      if (detail::ident_start(c)) {
        std::size_t j = i + 1;
        while (j < text.size()) {
          if (detail::ident_char(text[j])) {
            ++j;
          } else if (text[j] == '-' && j + 1 < text.size() && detail::ident_char(text[j + 1])) {
            j += 2;
          } else {
            break;
          }
        }
        if (j < text.size() && text[j] == '~') ++j;
        std::string word(text.substr(i, j - i));
        auto kind = block_keywords().count(word) ? TokenKind::kKeyword : TokenKind::kIdent;
        line.tokens.push_back({kind, word, line_no, col});
        i = j;
        continue;
      }
      if (std::isdigit(static_cast<unsigned char>(c))) {
        std::size_t j = i;
        while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
        detail::check_number(text.substr(i, j - i), line_no, col);
        if (j < text.size() && text[j] == '/') {
          std::size_t k = j + 1;
          while (k < text.size() && std::isdigit(static_cast<unsigned char>(text[k]))) ++k;
          if (k == j + 1) throw ParseError(ErrorKind::kLexical, line_no, col, "fraction without a denominator");
          detail::check_number(text.substr(j + 1, k - j - 1), line_no, col);
          j = k;
        }
        if (j < text.size() && (detail::ident_start(text[j]) || text[j] == '~')) {
          throw ParseError(ErrorKind::kLexical, line_no, col, "malformed number");
        }
        line.tokens.push_back({TokenKind::kNumber, std::string(text.substr(i, j - i)), line_no, col});
        i = j;
        continue;
      }
      if (c == '-' && i + 1 < text.size() && text[i + 1] == '>') {
        line.tokens.push_back({TokenKind::kSymbol, "->", line_no, col});
        i += 2;
        continue;
      }
      if (text.substr(i, 3) == "\xE2\x8A\x95") {  // U+2295 circled plus
        line.tokens.push_back({TokenKind::kSymbol, "^", line_no, col});
        i += 3;
        continue;
      }
      if (c == '=' || c == '@' || c == ',' || c == '^') {
        line.tokens.push_back({TokenKind::kSymbol, std::string(1, c), line_no, col});
        ++i;
        continue;
      }
      throw ParseError(ErrorKind::kLexical, line_no, col, "unexpected character '" + std::string(1, c) + "'");
    }
    if (!line.tokens.empty()) out.push_back(std::move(line));
    pos = end + 1;
  }
  return out;
}

}  // namespace paradox::dsl
