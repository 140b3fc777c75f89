#pragma once

#include <cctype>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"

namespace fingen {

/// A permutation word: generator references, cycle literals, products and
/// integer powers.
struct Word {
  enum class Kind { Generator, Cycles, Product, Power };
  Kind kind = Kind::Product;
  std::size_t generator = 0;                      // 1-based, for Generator
  std::vector<std::vector<std::size_t>> cycles;   // 1-based points, for Cycles
  std::vector<Word> factors;                      // Product: all; Power: one
  long long exponent = 1;                         // Power

  std::string to_string() const {
    switch (kind) {
      case Kind::Generator:
        return "g" + std::to_string(generator);
      case Kind::Cycles: {
        if (cycles.empty()) return "()";
        std::string s;
        for (const auto& c : cycles) {
          s += "(";
          for (std::size_t i = 0; i < c.size(); ++i) s += (i ? "," : "") + std::to_string(c[i]);
          s += ")";
        }
        return s;
      }
      case Kind::Product: {
        std::string s;
        for (std::size_t i = 0; i < factors.size(); ++i) s += (i ? "*" : "") + factors[i].to_string();
        return s;
      }
      case Kind::Power: {
        const auto& f = factors.front();
        std::string base = f.kind == Kind::Product && f.factors.size() > 1 ? "(" + f.to_string() + ")" : f.to_string();
        return base + "^" + std::to_string(exponent);
      }
    }
    return {};
  }
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

/// Group construction AST.
struct Expr {
  enum class Kind { Atom, Direct, Wreath, Semidirect, Quotient, Subgroup, Crown, Family };
  Kind kind = Kind::Atom;
  std::string name;                      // atom or family name
  long long param = 0;                   // atom parameter, wreath n, crown k, family t
  std::vector<std::string> flags;        // family options, e.g. "trivial"
  std::vector<ExprPtr> children;
  std::vector<Word> words;               // Quotient / Subgroup
  std::vector<std::vector<Word>> action; // Semidirect: images per acting generator
  std::size_t line = 1, column = 1;

  std::string to_string() const {
    auto list = [](const std::vector<Word>& ws) {
      std::string s;
      for (std::size_t i = 0; i < ws.size(); ++i) s += (i ? "," : "") + ws[i].to_string();
      return s;
    };
    switch (kind) {
      case Kind::Atom:
        if (name == "K4") return name;
        if (name == "PSL2" || name == "PGL2") return name + "(" + std::to_string(param) + ")";
        return name + std::to_string(param);
      case Kind::Direct: {
        std::string s = "D(";
        for (std::size_t i = 0; i < children.size(); ++i) s += (i ? "," : "") + children[i]->to_string();
        return s + ")";
      }
      case Kind::Wreath:
        return "W(" + children[0]->to_string() + "," + std::to_string(param) + ")";
      case Kind::Semidirect: {
        std::string s = "SD(" + children[0]->to_string() + "," + children[1]->to_string() + ",[";
        for (std::size_t i = 0; i < action.size(); ++i)
          s += (i ? ";" : "") + std::string("g") + std::to_string(i + 1) + "->[" + list(action[i]) + "]";
        return s + "])";
      }
      case Kind::Quotient:
        return "Q(" + children[0]->to_string() + ";" + list(words) + ")";
      case Kind::Subgroup:
        return "SUB(" + children[0]->to_string() + ";" + list(words) + ")";
      case Kind::Crown:
        return "CROWN(" + children[0]->to_string() + "," + std::to_string(param) + ")";
      case Kind::Family: {
        std::string s = name;
        if (name == "EX2A") return s;
        s += "(" + std::to_string(param);
        for (const auto& f : flags) s += "," + f;
        return s + ")";
      }
    }
    return {};
  }
};

namespace detail {

class Parser {
 public:
  explicit Parser(std::string_view text, std::size_t first_line = 1) : text_(text), line_(first_line) {}

  ExprPtr parse_single() {
    auto e = expr();
    skip_space();
    if (pos_ < text_.size()) fail("unexpected trailing input");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(line_, col_, msg); }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  char peek() {
    skip_space();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  bool accept(std::string_view tok) {
    skip_space();
    if (text_.substr(pos_, tok.size()) != tok) return false;
    for (std::size_t i = 0; i < tok.size(); ++i) advance();
    return true;
  }

  void expect(std::string_view tok) {
    if (!accept(tok)) fail("expected '" + std::string(tok) + "'");
  }

  std::string identifier() {
    skip_space();
    std::string s;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      s += text_[pos_];
      advance();
    }
    if (s.empty()) fail("expected a name");
    return s;
  }

  long long integer() {
    skip_space();
    bool neg = false;
    if (pos_ < text_.size() && text_[pos_] == '-') {
      neg = true;
      advance();
    }
    if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_]))) fail("expected an integer");
    long long v = 0;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      v = v * 10 + (text_[pos_] - '0');
      if (v > 1'000'000'000) fail("integer too large");
      advance();
    }
    return neg ? -v : v;
  }

  std::shared_ptr<Expr> node(Expr::Kind k, std::size_t line, std::size_t col) {
    auto e = std::make_shared<Expr>();
    e->kind = k;
    e->line = line;
    e->column = col;
    return e;
  }

  ExprPtr expr() {
    skip_space();
    const std::size_t line = line_, col = col_;
    std::string id = identifier();
    if (id == "D") {
      auto e = node(Expr::Kind::Direct, line, col);
      expect("(");
      e->children.push_back(expr());
      while (accept(",")) e->children.push_back(expr());
      expect(")");
      return e;
    }
    if (id == "W" || id == "CROWN") {
      auto e = node(id == "W" ? Expr::Kind::Wreath : Expr::Kind::Crown, line, col);
      expect("(");
      e->children.push_back(expr());
      expect(",");
      e->param = integer();
      expect(")");
      return e;
    }
    if (id == "SD") {
      auto e = node(Expr::Kind::Semidirect, line, col);
      expect("(");
      e->children.push_back(expr());
      expect(",");
      e->children.push_back(expr());
      expect(",");
      e->action = action();
      expect(")");
      return e;
    }
    if (id == "Q" || id == "SUB") {
      auto e = node(id == "Q" ? Expr::Kind::Quotient : Expr::Kind::Subgroup, line, col);
      expect("(");
      e->children.push_back(expr());
      expect(";");
      e->words = word_list(')');
      expect(")");
      return e;
    }
    if (id == "EX1" || id == "EX2A" || id == "EX2B" || id == "EX3" || id == "WREATH") {
      auto e = node(Expr::Kind::Family, line, col);
      e->name = id;
      e->param = 1;
      if (id == "EX2A") {
        if (accept("(")) {
          if (peek() != ')') e->param = integer();
          expect(")");
        }
        return e;
      }
      expect("(");
      e->param = integer();
      while (accept(",")) {
        std::string flag = identifier();
        if (id != "EX3" || flag != "trivial") fail("unknown option '" + flag + "' for " + id);
        e->flags.push_back(flag);
      }
      expect(")");
      return e;
    }
    return atom(id, line, col);
  }

  ExprPtr atom(const std::string& id, std::size_t line, std::size_t col) {
    auto e = node(Expr::Kind::Atom, line, col);
    if (id == "K4") {
      e->name = "K4";
      return e;
    }
    if (id == "PSL2" || id == "PGL2") {
      e->name = id;
      expect("(");
      e->param = integer();
      expect(")");
      return e;
    }
    std::size_t split = 0;
    while (split < id.size() && std::isalpha(static_cast<unsigned char>(id[split]))) ++split;
    std::string head = id.substr(0, split), digits = id.substr(split);
    if ((head == "C" || head == "S" || head == "A" || head == "Dih") && !digits.empty() &&
        digits.find_first_not_of("0123456789") == std::string::npos && digits.size() < 7) {
      e->name = head;
      e->param = std::stoll(digits);
      return e;
    }
    throw ParseError(line, col, "unknown group '" + id + "'");
  }

  std::vector<std::vector<Word>> action() {
    std::vector<std::vector<Word>> out;
    expect("[");
    if (accept("]")) return out;
    do {
      skip_space();
      const std::size_t line = line_, col = col_;
      std::string g = identifier();
      if (g != "g" + std::to_string(out.size() + 1))
        throw ParseError(line, col, "action entries must be g1, g2, ... in order");
      expect("->");
      expect("[");
      out.push_back(word_list(']'));
      expect("]");
    } while (accept(";"));
    expect("]");
    return out;
  }

  std::vector<Word> word_list(char close) {
    std::vector<Word> ws;
    if (peek() == close) return ws;
    ws.push_back(word());
    while (accept(",")) ws.push_back(word());
    return ws;
  }

  Word word() {
    Word w;
    w.kind = Word::Kind::Product;
    w.factors.push_back(power());
    while (accept("*")) w.factors.push_back(power());
    if (w.factors.size() == 1) return w.factors.front();
    return w;
  }

  Word power() {
    Word base = primary();
    while (accept("^")) {
      Word p;
      p.kind = Word::Kind::Power;
      p.exponent = integer();
      p.factors.push_back(std::move(base));
      base = std::move(p);
    }
    return base;
  }

  Word primary() {
    char c = peek();
    if (c == 'g') {
      std::string id = identifier();
      std::string digits = id.substr(1);
      if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos || digits.size() > 6)
        fail("bad generator name '" + id + "'");
      Word w;
      w.kind = Word::Kind::Generator;
      w.generator = std::stoul(digits);
      if (w.generator == 0) fail("generators are numbered from g1");
      return w;
    }
    if (c == '(') {
      // a cycle literal starts with a point number or is "()"
      std::size_t save_pos = pos_, save_line = line_, save_col = col_;
      advance();
      char next = peek();
      pos_ = save_pos;
      line_ = save_line;
      col_ = save_col;
      if (next == ')' || std::isdigit(static_cast<unsigned char>(next))) return cycles();
      expect("(");
      Word w = word();
      expect(")");
      return w;
    }
    fail("expected a generator, a cycle or '('");
  }

  Word cycles() {
    Word w;
    w.kind = Word::Kind::Cycles;
    while (peek() == '(') {
      std::size_t save_pos = pos_, save_line = line_, save_col = col_;
      advance();
      char next = peek();
      if (next != ')' && !std::isdigit(static_cast<unsigned char>(next))) {
        pos_ = save_pos;
        line_ = save_line;
        col_ = save_col;
        break;
      }
      if (accept(")")) continue;
      std::vector<std::size_t> cyc;
      do {
        long long v = integer();
        if (v < 1) fail("cycle points are numbered from 1");
        cyc.push_back(static_cast<std::size_t>(v));
      } while (accept(","));
      expect(")");
      w.cycles.push_back(std::move(cyc));
    }
    return w;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

}  // namespace detail

/// Parses one expression; whitespace and '#' comments are ignored.
inline ExprPtr parse(std::string_view text) { return detail::Parser(text).parse_single(); }

struct ParsedLine {
  std::size_t line = 0;
  std::string text;
  ExprPtr expr;        // null when the line failed to parse
  std::string error;
};

/// One expression per non-blank, non-comment line. Parse failures are
/// reported per line rather than thrown.
inline std::vector<ParsedLine> parse_lines(std::string_view text) {
  std::vector<ParsedLine> out;
  std::size_t line = 1, start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view raw = text.substr(start, end - start);
    std::size_t first = raw.find_first_not_of(" \t\r");
    if (first != std::string_view::npos && raw[first] != '#') {
      ParsedLine pl;
      pl.line = line;
      std::size_t last = raw.find_last_not_of(" \t\r");
      pl.text = std::string(raw.substr(first, last - first + 1));
      try {
        pl.expr = detail::Parser(raw, line).parse_single();
      } catch (const ParseError& e) {
        pl.error = e.what();
      }
      out.push_back(std::move(pl));
    }
    if (end == text.size()) break;
    start = end + 1;
    ++line;
  }
  return out;
}

}  // namespace fingen
