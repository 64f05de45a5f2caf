#include "ucm/parser.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>
#include <utility>

#include "ucm/error.hpp"

namespace ucm {

namespace {

enum class TokenKind { identifier, string, number, punct, end };

struct Token {
  TokenKind kind = TokenKind::end;
  std::string text;
  std::size_t line = 0;
  std::size_t column = 0;
};

bool is_ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

bool is_digit(char c) { return c >= '0' && c <= '9'; }

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> tokens;
    for (;;) {
      skip_blank();
      Token tok;
      tok.line = line_;
      tok.column = column_;
      if (pos_ >= text_.size()) {
        tokens.push_back(tok);
        return tokens;
      }
      char c = text_[pos_];
      if (is_ident_start(c)) {
        tok.kind = TokenKind::identifier;
        while (pos_ < text_.size() && is_ident_char(text_[pos_])) tok.text += advance();
      } else if (c == '"') {
        tok.kind = TokenKind::string;
        tok.text = read_string(tok);
      } else if (is_digit(c) || (c == '-' && pos_ + 1 < text_.size() && text_[pos_ + 1] != '>')) {
        tok.kind = TokenKind::number;
        tok.text = read_number(tok);
      } else if (c == '-' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '>') {
        tok.kind = TokenKind::punct;
        tok.text = "->";
        advance();
        advance();
      } else if (std::string_view("{}(),:=;").find(c) != std::string_view::npos) {
        tok.kind = TokenKind::punct;
        tok.text = std::string(1, advance());
      } else {
        throw ParseError(std::string("unexpected character '") + c + "'", line_, column_);
      }
      tokens.push_back(std::move(tok));
    }
  }

 private:
  char advance() {
    char c = text_[pos_++];
    if (c == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    return c;
  }

  void skip_blank() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        return;
      }
    }
  }

  std::string read_string(const Token& tok) {
    std::string out;
    advance();  // opening quote
    for (;;) {
      if (pos_ >= text_.size() || text_[pos_] == '\n')
        throw ParseError("unterminated string literal", tok.line, tok.column);
      char c = advance();
      if (c == '"') return out;
      if (c == '\\') {
        if (pos_ >= text_.size()) throw ParseError("unterminated string literal", tok.line, tok.column);
        char e = advance();
        if (e != '"' && e != '\\') throw ParseError("bad escape in string literal", line_, column_ - 1);
        out += e;
      } else {
        out += c;
      }
    }
  }

  // -?digits(.digits)?([eE][+-]?digits)?, and nothing identifier-like glued on.
  std::string read_number(const Token& tok) {
    std::size_t start = pos_;
    auto bad = [&] { return ParseError("bad number literal", tok.line, tok.column); };
    if (text_[pos_] == '-') advance();
    auto digits = [&] {
      std::size_t n = 0;
      while (pos_ < text_.size() && is_digit(text_[pos_])) {
        advance();
        ++n;
      }
      return n;
    };
    if (digits() == 0) throw bad();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      advance();
      if (digits() == 0) throw bad();
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      advance();
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) advance();
      if (digits() == 0) throw bad();
    }
    if (pos_ < text_.size() && (is_ident_char(text_[pos_]) || text_[pos_] == '.')) throw bad();
    return std::string(text_.substr(start, pos_ - start));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  ModelDocument run() {
    ModelDocument doc;
    bool have_model = false;
    std::set<std::pair<std::string, std::string>> seen;
    auto claim = [&](const Token& kw, const Token& name) {
      if (!seen.emplace(kw.text, name.text).second)
        throw ParseError("duplicate section '" + kw.text + " " + name.text + "'", name.line, name.column);
    };

    while (peek().kind != TokenKind::end) {
      Token kw = expect(TokenKind::identifier, "section keyword");
      if (kw.text == "model") {
        if (have_model) throw ParseError("duplicate section 'model'", kw.line, kw.column);
        have_model = true;
        doc.name = expect(TokenKind::string, "quoted model name").text;
      } else if (kw.text == "variable") {
        Token name = expect(TokenKind::identifier, "variable name");
        claim(kw, name);
        doc.variables.push_back(parse_variable(name.text));
      } else if (kw.text == "cpt") {
        Token name = expect(TokenKind::identifier, "variable name");
        claim(kw, name);
        doc.cpts.push_back(parse_cpt(name.text));
      } else if (kw.text == "event") {
        Token name = expect(TokenKind::identifier, "event name");
        claim(kw, name);
        doc.events.push_back(parse_event(name.text));
      } else if (kw.text == "gate") {
        Token name = expect(TokenKind::identifier, "gate name");
        claim(kw, name);
        doc.gates.push_back(parse_gate(name.text));
      } else {
        throw ParseError("unknown keyword '" + kw.text + "'", kw.line, kw.column);
      }
    }
    if (!have_model) throw ParseError("missing 'model \"name\"' declaration", 1, 1);
    return doc;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }

  Token next() {
    Token t = tokens_[pos_];
    if (t.kind != TokenKind::end) ++pos_;
    return t;
  }

  static std::string describe(const Token& t) {
    switch (t.kind) {
      case TokenKind::end:
        return "end of input";
      case TokenKind::string:
        return "string \"" + t.text + "\"";
      default:
        return "'" + t.text + "'";
    }
  }

  [[noreturn]] static void fail_at(const Token& t, const std::string& expected) {
    throw ParseError("expected " + expected + ", found " + describe(t), t.line, t.column);
  }

  Token expect(TokenKind kind, const std::string& what) {
    if (peek().kind != kind) fail_at(peek(), what);
    return next();
  }

  void expect_punct(std::string_view p) {
    if (!is_punct(p)) fail_at(peek(), "'" + std::string(p) + "'");
    next();
  }

  bool is_punct(std::string_view p) const {
    return peek().kind == TokenKind::punct && peek().text == p;
  }

  bool accept_punct(std::string_view p) {
    if (!is_punct(p)) return false;
    next();
    return true;
  }

  double number() {
    Token t = expect(TokenKind::number, "number");
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), value);
    if (ec != std::errc() || ptr != t.text.data() + t.text.size())
      throw ParseError("bad number literal '" + t.text + "'", t.line, t.column);
    return value;
  }

  std::vector<std::string> ident_list(const std::string& what) {
    std::vector<std::string> out;
    out.push_back(expect(TokenKind::identifier, what).text);
    while (accept_punct(",")) out.push_back(expect(TokenKind::identifier, what).text);
    return out;
  }

  VariableNode parse_variable(const std::string& name) {
    VariableNode v;
    v.name = name;
    expect_punct("{");
    std::set<std::string> fields;
    while (!accept_punct("}")) {
      Token key = expect(TokenKind::identifier, "variable field or '}'");
      auto once = [&] {
        if (!fields.insert(key.text).second)
          throw ParseError("duplicate field '" + key.text + "'", key.line, key.column);
      };
      if (key.text == "states") {
        once();
        expect_punct(":");
        v.states = ident_list("state name");
      } else if (key.text == "parents") {
        once();
        expect_punct(":");
        v.parents = ident_list("parent name");
      } else if (key.text == "tags") {
        once();
        expect_punct(":");
        do {
          Token state = expect(TokenKind::identifier, "state name");
          expect_punct("=");
          Token tag = expect(TokenKind::identifier, "uncertainty tag");
          auto parsed = tag_from_string(tag.text);
          if (!parsed) throw ParseError("unknown uncertainty tag '" + tag.text + "'", tag.line, tag.column);
          if (!v.tags.emplace(state.text, *parsed).second)
            throw ParseError("state '" + state.text + "' tagged twice", state.line, state.column);
        } while (accept_punct(","));
      } else if (key.text == "disjunction") {
        Token state = expect(TokenKind::identifier, "disjunction state");
        expect_punct("=");
        expect_punct("(");
        auto members = ident_list("state name");
        expect_punct(")");
        if (!v.disjunctions.emplace(state.text, std::move(members)).second)
          throw ParseError("disjunction '" + state.text + "' declared twice", state.line, state.column);
      } else {
        throw ParseError("unknown keyword '" + key.text + "'", key.line, key.column);
      }
    }
    return v;
  }

  Cpt parse_cpt(const std::string& name) {
    Cpt cpt;
    cpt.variable = name;
    expect_punct("{");
    while (!accept_punct("}")) {
      CptRow row;
      expect_punct("(");
      if (!is_punct(")")) row.parent_states = ident_list("parent state");
      expect_punct(")");
      expect_punct("->");
      row.probabilities.push_back(number());
      while (accept_punct(",")) row.probabilities.push_back(number());
      cpt.rows.push_back(std::move(row));
    }
    return cpt;
  }

  FaultTreeEvent parse_event(const std::string& name) {
    FaultTreeEvent ev;
    ev.name = name;
    expect_punct("{");
    while (!accept_punct("}")) {
      Token key = expect(TokenKind::identifier, "'p', 'mass' or '}'");
      if (key.text == "p") {
        if (ev.probability) throw ParseError("duplicate field 'p'", key.line, key.column);
        expect_punct(":");
        ev.probability = number();
      } else if (key.text == "mass") {
        if (ev.mass) throw ParseError("duplicate field 'mass'", key.line, key.column);
        expect_punct(":");
        std::vector<MassEntry> entries;
        do {
          MassEntry e;
          expect_punct("{");
          e.focal = ident_list("focal element");
          expect_punct("}");
          expect_punct("=");
          e.mass = number();
          entries.push_back(std::move(e));
        } while (accept_punct(","));
        ev.mass = std::move(entries);
      } else {
        throw ParseError("unknown keyword '" + key.text + "'", key.line, key.column);
      }
    }
    return ev;
  }

  FaultTreeGate parse_gate(const std::string& name) {
    FaultTreeGate g;
    g.name = name;
    expect_punct("=");
    Token op = expect(TokenKind::identifier, "gate operator");
    expect_punct("(");
    if (op.text == "and") {
      g.op = GateOp::and_;
    } else if (op.text == "or") {
      g.op = GateOp::or_;
    } else if (op.text == "kofn") {
      g.op = GateOp::k_of_n;
      Token k = expect(TokenKind::number, "threshold k");
      std::size_t value = 0;
      auto [ptr, ec] = std::from_chars(k.text.data(), k.text.data() + k.text.size(), value);
      if (ec != std::errc() || ptr != k.text.data() + k.text.size())
        throw ParseError("bad number literal '" + k.text + "' (expected non-negative integer)", k.line, k.column);
      g.k = value;
      expect_punct(";");
    } else {
      throw ParseError("unknown keyword '" + op.text + "'", op.line, op.column);
    }
    g.inputs = ident_list("gate input");
    expect_punct(")");
    return g;
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

std::string format_number(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

std::string join(const std::vector<std::string>& items, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return out;
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

}  // namespace

ModelDocument parse_model(std::string_view text) {
  return Parser(Lexer(text).run()).run();
}

ModelDocument load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_model(buf.str());
}

std::string serialize(const ModelDocument& doc) {
  std::ostringstream out;
  out << "model " << quote(doc.name) << "\n";
  for (const auto& v : doc.variables) {
    out << "\nvariable " << v.name << " {\n";
    if (!v.states.empty()) out << "  states: " << join(v.states, ", ") << "\n";
    if (!v.parents.empty()) out << "  parents: " << join(v.parents, ", ") << "\n";
    if (!v.tags.empty()) {
      std::vector<std::string> items;
      for (const auto& [state, tag] : v.tags) items.push_back(state + "=" + std::string(to_string(tag)));
      out << "  tags: " << join(items, ", ") << "\n";
    }
    for (const auto& [state, members] : v.disjunctions)
      out << "  disjunction " << state << " = (" << join(members, ", ") << ")\n";
    out << "}\n";
  }
  for (const auto& c : doc.cpts) {
    out << "\ncpt " << c.variable << " {\n";
    for (const auto& row : c.rows) {
      std::vector<std::string> probs;
      for (double p : row.probabilities) probs.push_back(format_number(p));
      out << "  (" << join(row.parent_states, ", ") << ") -> " << join(probs, ", ") << "\n";
    }
    out << "}\n";
  }
  if (!doc.events.empty() || !doc.gates.empty()) out << "\n";
  for (const auto& e : doc.events) {
    out << "event " << e.name << " {";
    if (e.probability) out << " p: " << format_number(*e.probability);
    if (e.mass) {
      std::vector<std::string> items;
      for (const auto& m : *e.mass) items.push_back("{" + join(m.focal, ",") + "}=" + format_number(m.mass));
      out << " mass: " << join(items, ", ");
    }
    out << " }\n";
  }
  for (const auto& g : doc.gates) {
    out << "gate " << g.name << " = ";
    switch (g.op) {
      case GateOp::and_:
        out << "and(";
        break;
      case GateOp::or_:
        out << "or(";
        break;
      case GateOp::k_of_n:
        out << "kofn(" << g.k << "; ";
        break;
    }
    out << join(g.inputs, ", ") << ")\n";
  }
  return out.str();
}

}  // namespace ucm
