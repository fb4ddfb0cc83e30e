#include "dots/dsl.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <sstream>

namespace dots {

namespace {

enum class Tok { word, punct, arrow, end };

struct Token {
  Tok kind = Tok::end;
  std::string text;
  std::size_t line = 1;
  std::size_t column = 1;
};

bool word_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

std::vector<Token> lex(std::string_view text) {
  std::vector<Token> out;
  std::size_t line = 1, col = 1, i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < text.size()) {
    char c = text[i];
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    Token t{Tok::word, "", line, col};
    if (word_char(c)) {
      std::size_t j = i;
      while (j < text.size() && word_char(text[j])) ++j;
      t.text = std::string(text.substr(i, j - i));
      advance(j - i);
    } else if (c == '-' && i + 1 < text.size() && text[i + 1] == '>') {
      t.kind = Tok::arrow;
      t.text = "->";
      advance(2);
    } else if (std::string_view("(){},:=.;").find(c) != std::string_view::npos) {
      t.kind = Tok::punct;
      t.text = std::string(1, c);
      advance(1);
    } else {
      throw SourceError(ErrorCode::syntax_error, line, col, std::string("unexpected character '") + c + "'");
    }
    out.push_back(std::move(t));
  }
  out.push_back({Tok::end, "", line, col});
  return out;
}

class Cursor {
 public:
  explicit Cursor(std::string_view text) : toks_(lex(text)) {}

  const Token& peek(std::size_t ahead = 0) const { return toks_[std::min(pos_ + ahead, toks_.size() - 1)]; }
  bool at_end() const { return peek().kind == Tok::end; }
  Token next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  bool accept(std::string_view punct) {
    if (peek().kind == Tok::word || peek().text != punct) return false;
    ++pos_;
    return true;
  }
  bool accept_word(std::string_view w) {
    if (peek().kind != Tok::word || peek().text != w) return false;
    ++pos_;
    return true;
  }
  Token expect(std::string_view punct) {
    if (!accept(punct)) error(peek(), "expected '" + std::string(punct) + "'" + found(peek()));
    return toks_[pos_ - 1];
  }
  Token word(std::string_view what) {
    if (peek().kind != Tok::word) error(peek(), "expected " + std::string(what) + found(peek()));
    return next();
  }

  [[noreturn]] static void error(const Token& at, const std::string& msg,
                                 ErrorCode code = ErrorCode::syntax_error) {
    throw SourceError(code, at.line, at.column, msg);
  }

 private:
  static std::string found(const Token& t) {
    return t.kind == Tok::end ? " but reached the end of input" : " but found '" + t.text + "'";
  }
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

// ---------------------------------------------------------------------------
// Undirected diagrams

struct UwdBuilder {
  Uwd uwd;
  std::map<std::string, std::size_t> junction_index;
  std::map<std::string, std::size_t> type_index;
  std::vector<std::optional<std::size_t>> jtypes;
  std::vector<Token> jtoken;

  std::size_t type_of(const std::string& name) {
    auto [it, fresh] = type_index.emplace(name, uwd.types.size());
    if (fresh) uwd.types.push_back(name);
    return it->second;
  }
};

std::vector<UwdPort> parse_uwd_ports(Cursor& cur, UwdBuilder& b) {
  std::vector<UwdPort> ports;
  cur.expect("(");
  if (cur.accept(")")) return ports;
  do {
    Token name = cur.word("a port name");
    std::optional<Token> type;
    Token junction = name;
    if (cur.accept(":")) type = cur.word("a type name");
    if (cur.accept("=")) junction = cur.word("a junction name");
    auto it = b.junction_index.find(junction.text);
    if (it == b.junction_index.end())
      Cursor::error(junction, "undeclared junction '" + junction.text + "'", ErrorCode::unknown_junction);
    if (type) {
      const auto& jt = b.jtypes[it->second];
      if (!jt || b.uwd.types[*jt] != type->text) {
        Cursor::error(*type,
                      "port '" + name.text + "' has type '" + type->text + "' but junction '" + junction.text +
                          "' has " + (jt ? "type '" + b.uwd.types[*jt] + "'" : std::string("no type")),
                      ErrorCode::type_clash);
      }
    }
    ports.push_back({name.text, it->second});
  } while (cur.accept(","));
  cur.expect(")");
  return ports;
}

}  // namespace

Cospan Uwd::cospan() const {
  std::vector<std::size_t> left;
  for (const auto& b : boxes)
    for (const auto& p : b.ports) left.push_back(p.junction);
  std::vector<std::size_t> right;
  for (const auto& p : outer) right.push_back(p.junction);
  FinFunction l(junctions.size(), left), r(junctions.size(), right);
  if (!typed()) return Cospan(std::move(l), std::move(r));
  FinFunction apex(types.size(), junction_types);
  return Cospan(l, r, CospanTyping{types, compose(l, apex), compose(r, apex), apex});
}

std::vector<std::size_t> Uwd::box_arities() const {
  std::vector<std::size_t> out;
  for (const auto& b : boxes) out.push_back(b.ports.size());
  return out;
}

Uwd parse_uwd(std::string_view text) {
  Cursor cur(text);
  UwdBuilder b;
  std::optional<Token> outer_at;
  std::map<std::string, Token> box_names;
  while (!cur.at_end()) {
    if (cur.accept(";")) continue;
    Token kw = cur.word("'type', 'junction', 'box' or 'outer'");
    if (kw.text == "type") {
      do b.type_of(cur.word("a type name").text);
      while (cur.accept(","));
    } else if (kw.text == "junction") {
      std::vector<Token> names;
      do names.push_back(cur.word("a junction name"));
      while (cur.accept(","));
      std::optional<std::size_t> type;
      if (cur.accept(":")) type = b.type_of(cur.word("a type name").text);
      for (const auto& n : names) {
        if (b.junction_index.count(n.text)) Cursor::error(n, "junction '" + n.text + "' declared twice");
        b.junction_index.emplace(n.text, b.uwd.junctions.size());
        b.uwd.junctions.push_back(n.text);
        b.jtypes.push_back(type);
        b.jtoken.push_back(n);
      }
    } else if (kw.text == "box") {
      Token name = cur.word("a box name");
      if (box_names.count(name.text)) Cursor::error(name, "box '" + name.text + "' declared twice");
      box_names.emplace(name.text, name);
      b.uwd.boxes.push_back({name.text, parse_uwd_ports(cur, b)});
    } else if (kw.text == "outer") {
      if (outer_at) Cursor::error(kw, "outer boundary declared twice");
      outer_at = kw;
      b.uwd.outer = parse_uwd_ports(cur, b);
    } else {
      Cursor::error(kw, "expected 'type', 'junction', 'box' or 'outer' but found '" + kw.text + "'");
    }
  }
  if (!b.uwd.types.empty()) {
    for (std::size_t j = 0; j < b.jtypes.size(); ++j) {
      if (!b.jtypes[j])
        Cursor::error(b.jtoken[j], "junction '" + b.uwd.junctions[j] + "' needs a type in a typed diagram",
                      ErrorCode::type_clash);
      b.uwd.junction_types.push_back(*b.jtypes[j]);
    }
  }
  return b.uwd;
}

std::string print_uwd(const Uwd& uwd) {
  std::ostringstream out;
  if (uwd.typed()) {
    out << "type ";
    for (std::size_t t = 0; t < uwd.types.size(); ++t) out << (t ? ", " : "") << uwd.types[t];
    out << "\n";
  }
  for (std::size_t j = 0; j < uwd.junctions.size(); ++j) {
    out << "junction " << uwd.junctions[j];
    if (uwd.typed()) out << " : " << uwd.types.at(uwd.junction_types.at(j));
    out << "\n";
  }
  auto ports = [&](const std::vector<UwdPort>& ps) {
    out << "(";
    for (std::size_t k = 0; k < ps.size(); ++k) {
      out << (k ? ", " : "") << ps[k].name;
      if (ps[k].name != uwd.junctions.at(ps[k].junction)) out << " = " << uwd.junctions[ps[k].junction];
    }
    out << ")\n";
  };
  for (const auto& b : uwd.boxes) {
    out << "box " << b.name;
    ports(b.ports);
  }
  if (!uwd.outer.empty()) {
    out << "outer";
    ports(uwd.outer);
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Directed diagrams

namespace {

std::vector<PortDecl> parse_dwd_ports(Cursor& cur, const DirectedWiringDiagram& d) {
  std::vector<PortDecl> ports;
  cur.expect("(");
  if (cur.accept(")")) return ports;
  do {
    Token name = cur.word("a port name");
    for (const auto& p : ports)
      if (p.name == name.text) Cursor::error(name, "port '" + name.text + "' declared twice");
    cur.expect(":");
    Token type = cur.word("a type name");
    bool known = std::any_of(d.types.begin(), d.types.end(), [&](const PortType& t) { return t.name == type.text; });
    if (!known) Cursor::error(type, "unknown type '" + type.text + "'", ErrorCode::unknown_name);
    ports.push_back({name.text, type.text});
  } while (cur.accept(","));
  cur.expect(")");
  return ports;
}

void parse_sides(Cursor& cur, const DirectedWiringDiagram& d, BoxDecl& box) {
  bool seen_in = false, seen_out = false;
  for (;;) {
    if (!seen_in && cur.accept_word("in")) {
      box.inputs = parse_dwd_ports(cur, d);
      seen_in = true;
    } else if (!seen_out && cur.accept_word("out")) {
      box.outputs = parse_dwd_ports(cur, d);
      seen_out = true;
    } else {
      return;
    }
  }
}

}  // namespace

DirectedWiringDiagram parse_dwd(std::string_view text) {
  Cursor cur(text);
  DirectedWiringDiagram d;
  bool outer_seen = false;
  std::map<std::pair<std::optional<std::size_t>, std::size_t>, Token> fed;

  auto endpoint = [&](bool source) {
    Token box = cur.word("a box name or 'outer'");
    cur.expect(".");
    Token port = cur.word("a port name");
    auto find = [&](const std::vector<PortDecl>& ps, const char* side) {
      for (std::size_t k = 0; k < ps.size(); ++k)
        if (ps[k].name == port.text) return k;
      Cursor::error(port, "'" + box.text + "' has no " + side + " port '" + port.text + "'", ErrorCode::dangling_port);
    };
    if (box.text == "outer") {
      return std::pair{PortRef{std::nullopt, source ? find(d.outer.inputs, "input") : find(d.outer.outputs, "output")},
                       box};
    }
    for (std::size_t b = 0; b < d.boxes.size(); ++b) {
      if (d.boxes[b].name != box.text) continue;
      return std::pair{PortRef{b, source ? find(d.boxes[b].outputs, "output") : find(d.boxes[b].inputs, "input")},
                       box};
    }
    Cursor::error(box, "unknown box '" + box.text + "'", ErrorCode::unknown_name);
  };

  while (!cur.at_end()) {
    if (cur.accept(";")) continue;
    if (cur.peek().kind == Tok::word && cur.peek(1).text == "." && cur.peek(1).kind == Tok::punct) {
      auto [src, src_at] = endpoint(true);
      cur.expect("->");
      auto [dst, dst_at] = endpoint(false);
      auto key = std::pair{dst.box, dst.port};
      if (fed.count(key)) {
        const auto& ports = dst.box ? d.boxes[*dst.box].inputs : d.outer.outputs;
        std::string owner = dst.box ? d.boxes[*dst.box].name : "outer";
        const Token& first = fed.at(key);
        Cursor::error(dst_at,
                      "port " + owner + "." + ports[dst.port].name + " is already fed (line " +
                          std::to_string(first.line) + ")",
                      ErrorCode::multiple_feeds);
      }
      fed.emplace(key, dst_at);
      d.wires.push_back({src, dst});
      continue;
    }
    Token kw = cur.word("'type', 'box', 'outer' or a wire");
    if (kw.text == "type") {
      Token name = cur.word("a type name");
      for (const auto& t : d.types)
        if (t.name == name.text) Cursor::error(name, "type '" + name.text + "' declared twice");
      cur.expect("=");
      PortType t{name.text, std::nullopt};
      if (cur.accept("{")) {
        std::vector<std::string> values;
        if (!cur.accept("}")) {
          do {
            Token v = cur.word("a value name");
            if (std::find(values.begin(), values.end(), v.text) != values.end())
              Cursor::error(v, "value '" + v.text + "' listed twice");
            values.push_back(v.text);
          } while (cur.accept(","));
          cur.expect("}");
        }
        t.values = std::move(values);
      } else if (!cur.accept_word("real")) {
        Cursor::error(cur.peek(), "expected '{' or 'real' after '='");
      }
      d.types.push_back(std::move(t));
    } else if (kw.text == "box") {
      Token name = cur.word("a box name");
      if (name.text == "outer") Cursor::error(name, "'outer' is reserved");
      for (const auto& b : d.boxes)
        if (b.name == name.text) Cursor::error(name, "box '" + name.text + "' declared twice");
      BoxDecl box{name.text, {}, {}};
      parse_sides(cur, d, box);
      d.boxes.push_back(std::move(box));
    } else if (kw.text == "outer") {
      if (outer_seen) Cursor::error(kw, "outer boundary declared twice");
      outer_seen = true;
      parse_sides(cur, d, d.outer);
    } else {
      Cursor::error(kw, "expected 'type', 'box', 'outer' or a wire but found '" + kw.text + "'");
    }
  }
  d.validate();
  return d;
}

std::string print_dwd(const DirectedWiringDiagram& d) {
  std::ostringstream out;
  for (const auto& t : d.types) {
    out << "type " << t.name << " = ";
    if (!t.values) {
      out << "real\n";
      continue;
    }
    out << "{";
    for (std::size_t k = 0; k < t.values->size(); ++k) out << (k ? ", " : "") << (*t.values)[k];
    out << "}\n";
  }
  auto ports = [&](const char* side, const std::vector<PortDecl>& ps) {
    out << " " << side << "(";
    for (std::size_t k = 0; k < ps.size(); ++k) out << (k ? ", " : "") << ps[k].name << ": " << ps[k].type;
    out << ")";
  };
  for (const auto& b : d.boxes) {
    out << "box " << b.name;
    ports("in", b.inputs);
    ports("out", b.outputs);
    out << "\n";
  }
  out << "outer";
  ports("in", d.outer.inputs);
  ports("out", d.outer.outputs);
  out << "\n";
  auto end = [&](const PortRef& r, bool source) {
    if (!r.box) return "outer." + (source ? d.outer.inputs : d.outer.outputs).at(r.port).name;
    const auto& b = d.boxes.at(*r.box);
    return b.name + "." + (source ? b.outputs : b.inputs).at(r.port).name;
  };
  for (const auto& w : d.wires) out << end(w.source, true) << " -> " << end(w.sink, false) << "\n";
  return out.str();
}

}  // namespace dots
