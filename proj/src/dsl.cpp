#include "eds/dsl.hpp"

#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

namespace eds {

ParseError::ParseError(int l, int c, const std::string& msg)
    : std::runtime_error(std::to_string(l) + ":" + std::to_string(c) + ": " + msg), line(l), col(c), message(msg) {}

namespace {

struct Token {
  enum Kind { Ident, Number, Punct, End } kind = End;
  std::string text;
  int line = 1, col = 1;
};

std::vector<Token> lex(const std::string& s) {
  std::vector<Token> out;
  int line = 1, col = 1;
  size_t i = 0;
  auto adv = [&](size_t n) {
    for (size_t k = 0; k < n; ++k, ++i) {
      if (s[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      adv(1);
      continue;
    }
    if (c == '#') {
      while (i < s.size() && s[i] != '\n') adv(1);
      continue;
    }
    Token t;
    t.line = line;
    t.col = col;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t j = i;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_' || s[j] == '.')) ++j;
      t.kind = Token::Ident;
      t.text = s.substr(i, j - i);
      adv(j - i);
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t j = i;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      t.kind = Token::Number;
      t.text = s.substr(i, j - i);
      adv(j - i);
    } else if (std::string("+-*/^(){}=;").find(c) != std::string::npos) {
      t.kind = Token::Punct;
      t.text = std::string(1, c);
      adv(1);
    } else {
      throw ParseError(line, col, std::string("unexpected character '") + c + "'");
    }
    out.push_back(t);
  }
  Token end;
  end.line = line;
  end.col = col;
  out.push_back(end);
  return out;
}

const std::set<std::string> kKeywords = {"coframe", "function", "constant", "structure", "rewrite",
                                         "system", "independence", "complement", "d"};

class Parser {
 public:
  Parser(std::vector<Token> toks, const CoframedSpace* space, bool declare)
      : t_(std::move(toks)), space_(space), declare_(declare) {}

  const Token& peek(size_t k = 0) const { return t_[std::min(p_ + k, t_.size() - 1)]; }
  Token next() { return t_[std::min(p_++, t_.size() - 1)]; }
  bool at(const std::string& punct) const { return peek().kind == Token::Punct && peek().text == punct; }
  bool at_end() const { return peek().kind == Token::End; }
  [[noreturn]] void fail(const Token& t, const std::string& msg) const { throw ParseError(t.line, t.col, msg); }
  void expect(const std::string& punct) {
    if (!at(punct)) fail(peek(), "expected '" + punct + "'" + found());
    ++p_;
  }
  std::string found() const {
    if (at_end()) return " but reached end of input";
    return " but found '" + peek().text + "'";
  }
  Token ident() {
    if (peek().kind != Token::Ident) fail(peek(), "expected identifier" + found());
    return next();
  }

  void set_space(const CoframedSpace* s) { space_ = s; }
  std::map<std::string, Form> named;  // system forms, usable in independence/complement

  // form := term (('+'|'-') term)*
  Form form() {
    Form acc = product();
    while (at("+") || at("-")) {
      Token op = next();
      Form rhs = product();
      acc = combine(acc, rhs, op.text == "-", op);
    }
    return acc;
  }

 private:
  Form combine(const Form& a, const Form& b, bool minus, const Token& op) {
    if (a.degree() != b.degree()) {
      if (a.zero()) return minus ? -b : b;
      if (b.zero()) return a;
      fail(op, "degree mismatch: adding a " + std::to_string(a.degree()) + "-form and a " +
                   std::to_string(b.degree()) + "-form");
    }
    Form r = minus ? a - b : a + b;
    return space_->normal(r);
  }

  Form product() {
    Form acc = unary();
    while (at("*") || at("/")) {
      Token op = next();
      Form rhs = unary();
      if (op.text == "*") {
        if (acc.degree() == 0 && rhs.degree() == 0) {
          acc = Form::scalar(scalar(acc) * scalar(rhs));
        } else if (acc.degree() == 0) {
          acc = scalar(acc) * rhs;
        } else if (rhs.degree() == 0) {
          acc = scalar(rhs) * acc;
        } else {
          fail(op, "'*' between two forms of positive degree; use '^' for the wedge product");
        }
      } else {
        if (rhs.degree() != 0) fail(op, "division by a form of positive degree");
        RatExpr den = scalar(rhs);
        if (den.zero()) fail(op, "division by zero");
        RatExpr inv = RatExpr(1) / den;
        acc = acc.degree() == 0 ? Form::scalar(scalar(acc) * inv) : inv * acc;
      }
      acc = space_->normal(acc);
    }
    return acc;
  }

  Form unary() {
    if (at("-")) {
      next();
      return -unary();
    }
    if (at("+")) {
      next();
      return unary();
    }
    return power();
  }

  // power := atom ('^' (integer | unary))?
  Form power() {
    Form base = atom();
    if (!at("^")) return base;
    Token op = next();
    if (peek().kind == Token::Number) {
      Token n = next();
      if (base.degree() != 0) fail(n, "integer exponent on a form of positive degree");
      int e = std::stoi(n.text);
      return Form::scalar(scalar(base).pow(e));
    }
    Form rhs = unary();
    return wedge(base, rhs);
  }

  Form atom() {
    if (at("(")) {
      next();
      Form f = form();
      expect(")");
      return f;
    }
    if (peek().kind == Token::Number) {
      Token n = next();
      return Form::scalar(RatExpr(Q(n.text)));
    }
    if (peek().kind == Token::Ident) {
      Token id = next();
      if (id.text == "d") fail(id, "'d' is reserved");
      return lookup(id);
    }
    fail(peek(), "expected an expression" + found());
  }

 public:
  static RatExpr scalar(const Form& f) { return f.zero() ? RatExpr() : f.coeff(Mask(0)); }

  // Symbol id for a name: existing symbol, or a derived symbol of a generic function.
  int symbol_of(const std::string& name) const {
    const Workspace& ws = space_->ws();
    int v = ws.find(name);
    if (v >= 0) return v;
    for (size_t cut = name.size(); cut-- > 1;) {
      std::string root = name.substr(0, cut);
      int r = ws.find(root);
      if (r < 0 || !space_->is_generic(r)) continue;
      std::string rest = name.substr(cut);
      if (!rest.empty() && rest[0] == '_') rest = rest.substr(1);
      if (rest.empty()) continue;
      bool digits = true;
      for (char c : rest) digits = digits && std::isdigit(static_cast<unsigned char>(c)) && c != '0';
      if (!digits) continue;
      int cur = r;
      bool ok = true;
      for (char c : rest) {
        int dir = c - '1';
        if (dir >= space_->dim()) {
          ok = false;
          break;
        }
        cur = space_->derivative(cur, dir);
      }
      if (ok && space_->ws().name(cur) == name) return cur;
    }
    return -1;
  }

  Form lookup(const Token& id) {
    const auto& cf = space_->coframe();
    for (size_t i = 0; i < cf.size(); ++i)
      if (cf[i] == id.text) return Form::basis(static_cast<int>(i));
    int v = symbol_of(id.text);
    if (v >= 0) return Form::scalar(RatExpr::sym(v));
    auto it = named.find(id.text);
    if (it != named.end()) return it->second;
    if (declare_) return Form::scalar(RatExpr::sym(space_->ws().ensure(id.text, SymKind::Auxiliary)));
    fail(id, "unknown symbol '" + id.text + "'");
  }

 private:
  std::vector<Token> t_;
  size_t p_ = 0;
  const CoframedSpace* space_;
  bool declare_;
};

}  // namespace

bool SystemDocument::has_system() const {
  for (const auto& d : decls)
    if (d.kind == Decl::SystemForm) return true;
  return false;
}

LinearPfaffianSystem SystemDocument::system() const {
  if (!has_system()) throw MalformedExpression("document declares no system");
  LinearPfaffianSystem sys;
  sys.space = space;
  std::map<std::string, Form> named;
  for (const auto& d : decls)
    if (d.kind == Decl::SystemForm) named[d.name] = *d.form;
  auto resolve = [&](const std::string& n) {
    auto it = named.find(n);
    if (it != named.end()) return it->second;
    return space.e(n);
  };
  std::set<std::string> in_compl(complement.begin(), complement.end());
  for (const auto& d : decls)
    if (d.kind == Decl::SystemForm && !in_compl.count(d.name)) {
      sys.gens.push_back(*d.form);
      sys.gen_names.push_back(d.name);
    }
  for (const auto& n : independence) {
    sys.indep.push_back(resolve(n));
    sys.indep_names.push_back(n);
  }
  for (const auto& n : complement) {
    sys.compl_.push_back(resolve(n));
    sys.compl_names.push_back(n);
  }
  return sys;
}

SystemDocument parse_document(const std::string& text) {
  auto toks = lex(text);
  if (toks.size() == 1) throw ParseError(1, 1, "empty document");
  SystemDocument doc;
  Parser P(toks, nullptr, false);
  std::set<std::string> declared;
  std::set<std::string> structured;
  auto need_space = [&](const Token& t) {
    if (doc.coframe.empty()) throw ParseError(t.line, t.col, "'coframe' must be declared first");
  };
  auto declare_name = [&](const Token& t) {
    if (kKeywords.count(t.text)) throw ParseError(t.line, t.col, "'" + t.text + "' is a keyword");
    if (declared.count(t.text) || P.symbol_of(t.text) >= 0)
      throw ParseError(t.line, t.col, "duplicate declaration of '" + t.text + "'");
    declared.insert(t.text);
  };
  // Parses a form and records whether the source was the literal 0.
  auto parse_form_at = [&](int degree, const std::string& what) {
    Token start = P.peek();
    Form f = P.form();
    if (f.zero()) {
      bool literal = start.kind == Token::Number && start.text == "0";
      if (!literal) doc.warnings.push_back({start.line, start.col, what + " reduces to the zero form"});
      return Form(degree);
    }
    if (f.degree() != degree)
      throw ParseError(start.line, start.col,
                       what + " must be a " + std::to_string(degree) + "-form, got degree " + std::to_string(f.degree()));
    return f;
  };

  while (!P.at_end()) {
    if (P.at(";")) {
      P.next();
      continue;
    }
    Token kw = P.ident();
    if (kw.text == "coframe") {
      if (!doc.coframe.empty()) throw ParseError(kw.line, kw.col, "duplicate coframe declaration");
      while (P.peek().kind == Token::Ident && !kKeywords.count(P.peek().text)) {
        Token n = P.next();
        if (declared.count(n.text)) throw ParseError(n.line, n.col, "duplicate declaration of '" + n.text + "'");
        declared.insert(n.text);
        doc.coframe.push_back(n.text);
      }
      if (doc.coframe.empty()) throw ParseError(kw.line, kw.col, "coframe needs at least one name");
      if (doc.coframe.size() > 63) throw ParseError(kw.line, kw.col, "coframe too large");
      doc.space = CoframedSpace(doc.coframe);
      P.set_space(&doc.space);
    } else if (kw.text == "function") {
      need_space(kw);
      Token n = P.ident();
      declare_name(n);
      SystemDocument::Decl d{SystemDocument::Decl::Function, n.text, std::nullopt, std::nullopt};
      if (P.at("{")) {
        P.next();
        Token dk = P.ident();
        if (dk.text != "d") throw ParseError(dk.line, dk.col, "expected 'd' in function body");
        P.expect("=");
        int v = doc.space.ws().ensure(n.text);
        d.form = parse_form_at(1, "differential of " + n.text);
        doc.space.set_differential(v, *d.form);
        P.expect("}");
      } else {
        doc.space.generic(n.text);
      }
      doc.decls.push_back(std::move(d));
    } else if (kw.text == "constant") {
      need_space(kw);
      Token n = P.ident();
      declare_name(n);
      doc.space.constant(n.text);
      doc.decls.push_back({SystemDocument::Decl::Constant, n.text, std::nullopt, std::nullopt});
    } else if (kw.text == "structure") {
      need_space(kw);
      P.expect("{");
      while (!P.at("}")) {
        if (P.at(";")) {
          P.next();
          continue;
        }
        Token dk = P.ident();
        if (dk.text != "d") throw ParseError(dk.line, dk.col, "expected 'd <coframe element> = <2-form>'");
        Token n = P.ident();
        int idx = -1;
        for (size_t i = 0; i < doc.coframe.size(); ++i)
          if (doc.coframe[i] == n.text) idx = static_cast<int>(i);
        if (idx < 0) throw ParseError(n.line, n.col, "unknown coframe element '" + n.text + "'");
        if (structured.count(n.text)) throw ParseError(n.line, n.col, "duplicate structure equation for '" + n.text + "'");
        structured.insert(n.text);
        P.expect("=");
        Form f = parse_form_at(2, "d " + n.text);
        doc.space.set_drule(idx, f);
        doc.decls.push_back({SystemDocument::Decl::Structure, n.text, f, std::nullopt});
      }
      P.expect("}");
    } else if (kw.text == "rewrite") {
      need_space(kw);
      Token n = P.ident();
      int v = P.symbol_of(n.text);
      if (v < 0) throw ParseError(n.line, n.col, "unknown symbol '" + n.text + "'");
      if (doc.space.has_rewrite(v)) throw ParseError(n.line, n.col, "duplicate rewrite for '" + n.text + "'");
      P.expect("=");
      Token start = P.peek();
      Form f = P.form();
      if (!f.zero() && f.degree() != 0) throw ParseError(start.line, start.col, "rewrite image must be a scalar");
      RatExpr e = Parser::scalar(f);
      doc.space.add_rewrite(v, e);
      doc.decls.push_back({SystemDocument::Decl::Rewrite, n.text, std::nullopt, e});
    } else if (kw.text == "system") {
      need_space(kw);
      P.expect("{");
      while (!P.at("}")) {
        if (P.at(";")) {
          P.next();
          continue;
        }
        Token n = P.ident();
        declare_name(n);
        P.expect("=");
        Form f = parse_form_at(1, n.text);
        P.named[n.text] = f;
        doc.decls.push_back({SystemDocument::Decl::SystemForm, n.text, f, std::nullopt});
      }
      P.expect("}");
    } else if (kw.text == "independence") {
      need_space(kw);
      if (!doc.independence.empty()) throw ParseError(kw.line, kw.col, "duplicate independence declaration");
      while (true) {
        Token n = P.ident();
        bool known = P.named.count(n.text) > 0;
        for (const auto& c : doc.coframe) known = known || c == n.text;
        if (!known) throw ParseError(n.line, n.col, "unknown 1-form '" + n.text + "'");
        doc.independence.push_back(n.text);
        if (!P.at("^")) break;
        P.next();
      }
    } else if (kw.text == "complement") {
      need_space(kw);
      if (!doc.complement.empty()) throw ParseError(kw.line, kw.col, "duplicate complement declaration");
      while (P.peek().kind == Token::Ident && !kKeywords.count(P.peek().text)) {
        Token n = P.next();
        bool known = P.named.count(n.text) > 0;
        for (const auto& c : doc.coframe) known = known || c == n.text;
        if (!known) throw ParseError(n.line, n.col, "unknown 1-form '" + n.text + "'");
        doc.complement.push_back(n.text);
      }
    } else {
      throw ParseError(kw.line, kw.col, "unknown declaration '" + kw.text + "'");
    }
  }
  if (doc.coframe.empty()) throw ParseError(1, 1, "document declares no coframe");
  return doc;
}

SystemDocument parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_document(ss.str());
}

std::string print_document(const SystemDocument& doc) {
  std::ostringstream os;
  os << "coframe";
  for (const auto& n : doc.coframe) os << " " << n;
  os << "\n";
  using D = SystemDocument::Decl;
  const auto& ds = doc.decls;
  for (size_t i = 0; i < ds.size(); ++i) {
    const D& d = ds[i];
    switch (d.kind) {
      case D::Function:
        os << "function " << d.name;
        if (d.form) os << " { d = " << doc.space.str(*d.form) << " }";
        os << "\n";
        break;
      case D::Constant:
        os << "constant " << d.name << "\n";
        break;
      case D::Rewrite:
        os << "rewrite " << d.name << " = " << doc.space.str(*d.expr) << "\n";
        break;
      case D::Structure:
      case D::SystemForm: {
        os << (d.kind == D::Structure ? "structure {\n" : "system {\n");
        size_t j = i;
        for (; j < ds.size() && ds[j].kind == d.kind; ++j)
          os << "  " << (d.kind == D::Structure ? "d " : "") << ds[j].name << " = " << doc.space.str(*ds[j].form) << "\n";
        os << "}\n";
        i = j - 1;
        break;
      }
    }
  }
  if (!doc.independence.empty()) {
    os << "independence ";
    for (size_t i = 0; i < doc.independence.size(); ++i) os << (i ? " ^ " : "") << doc.independence[i];
    os << "\n";
  }
  if (!doc.complement.empty()) {
    os << "complement";
    for (const auto& n : doc.complement) os << " " << n;
    os << "\n";
  }
  return os.str();
}

bool same_document(const SystemDocument& a, const SystemDocument& b) {
  return print_document(a) == print_document(b);
}

RatExpr parse_expr(const std::string& text, const CoframedSpace& space, bool declare) {
  auto toks = lex(text);
  if (toks.size() == 1) throw ParseError(1, 1, "empty expression");
  Parser P(std::move(toks), &space, declare);
  Token start = P.peek();
  Form f = P.form();
  if (!P.at_end()) P.fail(P.peek(), "unexpected trailing input '" + P.peek().text + "'");
  if (!f.zero() && f.degree() != 0) throw ParseError(start.line, start.col, "expected a scalar expression");
  return space.normal(Parser::scalar(f));
}

Form parse_form(const std::string& text, const CoframedSpace& space) {
  auto toks = lex(text);
  if (toks.size() == 1) throw ParseError(1, 1, "empty form");
  Parser P(std::move(toks), &space, false);
  Form f = P.form();
  if (!P.at_end()) P.fail(P.peek(), "unexpected trailing input '" + P.peek().text + "'");
  return space.normal(f);
}

}  // namespace eds
