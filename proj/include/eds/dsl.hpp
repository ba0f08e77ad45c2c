#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "eds/exterior.hpp"
#include "eds/pfaffian.hpp"

namespace eds {

struct ParseError : std::runtime_error {
  ParseError(int line, int col, const std::string& msg);
  int line;
  int col;
  std::string message;
};

struct DslWarning {
  int line = 0, col = 0;
  std::string message;
};

// One parsed .eds file. Declarations keep their source order so that
// printing and reparsing yields the same document.
struct SystemDocument {
  struct Decl {
    enum Kind { Function, Constant, Structure, Rewrite, SystemForm } kind;
    std::string name;
    std::optional<Form> form;     // Function (nullopt = generic), Structure, SystemForm
    std::optional<RatExpr> expr;  // Rewrite
  };
  std::vector<std::string> coframe;
  std::vector<Decl> decls;
  std::vector<std::string> independence;
  std::vector<std::string> complement;
  std::vector<DslWarning> warnings;
  CoframedSpace space;

  bool has_system() const;
  LinearPfaffianSystem system() const;
};

SystemDocument parse_document(const std::string& text);
SystemDocument parse_file(const std::string& path);
std::string print_document(const SystemDocument& doc);
bool same_document(const SystemDocument& a, const SystemDocument& b);

// Expressions and forms over an existing space. Names of the form <generic><digits>
// resolve to derived symbols; with `declare` set, other unknown names become auxiliaries.
RatExpr parse_expr(const std::string& text, const CoframedSpace& space, bool declare = false);
Form parse_form(const std::string& text, const CoframedSpace& space);

}  // namespace eds
