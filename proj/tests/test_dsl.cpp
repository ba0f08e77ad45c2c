#include <doctest.h>

#include "eds/dsl.hpp"
#include "eds/pfaffian.hpp"

using namespace eds;

namespace {

std::string landsberg_file() { return std::string(EDS_DATA_DIR) + "/landsberg.eds"; }

ParseError parse_error(const std::string& text) {
  try {
    parse_document(text);
  } catch (const ParseError& e) {
    return e;
  }
  FAIL("no parse error for: " << text);
  return ParseError(0, 0, "");
}

}  // namespace

TEST_CASE("landsberg file reproduces the involutivity numbers") {
  SystemDocument doc = parse_file(landsberg_file());
  CHECK(doc.warnings.empty());
  REQUIRE(doc.has_system());
  auto rep = cartan_test(doc.system());
  CHECK(rep.s0 == 2);
  CHECK(rep.characters == std::vector<int>{2, 2, 0});
  CHECK(rep.integral_dim == 6);
  CHECK(rep.cartan_ok);
  CHECK(rep.generality == std::pair<int, int>{2, 2});
}

TEST_CASE("print then parse is the identity") {
  SystemDocument doc = parse_file(landsberg_file());
  std::string text = print_document(doc);
  SystemDocument again = parse_document(text);
  CHECK(same_document(doc, again));
  CHECK(print_document(again) == text);
}

TEST_CASE("structure-only documents") {
  SystemDocument doc = parse_document("coframe w1 w2 w3\nstructure { d w1 = w2 ^ w3\n d w2 = w3 ^ w1\n d w3 = w1 ^ w2 }\n");
  CHECK_FALSE(doc.has_system());
  CHECK(doc.coframe.size() == 3);
  Form f = parse_form("w1 ^ w2", doc.space);
  CHECK(f.degree() == 2);
}

TEST_CASE("positioned errors") {
  CHECK(parse_error("").message == "empty document");
  CHECK(parse_error("  # only a comment\n").message == "empty document");

  ParseError e = parse_error("coframe a b\nstructure { d a = c ^ b }\n");
  CHECK(e.line == 2);
  CHECK(e.col == 19);
  CHECK(e.message.find("'c'") != std::string::npos);

  e = parse_error("coframe a b\nstructure { d a = b }\n");
  CHECK(e.line == 2);
  CHECK(e.message.find("2-form") != std::string::npos);

  e = parse_error("coframe a b\nfunction f { d = a }\nfunction f { d = b }\n");
  CHECK(e.line == 3);
  CHECK(e.message.find("duplicate") != std::string::npos);

  e = parse_error("coframe a a\n");
  CHECK(e.message.find("duplicate") != std::string::npos);

  e = parse_error("structure { d a = 0 }\n");
  CHECK(e.message.find("coframe") != std::string::npos);

  e = parse_error("coframe a b\nstructure { d a = a $ b }\n");
  CHECK(e.line == 2);
}

TEST_CASE("zero forms warn unless written as 0") {
  SystemDocument doc = parse_document("coframe a b\nstructure { d a = 0\n d b = a ^ a }\n");
  REQUIRE(doc.warnings.size() == 1);
  CHECK(doc.warnings[0].line == 3);
  CHECK(doc.warnings[0].message.find("zero form") != std::string::npos);
}
