#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "dcat/corpus.hpp"
#include "dcat/dsl.hpp"
#include "dcat/laws.hpp"

using namespace dcat;

namespace {

const std::string kFixtures = DCAT_FIXTURES;

std::string read(const std::string& path) {
  std::ifstream in(path);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::string> fixture_files() {
  std::vector<std::string> out;
  for (const auto& e : std::filesystem::directory_iterator(kFixtures)) {
    if (e.path().extension() == ".dcat") out.push_back(e.path().string());
  }
  std::sort(out.begin(), out.end());
  return out;
}

template <class E>
E expect_error(const std::string& file) {
  try {
    dsl::parse(read(kFixtures + "/malformed/" + file));
  } catch (const E& e) {
    return e;
  }
  FAIL("no error for " << file);
  throw;
}

}  // namespace

TEST_CASE("the Two fixture") {
  const auto w = dsl::parse_file(kFixtures + "/two.dcat");
  const auto* two = w.find_category("Two");
  REQUIRE(two);
  CHECK(two->value->num_objects() == 2);
  CHECK(two->value->num_arrows() == 3);
  CHECK(w.find_functor("pick0"));
  CHECK(w.find_profunctor("Jstar"));
  CHECK(w.find_category("Nowhere") == nullptr);
  CHECK(w.categories.size() == 2);
}

TEST_CASE("malformed fixtures") {
  const auto syntax = expect_error<dsl::SyntaxError>("syntax.dcat");
  CHECK(syntax.location().line == 3);
  CHECK(syntax.location().column == 14);
  CHECK(syntax.detail() == "expected '->', found '=>'");

  const auto truncated = expect_error<dsl::SyntaxError>("truncated.dcat");
  CHECK(truncated.location().line == 4);
  CHECK(truncated.detail().find("end of input") != std::string::npos);

  const auto unterminated = expect_error<dsl::SyntaxError>("unterminated.dcat");
  CHECK(unterminated.detail() == "unterminated quoted identifier");

  const auto unknown = expect_error<dsl::ResolutionError>("unknown_name.dcat");
  CHECK(unknown.location().line == 6);
  CHECK(unknown.detail() == "unknown category Nowhere");

  const auto missing = expect_error<dsl::WorkspaceValidationError>("missing_compose.dcat");
  CHECK(std::string(missing.what()).find("composition not total: missing b . a") !=
        std::string::npos);

  const auto action = expect_error<dsl::WorkspaceValidationError>("bad_action.dcat");
  CHECK(action.location().line == 12);
  CHECK(std::string(action.what()).find("functoriality fails on (1_0 . e . 1_0)") !=
        std::string::npos);
}

TEST_CASE("round trip on every fixture") {
  const auto files = fixture_files();
  CHECK(files.size() >= 5);
  for (const auto& f : files) {
    CAPTURE(f);
    const auto w = dsl::parse_file(f);
    const auto text = dsl::serialize(w);
    const auto back = dsl::parse(text);
    CHECK(back == w);
    CHECK(dsl::serialize(back) == text);
  }
}

TEST_CASE("built-in seeds round trip") {
  for (const auto& s : laws::builtin_seeds()) {
    const auto w = dsl::parse(s);
    CHECK(dsl::parse(dsl::serialize(w)) == w);
  }
}

TEST_CASE("names are preserved") {
  const auto a = dsl::parse("category A { objects: x, y; arrow f: x -> y; }");
  const auto b = dsl::parse("category B { objects: p, q; arrow g: p -> q; }");
  CHECK_FALSE(a == b);
  CHECK(dsl::serialize(a) != dsl::serialize(b));
  CHECK(find_isomorphism(a.categories[0].value, b.categories[0].value).has_value());
}

TEST_CASE("quoting") {
  CHECK(dsl::is_bare_identifier("pick0"));
  CHECK(dsl::is_bare_identifier("1_0"));
  CHECK_FALSE(dsl::is_bare_identifier("(1_0,*)"));
  CHECK_FALSE(dsl::is_bare_identifier(""));
  CHECK(dsl::quote_if_needed("w") == "w");
  const auto w = dsl::parse(R"(category "a b" { objects: "x y"; })");
  CHECK(w.categories[0].value->object_name(0) == "x y");
  CHECK(dsl::parse(dsl::serialize(w)) == w);
}

TEST_CASE("comments and whitespace") {
  const auto w = dsl::parse("# c\ncategory   T{objects:0,1;\n  arrow w:0->1; # trailing\n}");
  CHECK(w.categories[0].value->num_arrows() == 3);
}

TEST_CASE("duplicates are resolution errors") {
  CHECK_THROWS_AS(dsl::parse("category A { objects: x; } category A { objects: y; }"),
                  dsl::ResolutionError);
  CHECK_THROWS_AS(dsl::parse("category A { objects: x, x; }"), dsl::ParseError);
}

TEST_CASE("fuzzing never crashes") {
  const auto& seeds = laws::builtin_seeds();
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  for (std::size_t i = 0; i < 3000; ++i) {
    const auto text = laws::fuzz_case(seeds, 99, i);
    std::string detail;
    const auto outcome = laws::classify(text, &detail);
    CHECK_MESSAGE(outcome != laws::FuzzOutcome::crashed, detail);
    if (outcome == laws::FuzzOutcome::accepted) ++accepted;
    if (outcome == laws::FuzzOutcome::rejected) ++rejected;
  }
  CHECK(accepted > 0);
  CHECK(rejected > 0);
}
