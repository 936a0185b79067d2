#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>

namespace {

const std::string kCli = DCAT_CLI;
const std::string kFixtures = DCAT_FIXTURES;

struct Run {
  int code = -1;
  std::string out;
  std::string err;
};

Run run(const std::string& args) {
  const auto err_path = std::filesystem::temp_directory_path() / "dcat_test_cli_stderr.txt";
  const auto cmd = kCli + " " + args + " 2>" + err_path.string();
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(err_path);
  std::stringstream s;
  s << in.rdbuf();
  r.err = s.str();
  return r;
}

std::string fx(const std::string& name) { return kFixtures + "/" + name; }

}  // namespace

TEST_CASE("check") {
  for (const auto* f : {"two.dcat", "hom.dcat", "comma.dcat", "chain.dcat", "nonpointwise.dcat"}) {
    CAPTURE(f);
    CHECK(run("check " + fx(f)).code == 0);
  }
  const auto bad = run("check " + fx("malformed/syntax.dcat"));
  CHECK(bad.code == 2);
  CHECK(bad.err.find("3:14:") != std::string::npos);
  CHECK(bad.out.empty());
  for (const auto* f : {"bad_action.dcat", "missing_compose.dcat", "truncated.dcat",
                        "unknown_name.dcat", "unterminated.dcat"}) {
    CAPTURE(f);
    const auto r = run(std::string("check ") + fx("malformed/") + f);
    CHECK(r.code == 2);
    CHECK(r.err.find(f) != std::string::npos);
  }
  CHECK(run("check " + fx("missing.dcat")).code == 2);
}

TEST_CASE("usage errors") {
  CHECK(run("").code == 2);
  CHECK(run("frobnicate").code == 2);
  CHECK(run("ran " + fx("two.dcat") + " --along Nope --of d").code == 2);
  CHECK(run("ran " + fx("two.dcat")).code == 2);
}

TEST_CASE("ran") {
  const auto r = run("ran " + fx("two.dcat") + " --along Jstar --of d --pointwise");
  CHECK(r.code == 0);
  CHECK(r.out.find("r(0)=0") != std::string::npos);
  CHECK(r.out.find("r(1)=1") != std::string::npos);

  const auto np = run("ran " + fx("nonpointwise.dcat") + " --along J --of d --counit eps --pointwise");
  CHECK(np.code == 1);
  CHECK(np.err.find("witness:") != std::string::npos);
}

TEST_CASE("initial") {
  const auto r = run("initial " + fx("two.dcat") + " --functor pick1");
  CHECK(r.code == 1);
  CHECK(r.err.find("g/0 empty") != std::string::npos);
  CHECK(run("initial " + fx("two.dcat") + " --functor pick0").code == 0);
}

TEST_CASE("other commands") {
  CHECK(run("compose " + fx("hom.dcat") + " --prof HomTwo,HomTwo --witness").code == 0);
  CHECK(run("exact " + fx("comma.dcat") + " --cell sq").code == 0);
  CHECK(run("exact " + fx("comma.dcat") + " --cell sq --mode direct --probe-max-objects 1").code == 0);
  CHECK(run("comma " + fx("two.dcat") + " --left pick0 --right pick1").code == 0);
  const auto t = run("tabulate " + fx("hom.dcat") + " --prof HomTwo --verify");
  CHECK(t.code == 0);
  CHECK(t.out.find("arrows: 6") != std::string::npos);
  const auto it = run("internal-tabulate " + fx("hom.dcat") + " --prof HomTwo --verify");
  CHECK(it.code == 0);
}

TEST_CASE("json output parses and agrees with text") {
  const std::vector<std::string> cmds{
      "check " + fx("two.dcat"),
      "ran " + fx("two.dcat") + " --along Jstar --of d --pointwise",
      "ran " + fx("nonpointwise.dcat") + " --along J --of d --counit eps --pointwise",
      "initial " + fx("two.dcat") + " --functor pick1",
      "compose " + fx("hom.dcat") + " --prof HomTwo,HomTwo",
      "exact " + fx("comma.dcat") + " --cell sq",
      "comma " + fx("comma.dcat") + " --left f --right pi_Two",
      "tabulate " + fx("hom.dcat") + " --prof HomTwo",
      "internal-tabulate " + fx("hom.dcat") + " --prof HomTwo",
  };
  for (const auto& c : cmds) {
    CAPTURE(c);
    const auto js = run(c + " --format json");
    const auto tx = run(c + " --format text");
    CHECK(js.code == tx.code);
    const auto doc = nlohmann::ordered_json::parse(js.out);
    REQUIRE(doc.is_object());
    std::vector<std::string> keys;
    for (const auto& [k, v] : doc.items()) keys.push_back(k);
    CHECK(keys == std::vector<std::string>{"command", "ok", "findings", "seconds"});
    CHECK(doc["ok"].get<bool>() == (js.code == 0));
    const std::string ok_line = std::string("ok: ") + (doc["ok"].get<bool>() ? "true" : "false");
    CHECK(tx.out.find(ok_line) != std::string::npos);
    // Same findings modulo timing.
    const auto again = nlohmann::ordered_json::parse(run(c + " --format json").out);
    CHECK(again["findings"] == doc["findings"]);
  }
}

TEST_CASE("quiet") {
  const auto r = run("initial " + fx("two.dcat") + " --functor pick1 --quiet");
  CHECK(r.code == 1);
  CHECK(r.out.empty());
}
