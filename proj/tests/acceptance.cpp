// One line per acceptance criterion. Exit status 0 iff every line is PASS.

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <json.hpp>
#include <string>
#include <vector>

#include "dcat/dsl.hpp"
#include "dcat/laws.hpp"

namespace {

struct Cli {
  int code = -1;
  std::string out;
};

Cli run_cli(const std::string& args) {
  const std::string cmd = std::string(DCAT_CLI) + " " + args;
  Cli r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

/// Fixture round trip: parse(serialize(w)) == w and serialize is stable.
std::string fixture_failures(std::size_t* count) {
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(DCAT_FIXTURES)) {
    if (e.path().extension() == ".dcat") files.push_back(e.path());
  }
  *count = files.size();
  for (const auto& f : files) {
    try {
      const auto w = dcat::dsl::parse_file(f.string());
      const auto text = dcat::dsl::serialize(w);
      const auto back = dcat::dsl::parse(text);
      if (!(back == w) || dcat::dsl::serialize(back) != text) return f.filename().string();
    } catch (const std::exception& e) {
      return f.filename().string() + ": " + e.what();
    }
  }
  return files.empty() ? "no fixtures" : "";
}

}  // namespace

int main() {
  const dcat::laws::Config cfg;
  auto results = dcat::laws::run_all(cfg);

  std::size_t fixtures = 0;
  const auto fixture_witness = fixture_failures(&fixtures);
  const auto cli = run_cli("laws --format json 2>/dev/null");

  std::string cli_witness;
  try {
    const auto doc = nlohmann::json::parse(cli.out);
    const auto& list = doc.at("findings").at("criteria");
    for (std::size_t i = 0; i < list.size() && i < results.size(); ++i) {
      if (list[i].at("checked").get<std::size_t>() != results[i].checked ||
          list[i].at("passed").get<bool>() != results[i].passed) {
        cli_witness = "dcat laws differs from the in-process suite at criterion " +
                      std::to_string(i + 1);
        break;
      }
    }
    if (list.size() != results.size()) cli_witness = "dcat laws reported a different list";
  } catch (const std::exception& e) {
    cli_witness = std::string("dcat laws report: ") + e.what();
  }
  if (cli.code != 0) cli_witness = "dcat laws exited " + std::to_string(cli.code);

  auto& r12 = results.back();
  if (!fixture_witness.empty()) {
    r12.passed = false;
    r12.witness = "fixture round trip: " + fixture_witness;
  } else if (!cli_witness.empty()) {
    r12.passed = false;
    r12.witness = cli_witness;
  }
  r12.note += (r12.note.empty() ? "" : "; ") + std::to_string(fixtures) +
              " fixtures round-trip; dcat laws exit " + std::to_string(cli.code);

  bool all = true;
  for (const auto& r : results) {
    all = all && r.passed;
    std::cout << "criterion " << r.id << ": " << (r.passed ? "PASS" : "FAIL") << "  " << r.title
              << "  (" << r.checked << " checks, " << r.failures << " failures, " << r.seconds
              << " s)";
    if (!r.note.empty()) std::cout << "  [" << r.note << "]";
    if (!r.witness.empty()) std::cout << "  witness: " << r.witness;
    std::cout << "\n";
  }
  return all ? 0 : 1;
}
