#pragma once

// The property suite behind `dcat laws` and the acceptance binary: one
// check per acceptance criterion over a seeded enumerative corpus.

#include <cstdint>
#include <string>
#include <vector>

#include "dcat/fincat.hpp"
#include "dcat/prof.hpp"

namespace dcat::laws {

struct Config {
  std::size_t max_objects = 2;        // corpus categories
  std::size_t probe_max_objects = 2;  // probe set of the exactness checks
  std::uint64_t seed = 1;
  std::size_t fuzz_cases = 100000;
};

struct Result {
  int id = 0;
  std::string title;
  bool passed = true;
  std::size_t checked = 0;
  std::size_t failures = 0;
  std::string witness;  // first failure
  std::string note;
  double seconds = 0;
};

/// Categories and profunctors shared by every check.
struct Corpus {
  std::vector<CatPtr> categories;
  /// profunctors[i * n + j]: a sample of profunctors categories[i] -/-> categories[j].
  std::vector<std::vector<ProfPtr>> profunctors;

  const std::vector<ProfPtr>& between(std::size_t i, std::size_t j) const {
    return profunctors[i * categories.size() + j];
  }
  std::size_t size() const { return categories.size(); }
};

Corpus make_corpus(const Config& config);

constexpr int kCriteria = 12;
const std::string& title(int id);

Result run(int id, const Corpus& corpus, const Config& config);
std::vector<Result> run_all(const Config& config);

/// The ordinary-but-not-pointwise instance found by corpus search: J: A -/-> One
/// with A the arrow 1 -> 0 and M the group of order two.
struct NonPointwiseExample {
  ProfPtr j;
  Functor d;
  Functor r;
  Cell counit;
};
NonPointwiseExample non_pointwise_example();

// --- fuzzing -----------------------------------------------------------------

enum class FuzzOutcome { accepted, rejected, crashed };

/// Deterministic mutation of one of the seed texts.
std::string fuzz_case(const std::vector<std::string>& seeds, std::uint64_t seed, std::size_t i);
/// `accepted` or `rejected` with a located dcat error; anything else is a crash.
FuzzOutcome classify(const std::string& text, std::string* detail = nullptr);
/// Built-in workspace texts used as mutation seeds.
const std::vector<std::string>& builtin_seeds();

}  // namespace dcat::laws
