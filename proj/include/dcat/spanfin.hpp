#pragma once

// Spans of finite sets, and categories, profunctors and transformations
// internal to FinSet, with the explicit opcartesian tabulation.

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dcat/fincat.hpp"
#include "dcat/prof.hpp"
#include "dcat/tab.hpp"

namespace dcat::span {

/// The input internal profunctor fails its own laws.
class ActionIncompatible : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// A transformation or component cell fails its commuting condition.
class NaturalityFailure : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// A map of finite sets {0..domain-1} -> {0..codomain-1}.
struct Map {
  std::size_t domain = 0;
  std::size_t codomain = 0;
  std::vector<std::size_t> values;

  std::size_t operator()(std::size_t x) const { return values[x]; }
  friend bool operator==(const Map&, const Map&) = default;
};

Map identity_map(std::size_t n);
/// `g . f`.
Map compose(const Map& g, const Map& f);

/// The canonical pullback of f and g: pairs (x, y) with f x == g y in
/// lexicographic order.
struct Pullback {
  Map f, g;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  Map p1, p2;
  std::vector<std::size_t> index;  // x * |dom g| + y, or npos

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  std::size_t size() const { return pairs.size(); }
  /// The element (x, y); npos when f x != g y.
  std::size_t at(std::size_t x, std::size_t y) const { return index[x * g.domain + y]; }
};

/// A quotient of the codomain with least-element representatives.
struct Coequalizer {
  Map p, q;
  Map quotient;
  std::vector<std::size_t> reps;
};

/// The facilities of the host category consumed by the constructions below.
class Host {
 public:
  virtual ~Host() = default;
  virtual Pullback pullback(const Map& f, const Map& g) const = 0;
  /// The unique map into the pullback with components a and b.
  virtual Map induce(const Pullback& pb, const Map& a, const Map& b) const = 0;
  virtual Coequalizer coequalizer(const Map& p, const Map& q) const = 0;
  /// The unique map out of the quotient through which h factors; throws
  /// Error when h does not coequalise.
  virtual Map descend(const Coequalizer& c, const Map& h) const = 0;
};

class FinSetHost final : public Host {
 public:
  Pullback pullback(const Map& f, const Map& g) const override;
  Map induce(const Pullback& pb, const Map& a, const Map& b) const override;
  Coequalizer coequalizer(const Map& p, const Map& q) const override;
  Map descend(const Coequalizer& c, const Map& h) const override;
};

const Host& finset();

Pullback pullback(const Map& f, const Map& g);
Coequalizer coequalizer(const Map& p, const Map& q);

/// A0 <- J -> B0.
struct Span {
  std::size_t left_foot = 0;
  std::size_t right_foot = 0;
  std::size_t apex = 0;
  Map d0, d1;
};

/// The outer legs of the canonical pullback of J.d1 and H.d0.
Span span_compose(const Span& j, const Span& h);

/// Composable pairs (f, g) satisfy d1 f == d0 g; m(f, g) is "g after f".
struct InternalCategory {
  std::string name;
  std::vector<std::string> object_names;
  std::vector<std::string> arrow_names;
  Span span;  // A0 <- A -> A0
  Pullback composable;
  Map m;
  Map e;

  std::size_t num_objects() const { return object_names.size(); }
  std::size_t num_arrows() const { return arrow_names.size(); }
  std::size_t mul(std::size_t f, std::size_t g) const { return m(composable.at(f, g)); }
};
using ICatPtr = std::shared_ptr<const InternalCategory>;

/// Fills in the pullback of composable pairs.
InternalCategory make_category(std::string name, std::vector<std::string> objects,
                               std::vector<std::string> arrows, Map d0, Map d1,
                               const std::vector<std::size_t>& mul_table, Map e);

ValidationReport validate_category(const InternalCategory& a);

struct InternalFunctor {
  ICatPtr source;
  ICatPtr target;
  Map f0;
  Map f1;
  std::string name;
};

ValidationReport validate_functor(const InternalFunctor& f);
InternalFunctor identity_functor(const ICatPtr& a);

/// Spans A0 <- J -> B0 with actions l: A x_A0 J -> J and r: J x_B0 B -> J.
struct InternalProfunctor {
  std::string name;
  ICatPtr source;
  ICatPtr target;
  std::vector<std::string> element_names;
  Span span;
  Pullback left_pairs;   // (u, j) with d1 u == d0 j
  Pullback right_pairs;  // (j, v) with d1 j == d0 v
  Map l;
  Map r;

  std::size_t size() const { return element_names.size(); }
  std::size_t left(std::size_t u, std::size_t j) const { return l(left_pairs.at(u, j)); }
  std::size_t right(std::size_t j, std::size_t v) const { return r(right_pairs.at(j, v)); }
};
using IProfPtr = std::shared_ptr<const InternalProfunctor>;

ValidationReport validate_profunctor(const InternalProfunctor& j);
/// 1_A with both actions given by m.
IProfPtr unit_profunctor(const ICatPtr& a);

struct InternalTransformation {
  IProfPtr source;  // J: A -/-> B
  IProfPtr target;  // K: C -/-> D
  InternalFunctor left;
  InternalFunctor right;
  Map phi;  // J -> K
  std::string name;
};

ValidationReport validate_transformation(const InternalTransformation& t);

/// The coequaliser of J x B x H => J x H, elements "[j|h]" by least pair.
struct InternalComposite {
  IProfPtr prof;
  Pullback pairs;          // J x_B0 H
  Coequalizer quotient;    // of the two action maps
};
InternalComposite internal_prof_compose(const IProfPtr& j, const IProfPtr& h);

// --- bridge to fincat/prof ---------------------------------------------------

CatPtr to_fincat(const InternalCategory& a);
ICatPtr from_fincat(const CatPtr& c);
InternalFunctor from_functor(const Functor& f, const ICatPtr& source, const ICatPtr& target);
Functor to_functor(const InternalFunctor& f);
ProfPtr to_prof(const InternalProfunctor& j);
IProfPtr from_prof(const ProfPtr& j, const ICatPtr& source, const ICatPtr& target);
IProfPtr from_prof(const ProfPtr& j);
Cell to_cell(const InternalTransformation& t);
InternalTransformation from_cell(const Cell& c, const IProfPtr& source, const IProfPtr& target);

/// to_prof(J (.) H) is isomorphic to compose_prof(to_prof J, to_prof H) via
/// the map of representatives.
bool composition_coherent(const IProfPtr& j, const IProfPtr& h);

// --- tabulation --------------------------------------------------------------

struct InternalTabulation {
  IProfPtr of;
  ICatPtr total;  // <J>_0 = J, <J> = (J x_B0 B) x_J (A x_A0 J)
  Pullback right_side;  // J x_B0 B
  Pullback left_side;   // A x_A0 J
  Pullback squares;     // the pullback of r and l
  Pullback w;           // <J> x_J <J>, nested pairs
  InternalFunctor proj_a;
  InternalFunctor proj_b;
  InternalTransformation pi;  // 1_<J> => J, the diagonal
};

/// Throws ActionIncompatible when J fails its own laws and InternalInvariant
/// when the result is not an internal category.
InternalTabulation internal_tabulate(const IProfPtr& j, const Host& host = finset());

struct InternalTabulationReport {
  bool valid = true;            // internal-category and functor laws
  bool one_dimensional = true;
  bool two_dimensional = true;
  bool opcartesian = true;
  std::size_t checked_one = 0;
  std::size_t checked_two = 0;
  std::size_t checked_opcartesian = 0;
  std::string witness;
  bool ok() const { return valid && one_dimensional && two_dimensional && opcartesian; }
};

/// Replays the three parts of the proof elementwise. Probes default to the
/// internal versions of One, Two and the parallel pair.
InternalTabulationReport verify_internal_tabulation(const InternalTabulation& t,
                                                    const std::vector<ICatPtr>& probes = {});

// --- vertical transformations ------------------------------------------------

/// phi |-> phi . e_A.
Map components_of(const InternalTransformation& phi);
/// phi_0 |-> l . (f, phi_0 . d1), after checking
/// l . (f, phi_0 . d1) == r . (phi_0 . d0, g). Throws NaturalityFailure.
InternalTransformation transformation_of(const Map& phi0, const InternalFunctor& f,
                                         const InternalFunctor& g, const IProfPtr& k);

}  // namespace dcat::span
