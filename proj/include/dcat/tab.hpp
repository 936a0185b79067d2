#pragma once

// Tabulations of finite profunctors, their universal properties, comma
// objects, and the Street-style pointwise test in Cat.

#include <optional>
#include <string>
#include <vector>

#include "dcat/kan.hpp"
#include "dcat/prof.hpp"

namespace dcat {

/// <J> with objects (a, j, b) in element order and morphisms (u, v) with
/// j' . u == v . j, together with pi: 1_<J> => J with boundary (pi_A, pi_B).
struct Tabulation {
  ProfPtr of;
  CatPtr total;
  Functor proj_a;
  Functor proj_b;
  Cell pi;
  std::vector<ElemId> element_of;                      // per object
  std::vector<std::pair<ArrowId, ArrowId>> arrow_pair;  // per morphism
};

Tabulation tabulate(const ProfPtr& j);

struct TabulationReport {
  bool one_dimensional = true;
  bool two_dimensional = true;
  std::size_t cells_one = 0;  // cells 1_X => J checked
  std::size_t cells_two = 0;  // identities of cells checked
  std::vector<std::string> coverage;
  std::string witness;
  bool ok() const { return one_dimensional && two_dimensional; }
};

/// Both properties, exhaustively over the probes. The horizontal H of the
/// 2-dimensional property ranges over 1_X, f_* and f^* between probes.
TabulationReport verify_tabulation(const Tabulation& t, const std::vector<CatPtr>& probes);

bool is_opcartesian_tabulation(const Tabulation& t);

struct CommaObject {
  Tabulation tabulation;  // of C(f, g)
  Functor proj_a;
  Functor proj_b;
  Cell cell;           // 1_<C(f,g)> => 1_C with boundary (f . pi_A, g . pi_B)
  Functor comparison;  // isomorphism onto comma_category(f, g)
};

/// Throws InternalInvariant if the comparison is not an isomorphism.
CommaObject comma_object(const Functor& f, const Functor& g);

/// (R, sigma) is a right Kan extension of d along p in Cat, with
/// sigma: R . p => d. Decided over every S: Q -> M.
bool is_ran_in_cat(const Functor& p, const Functor& d, const Functor& r, const NatTransf& sigma);

enum class StreetProbes { objects, general };

struct StreetReport {
  bool pointwise = true;
  std::size_t probes_checked = 0;
  std::string witness;
};

/// The restriction to every comma f/p is a right Kan extension. With
/// StreetProbes::objects f ranges over pick_x; otherwise over every functor
/// from each category in `general_probes`.
StreetReport street_pointwise(const Functor& p, const Functor& d, const Functor& r,
                              const NatTransf& sigma, StreetProbes mode = StreetProbes::objects,
                              const std::vector<CatPtr>& general_probes = {});

struct TabRanReport {
  bool pointwise = false;                // kan.is_pointwise_ran
  bool street = false;                   // composite with pi, Street test of d . pi_B along pi_A
  bool tab_prime_opcartesian = false;    // pi_A^* => J
  bool tab_prime_pointwise = false;      // factorisation along pi_A^*
  std::optional<bool> conjoint_pointwise;  // when J = j^*, the candidate itself
  std::optional<bool> conjoint_street;     // its factorisation through eta_j
  bool agree() const {
    bool ok = pointwise == street && pointwise == tab_prime_pointwise && tab_prime_opcartesian;
    if (conjoint_street) ok = ok && *conjoint_street == *conjoint_pointwise;
    return ok;
  }
};

/// `conjoint_of`, when given, is j with c.along equal to j^*.
TabRanReport ran_via_tabulation(const RanCandidate& c, const Functor* conjoint_of = nullptr,
                                StreetProbes mode = StreetProbes::objects,
                                const std::vector<CatPtr>& general_probes = {});

/// tab': pi_A^* => J with boundary (1_A, pi_B), (u, x) |-> pi(1_x) . u.
Cell tab_prime(const Tabulation& t);

}  // namespace dcat
