#pragma once

// Ordinary and pointwise right Kan extensions in Prof, exact cells and
// initial functors.

#include <optional>
#include <string>
#include <vector>

#include "dcat/prof.hpp"

namespace dcat {

/// The target category lacks a limit needed at `object`.
class NoLimit : public Error {
 public:
  NoLimit(ObjectId object, const std::string& what) : Error(what), object(object) {}
  ObjectId object;
};

/// A cell counit: J => 1_M with left boundary r (extension) and right
/// boundary d.
struct RanCandidate {
  ProfPtr along;     // J: A -/-> B
  Functor of;        // d: B -> M
  Functor extension;  // r: A -> M
  Cell counit;
};

ValidationReport validate_candidate(const RanCandidate& c);

struct FactorizationWitness {
  Functor s;
  Cell phi;
  std::size_t factorizations = 0;
};

struct LimitComparison {
  ObjectId object = kNone;
  bool limit_exists = false;
  ObjectId limit_apex = kNone;
  ArrowId comparison = kNone;  // r(a) -> lim, when the limit exists
  bool is_iso = false;
};

struct KanReport {
  bool ordinary = false;
  bool pointwise_rhom = false;
  bool pointwise_limits = false;
  std::size_t test_cells = 0;
  /// First test cell without a unique factorisation.
  std::optional<FactorizationWitness> witness;
  std::vector<LimitComparison> comparisons;
  /// First object where the limit comparison fails.
  std::optional<ObjectId> failing_object;
};

/// r(a) is the limit of d . pi_B over the tabulation of J(pick_a, id).
/// Throws NoLimit naming the first object without one.
RanCandidate pointwise_ran(const ProfPtr& j, const Functor& d);

/// Exact decision of the ordinary universal property by enumeration of all
/// s: A -> M and all cells J => 1_M with boundary (s, d).
bool is_ran(const RanCandidate& c, KanReport* report = nullptr);

/// Verdict of the right hom route; the limit route is computed alongside
/// and OracleDisagreement is thrown if they differ.
bool is_pointwise_ran(const RanCandidate& c, KanReport* report = nullptr);

/// Ordinary and both pointwise verdicts.
KanReport analyse_ran(const RanCandidate& c);

/// (J(f, id), d, r . f, counit . cart).
RanCandidate restrict_candidate(const RanCandidate& c, const Functor& f);

struct ProbeVerdict {
  std::string probe;
  bool pointwise = false;  // condition (b) at this probe
  bool ordinary = false;   // condition (c) at this probe
};

struct ProbeReport {
  bool candidate_pointwise = false;  // condition (a)
  std::vector<ProbeVerdict> probes;
};

ProbeReport check_pointwise_probes(const RanCandidate& c, const std::vector<Functor>& probes);
/// pick_a: One -> A for every object a.
std::vector<Functor> object_probes(const CatPtr& a);

enum class ExactMode { ordinary, pointwise };

struct ExactReport {
  bool exact = true;
  std::size_t extensions_checked = 0;
  std::string witness;
};

/// Transport of (pointwise) right Kan extensions along phi, over every
/// d: D -> M with M in `probes`.
ExactReport is_right_exact(const Cell& phi, ExactMode mode, const std::vector<CatPtr>& probes);

struct InitialCellReport {
  bool initial = true;
  bool pointwise_initial = true;
  std::size_t candidates_checked = 0;
  std::string witness;
};

/// Both directions of transport, over every candidate counit with target in
/// `probes`.
InitialCellReport check_initial_cell(const Cell& phi, const std::vector<CatPtr>& probes);

/// phi_* componentwise invertible.
bool beck_chevalley(const Cell& phi);

/// The cell j^* => k^* with boundary (f, g) induced by t: f . j => k . g,
/// u: a -> jb |-> t_b . f(u).
Cell cell_of_square(const Functor& j, const Functor& g, const Functor& f, const Functor& k,
                    const NatTransf& t);

/// The cell of the comma square of f: A -> C and k: D -> C.
Cell comma_square_cell(const Functor& f, const Functor& k);

struct InitialReport {
  bool initial = false;
  bool opcartesian = false;      // cartesian cell over the conjoints of !
  bool star_invertible = false;  // its lower star
  std::string witness;           // e.g. "g/0 empty"
};

/// Every g/x connected; cross-checked against the cartesian cell
/// !_B^* => !_D^*, whose opcartesianness must agree.
InitialReport is_initial_functor(const Functor& g);

struct LimitTransport {
  bool limit_d = false;
  bool limit_dg = false;
  bool iso = false;  // canonical lim d -> lim (d . g)
  bool ok() const { return limit_d == limit_dg && (!limit_d || iso); }
};

LimitTransport limit_along(const Functor& g, const Functor& d);

struct PastingReport {
  bool gamma_ordinary = false;
  bool composite_ordinary = false;
  bool gamma_pointwise = false;
  bool composite_pointwise = false;
  bool ok() const {
    return gamma_ordinary == composite_ordinary && gamma_pointwise == composite_pointwise;
  }
};

/// gamma: J => 1_M with boundary (s, r); eps: H => 1_M with boundary (r, d),
/// which must be pointwise (PreconditionFailed otherwise).
PastingReport pasting_check(const RanCandidate& gamma, const RanCandidate& eps);
/// gamma (.) eps, followed by the unitor of 1_M.
RanCandidate paste(const RanCandidate& gamma, const RanCandidate& eps);

/// (f_*, r, r . f, 1_r . eps_f).
RanCandidate precomposition_candidate(const Functor& f, const Functor& r);

}  // namespace dcat
