#pragma once

// Finite profunctors and the cells between them: coend composition,
// unitors and associators, companions, conjoints, restrictions, extensions,
// (op)cartesian decisions, star factorisations and the right hom.

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "dcat/fincat.hpp"

namespace dcat {

using ElemId = std::int32_t;

/// A profunctor J: A -/-> B with finite fibres J(a,b) and a two-sided
/// action written `v . j . u = J(u,v)(j)` for u: a' -> a and v: b -> b'.
class Profunctor {
 public:
  struct Element {
    std::string name;
    ObjectId a = kNone;
    ObjectId b = kNone;
  };
  using ActFn = std::function<ElemId(ArrowId u, ElemId j, ArrowId v)>;

  /// Raw constructor. `table` is indexed by act_index and holds kNone for
  /// ill-shaped triples. Only index bounds are checked.
  Profunctor(std::string name, CatPtr source, CatPtr target, std::vector<Element> elements,
             std::vector<ElemId> table);

  /// Tabulates `act` on every well-shaped triple.
  static std::shared_ptr<const Profunctor> from_action(std::string name, CatPtr source,
                                                       CatPtr target, std::vector<Element> elements,
                                                       const ActFn& act);

  const std::string& name() const { return name_; }
  const CatPtr& source() const { return source_; }
  const CatPtr& target() const { return target_; }
  std::size_t num_elements() const { return elements_.size(); }
  const Element& element(ElemId j) const { return elements_[j]; }
  const std::vector<Element>& elements() const { return elements_; }
  std::span<const ElemId> fiber(ObjectId a, ObjectId b) const {
    return fibers_[static_cast<std::size_t>(a) * target_->num_objects() + b];
  }
  /// Elements j with j.a == a, fibre by fibre.
  std::span<const ElemId> from(ObjectId a) const { return from_[a]; }
  /// Elements j with j.b == b, fibre by fibre.
  std::span<const ElemId> into(ObjectId b) const { return into_[b]; }

  /// `v . j . u`, or kNone when the triple is ill-shaped.
  ElemId act(ArrowId u, ElemId j, ArrowId v) const { return table_[act_index(u, j, v)]; }
  /// `j . u`.
  ElemId left(ArrowId u, ElemId j) const {
    return act(u, j, target_->identity(elements_[j].b));
  }
  /// `v . j`.
  ElemId right(ArrowId v, ElemId j) const {
    return act(source_->identity(elements_[j].a), j, v);
  }

  std::size_t act_index(ArrowId u, ElemId j, ArrowId v) const {
    return (static_cast<std::size_t>(u) * elements_.size() + j) * target_->num_arrows() + v;
  }
  const std::vector<ElemId>& table() const { return table_; }
  std::optional<ElemId> find_element(const std::string& name) const;

  /// Structural equality of boundaries, elements and action. Names of the
  /// profunctors themselves are ignored.
  friend bool operator==(const Profunctor& x, const Profunctor& y);

 private:
  std::string name_;
  CatPtr source_;
  CatPtr target_;
  std::vector<Element> elements_;
  std::vector<ElemId> table_;
  std::vector<std::vector<ElemId>> fibers_;
  std::vector<std::vector<ElemId>> from_;
  std::vector<std::vector<ElemId>> into_;
};

using ProfPtr = std::shared_ptr<const Profunctor>;

bool same_prof(const ProfPtr& x, const ProfPtr& y);

ValidationReport validate_profunctor(const Profunctor& p);

class ProfunctorBuilder {
 public:
  ProfunctorBuilder(std::string name, CatPtr source, CatPtr target)
      : name_(std::move(name)), source_(std::move(source)), target_(std::move(target)) {}

  ProfunctorBuilder& element(const std::string& name, const std::string& a, const std::string& b);
  /// Records `v . j . u = j2`.
  ProfunctorBuilder& act(const std::string& v, const std::string& j, const std::string& u,
                         const std::string& j2);

  /// Identity actions are implicit; every other well-shaped (u, j, v) needs
  /// an entry. Throws ValidationError on a gap or a failing law.
  ProfPtr build() const;
  ProfPtr build_unchecked() const;

 private:
  struct Entry {
    std::string v, j, u, j2;
  };
  ProfPtr assemble(bool check) const;

  std::string name_;
  CatPtr source_;
  CatPtr target_;
  std::vector<Profunctor::Element> elements_;
  std::vector<Entry> entries_;
};

/// The hom profunctor 1_A. Element ids coincide with arrow ids.
ProfPtr hom_profunctor(const CatPtr& a);
ProfPtr empty_profunctor(const CatPtr& a, const CatPtr& b);

/// A cell with horizontal source J: A -/-> B, horizontal target K: C -/-> D
/// and vertical boundary f: A -> C (left), g: B -> D (right).
struct Cell {
  ProfPtr source;
  ProfPtr target;
  Functor left;
  Functor right;
  std::vector<ElemId> map;  // one image per element of source
  std::string name;

  ElemId operator()(ElemId j) const { return map[j]; }
};

/// Same boundaries (structurally) and same component maps.
bool operator==(const Cell& x, const Cell& y);
ValidationReport validate_cell(const Cell& c);

Cell identity_cell(const ProfPtr& j);
/// The vertical unit cell 1_f: 1_A => 1_C with boundary (f, f).
Cell unit_cell(const Functor& f);
/// `bottom . top`: top's horizontal target must be bottom's horizontal source.
Cell vcompose(const Cell& top, const Cell& bottom);

/// Every natural cell J => K with the given vertical boundary.
std::vector<Cell> all_cells(const ProfPtr& j, const ProfPtr& k, const Functor& f,
                            const Functor& g);
/// The component maps of all_cells, in the same order, without building cells.
void for_each_cell_map(const ProfPtr& j, const ProfPtr& k, const Functor& f, const Functor& g,
                       const std::function<void(const std::vector<ElemId>&)>& visit);

/// The coend J (.) H with its quotient map onto canonical representatives.
struct Composite {
  ProfPtr left;
  ProfPtr right;
  ProfPtr prof;
  /// Representative pair of each element of prof.
  std::vector<std::pair<ElemId, ElemId>> reps;
  /// Class of the pair (j, h), indexed j * |H| + h; kNone when not composable.
  std::vector<ElemId> classes;

  ElemId cls(ElemId j, ElemId h) const {
    return classes[static_cast<std::size_t>(j) * right->num_elements() + h];
  }
};

/// Classes are computed by union-find; representatives are least in
/// (b, j, h) order; elements are named "[j|h]".
Composite compose_prof(const ProfPtr& j, const ProfPtr& h);

/// phi (.) chi; phi's right boundary must equal chi's left boundary.
Cell hcompose(const Cell& phi, const Cell& chi);

/// l: 1_A (.) M => M, [u, m] |-> m . u.
Cell left_unitor(const ProfPtr& m);
Cell left_unitor_inv(const ProfPtr& m);
/// r: M (.) 1_B => M, [m, v] |-> v . m.
Cell right_unitor(const ProfPtr& m);
Cell right_unitor_inv(const ProfPtr& m);
/// a: (J (.) H) (.) K => J (.) (H (.) K).
Cell associator(const ProfPtr& j, const ProfPtr& h, const ProfPtr& k);
Cell associator_inv(const ProfPtr& j, const ProfPtr& h, const ProfPtr& k);

/// Companion f_*(a, c) = C(fa, c) with elements "(a,u)".
struct Companion {
  ProfPtr prof;
  Cell epsilon;  // f_* => 1_C, boundary (f, id)
  Cell eta;      // 1_A => f_*, boundary (id, f)
  std::vector<ArrowId> arrows;             // underlying arrow of each element
  std::vector<std::vector<ElemId>> index;  // index[a][u]

  ElemId element(ObjectId a, ArrowId u) const { return index[a][u]; }
};
/// Conjoint f^*(c, a) = C(c, fa) with elements "(u,a)".
struct Conjoint {
  ProfPtr prof;
  Cell epsilon;  // f^* => 1_C, boundary (id, f)
  Cell eta;      // 1_A => f^*, boundary (f, id)
  std::vector<ArrowId> arrows;
  std::vector<std::vector<ElemId>> index;  // index[a][u]

  ElemId element(ArrowId u, ObjectId a) const { return index[a][u]; }
};

/// Both companion identities are verified; InternalInvariant if one fails.
Companion companion(const Functor& f);
Conjoint conjoint(const Functor& f);
/// The same cells, without the verification.
Companion companion_unchecked(const Functor& f);
Conjoint conjoint_unchecked(const Functor& f);

struct IdentityCheck {
  bool vertical = false;    // epsilon . eta == 1_f
  bool horizontal = false;  // unitor-conjugated pasting of eta and epsilon
};
IdentityCheck check_companion(const Functor& f, const Companion& c);
IdentityCheck check_conjoint(const Functor& f, const Conjoint& c);

/// K(f, g)(a, b) = K(fa, gb), elements "(a,k,b)", with its cartesian cell.
struct Restriction {
  ProfPtr prof;
  Cell cartesian;
};
Restriction restrict(const ProfPtr& k, const Functor& f, const Functor& g);

/// f^* (.) (J (.) g_*) with its opcartesian cell.
struct Extension {
  ProfPtr prof;
  Cell opcartesian;
  Composite inner;  // J (.) g_*
  Composite outer;  // f^* (.) inner
};
Extension extend(const ProfPtr& j, const Functor& f, const Functor& g);

/// Comparison J -> K(f, g) is bijective.
bool is_cartesian(const Cell& phi);
/// Comparison f^* (.) J (.) g_* -> K, [u, [j, v]] |-> v . phi(j) . u, is bijective.
bool is_opcartesian(const Cell& phi);

/// phi_*: J (.) g_* => f_* (.) K, [j, (b, v)] |-> [(a, 1), v . phi(j)].
/// The defining factorisation of phi is verified.
Cell lower_star(const Cell& phi);
/// phi^*: f^* (.) J => K (.) g^*, [(u, a), j] |-> [phi(j) . u, (1, b)].
Cell upper_star(const Cell& phi);

/// Whether every component of a horizontal cell is a bijection.
bool is_componentwise_bijective(const Cell& c);

/// K <| H: A -/-> B for K: A -/-> E and H: B -/-> E. Elements are the
/// natural families alpha_e: H(b, e) -> K(a, e), named "<a,b:k1,...>".
struct RightHom {
  ProfPtr k;
  ProfPtr h;
  ProfPtr prof;
  /// families[x][i] is the image of the i-th element of H.from(b).
  std::vector<std::vector<ElemId>> families;
  /// Position of each element of H within H.from(its source object).
  std::vector<std::size_t> position;

  /// alpha_x(h) for h in H.from(b).
  ElemId apply(ElemId x, ElemId hel) const { return families[x][position[hel]]; }
  /// The element with the given family, or kNone.
  ElemId find(ObjectId a, ObjectId b, const std::vector<ElemId>& family) const;

  std::map<std::tuple<ObjectId, ObjectId, std::vector<ElemId>>, ElemId> lookup;
};
RightHom rhom(const ProfPtr& k, const ProfPtr& h);

/// theta: J (.) H => K (horizontal) to theta_flat: J => K <| H.
Cell transpose_flat(const Cell& theta, const Composite& jh, const RightHom& kh);
/// psi: J => K <| H (horizontal) to psi_sharp: J (.) H => K.
Cell transpose_sharp(const Cell& psi, const Composite& jh, const RightHom& kh);

}  // namespace dcat
