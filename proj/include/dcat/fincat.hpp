#pragma once

// Finite categories, functors, natural transformations, comma categories,
// limits and connectivity.

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dcat/error.hpp"

namespace dcat {

using ObjectId = std::int32_t;
using ArrowId = std::int32_t;
inline constexpr std::int32_t kNone = -1;

/// A finite category with interned objects and arrows and a stored
/// composition table. Instances are immutable once built.
///
/// Arrow order is fixed at construction; every enumeration in the library
/// walks objects and arrows in this order, which makes all canonical choices
/// reproducible.
class FinCategory {
 public:
  struct Arrow {
    std::string name;
    ObjectId source = kNone;
    ObjectId target = kNone;
  };

  /// Raw constructor. Performs no law checking beyond index bounds, so
  /// ill-formed tables can be represented and handed to validate_category.
  /// `table[g * n + f]` holds `g . f`, or kNone.
  FinCategory(std::string name, std::vector<std::string> objects, std::vector<Arrow> arrows,
              std::vector<ArrowId> identities, std::vector<ArrowId> table);

  const std::string& name() const { return name_; }
  std::size_t num_objects() const { return objects_.size(); }
  std::size_t num_arrows() const { return arrows_.size(); }

  const std::string& object_name(ObjectId x) const { return objects_[x]; }
  const Arrow& arrow(ArrowId f) const { return arrows_[f]; }
  ObjectId source(ArrowId f) const { return arrows_[f].source; }
  ObjectId target(ArrowId f) const { return arrows_[f].target; }
  ArrowId identity(ObjectId x) const { return identities_[x]; }
  bool is_identity(ArrowId f) const { return identities_[arrows_[f].source] == f; }

  /// `g . f`; kNone when the pair is not composable.
  ArrowId compose(ArrowId g, ArrowId f) const {
    return table_[static_cast<std::size_t>(g) * arrows_.size() + f];
  }

  std::span<const ArrowId> hom(ObjectId a, ObjectId b) const {
    return homs_[static_cast<std::size_t>(a) * objects_.size() + b];
  }
  std::span<const ArrowId> arrows_from(ObjectId a) const { return out_[a]; }
  std::span<const ArrowId> arrows_into(ObjectId b) const { return in_[b]; }

  std::optional<ObjectId> find_object(const std::string& name) const;
  std::optional<ArrowId> find_arrow(const std::string& name) const;

  const std::vector<std::string>& objects() const { return objects_; }
  const std::vector<Arrow>& arrows() const { return arrows_; }
  const std::vector<ArrowId>& identities() const { return identities_; }
  const std::vector<ArrowId>& table() const { return table_; }

  /// Structural equality: names, order and tables. The category name is ignored.
  friend bool operator==(const FinCategory& x, const FinCategory& y);

 private:
  std::string name_;
  std::vector<std::string> objects_;
  std::vector<Arrow> arrows_;
  std::vector<ArrowId> identities_;
  std::vector<ArrowId> table_;
  std::vector<std::vector<ArrowId>> homs_;
  std::vector<std::vector<ArrowId>> out_;
  std::vector<std::vector<ArrowId>> in_;
};

using CatPtr = std::shared_ptr<const FinCategory>;

bool same_category(const CatPtr& x, const CatPtr& y);

/// Incremental construction with implicit identities named `1_x` and
/// implicit composites with identities.
class CategoryBuilder {
 public:
  explicit CategoryBuilder(std::string name) : name_(std::move(name)) {}

  CategoryBuilder& object(const std::string& name);
  CategoryBuilder& arrow(const std::string& name, const std::string& source,
                         const std::string& target);
  /// Records `g . f = h`.
  CategoryBuilder& compose(const std::string& g, const std::string& f, const std::string& h);

  /// Throws ValidationError naming the first composable non-identity pair
  /// that has no entry, or the first violated law.
  CatPtr build() const;
  /// Builds without the totality and law checks.
  CatPtr build_unchecked() const;

 private:
  struct Entry {
    std::string g, f, h;
  };
  CatPtr assemble(bool check) const;

  std::string name_;
  std::vector<std::string> objects_;
  std::vector<FinCategory::Arrow> arrows_;  // non-identity arrows, endpoints by index
  std::vector<Entry> composites_;
};

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

ValidationReport validate_category(const FinCategory& c);

/// A functor between finite categories, stored as its object and arrow maps.
struct Functor {
  CatPtr source;
  CatPtr target;
  std::vector<ObjectId> on_objects;
  std::vector<ArrowId> on_arrows;
  std::string name;

  ObjectId obj(ObjectId x) const { return on_objects[x]; }
  ArrowId arr(ArrowId f) const { return on_arrows[f]; }
};

/// Same boundary categories (structurally) and same maps.
bool operator==(const Functor& f, const Functor& g);

ValidationReport validate_functor(const Functor& f);
Functor identity_functor(const CatPtr& c);
/// `g . f`.
Functor compose(const Functor& g, const Functor& f);
Functor constant_functor(const CatPtr& source, const CatPtr& target, ObjectId value);
/// The functor One -> c picking the object x. `one` must be a terminal category.
Functor pick(const CatPtr& one, const CatPtr& c, ObjectId x);
/// The unique functor into a one-object, one-arrow category.
Functor to_terminal(const CatPtr& c, const CatPtr& one);

/// A natural transformation `source => target`, one component per object.
struct NatTransf {
  Functor source;
  Functor target;
  std::vector<ArrowId> components;
};

bool operator==(const NatTransf& x, const NatTransf& y);
ValidationReport validate_nat_transf(const NatTransf& t);

/// Every natural transformation f => g, in lexicographic component order.
std::vector<NatTransf> all_nat_transfs(const Functor& f, const Functor& g);

struct Comma {
  CatPtr category;
  Functor proj_left;
  Functor proj_right;
  /// `f . proj_left => g . proj_right`; the component at (c, u, d) is u.
  NatTransf cell;
};

/// The comma category f/g. Objects are triples (c, u: fc -> gd, d) named
/// "(c,u,d)", arrows are pairs (p, q) named "(p,q)".
Comma comma_category(const Functor& f, const Functor& g);

struct Cone {
  ObjectId apex = kNone;
  std::vector<ArrowId> legs;  // one per object of the diagram's source

  friend bool operator==(const Cone&, const Cone&) = default;
};

bool is_cone(const Functor& diagram, const Cone& cone);
/// All cones over `diagram` with the given apex, legs in lexicographic order.
std::vector<Cone> cones_with_apex(const Functor& diagram, ObjectId apex);
/// Arrows h: cone.apex -> limit.apex with limit.legs[i] . h == cone.legs[i].
std::vector<ArrowId> mediating_arrows(const Functor& diagram, const Cone& limit, const Cone& cone);
bool is_terminal_cone(const Functor& diagram, const Cone& cone);
/// The least terminal cone (apex order first, then legs lexicographically),
/// or nullopt when the target lacks this limit.
std::optional<Cone> limit(const Functor& diagram);

/// Whether arrow f has a two-sided inverse; returns it.
std::optional<ArrowId> inverse(const FinCategory& c, ArrowId f);

/// Nonempty and connected as an undirected graph.
bool is_connected(const FinCategory& c);
std::size_t connected_components(const FinCategory& c);

/// All functors a -> m in lexicographic order of (object map, arrow map).
std::vector<Functor> all_functors(const CatPtr& a, const CatPtr& m);
/// An isomorphism x -> y if one exists.
std::optional<Functor> find_isomorphism(const CatPtr& x, const CatPtr& y);
bool is_isomorphism(const Functor& f);

}  // namespace dcat
