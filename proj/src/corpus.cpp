#include "dcat/corpus.hpp"

#include <functional>
#include <string>

namespace dcat {

CatPtr one_category() {
  static const CatPtr c = CategoryBuilder("One").object("*").build();
  return c;
}

CatPtr two_category() {
  static const CatPtr c = CategoryBuilder("Two").object("0").object("1").arrow("w", "0", "1").build();
  return c;
}

CatPtr parallel_pair() {
  static const CatPtr c = CategoryBuilder("Par")
                              .object("0")
                              .object("1")
                              .arrow("s", "0", "1")
                              .arrow("t", "0", "1")
                              .build();
  return c;
}

CatPtr iso_category() {
  static const CatPtr c = CategoryBuilder("Iso")
                              .object("0")
                              .object("1")
                              .arrow("f", "0", "1")
                              .arrow("g", "1", "0")
                              .compose("g", "f", "1_0")
                              .compose("f", "g", "1_1")
                              .build();
  return c;
}

CatPtr discrete_category(std::size_t n) {
  CategoryBuilder b("Disc" + std::to_string(n));
  for (std::size_t i = 0; i < n; ++i) b.object(std::to_string(i));
  return b.build();
}

CatPtr empty_category() {
  static const CatPtr c = CategoryBuilder("Empty").build();
  return c;
}

CatPtr three_chain() {
  static const CatPtr c = CategoryBuilder("Three")
                              .object("0")
                              .object("1")
                              .object("2")
                              .arrow("a", "0", "1")
                              .arrow("b", "1", "2")
                              .arrow("c", "0", "2")
                              .compose("b", "a", "c")
                              .build();
  return c;
}

CatPtr cospan_category() {
  static const CatPtr c = CategoryBuilder("Cospan")
                              .object("0")
                              .object("1")
                              .object("2")
                              .arrow("p", "0", "2")
                              .arrow("q", "1", "2")
                              .build();
  return c;
}

namespace {

/// All composition tables on the given hom-set sizes that satisfy the
/// category laws. Arrow names are single letters in hom order.
void categories_with_homs(std::size_t n, const std::vector<std::size_t>& homs,
                          std::vector<CatPtr>& out, std::size_t& counter) {
  std::vector<FinCategory::Arrow> arrows;
  std::vector<ArrowId> identities;
  std::vector<std::string> objects;
  for (std::size_t x = 0; x < n; ++x) {
    objects.push_back(std::to_string(x));
    identities.push_back(static_cast<ArrowId>(arrows.size()));
    arrows.push_back({"1_" + objects.back(), static_cast<ObjectId>(x), static_cast<ObjectId>(x)});
  }
  char letter = 'a';
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      const auto extra = homs[x * n + y] - (x == y ? 1 : 0);
      for (std::size_t k = 0; k < extra; ++k) {
        arrows.push_back({std::string(1, letter++), static_cast<ObjectId>(x), static_cast<ObjectId>(y)});
      }
    }
  }
  const auto m = arrows.size();
  std::vector<ArrowId> table(m * m, kNone);
  std::vector<std::vector<ArrowId>> hom(n * n);
  for (std::size_t f = 0; f < m; ++f) {
    hom[static_cast<std::size_t>(arrows[f].source) * n + arrows[f].target].push_back(
        static_cast<ArrowId>(f));
  }
  struct Slot {
    std::size_t g, f;
  };
  std::vector<Slot> slots;
  for (std::size_t g = 0; g < m; ++g) {
    for (std::size_t f = 0; f < m; ++f) {
      if (arrows[f].target != arrows[g].source) continue;
      if (g < n) table[g * m + f] = static_cast<ArrowId>(f);
      else if (f < n) table[g * m + f] = static_cast<ArrowId>(g);
      else slots.push_back({g, f});
    }
  }
  auto comp = [&](ArrowId g, ArrowId f) { return table[static_cast<std::size_t>(g) * m + f]; };
  auto consistent = [&]() {
    for (std::size_t f = n; f < m; ++f) {
      for (std::size_t g = n; g < m; ++g) {
        if (arrows[f].target != arrows[g].source) continue;
        const auto gf = comp(static_cast<ArrowId>(g), static_cast<ArrowId>(f));
        for (std::size_t h = n; h < m; ++h) {
          if (arrows[g].target != arrows[h].source) continue;
          const auto hg = comp(static_cast<ArrowId>(h), static_cast<ArrowId>(g));
          if (gf == kNone || hg == kNone) continue;
          const auto l = comp(static_cast<ArrowId>(h), gf);
          const auto r = comp(hg, static_cast<ArrowId>(f));
          if (l != kNone && r != kNone && l != r) return false;
        }
      }
    }
    return true;
  };
  std::function<void(std::size_t)> rec = [&](std::size_t k) {
    if (k == slots.size()) {
      auto c = std::make_shared<const FinCategory>("C" + std::to_string(counter), objects, arrows,
                                                   identities, table);
      if (!validate_category(*c).ok()) return;
      for (const auto& d : out) {
        if (d->num_objects() == c->num_objects() && d->num_arrows() == c->num_arrows() &&
            find_isomorphism(d, c)) {
          return;
        }
      }
      ++counter;
      out.push_back(std::move(c));
      return;
    }
    const auto [g, f] = slots[k];
    for (auto h : hom[static_cast<std::size_t>(arrows[f].source) * n + arrows[g].target]) {
      table[g * m + f] = h;
      if (consistent()) rec(k + 1);
    }
    table[g * m + f] = kNone;
  };
  rec(0);
}

}  // namespace

std::vector<CatPtr> small_categories(std::size_t max_objects, std::size_t max_arrows) {
  std::vector<CatPtr> out;
  std::size_t counter = 0;
  out.push_back(empty_category());
  ++counter;
  for (std::size_t n = 1; n <= max_objects; ++n) {
    if (n > max_arrows) break;
    std::vector<std::size_t> homs(n * n, 0);
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t cell, std::size_t used) {
      if (cell == n * n) {
        std::vector<CatPtr> found;
        categories_with_homs(n, homs, found, counter);
        for (auto& c : found) {
          bool dup = false;
          for (const auto& d : out) {
            if (d->num_objects() == c->num_objects() && d->num_arrows() == c->num_arrows() &&
                find_isomorphism(d, c)) {
              dup = true;
              break;
            }
          }
          if (!dup) out.push_back(std::move(c));
        }
        return;
      }
      const bool diag = cell / n == cell % n;
      for (std::size_t h = diag ? 1 : 0; used + h <= max_arrows; ++h) {
        homs[cell] = h;
        rec(cell + 1, used + h);
      }
      homs[cell] = 0;
    };
    rec(0, 0);
  }
  return out;
}

std::vector<CatPtr> probe_categories(std::size_t max_objects) {
  auto out = small_categories(max_objects, 4);
  bool has_par = false;
  for (const auto& c : out) {
    if (c->num_objects() == 2 && c->num_arrows() == 4 && find_isomorphism(c, parallel_pair())) {
      has_par = true;
    }
  }
  if (!has_par) out.push_back(parallel_pair());
  return out;
}

std::vector<ProfPtr> enumerate_profunctors(const CatPtr& ap, const CatPtr& bp,
                                           std::size_t max_fiber, std::size_t limit) {
  const auto& a = *ap;
  const auto& b = *bp;
  const auto na = a.num_objects();
  const auto nb = b.num_objects();
  std::vector<ProfPtr> out;
  std::vector<std::size_t> sizes(na * nb, 0);
  std::function<void(std::size_t)> over_sizes = [&](std::size_t cell) {
    if (out.size() >= limit) return;
    if (cell < na * nb) {
      for (std::size_t s = 0; s <= max_fiber; ++s) {
        sizes[cell] = s;
        over_sizes(cell + 1);
      }
      return;
    }
    std::vector<Profunctor::Element> elements;
    std::vector<std::vector<ElemId>> fib(na * nb);
    for (std::size_t x = 0; x < na; ++x) {
      for (std::size_t y = 0; y < nb; ++y) {
        for (std::size_t k = 0; k < sizes[x * nb + y]; ++k) {
          fib[x * nb + y].push_back(static_cast<ElemId>(elements.size()));
          elements.push_back({"e" + std::to_string(elements.size()), static_cast<ObjectId>(x),
                              static_cast<ObjectId>(y)});
        }
      }
    }
    const auto ne = elements.size();
    // left[u][j] and right[v][j]; identities prefilled.
    std::vector<std::vector<ElemId>> left(a.num_arrows(), std::vector<ElemId>(ne, kNone));
    std::vector<std::vector<ElemId>> right(b.num_arrows(), std::vector<ElemId>(ne, kNone));
    struct Slot {
      bool is_left;
      ArrowId arrow;
      ElemId j;
    };
    std::vector<Slot> slots;
    for (std::size_t j = 0; j < ne; ++j) {
      const auto& e = elements[j];
      left[a.identity(e.a)][j] = static_cast<ElemId>(j);
      right[b.identity(e.b)][j] = static_cast<ElemId>(j);
      for (auto u : a.arrows_into(e.a)) {
        if (!a.is_identity(u)) slots.push_back({true, u, static_cast<ElemId>(j)});
      }
      for (auto v : b.arrows_from(e.b)) {
        if (!b.is_identity(v)) slots.push_back({false, v, static_cast<ElemId>(j)});
      }
    }
    auto consistent = [&]() {
      for (std::size_t j = 0; j < ne; ++j) {
        const auto& e = elements[j];
        for (auto u : a.arrows_into(e.a)) {
          const auto ju = left[u][j];
          if (ju == kNone) continue;
          for (auto u2 : a.arrows_into(a.source(u))) {
            const auto x = left[u2][ju];
            const auto y = left[a.compose(u, u2)][j];
            if (x != kNone && y != kNone && x != y) return false;
          }
          for (auto v : b.arrows_from(e.b)) {
            const auto vj = right[v][j];
            if (vj == kNone) continue;
            const auto x = right[v][ju];
            const auto y = left[u][vj];
            if (x != kNone && y != kNone && x != y) return false;
          }
        }
        for (auto v : b.arrows_from(e.b)) {
          const auto vj = right[v][j];
          if (vj == kNone) continue;
          for (auto v2 : b.arrows_from(b.target(v))) {
            const auto x = right[v2][vj];
            const auto y = right[b.compose(v2, v)][j];
            if (x != kNone && y != kNone && x != y) return false;
          }
        }
      }
      return true;
    };
    std::function<void(std::size_t)> rec = [&](std::size_t k) {
      if (out.size() >= limit) return;
      if (k == slots.size()) {
        std::string name = "P" + std::to_string(out.size());
        auto p = Profunctor::from_action(name, ap, bp, elements,
                                         [&](ArrowId u, ElemId j, ArrowId v) {
                                           return right[v][left[u][j]];
                                         });
        if (validate_profunctor(*p).ok()) out.push_back(std::move(p));
        return;
      }
      const auto& s = slots[k];
      const auto& e = elements[s.j];
      const auto& dom = s.is_left ? fib[static_cast<std::size_t>(a.source(s.arrow)) * nb + e.b]
                                  : fib[static_cast<std::size_t>(e.a) * nb + b.target(s.arrow)];
      auto& cellref = s.is_left ? left[s.arrow][s.j] : right[s.arrow][s.j];
      for (auto x : dom) {
        cellref = x;
        if (consistent()) rec(k + 1);
      }
      cellref = kNone;
    };
    rec(0);
  };
  over_sizes(0);
  return out;
}

}  // namespace dcat
