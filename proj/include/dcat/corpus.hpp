#pragma once

// Standard small categories and enumerative generators for test corpora.

#include <cstdint>
#include <vector>

#include "dcat/fincat.hpp"
#include "dcat/prof.hpp"

namespace dcat {

/// The terminal category: one object "*" and its identity.
CatPtr one_category();
/// The walking arrow: objects 0, 1 and w: 0 -> 1.
CatPtr two_category();
/// Objects 0, 1 with two arrows s, t: 0 -> 1.
CatPtr parallel_pair();
/// Objects 0, 1 with f: 0 -> 1 and its inverse g.
CatPtr iso_category();
CatPtr discrete_category(std::size_t n);
CatPtr empty_category();
/// Objects 0, 1, 2 with a: 0 -> 1, b: 1 -> 2 and their composite.
CatPtr three_chain();
/// The cospan 0 -> 2 <- 1.
CatPtr cospan_category();

/// Every category with at most the given numbers of objects and arrows,
/// one representative per isomorphism class, in a fixed order.
std::vector<CatPtr> small_categories(std::size_t max_objects, std::size_t max_arrows);

/// The probe categories used for bounded universal quantifiers: every
/// category with at most `max_objects` objects and 4 arrows, plus the
/// parallel pair.
std::vector<CatPtr> probe_categories(std::size_t max_objects = 2);

/// Every profunctor A -/-> B whose fibres have at most `max_fiber`
/// elements, in a fixed order, stopping after `limit` results.
std::vector<ProfPtr> enumerate_profunctors(const CatPtr& a, const CatPtr& b, std::size_t max_fiber,
                                           std::size_t limit);

/// Deterministic pseudo-random subsequence of `items` of length at most n.
template <class T>
std::vector<T> sample(const std::vector<T>& items, std::size_t n, std::uint64_t seed);

}  // namespace dcat

#include "dcat/corpus_sample.ipp"
