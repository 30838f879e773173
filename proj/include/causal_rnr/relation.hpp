#pragma once

// Finite binary relations over a dense operation index space.
//
// A Relation has an explicit universe (a subset of [0, domain)) and an edge
// set over it. Edges are stored as bit rows, so closure is a word-parallel
// Floyd-Warshall. Self-loops are never stored: closing a cyclic relation
// drops the diagonal and cyclicity is reported by has_cycle() instead.

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "causal_rnr/errors.hpp"

namespace causal_rnr {

using OpId = std::uint32_t;
using Edge = std::pair<OpId, OpId>;

class Relation {
 public:
  Relation() = default;

  /// Empty relation with an empty universe.
  explicit Relation(std::size_t domain)
      : domain_(domain), words_((domain + 63) / 64), universe_(words_, 0), rows_(domain * words_, 0) {}

  /// Empty relation over the given universe.
  Relation(std::size_t domain, std::span<const OpId> universe) : Relation(domain) {
    for (OpId a : universe) add_to_universe(a);
  }

  /// Empty relation whose universe is the whole domain.
  static Relation over_domain(std::size_t domain) {
    Relation r(domain);
    for (std::size_t a = 0; a < domain; ++a) r.add_to_universe(static_cast<OpId>(a));
    return r;
  }

  /// Closed total order following the given sequence; the universe is the sequence.
  static Relation chain(std::size_t domain, std::span<const OpId> sequence) {
    Relation r(domain, sequence);
    for (std::size_t i = 0; i < sequence.size(); ++i)
      for (std::size_t j = i + 1; j < sequence.size(); ++j) r.insert(sequence[i], sequence[j]);
    return r;
  }

  std::size_t domain() const noexcept { return domain_; }

  bool in_universe(OpId a) const noexcept {
    return a < domain_ && (universe_[a / 64] >> (a % 64)) & 1U;
  }

  void add_to_universe(OpId a) {
    check_index(a);
    universe_[a / 64] |= std::uint64_t{1} << (a % 64);
  }

  std::vector<OpId> universe() const {
    std::vector<OpId> out;
    for (std::size_t a = 0; a < domain_; ++a)
      if (in_universe(static_cast<OpId>(a))) out.push_back(static_cast<OpId>(a));
    return out;
  }

  std::size_t universe_size() const noexcept {
    std::size_t n = 0;
    for (auto w : universe_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
  }

  bool contains(OpId a, OpId b) const noexcept {
    if (a >= domain_ || b >= domain_) return false;
    return (rows_[a * words_ + b / 64] >> (b % 64)) & 1U;
  }
  bool contains(const Edge& e) const noexcept { return contains(e.first, e.second); }

  /// a <= b: equal, or related.
  bool leq(OpId a, OpId b) const noexcept { return a == b || contains(a, b); }

  void insert(OpId a, OpId b) {
    if (a == b) throw std::invalid_argument("Relation: self-loops are not representable");
    if (!in_universe(a) || !in_universe(b))
      throw std::invalid_argument("Relation: edge endpoint outside universe");
    rows_[a * words_ + b / 64] |= std::uint64_t{1} << (b % 64);
  }
  void insert(const Edge& e) { insert(e.first, e.second); }

  void erase(OpId a, OpId b) noexcept {
    if (a >= domain_ || b >= domain_) return;
    rows_[a * words_ + b / 64] &= ~(std::uint64_t{1} << (b % 64));
  }
  void erase(const Edge& e) noexcept { erase(e.first, e.second); }

  /// Edges in lexicographic (a, b) order.
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    for (std::size_t a = 0; a < domain_; ++a)
      for (std::size_t w = 0; w < words_; ++w) {
        std::uint64_t bits = rows_[a * words_ + w];
        while (bits) {
          auto bit = static_cast<std::size_t>(std::countr_zero(bits));
          out.emplace_back(static_cast<OpId>(a), static_cast<OpId>(w * 64 + bit));
          bits &= bits - 1;
        }
      }
    return out;
  }

  std::vector<OpId> successors(OpId a) const {
    std::vector<OpId> out;
    for (std::size_t b = 0; b < domain_; ++b)
      if (contains(a, static_cast<OpId>(b))) out.push_back(static_cast<OpId>(b));
    return out;
  }

  std::vector<OpId> predecessors(OpId b) const {
    std::vector<OpId> out;
    for (std::size_t a = 0; a < domain_; ++a)
      if (contains(static_cast<OpId>(a), b)) out.push_back(static_cast<OpId>(a));
    return out;
  }

  std::size_t size() const noexcept {
    std::size_t n = 0;
    for (auto w : rows_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
  }
  bool empty() const noexcept {
    return std::all_of(rows_.begin(), rows_.end(), [](std::uint64_t w) { return w == 0; });
  }

  /// Edge-set inclusion; universes are ignored.
  bool subset_of(const Relation& other) const {
    same_domain(other);
    for (std::size_t i = 0; i < rows_.size(); ++i)
      if (rows_[i] & ~other.rows_[i]) return false;
    return true;
  }

  friend bool operator==(const Relation& x, const Relation& y) = default;

  /// Edge union in place; universes are merged.
  Relation& merge(const Relation& other) {
    same_domain(other);
    for (std::size_t i = 0; i < rows_.size(); ++i) rows_[i] |= other.rows_[i];
    for (std::size_t i = 0; i < universe_.size(); ++i) universe_[i] |= other.universe_[i];
    return *this;
  }

  /// Removes every edge of other; universe unchanged.
  Relation& subtract(const Relation& other) {
    same_domain(other);
    for (std::size_t i = 0; i < rows_.size(); ++i) rows_[i] &= ~other.rows_[i];
    return *this;
  }

  /// Raw row access for the closure kernels.
  std::span<std::uint64_t> row(std::size_t a) { return {rows_.data() + a * words_, words_}; }
  std::span<const std::uint64_t> row(std::size_t a) const { return {rows_.data() + a * words_, words_}; }
  std::size_t words() const noexcept { return words_; }

 private:
  void check_index(OpId a) const {
    if (a >= domain_) throw std::out_of_range("Relation: operation index outside domain");
  }
  void same_domain(const Relation& other) const {
    if (other.domain_ != domain_) throw std::invalid_argument("Relation: domain mismatch");
  }

  std::size_t domain_ = 0;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> universe_;
  std::vector<std::uint64_t> rows_;
};

namespace detail {

// Reachability including the diagonal bit for nodes that lie on a cycle.
inline Relation reachability_with_loops(const Relation& r) {
  Relation c = r;
  const std::size_t n = c.domain();
  for (std::size_t k = 0; k < n; ++k) {
    auto row_k = c.row(k);
    for (std::size_t i = 0; i < n; ++i) {
      if (!((c.row(i)[k / 64] >> (k % 64)) & 1U)) continue;
      auto row_i = c.row(i);
      for (std::size_t w = 0; w < c.words(); ++w) row_i[w] |= row_k[w];
    }
  }
  return c;
}

inline bool diagonal_bit(const Relation& c, std::size_t a) {
  return (c.row(a)[a / 64] >> (a % 64)) & 1U;
}

inline void clear_diagonal(Relation& c) {
  for (std::size_t a = 0; a < c.domain(); ++a) c.row(a)[a / 64] &= ~(std::uint64_t{1} << (a % 64));
}

}  // namespace detail

/// Smallest transitive superset of r (no self-loops materialized).
inline Relation transitive_closure(const Relation& r) {
  Relation c = detail::reachability_with_loops(r);
  detail::clear_diagonal(c);
  return c;
}

inline bool has_cycle(const Relation& r) {
  Relation c = detail::reachability_with_loops(r);
  for (std::size_t a = 0; a < c.domain(); ++a)
    if (detail::diagonal_bit(c, a)) return true;
  return false;
}

/// Unique minimal edge set with the same closure as the acyclic relation p.
inline Relation transitive_reduction(const Relation& p) {
  if (has_cycle(p)) throw CyclicInput("transitive_reduction: input relation has a cycle");
  Relation closed = transitive_closure(p);
  Relation reduced = closed;
  const std::size_t n = closed.domain();
  // (a, b) is redundant iff some successor k of a also reaches b.
  for (std::size_t a = 0; a < n; ++a) {
    std::vector<std::uint64_t> via(closed.words(), 0);
    for (OpId k : closed.successors(static_cast<OpId>(a))) {
      auto row_k = closed.row(k);
      for (std::size_t w = 0; w < via.size(); ++w) via[w] |= row_k[w];
    }
    auto row_a = reduced.row(a);
    for (std::size_t w = 0; w < via.size(); ++w) row_a[w] &= ~via[w];
  }
  return reduced;
}

/// Union followed by transitive closure. May be cyclic; ask has_cycle().
inline Relation union_closed(const Relation& a, const Relation& b) {
  Relation u = a;
  u.merge(b);
  return transitive_closure(u);
}

/// Plain edge union, no closure.
inline Relation disjoint_union(const Relation& a, const Relation& b) {
  Relation u = a;
  u.merge(b);
  return u;
}

inline Relation set_difference(const Relation& a, const Relation& b) {
  Relation d = a;
  d.subtract(b);
  return d;
}

/// Edges with both endpoints in s; the universe becomes s.
inline Relation restrict(const Relation& r, std::span<const OpId> s) {
  Relation out(r.domain(), s);
  for (auto [a, b] : r.edges())
    if (out.in_universe(a) && out.in_universe(b)) out.insert(a, b);
  return out;
}

template <class Pred>
Relation restrict_if(const Relation& r, Pred&& keep) {
  std::vector<OpId> s;
  for (OpId a : r.universe())
    if (keep(a)) s.push_back(a);
  return restrict(r, s);
}

inline bool is_transitive(const Relation& r) { return transitive_closure(r) == r; }

inline bool is_partial_order(const Relation& r) { return !has_cycle(r) && is_transitive(r); }

inline bool is_total_order(const Relation& r) {
  if (!is_partial_order(r)) return false;
  auto u = r.universe();
  for (std::size_t i = 0; i < u.size(); ++i)
    for (std::size_t j = i + 1; j < u.size(); ++j)
      if (!r.contains(u[i], u[j]) && !r.contains(u[j], u[i])) return false;
  return true;
}

}  // namespace causal_rnr
