#pragma once

// Causal, strong causal and cache consistency checkers.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "causal_rnr/errors.hpp"
#include "causal_rnr/model.hpp"
#include "causal_rnr/relation.hpp"
#include "causal_rnr/view_search.hpp"

namespace causal_rnr {

enum class ConsistencyModel { causal, strong_causal, cache };

inline std::string to_string(ConsistencyModel m) {
  switch (m) {
    case ConsistencyModel::causal: return "causal";
    case ConsistencyModel::strong_causal: return "strong-causal";
    case ConsistencyModel::cache: return "cache";
  }
  return "?";
}

struct CheckResult {
  bool ok = true;
  std::optional<ProcessId> process;
  std::optional<Edge> missing_edge;
  std::optional<std::string> variable;
  std::string reason;

  explicit operator bool() const noexcept { return ok; }

  static CheckResult violation(std::string why) {
    CheckResult r;
    r.ok = false;
    r.reason = std::move(why);
    return r;
  }
};

/// SCO(V): (w1, w2) with w2 written by i and w1 before w2 in V_i.
inline Relation compute_sco(const Program& program, const ViewSet& vs) {
  Relation sco(program.size(), program.writes());
  for (const auto& [p, v] : vs) {
    const auto& seq = v.order();
    for (std::size_t j = 0; j < seq.size(); ++j) {
      const auto& later = program.op(seq[j]);
      if (!later.is_write() || later.process != p) continue;
      for (std::size_t k = 0; k < j; ++k)
        if (program.is_write(seq[k])) sco.insert(seq[k], seq[j]);
    }
  }
  return sco;
}

namespace detail {

inline CheckResult first_missing(const Program& program, ProcessId p, const View& v, const Relation& needed,
                                 const std::string& label) {
  Relation have = v.relation(program.size());
  for (auto e : needed.edges()) {
    if (!have.in_universe(e.first) || !have.in_universe(e.second)) continue;
    if (have.contains(e)) continue;
    CheckResult r = CheckResult::violation("view " + std::to_string(p) + " does not respect " + label + ": " +
                                           program.name(e.first) + "->" + program.name(e.second));
    r.process = p;
    r.missing_edge = e;
    return r;
  }
  return {};
}

inline CheckResult check_views_valid(const ViewSet& vs, const Execution& e) {
  check_view_set_universe(e.program(), vs);
  for (const auto& [p, v] : vs) {
    auto valid = validate_view(v, e);
    if (!valid) {
      CheckResult r = CheckResult::violation(valid.message);
      r.process = p;
      if (valid.observed && valid.read) r.missing_edge = Edge{*valid.read, *valid.observed};
      return r;
    }
  }
  return {};
}

}  // namespace detail

/// Each V_i is a valid view respecting WO u (PO | universe_i).
inline CheckResult check_causal(const ViewSet& vs, const Execution& e) {
  if (auto valid = detail::check_views_valid(vs, e); !valid) return valid;
  const Program& program = e.program();
  const Relation wo = write_read_write(e);
  for (const auto& [p, v] : vs) {
    Relation needed = union_closed(wo, program.po_restricted(p));
    if (auto r = detail::first_missing(program, p, v, needed, "WO u PO"); !r) return r;
  }
  return {};
}

/// Each V_i is a valid view respecting SCO(V) u (PO | universe_i).
inline CheckResult check_strong_causal(const ViewSet& vs, const Execution& e) {
  if (auto valid = detail::check_views_valid(vs, e); !valid) return valid;
  const Program& program = e.program();
  const Relation sco = compute_sco(program, vs);
  for (const auto& [p, v] : vs) {
    Relation needed = union_closed(sco, program.po_restricted(p));
    if (auto r = detail::first_missing(program, p, v, needed, "SCO u PO"); !r) return r;
  }
  return {};
}

inline CheckResult check(ConsistencyModel m, const ViewSet& vs, const Execution& e) {
  switch (m) {
    case ConsistencyModel::causal: return check_causal(vs, e);
    case ConsistencyModel::strong_causal: return check_strong_causal(vs, e);
    case ConsistencyModel::cache: break;
  }
  throw std::invalid_argument("cache consistency is checked per variable; use check_cache");
}

struct SearchLimits {
  std::size_t max_ops = 10;
  std::uint64_t node_budget = 200'000'000;
};

/// Some view-set explaining e under m, or nullopt after exhausting the search.
inline std::optional<ViewSet> exists_explanation(const Execution& e, ConsistencyModel m,
                                                 const SearchLimits& limits = {}) {
  if (m == ConsistencyModel::cache)
    throw std::invalid_argument("cache consistency has per-variable witnesses; use find_cache_orders");
  if (e.program().size() > limits.max_ops)
    throw BudgetExceeded("execution has " + std::to_string(e.program().size()) + " operations, cap is " +
                             std::to_string(limits.max_ops),
                         0);
  SearchConfig config;
  config.rule = m == ConsistencyModel::causal ? CausalityRule::causal : CausalityRule::strong_causal;
  config.fixed_reads = &e;
  config.node_budget = limits.node_budget;
  return first_view_set(e.program(), config);
}

using CacheOrders = std::map<std::string, std::vector<OpId>>;

namespace detail {

// Total order of the given ops respecting PO with read validity, by backtracking.
inline bool order_variable(const Execution& e, const std::vector<OpId>& ops, std::vector<OpId>& out,
                           std::vector<bool>& used, std::optional<OpId> last) {
  if (out.size() == ops.size()) return true;
  const Program& program = e.program();
  for (std::size_t k = 0; k < ops.size(); ++k) {
    if (used[k]) continue;
    const OpId x = ops[k];
    bool ready = true;
    for (std::size_t j = 0; j < ops.size() && ready; ++j)
      if (!used[j] && program.po_before(ops[j], x)) ready = false;
    if (!ready) continue;
    if (program.is_read(x) && e.writes_to(x) != last) continue;
    used[k] = true;
    out.push_back(x);
    if (order_variable(e, ops, out, used, program.is_write(x) ? std::optional<OpId>(x) : last)) return true;
    out.pop_back();
    used[k] = false;
  }
  return false;
}

}  // namespace detail

/// Per-variable total orders explaining e under cache consistency, if any.
inline std::optional<CacheOrders> find_cache_orders(const Execution& e) {
  const Program& program = e.program();
  CacheOrders orders;
  for (const auto& var : program.variables()) {
    std::vector<OpId> ops;
    for (std::size_t i = 0; i < program.size(); ++i)
      if (program.op(static_cast<OpId>(i)).variable == var) ops.push_back(static_cast<OpId>(i));
    std::vector<OpId> out;
    std::vector<bool> used(ops.size(), false);
    if (!detail::order_variable(e, ops, out, used, std::nullopt)) return std::nullopt;
    orders.emplace(var, std::move(out));
  }
  return orders;
}

inline CheckResult check_cache(const Execution& e) {
  const Program& program = e.program();
  for (const auto& var : program.variables()) {
    std::vector<OpId> ops;
    for (std::size_t i = 0; i < program.size(); ++i)
      if (program.op(static_cast<OpId>(i)).variable == var) ops.push_back(static_cast<OpId>(i));
    std::vector<OpId> out;
    std::vector<bool> used(ops.size(), false);
    if (!detail::order_variable(e, ops, out, used, std::nullopt)) {
      CheckResult r = CheckResult::violation("no total order on variable " + var + " respects PO and the reads");
      r.variable = var;
      return r;
    }
  }
  return {};
}

}  // namespace causal_rnr
