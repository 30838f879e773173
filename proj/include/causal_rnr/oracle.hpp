#pragma once

// Brute-force ground truth for records: certifying replays, goodness
// verdicts, and the constructive steps behind the optimality results
// (view extension and necessity witnesses).

#include <algorithm>
#include <cstdint>
#include <future>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "causal_rnr/consistency.hpp"
#include "causal_rnr/errors.hpp"
#include "causal_rnr/model.hpp"
#include "causal_rnr/record.hpp"
#include "causal_rnr/record_m1.hpp"
#include "causal_rnr/record_m2.hpp"
#include "causal_rnr/relation.hpp"
#include "causal_rnr/view_search.hpp"

namespace causal_rnr {

struct OracleLimits {
  std::size_t max_ops = 10;
  std::uint64_t node_budget = 200'000'000;
  unsigned jobs = 1;
};

inline CausalityRule rule_for(ConsistencyModel m) {
  switch (m) {
    case ConsistencyModel::causal: return CausalityRule::causal;
    case ConsistencyModel::strong_causal: return CausalityRule::strong_causal;
    case ConsistencyModel::cache: break;
  }
  throw std::invalid_argument("replay oracle supports causal and strong-causal consistency only");
}

namespace detail {

inline void check_cap(const Program& program, const OracleLimits& limits) {
  if (program.size() > limits.max_ops)
    throw BudgetExceeded("program has " + std::to_string(program.size()) + " operations, enumeration cap is " +
                             std::to_string(limits.max_ops),
                         0);
}

inline SearchConfig replay_config(const Record& record, ConsistencyModel m, const OracleLimits& limits) {
  SearchConfig config;
  config.rule = rule_for(m);
  config.node_budget = limits.node_budget;
  for (const auto& [p, r] : record.per_process) config.required.emplace(p, r);
  return config;
}

}  // namespace detail

/// Calls visit on every view-set certifying a replay of record under m, in
/// lexicographic order, until visit returns false. Replay reads return
/// whatever their own view dictates.
template <class Visitor>
SearchStats enumerate_certifying(const Program& program, const Record& record, ConsistencyModel m, Visitor&& visit,
                                 const OracleLimits& limits = {}) {
  detail::check_cap(program, limits);
  const SearchConfig config = detail::replay_config(record, m, limits);
  return search_view_sets(program, config, std::forward<Visitor>(visit));
}

inline std::vector<ViewSet> all_certifying(const Program& program, const Record& record, ConsistencyModel m,
                                           const OracleLimits& limits = {}) {
  std::vector<ViewSet> out;
  enumerate_certifying(
      program, record, m,
      [&](const ViewSet& vs) {
        out.push_back(vs);
        return true;
      },
      limits);
  return out;
}

/// Whether vs certifies a replay of record under m.
inline bool certifies(const Program& program, const ViewSet& vs, const Record& record, ConsistencyModel m) {
  check_view_set_universe(program, vs);
  for (const auto& [p, r] : record.per_process) {
    auto it = vs.find(p);
    if (it == vs.end() || !r.subset_of(it->second.relation(program.size()))) return false;
  }
  return static_cast<bool>(check(m, vs, derive_writes_to(program, vs)));
}

enum class Fidelity { model1, model2 };

struct Verdict {
  bool good = true;
  std::optional<ViewSet> counterexample;
  std::optional<ProcessId> process;  // whose view or data-race order differs
  std::optional<Edge> flipped;       // original edge reversed in the counterexample
  std::uint64_t nodes = 0;

  explicit operator bool() const noexcept { return good; }
};

namespace detail {

struct FlipTarget {
  ProcessId process;
  Edge edge;
};

// Every replay that differs from vs reverses at least one of these edges:
// consecutive pairs of each view (model 1) or of each per-variable suborder
// of each view (model 2).
inline std::vector<FlipTarget> flip_targets(const Program& program, const ViewSet& vs, Fidelity f) {
  std::vector<FlipTarget> out;
  for (const auto& [p, v] : vs) {
    const auto& seq = v.order();
    if (f == Fidelity::model1) {
      for (std::size_t k = 0; k + 1 < seq.size(); ++k) out.push_back({p, {seq[k], seq[k + 1]}});
      continue;
    }
    std::map<std::string, OpId> last;
    std::vector<FlipTarget> mine;
    for (OpId id : seq) {
      const auto& var = program.op(id).variable;
      if (auto it = last.find(var); it != last.end()) mine.push_back({p, {it->second, id}});
      last[var] = id;
    }
    out.insert(out.end(), mine.begin(), mine.end());
  }
  return out;
}

struct FlipResult {
  std::optional<ViewSet> found;
  std::uint64_t nodes = 0;
};

inline FlipResult search_flip(const Program& program, const Record& record, ConsistencyModel m,
                              const OracleLimits& limits, const FlipTarget& target) {
  SearchConfig config = replay_config(record, m, limits);
  auto [it, inserted] = config.required.try_emplace(target.process, program.size(), program.universe(target.process));
  it->second.insert(target.edge.second, target.edge.first);
  FlipResult out;
  auto stats = search_view_sets(program, config, [&](const ViewSet& vs) {
    out.found = vs;
    return false;
  });
  out.nodes = stats.nodes;
  return out;
}

}  // namespace detail

/// Searches for a certifying replay that breaks fidelity f. The returned
/// counterexample is the first one in (process, view position) order of the
/// reversed edge; it does not depend on limits.jobs.
inline Verdict is_good_record(const Program& program, const ViewSet& vs, const Record& record, Fidelity f,
                              ConsistencyModel m, const OracleLimits& limits = {}) {
  detail::check_cap(program, limits);
  check_view_set_universe(program, vs);
  const auto targets = detail::flip_targets(program, vs, f);
  Verdict verdict;
  auto conclude = [&](std::size_t k, detail::FlipResult& r) {
    verdict.good = false;
    verdict.counterexample = std::move(r.found);
    verdict.process = targets[k].process;
    verdict.flipped = targets[k].edge;
  };
  const std::size_t jobs = std::max<std::size_t>(1, limits.jobs);
  for (std::size_t start = 0; start < targets.size(); start += jobs) {
    const std::size_t end = std::min(targets.size(), start + jobs);
    std::vector<detail::FlipResult> results(end - start);
    if (jobs == 1) {
      results[0] = detail::search_flip(program, record, m, limits, targets[start]);
    } else {
      std::vector<std::future<detail::FlipResult>> pending;
      for (std::size_t k = start; k < end; ++k)
        pending.push_back(std::async(std::launch::async, detail::search_flip, std::cref(program), std::cref(record), m,
                                     std::cref(limits), std::cref(targets[k])));
      for (std::size_t k = 0; k < pending.size(); ++k) results[k] = pending[k].get();
    }
    for (std::size_t k = 0; k < results.size(); ++k) {
      verdict.nodes += results[k].nodes;
      if (results[k].found) {
        conclude(start + k, results[k]);
        return verdict;
      }
    }
  }
  return verdict;
}

inline Verdict is_good_record_m1(const Program& program, const ViewSet& vs, const Record& record,
                                 ConsistencyModel m = ConsistencyModel::strong_causal,
                                 const OracleLimits& limits = {}) {
  return is_good_record(program, vs, record, Fidelity::model1, m, limits);
}

inline Verdict is_good_record_m2(const Program& program, const ViewSet& vs, const Record& record,
                                 ConsistencyModel m = ConsistencyModel::strong_causal,
                                 const OracleLimits& limits = {}) {
  return is_good_record(program, vs, record, Fidelity::model2, m, limits);
}

inline bool same_dro(const Program& program, const ViewSet& a, const ViewSet& b) {
  for (const auto& [p, v] : a)
    if (dro(program, v) != dro(program, b.at(p))) return false;
  return a.size() == b.size();
}

/// Goodness by enumerating every certifying replay. Exponential; used to
/// cross-check the targeted search on small programs.
inline Verdict is_good_record_exhaustive(const Program& program, const ViewSet& vs, const Record& record,
                                         Fidelity f, ConsistencyModel m, const OracleLimits& limits = {}) {
  Verdict verdict;
  auto stats = enumerate_certifying(
      program, record, m,
      [&](const ViewSet& candidate) {
        const bool same = f == Fidelity::model1 ? candidate == vs : same_dro(program, candidate, vs);
        if (same) return true;
        verdict.good = false;
        verdict.counterexample = candidate;
        return false;
      },
      limits);
  verdict.nodes = stats.nodes;
  return verdict;
}

/// SCO(V') contains SCO(V) and every V'_i contains B_i(V).
inline bool sco_and_b_preserved(const Program& program, const ViewSet& original, const ViewSet& replay) {
  if (!compute_sco(program, original).subset_of(compute_sco(program, replay))) return false;
  for (const auto& [p, v] : replay)
    if (!b_i_m1(program, original, p).subset_of(v.relation(program.size()))) return false;
  return true;
}

/// SCO over per-process partial orders: (w1, w2 by i) whenever w1 < w2 in U_i.
inline Relation partial_sco(const Program& program, const std::map<ProcessId, Relation>& partials) {
  Relation sco(program.size(), program.writes());
  for (const auto& [p, u] : partials)
    for (auto [a, b] : u.edges())
      if (program.is_write(a) && program.is_write(b) && program.process_of(b) == p) sco.insert(a, b);
  return sco;
}

struct ExtensionStats {
  std::size_t steps = 0;  // edges added to some U_i
};

/// Completes strongly causal partial views to total views without adding
/// strong causal order. Cross-process write pairs are settled first, in
/// (writer process, id) order: each writer keeps its own write first, third
/// parties take whichever orientation adds no SCO edge. Writes then precede
/// every unordered own read.
inline ViewSet extend_to_views(const Program& program, std::map<ProcessId, Relation> partials,
                               ExtensionStats* stats = nullptr) {
  for (ProcessId p : program.processes())
    if (!partials.count(p)) throw PreconditionViolated("no partial order for process " + std::to_string(p));
  for (auto& [p, u] : partials) {
    if (!program.has_process(p)) throw PreconditionViolated("partial order for unknown process " + std::to_string(p));
    if (u.universe() != program.universe(p))
      throw PreconditionViolated("partial order of process " + std::to_string(p) +
                                 " is not over its own operations plus all writes");
    if (has_cycle(u)) throw PreconditionViolated("partial order of process " + std::to_string(p) + " has a cycle");
    if (!is_transitive(u))
      throw PreconditionViolated("partial order of process " + std::to_string(p) + " is not transitively closed");
  }
  const Relation sco = partial_sco(program, partials);
  for (const auto& [p, u] : partials) {
    if (!program.po_restricted(p).subset_of(u))
      throw PreconditionViolated("partial order of process " + std::to_string(p) + " does not respect PO");
    for (auto e : sco.edges())
      if (!u.contains(e))
        throw PreconditionViolated("partial order of process " + std::to_string(p) + " does not respect SCO: " +
                                   program.name(e.first) + "->" + program.name(e.second));
  }

  ExtensionStats local;
  auto add = [&](ProcessId p, OpId a, OpId b) {
    Relation& u = partials.at(p);
    u.insert(a, b);
    u = transitive_closure(u);
    ++local.steps;
  };
  auto assert_stable = [&] {
    if (partial_sco(program, partials) != sco) throw InternalInvariant("view extension changed the strong causal order");
  };

  std::vector<OpId> writes = program.writes();
  std::stable_sort(writes.begin(), writes.end(),
                   [&](OpId a, OpId b) { return program.process_of(a) < program.process_of(b); });
  for (std::size_t x = 0; x < writes.size(); ++x) {
    for (std::size_t y = x + 1; y < writes.size(); ++y) {
      const OpId wp = writes[x];
      const OpId wq = writes[y];
      const ProcessId p = program.process_of(wp);
      const ProcessId q = program.process_of(wq);
      if (p == q) continue;
      for (auto& [k, u] : partials) {
        if (u.contains(wp, wq) || u.contains(wq, wp)) continue;
        if (k == p) {
          add(k, wp, wq);
        } else if (k == q) {
          add(k, wq, wp);
        } else {
          const Relation saved = u;
          add(k, wp, wq);
          if (partial_sco(program, partials) != sco) {
            partials.at(k) = saved;
            add(k, wq, wp);
          }
        }
        assert_stable();
      }
    }
  }
  for (auto& [p, u] : partials) {
    for (OpId r : program.program_order(p)) {
      if (!program.is_read(r)) continue;
      for (OpId w : program.writes())
        if (!u.contains(w, r) && !u.contains(r, w)) {
          add(p, w, r);
          assert_stable();
        }
    }
  }

  ViewSet out;
  for (const auto& [p, u] : partials) {
    if (!is_total_order(u)) throw InternalInvariant("view extension left view " + std::to_string(p) + " partial");
    std::vector<OpId> order = u.universe();
    std::sort(order.begin(), order.end(),
              [&](OpId a, OpId b) { return u.predecessors(a).size() < u.predecessors(b).size(); });
    out.emplace(p, View(p, std::move(order)));
  }
  if (auto verdict = check_strong_causal(out, derive_writes_to(program, out)); !verdict)
    throw InternalInvariant("view extension produced views that are not strongly causal: " + verdict.reason);
  if (stats) *stats = local;
  return out;
}

/// Model 1 optimality witness: reversing an unforced covering edge of V_i
/// yields another strongly causal view-set.
inline ViewSet necessity_witness_m1(const Program& program, const ViewSet& vs, ProcessId i, const Edge& edge) {
  require_strong_causal(program, vs);
  const View& vi = vs.at(i);
  const Relation reduced = transitive_reduction(vi.relation(program.size()));
  if (!reduced.contains(edge))
    throw PreconditionViolated("edge is not a covering edge of view " + std::to_string(i));
  if (program.po().contains(edge)) throw PreconditionViolated("edge is in program order");
  if (sco_i(program, vs, i).contains(edge)) throw PreconditionViolated("edge is a strong causal edge of another writer");
  if (b_i_m1(program, vs, i).contains(edge)) throw PreconditionViolated("edge is fixed by a third view");
  std::vector<OpId> order = vi.order();
  auto at = std::find(order.begin(), order.end(), edge.first);
  std::iter_swap(at, at + 1);
  ViewSet out = vs;
  out.at(i) = View(i, std::move(order));
  if (auto verdict = check_strong_causal(out, derive_writes_to(program, out)); !verdict)
    throw InternalInvariant("reversed view-set is not strongly causal: " + verdict.reason);
  return out;
}

/// Model 2 optimality witness: reverses an unforced covering edge of A_i,
/// adds the SWO cascade it implies, and completes the result to views.
inline ViewSet necessity_witness_m2(const Program& program, const ViewSet& vs, ProcessId i, const Edge& edge) {
  require_strong_causal(program, vs);
  const M2Context ctx(program, vs);
  const Relation& ai = ctx.a_of(i);
  if (!transitive_reduction(ai).contains(edge))
    throw PreconditionViolated("edge is not a covering edge of A_" + std::to_string(i));
  if (program.po().contains(edge)) throw PreconditionViolated("edge is in program order");
  if (swo_i(program, ctx.strong_write_order.edges, i).contains(edge))
    throw PreconditionViolated("edge is a strong write order edge of another writer");
  if (in_b_i_m2(ctx, i, edge.first, edge.second)) throw PreconditionViolated("edge is fixed by the other views");

  // The cascade is taken over A_i without the reversed edge. Taken over A_i
  // itself it would contain the edge again whenever both ends are writes and
  // the later one is by i.
  M2Context reversed = ctx;
  reversed.a.at(i).erase(edge);
  const Relation cascade = c_i(reversed, i, edge.first, edge.second);
  std::map<ProcessId, Relation> partials;
  for (const auto& [m, am] : ctx.a) {
    Relation u = am;
    if (m == i) {
      u.erase(edge);
      u.insert(edge.second, edge.first);
    }
    u.merge(cascade);
    partials.emplace(m, transitive_closure(u));
  }
  ViewSet out = extend_to_views(program, std::move(partials));
  if (dro(program, out.at(i)) == dro(program, vs.at(i)))
    throw InternalInvariant("witness kept the data-race order of view " + std::to_string(i));
  return out;
}

}  // namespace causal_rnr
