#pragma once

// Records for replay fidelity model 2, where a replay must reproduce the
// per-variable order of every view and only data-race edges may be recorded.

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "causal_rnr/consistency.hpp"
#include "causal_rnr/errors.hpp"
#include "causal_rnr/model.hpp"
#include "causal_rnr/record.hpp"
#include "causal_rnr/record_m1.hpp"
#include "causal_rnr/relation.hpp"

namespace causal_rnr {

struct SwoEdge {
  OpId earlier;
  OpId later;
  ProcessId later_writer;
  std::size_t level;  // first iteration at which the edge appears, >= 1

  friend bool operator==(const SwoEdge&, const SwoEdge&) = default;
};

struct SwoResult {
  Relation edges;
  std::vector<SwoEdge> listing;  // lexicographic by (earlier, later)
  std::size_t levels = 0;        // iterations until stable

  std::size_t level_of(const Edge& e) const {
    for (const auto& s : listing)
      if (s.earlier == e.first && s.later == e.second) return s.level;
    return 0;
  }
};

/// Strong write order: the least fixpoint where (w1, w2 by i) belongs once
/// it is implied by DRO(V_i), PO|i and the order found so far.
inline SwoResult swo(const Program& program, const ViewSet& vs) {
  SwoResult out;
  out.edges = Relation(program.size(), program.writes());
  std::map<Edge, std::size_t> level;
  std::map<ProcessId, Relation> base;
  for (const auto& [p, v] : vs) base.emplace(p, disjoint_union(dro(program, v), program.po_restricted(p)));
  for (std::size_t k = 1;; ++k) {
    Relation next = out.edges;
    for (const auto& [p, v] : vs) {
      Relation closed = union_closed(base.at(p), out.edges);
      for (OpId w2 : program.writes()) {
        if (program.process_of(w2) != p) continue;
        for (OpId w1 : closed.predecessors(w2))
          if (program.is_write(w1) && !next.contains(w1, w2)) {
            next.insert(w1, w2);
            level.emplace(Edge{w1, w2}, k);
          }
      }
    }
    if (next == out.edges) {
      out.levels = k - 1;
      break;
    }
    out.edges = std::move(next);
  }
  for (auto e : out.edges.edges()) out.listing.push_back({e.first, e.second, program.process_of(e.second), level.at(e)});
  return out;
}

/// SWO edges whose later write belongs to a process other than i.
inline Relation swo_i(const Program& program, const Relation& swo_edges, ProcessId i) {
  Relation out = swo_edges;
  for (auto e : swo_edges.edges())
    if (program.process_of(e.second) == i) out.erase(e);
  return out;
}

/// Shared inputs of the model 2 constructions: SWO and every A_m.
struct M2Context {
  const Program& program;
  const ViewSet& views;
  SwoResult strong_write_order;
  std::map<ProcessId, Relation> a;

  M2Context(const Program& p, const ViewSet& vs) : program(p), views(vs), strong_write_order(swo(p, vs)) {
    for (const auto& [m, v] : vs) {
      Relation u = dro(p, v);
      u.merge(swo_i(p, strong_write_order.edges, m));
      u.merge(p.po_restricted(m));
      a.emplace(m, transitive_closure(u));
    }
  }

  const Relation& a_of(ProcessId m) const { return a.at(m); }
};

/// A_i = closure(DRO(V_i) u SWO_i u PO|i).
inline Relation a_i(const Program& program, const ViewSet& vs, ProcessId i) {
  return M2Context(program, vs).a_of(i);
}

/// Levels C^1..C^k of the SWO cascade forced by reversing (o1, w2) in V_i.
/// Each level contains the previous one; the last is the fixpoint.
inline std::vector<Relation> c_i_levels(const M2Context& ctx, ProcessId i, OpId o1, OpId w2) {
  const Program& program = ctx.program;
  std::vector<Relation> levels;
  Relation current(program.size(), program.writes());
  if (!program.is_write(w2)) return levels;
  const auto writes = program.writes();
  const Relation& ai = ctx.a_of(i);
  for (OpId w4 : writes) {
    if (program.process_of(w4) != i || !ai.leq(o1, w4)) continue;
    for (OpId w3 : writes)
      if (w3 != w4 && ai.leq(w3, w2)) current.insert(w3, w4);
  }
  levels.push_back(current);
  for (;;) {
    Relation next = current;
    for (const auto& [m, am] : ctx.a) {
      const Relation mixed = union_closed(am, current);
      for (auto [w5, w6] : current.edges()) {
        for (OpId w4 : writes) {
          if (program.process_of(w4) != m || !am.leq(w6, w4)) continue;
          for (OpId w3 : writes)
            if (w3 != w4 && mixed.leq(w3, w5)) next.insert(w3, w4);
        }
      }
    }
    if (next == current) break;
    current = std::move(next);
    levels.push_back(current);
  }
  return levels;
}

/// Fixpoint of the cascade, or empty when w2 is a read.
inline Relation c_i(const M2Context& ctx, ProcessId i, OpId o1, OpId w2) {
  auto levels = c_i_levels(ctx, i, o1, w2);
  if (levels.empty()) return Relation(ctx.program.size(), ctx.program.writes());
  return levels.back();
}

inline Relation c_i(const Program& program, const ViewSet& vs, ProcessId i, OpId o1, OpId w2) {
  return c_i(M2Context(program, vs), i, o1, w2);
}

/// Whether reversing (o1, w2) in V_i forces a cycle in some A_m.
inline bool in_b_i_m2(const M2Context& ctx, ProcessId i, OpId o1, OpId w2) {
  if (!ctx.program.is_write(w2)) return false;
  const Relation c = c_i(ctx, i, o1, w2);
  for (const auto& [m, am] : ctx.a) {
    Relation u = am;
    if (m == i) u.erase(o1, w2);
    u.merge(c);
    if (has_cycle(u)) return true;
  }
  return false;
}

/// DRO(V_i) pairs whose order is guaranteed indirectly by the other views.
inline Relation b_i_m2(const M2Context& ctx, ProcessId i) {
  Relation d = dro(ctx.program, ctx.views.at(i));
  Relation out(ctx.program.size(), ctx.program.universe(i));
  for (auto [o1, w2] : d.edges())
    if (in_b_i_m2(ctx, i, o1, w2)) out.insert(o1, w2);
  return out;
}

inline Relation b_i_m2(const Program& program, const ViewSet& vs, ProcessId i) {
  return b_i_m2(M2Context(program, vs), i);
}

/// Optimal offline record: R_i = reduce(A_i) \ (SWO_i u PO u B_i).
inline Record offline_record_m2(const Program& program, const ViewSet& vs) {
  require_strong_causal(program, vs);
  const M2Context ctx(program, vs);
  const Relation po = program.po();
  Record rec = Record::empty_for(program);
  for (const auto& [p, v] : vs) {
    Relation r = transitive_reduction(ctx.a_of(p));
    r.subtract(swo_i(program, ctx.strong_write_order.edges, p));
    r.subtract(po);
    for (auto [o1, w2] : r.edges())
      if (in_b_i_m2(ctx, p, o1, w2)) r.erase(o1, w2);
    const Relation d = dro(program, v);
    for (auto e : r.edges())
      if (!d.contains(e))
        throw InternalInvariant("model 2 record edge " + program.name(e.first) + "->" + program.name(e.second) +
                                " of process " + std::to_string(p) + " is not a data-race edge");
    rec.of(p) = std::move(r);
  }
  return rec;
}

/// Model 2 analogue for plain causal consistency, with WO in place of SWO:
/// R_i = reduce(closure(DRO(V_i) u WO u PO|i)) \ (WO u PO). Not good in general.
inline Record naive_causal_record_m2(const Execution& e, const ViewSet& vs) {
  const Program& program = e.program();
  const Relation wo = write_read_write(e);
  const Relation po = program.po();
  Record rec = Record::empty_for(program);
  for (const auto& [p, v] : vs) {
    Relation u = dro(program, v);
    u.merge(wo);
    u.merge(program.po_restricted(p));
    Relation r = transitive_reduction(transitive_closure(u));
    r.subtract(wo);
    r.subtract(po);
    rec.of(p) = std::move(r);
  }
  return rec;
}

}  // namespace causal_rnr
