#pragma once

// Property battery over one strongly causal fixture. Each group returns the
// list of failed checks; an empty list means the group holds.

#include <exception>
#include <string>
#include <vector>

#include "causal_rnr/consistency.hpp"
#include "causal_rnr/generator.hpp"
#include "causal_rnr/io.hpp"
#include "causal_rnr/model.hpp"
#include "causal_rnr/oracle.hpp"
#include "causal_rnr/record_m1.hpp"
#include "causal_rnr/record_m2.hpp"

namespace causal_rnr {

struct Subject {
  const Program& program;
  const ViewSet& views;
  const ObservationStream& events;
};

using Failures = std::vector<std::string>;

namespace detail {

inline std::string edge_name(const Program& program, ProcessId p, const Edge& e) {
  return "R_" + std::to_string(p) + " edge " + program.name(e.first) + "->" + program.name(e.second);
}

template <class Fn>
void guarded(Failures& out, const std::string& what, Fn&& fn) {
  try {
    fn();
  } catch (const std::exception& ex) {
    out.push_back(what + ": threw " + ex.what());
  }
}

}  // namespace detail

/// Offline model 1 record is good, and dropping any edge breaks goodness,
/// with the reversal witnessed both by search and by direct construction.
inline Failures check_model1_offline(const Subject& s, const OracleLimits& limits) {
  Failures out;
  const Program& program = s.program;
  detail::guarded(out, "model 1 offline", [&] {
    const Record rec = offline_record_m1(program, s.views);
    if (!is_good_record_m1(program, s.views, rec, ConsistencyModel::strong_causal, limits))
      out.push_back("offline model 1 record is not good");
    const Verdict full = is_good_record_exhaustive(program, s.views, rec, Fidelity::model1,
                                                   ConsistencyModel::strong_causal, limits);
    if (!full) out.push_back("exhaustive enumeration disagrees: offline model 1 record is not good");
    for (const auto& [p, r] : rec.per_process) {
      for (auto e : r.edges()) {
        const Record weaker = rec.without(p, e);
        const Verdict v = is_good_record_m1(program, s.views, weaker, ConsistencyModel::strong_causal, limits);
        if (v.good) {
          out.push_back(detail::edge_name(program, p, e) + " is not needed");
          continue;
        }
        if (!v.counterexample->at(p).before(e.second, e.first))
          out.push_back(detail::edge_name(program, p, e) + ": counterexample keeps the edge");
        const ViewSet witness = necessity_witness_m1(program, s.views, p, e);
        if (!certifies(program, witness, weaker, ConsistencyModel::strong_causal) || witness == s.views)
          out.push_back(detail::edge_name(program, p, e) + ": reversal witness does not certify");
      }
    }
  });
  return out;
}

/// Online record equals reduce(V_i) \ (SCO_i u PO), contains the offline
/// record with the difference inside B_i, and is good.
inline Failures check_model1_online(const Subject& s, const OracleLimits& limits) {
  Failures out;
  const Program& program = s.program;
  detail::guarded(out, "model 1 online", [&] {
    const Record online = online_record_m1(program, s.events, compute_sco(program, s.views));
    const Record offline = offline_record_m1(program, s.views);
    const Relation po = program.po();
    for (const auto& [p, v] : s.views) {
      Relation expected = transitive_reduction(v.relation(program.size()));
      expected.subtract(sco_i(program, s.views, p));
      expected.subtract(po);
      if (online.of(p).edges() != expected.edges())
        out.push_back("online R_" + std::to_string(p) + " is not reduce(V_i) minus SCO_i and PO");
      if (!offline.of(p).subset_of(online.of(p)))
        out.push_back("online R_" + std::to_string(p) + " misses offline edges");
      if (!set_difference(online.of(p), offline.of(p)).subset_of(b_i_m1(program, s.views, p)))
        out.push_back("online R_" + std::to_string(p) + " exceeds offline by edges outside B_i");
    }
    if (!is_good_record_m1(program, s.views, online, ConsistencyModel::strong_causal, limits))
      out.push_back("online model 1 record is not good");
  });
  return out;
}

/// Offline model 2 record is good, and every edge is needed: the
/// constructive witness and the search both find a replay with another DRO.
inline Failures check_model2_offline(const Subject& s, const OracleLimits& limits) {
  Failures out;
  const Program& program = s.program;
  detail::guarded(out, "model 2 offline", [&] {
    const Record rec = offline_record_m2(program, s.views);
    if (!is_record_m2(program, s.views, rec)) out.push_back("offline model 2 record holds non data-race edges");
    if (!is_good_record_m2(program, s.views, rec, ConsistencyModel::strong_causal, limits))
      out.push_back("offline model 2 record is not good");
    for (const auto& [p, r] : rec.per_process) {
      for (auto e : r.edges()) {
        const Record weaker = rec.without(p, e);
        detail::guarded(out, detail::edge_name(program, p, e) + " witness", [&] {
          const ViewSet witness = necessity_witness_m2(program, s.views, p, e);
          if (!certifies(program, witness, weaker, ConsistencyModel::strong_causal))
            out.push_back(detail::edge_name(program, p, e) + ": witness does not certify");
          if (dro(program, witness.at(p)) == dro(program, s.views.at(p)))
            out.push_back(detail::edge_name(program, p, e) + ": witness keeps the data-race order");
        });
        const Verdict v = is_good_record_m2(program, s.views, weaker, ConsistencyModel::strong_causal, limits);
        if (v.good) out.push_back(detail::edge_name(program, p, e) + " is not needed according to search");
      }
    }
  });
  return out;
}

/// Structural facts behind the proofs: A_i agrees with SWO on own writes,
/// cascades stay SWO-reachable, replays of the model 1 record preserve SCO
/// and B_i, and view extension keeps its inputs and SCO.
inline Failures check_invariants(const Subject& s, const OracleLimits& limits) {
  Failures out;
  const Program& program = s.program;
  detail::guarded(out, "invariants", [&] {
    const M2Context ctx(program, s.views);
    const Relation& swo_edges = ctx.strong_write_order.edges;
    const auto writes = program.writes();
    if (!swo_edges.subset_of(compute_sco(program, s.views))) out.push_back("SWO is not inside SCO");
    for (const auto& [i, ai] : ctx.a) {
      for (OpId w1 : writes)
        for (OpId w2 : writes)
          if (w1 != w2 && program.process_of(w2) == i && ai.contains(w1, w2) != swo_edges.contains(w1, w2))
            out.push_back("A_" + std::to_string(i) + " and SWO disagree on " + program.name(w1) + "->" +
                          program.name(w2));
      if (!swo_edges.subset_of(ai)) out.push_back("A_" + std::to_string(i) + " misses SWO edges");
      for (OpId w1 : writes)
        for (OpId w2 : writes) {
          if (w1 == w2) continue;
          const auto levels = c_i_levels(ctx, i, w1, w2);
          for (std::size_t k = 1; k < levels.size(); ++k)
            if (!levels[k - 1].subset_of(levels[k])) out.push_back("cascade levels are not monotone");
          if (levels.empty()) continue;
          for (auto [w3, w4] : levels.back().edges())
            if (!swo_edges.leq(w1, w4))
              out.push_back("cascade edge " + program.name(w3) + "->" + program.name(w4) + " of (" +
                            program.name(w1) + ", " + program.name(w2) + ") is not SWO-reachable");
          if (levels.front().subset_of(swo_edges)) {
            if (!levels.back().subset_of(swo_edges)) out.push_back("cascade left SWO although its first level did not");
            if (dro(program, s.views.at(i)).contains(w1, w2) && in_b_i_m2(ctx, i, w1, w2))
              out.push_back("pair with SWO-only cascade was placed in B_i");
          }
        }
    }

    const Record rec = offline_record_m1(program, s.views);
    enumerate_certifying(
        program, rec, ConsistencyModel::strong_causal,
        [&](const ViewSet& replay) {
          if (!sco_and_b_preserved(program, s.views, replay)) out.push_back("replay lost SCO or B_i edges");
          return true;
        },
        limits);

    std::map<ProcessId, Relation> partials;
    const Relation sco = compute_sco(program, s.views);
    for (ProcessId p : program.processes()) partials.emplace(p, union_closed(program.po_restricted(p), restrict(sco, program.universe(p))));
    const ViewSet extended = extend_to_views(program, partials);
    for (const auto& [p, u] : partials)
      if (!u.subset_of(extended.at(p).relation(program.size())))
        out.push_back("extended view " + std::to_string(p) + " drops input edges");
    if (compute_sco(program, extended) != partial_sco(program, partials))
      out.push_back("view extension changed SCO");
  });
  return out;
}

/// Corpus member k: two or three processes, at most six operations.
inline GenParams corpus_params(std::uint64_t base_seed, std::size_t k) {
  GenParams params;
  params.seed = base_seed + k;
  params.processes = 2 + k % 2;
  params.ops_per_process = params.processes == 3 ? 2 : 3;
  params.variables = 1 + (k / 2) % 2;
  params.write_ratio = 0.7;
  return params;
}

/// First count corpus members with at least min_ops operations, scanning k = 0, 1, ...
inline std::vector<GenParams> build_corpus(std::uint64_t base_seed, std::size_t count, std::size_t min_ops = 4) {
  std::vector<GenParams> out;
  for (std::size_t k = 0; out.size() < count; ++k) {
    const GenParams params = corpus_params(base_seed, k);
    if (gen_program(params).size() >= min_ops) out.push_back(params);
  }
  return out;
}

}  // namespace causal_rnr
