#pragma once

// Records for replay fidelity model 1, where a replay must reproduce every
// view exactly and any view edge may be recorded.

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "causal_rnr/consistency.hpp"
#include "causal_rnr/errors.hpp"
#include "causal_rnr/model.hpp"
#include "causal_rnr/record.hpp"
#include "causal_rnr/relation.hpp"

namespace causal_rnr {

/// SCO edges whose later write belongs to a process other than i.
inline Relation sco_i(const Program& program, const ViewSet& vs, ProcessId i) {
  Relation out = compute_sco(program, vs);
  for (auto e : out.edges())
    if (program.process_of(e.second) == i) out.erase(e);
  return out;
}

/// Write pairs (w1 by i, w2 by j != i) ordered w1 < w2 in V_i and in some
/// third view V_k, k != i, j.
inline Relation b_i_m1(const Program& program, const ViewSet& vs, ProcessId i) {
  Relation out(program.size(), program.writes());
  const View& own = vs.at(i);
  for (OpId w1 : program.writes()) {
    if (program.process_of(w1) != i) continue;
    for (OpId w2 : program.writes()) {
      const ProcessId j = program.process_of(w2);
      if (j == i || !own.before(w1, w2)) continue;
      for (const auto& [k, vk] : vs) {
        if (k == i || k == j) continue;
        if (vk.before(w1, w2)) {
          out.insert(w1, w2);
          break;
        }
      }
    }
  }
  return out;
}

inline void require_strong_causal(const Program& program, const ViewSet& vs) {
  auto verdict = check_strong_causal(vs, derive_writes_to(program, vs));
  if (!verdict) throw NotStronglyCausal("views are not strongly causal consistent: " + verdict.reason);
}

/// Optimal offline record: R_i = reduce(V_i) \ (SCO_i u PO u B_i).
inline Record offline_record_m1(const Program& program, const ViewSet& vs) {
  require_strong_causal(program, vs);
  const Relation po = program.po();
  Record rec = Record::empty_for(program);
  for (const auto& [p, v] : vs) {
    Relation r = transitive_reduction(v.relation(program.size()));
    r.subtract(sco_i(program, vs, p));
    r.subtract(po);
    r.subtract(b_i_m1(program, vs, p));
    rec.of(p) = std::move(r);
  }
  return rec;
}

struct Observation {
  ProcessId process;
  OpId op;

  friend bool operator==(const Observation&, const Observation&) = default;
};

using ObservationStream = std::vector<Observation>;

/// Round-robin interleaving of the views, one observation per time step.
inline ObservationStream interleave_views(const ViewSet& vs) {
  ObservationStream out;
  std::size_t longest = 0;
  for (const auto& [p, v] : vs) longest = std::max(longest, v.size());
  for (std::size_t k = 0; k < longest; ++k)
    for (const auto& [p, v] : vs)
      if (k < v.size()) out.push_back({p, v.order()[k]});
  return out;
}

/// Online recorder for model 1. Each process records the edge from the last
/// operation of its view to the newly observed one, unless that edge is in
/// PO or is an SCO edge whose later write belongs to another process.
class OnlineRecorderM1 {
 public:
  OnlineRecorderM1(const Program& program, Relation sco_oracle)
      : program_(program), sco_(std::move(sco_oracle)), po_(program.po()), record_(Record::empty_for(program)) {
    for (ProcessId p : program.processes()) seen_.emplace(p, std::vector<bool>(program.size(), false));
  }

  void observe(ProcessId p, OpId op) {
    auto it = seen_.find(p);
    if (it == seen_.end()) throw MalformedStream("observation by unknown process " + std::to_string(p));
    if (op >= program_.size() || !program_.in_universe(p, op))
      throw MalformedStream("process " + std::to_string(p) + " cannot observe operation outside its view");
    if (it->second[op])
      throw MalformedStream("process " + std::to_string(p) + " observed " + program_.name(op) + " twice");
    it->second[op] = true;
    auto last = last_.find(p);
    if (last != last_.end()) {
      const Edge e{last->second, op};
      const bool foreign_sco = program_.process_of(op) != p && sco_.contains(e);
      if (!po_.contains(e) && !foreign_sco) record_.of(p).insert(e);
    }
    last_[p] = op;
  }

  const Record& record() const noexcept { return record_; }

 private:
  const Program& program_;
  Relation sco_;
  Relation po_;
  Record record_;
  std::map<ProcessId, std::vector<bool>> seen_;
  std::map<ProcessId, OpId> last_;
};

inline Record online_record_m1(const Program& program, const ObservationStream& stream, const Relation& sco_oracle) {
  OnlineRecorderM1 recorder(program, sco_oracle);
  for (const auto& obs : stream) recorder.observe(obs.process, obs.op);
  return recorder.record();
}

/// Model 1 analogue of the strongly causal record for plain causal
/// consistency: R_i = reduce(V_i) \ (WO u PO). Not good in general.
inline Record naive_causal_record_m1(const Execution& e, const ViewSet& vs) {
  const Program& program = e.program();
  const Relation wo = write_read_write(e);
  const Relation po = program.po();
  Record rec = Record::empty_for(program);
  for (const auto& [p, v] : vs) {
    Relation r = transitive_reduction(v.relation(program.size()));
    r.subtract(wo);
    r.subtract(po);
    rec.of(p) = std::move(r);
  }
  return rec;
}

}  // namespace causal_rnr
