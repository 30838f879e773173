#pragma once

#include <cstddef>
#include <map>

#include "causal_rnr/model.hpp"
#include "causal_rnr/relation.hpp"

namespace causal_rnr {

/// Per-process sets of recorded edges. A replay's view V'_i must contain R_i.
struct Record {
  std::map<ProcessId, Relation> per_process;

  /// Empty record with one entry per process of the program.
  static Record empty_for(const Program& program) {
    Record r;
    for (ProcessId p : program.processes()) r.per_process.emplace(p, Relation(program.size(), program.universe(p)));
    return r;
  }

  const Relation& of(ProcessId p) const { return per_process.at(p); }
  Relation& of(ProcessId p) { return per_process.at(p); }

  std::size_t total_edges() const {
    std::size_t n = 0;
    for (const auto& [p, r] : per_process) n += r.size();
    return n;
  }

  Record without(ProcessId p, const Edge& e) const {
    Record copy = *this;
    copy.of(p).erase(e);
    return copy;
  }

  /// Per-process edge-set inclusion.
  bool subset_of(const Record& other) const {
    for (const auto& [p, r] : per_process) {
      auto it = other.per_process.find(p);
      if (it == other.per_process.end()) {
        if (!r.empty()) return false;
      } else if (!r.subset_of(it->second)) {
        return false;
      }
    }
    return true;
  }

  friend bool operator==(const Record& a, const Record& b) {
    if (a.per_process.size() != b.per_process.size()) return false;
    for (const auto& [p, r] : a.per_process) {
      auto it = b.per_process.find(p);
      if (it == b.per_process.end() || it->second.edges() != r.edges()) return false;
    }
    return true;
  }
};

/// Model 1 records may hold any view edge.
inline bool is_record_m1(const Program& program, const ViewSet& vs, const Record& rec) {
  for (const auto& [p, r] : rec.per_process) {
    auto it = vs.find(p);
    if (it == vs.end() || !r.subset_of(it->second.relation(program.size()))) return false;
  }
  return true;
}

/// Model 2 records may only hold data-race edges.
inline bool is_record_m2(const Program& program, const ViewSet& vs, const Record& rec) {
  for (const auto& [p, r] : rec.per_process) {
    auto it = vs.find(p);
    if (it == vs.end() || !r.subset_of(dro(program, it->second))) return false;
  }
  return true;
}

}  // namespace causal_rnr
