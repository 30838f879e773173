#pragma once

// Operations, programs, executions and per-process views.
//
// Operations are addressed by a dense OpId. A Program assigns ids in
// lexicographic order of the operation names, so iterating ids in numeric
// order is the same as iterating names lexicographically.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "causal_rnr/errors.hpp"
#include "causal_rnr/relation.hpp"

namespace causal_rnr {

using ProcessId = std::uint32_t;

enum class OpKind { read, write };

struct Operation {
  OpKind kind = OpKind::write;
  ProcessId process = 0;
  std::string variable;
  std::string id;

  bool is_write() const noexcept { return kind == OpKind::write; }
  bool is_read() const noexcept { return kind == OpKind::read; }

  friend bool operator==(const Operation&, const Operation&) = default;
};

/// Operation as written in a program listing, before ids are assigned.
struct OpSpec {
  OpKind kind;
  std::string variable;
  std::string id;
};

struct ProcessSpec {
  ProcessId process;
  std::vector<OpSpec> ops;  // program order
};

/// Processes, their operations and the fixed program order.
class Program {
 public:
  Program() = default;

  explicit Program(const std::vector<ProcessSpec>& processes) {
    std::vector<Operation> all;
    for (const auto& p : processes) {
      if (std::find(processes_.begin(), processes_.end(), p.process) != processes_.end())
        throw SemanticError("duplicate process " + std::to_string(p.process));
      processes_.push_back(p.process);
      for (const auto& s : p.ops) all.push_back(Operation{s.kind, p.process, s.variable, s.id});
    }
    std::sort(processes_.begin(), processes_.end());
    std::sort(all.begin(), all.end(), [](const Operation& a, const Operation& b) { return a.id < b.id; });
    for (std::size_t i = 0; i + 1 < all.size(); ++i)
      if (all[i].id == all[i + 1].id) throw SemanticError("duplicate operation id '" + all[i].id + "'");
    ops_ = std::move(all);
    for (std::size_t i = 0; i < ops_.size(); ++i) index_.emplace(ops_[i].id, static_cast<OpId>(i));
    for (const auto& p : processes) {
      auto& seq = po_[p.process];
      for (const auto& s : p.ops) seq.push_back(index_.at(s.id));
    }
    position_.assign(ops_.size(), 0);
    for (const auto& [pid, seq] : po_)
      for (std::size_t k = 0; k < seq.size(); ++k) position_[seq[k]] = k;
  }

  std::size_t size() const noexcept { return ops_.size(); }
  const std::vector<ProcessId>& processes() const noexcept { return processes_; }
  bool has_process(ProcessId p) const { return po_.count(p) != 0; }

  const Operation& op(OpId id) const { return ops_.at(id); }
  const std::vector<Operation>& ops() const noexcept { return ops_; }
  const std::string& name(OpId id) const { return ops_.at(id).id; }
  bool is_write(OpId id) const { return ops_.at(id).is_write(); }
  bool is_read(OpId id) const { return ops_.at(id).is_read(); }
  ProcessId process_of(OpId id) const { return ops_.at(id).process; }

  std::optional<OpId> find(std::string_view id) const {
    auto it = index_.find(std::string(id));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  OpId at(std::string_view id) const {
    auto found = find(id);
    if (!found) throw SemanticError("unknown operation '" + std::string(id) + "'");
    return *found;
  }

  /// Operations of p in program order.
  const std::vector<OpId>& program_order(ProcessId p) const {
    auto it = po_.find(p);
    if (it == po_.end()) throw SemanticError("unknown process " + std::to_string(p));
    return it->second;
  }

  /// Index of op within its process's program order.
  std::size_t po_position(OpId id) const { return position_.at(id); }

  bool po_before(OpId a, OpId b) const {
    return process_of(a) == process_of(b) && position_.at(a) < position_.at(b);
  }

  std::vector<OpId> writes() const {
    std::vector<OpId> out;
    for (std::size_t i = 0; i < ops_.size(); ++i)
      if (ops_[i].is_write()) out.push_back(static_cast<OpId>(i));
    return out;
  }

  std::vector<OpId> reads() const {
    std::vector<OpId> out;
    for (std::size_t i = 0; i < ops_.size(); ++i)
      if (ops_[i].is_read()) out.push_back(static_cast<OpId>(i));
    return out;
  }

  /// Own operations of p plus every write, ascending.
  std::vector<OpId> universe(ProcessId p) const {
    std::vector<OpId> out;
    for (std::size_t i = 0; i < ops_.size(); ++i)
      if (ops_[i].process == p || ops_[i].is_write()) out.push_back(static_cast<OpId>(i));
    return out;
  }

  bool in_universe(ProcessId p, OpId id) const {
    const auto& o = ops_.at(id);
    return o.process == p || o.is_write();
  }

  std::vector<std::string> variables() const {
    std::vector<std::string> vars;
    for (const auto& o : ops_) vars.push_back(o.variable);
    std::sort(vars.begin(), vars.end());
    vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
    return vars;
  }

  /// Program order over all operations, closed.
  Relation po() const {
    Relation r = Relation::over_domain(size());
    for (const auto& [pid, seq] : po_)
      for (std::size_t i = 0; i < seq.size(); ++i)
        for (std::size_t j = i + 1; j < seq.size(); ++j) r.insert(seq[i], seq[j]);
    return r;
  }

  /// PO | ((*, p, *, *) u (w, *, *, *)).
  Relation po_restricted(ProcessId p) const { return restrict(po(), universe(p)); }

  /// Listing for serialization: processes with their ops in program order.
  std::vector<ProcessSpec> listing() const {
    std::vector<ProcessSpec> out;
    for (ProcessId p : processes_) {
      ProcessSpec spec{p, {}};
      for (OpId id : po_.at(p)) spec.ops.push_back(OpSpec{ops_[id].kind, ops_[id].variable, ops_[id].id});
      out.push_back(std::move(spec));
    }
    return out;
  }

  friend bool operator==(const Program& a, const Program& b) {
    return a.ops_ == b.ops_ && a.processes_ == b.processes_ && a.po_ == b.po_;
  }

 private:
  std::vector<Operation> ops_;
  std::vector<ProcessId> processes_;
  std::map<ProcessId, std::vector<OpId>> po_;
  std::unordered_map<std::string, OpId> index_;
  std::vector<std::size_t> position_;
};

/// A program together with its writes-to map. Unmapped reads return the
/// initial value.
class Execution {
 public:
  Execution() = default;
  explicit Execution(Program program) : program_(std::move(program)), writes_to_(program_.size()) {}

  const Program& program() const noexcept { return program_; }

  std::optional<OpId> writes_to(OpId read) const { return writes_to_.at(read); }

  void set_writes_to(OpId read, OpId write) {
    const auto& r = program_.op(read);
    const auto& w = program_.op(write);
    if (!r.is_read()) throw SemanticError("'" + r.id + "' is not a read");
    if (!w.is_write()) throw SemanticError("'" + w.id + "' is not a write");
    if (r.variable != w.variable)
      throw SemanticError("writes-to '" + w.id + "' -> '" + r.id + "' crosses variables");
    writes_to_.at(read) = write;
  }

  void clear_writes_to(OpId read) { writes_to_.at(read).reset(); }

  /// (read, write) pairs, ascending by read.
  std::vector<std::pair<OpId, OpId>> writes_to_pairs() const {
    std::vector<std::pair<OpId, OpId>> out;
    for (std::size_t r = 0; r < writes_to_.size(); ++r)
      if (writes_to_[r]) out.emplace_back(static_cast<OpId>(r), *writes_to_[r]);
    return out;
  }

  friend bool operator==(const Execution&, const Execution&) = default;

 private:
  Program program_;
  std::vector<std::optional<OpId>> writes_to_;
};

/// Total order of a process's visible operations, kept as a sequence.
class View {
 public:
  View() = default;
  View(ProcessId process, std::vector<OpId> order) : process_(process), order_(std::move(order)) {}

  ProcessId process() const noexcept { return process_; }
  const std::vector<OpId>& order() const noexcept { return order_; }
  std::size_t size() const noexcept { return order_.size(); }

  /// Position of op in the view, if present.
  std::optional<std::size_t> position(OpId op) const {
    auto it = std::find(order_.begin(), order_.end(), op);
    if (it == order_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - order_.begin());
  }

  bool before(OpId a, OpId b) const {
    auto pa = position(a);
    auto pb = position(b);
    return pa && pb && *pa < *pb;
  }

  Relation relation(std::size_t domain) const { return Relation::chain(domain, order_); }

  friend bool operator==(const View&, const View&) = default;

 private:
  ProcessId process_ = 0;
  std::vector<OpId> order_;
};

using ViewSet = std::map<ProcessId, View>;

/// Throws UniverseMismatch unless v orders exactly own ops plus all writes.
inline void check_view_universe(const Program& program, const View& v) {
  if (!program.has_process(v.process()))
    throw UniverseMismatch("view for unknown process " + std::to_string(v.process()));
  std::vector<OpId> sorted = v.order();
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw UniverseMismatch("view " + std::to_string(v.process()) + " lists an operation twice");
  if (sorted != program.universe(v.process()))
    throw UniverseMismatch("view " + std::to_string(v.process()) +
                           " does not cover exactly its own operations and all writes");
}

inline void check_view_set_universe(const Program& program, const ViewSet& vs) {
  for (ProcessId p : program.processes())
    if (!vs.count(p)) throw UniverseMismatch("missing view for process " + std::to_string(p));
  for (const auto& [p, v] : vs) {
    if (v.process() != p) throw UniverseMismatch("view keyed under the wrong process");
    check_view_universe(program, v);
  }
}

/// Data-race order: the view restricted to each variable, unioned.
inline Relation dro(const Program& program, const View& v) {
  Relation r(program.size(), v.order());
  const auto& seq = v.order();
  for (std::size_t i = 0; i < seq.size(); ++i)
    for (std::size_t j = i + 1; j < seq.size(); ++j)
      if (program.op(seq[i]).variable == program.op(seq[j]).variable) r.insert(seq[i], seq[j]);
  return r;
}

struct ViewValidation {
  bool ok = true;
  std::optional<OpId> read;          // first offending read
  std::optional<OpId> expected;      // writes-to of that read
  std::optional<OpId> observed;      // last same-variable write preceding it in the view
  std::string message;

  explicit operator bool() const noexcept { return ok; }
};

/// Every read of v.process() must return the last preceding same-variable
/// write in v, or the initial value when none precedes it.
inline ViewValidation validate_view(const View& v, const Execution& e) {
  const Program& program = e.program();
  check_view_universe(program, v);
  std::map<std::string, OpId> last;
  for (OpId id : v.order()) {
    const auto& o = program.op(id);
    if (o.is_write()) {
      last[o.variable] = id;
      continue;
    }
    auto it = last.find(o.variable);
    std::optional<OpId> seen;
    if (it != last.end()) seen = it->second;
    auto expected = e.writes_to(id);
    if (seen != expected) {
      ViewValidation bad{false, id, expected, seen, {}};
      bad.message = "read " + o.id + " in view " + std::to_string(v.process()) + " expects " +
                    (expected ? program.name(*expected) : std::string("initial value")) + " but follows " +
                    (seen ? program.name(*seen) : std::string("no write"));
      return bad;
    }
  }
  return {};
}

/// Writes-to implied by the views: each read returns the last preceding
/// same-variable write in its owner's view.
inline Execution derive_writes_to(const Program& program, const ViewSet& vs) {
  Execution e(program);
  for (const auto& [p, v] : vs) {
    std::map<std::string, OpId> last;
    for (OpId id : v.order()) {
      const auto& o = program.op(id);
      if (o.is_write()) {
        last[o.variable] = id;
      } else if (o.process == p) {
        auto it = last.find(o.variable);
        if (it != last.end()) e.set_writes_to(id, it->second);
      }
    }
  }
  return e;
}

/// WO: (w1, w2) whenever w1 writes-to some read r with r <PO w2. Raw pairs.
inline Relation write_read_write(const Execution& e) {
  const Program& program = e.program();
  Relation r(program.size(), program.writes());
  for (auto [read, write] : e.writes_to_pairs()) {
    const auto& seq = program.program_order(program.process_of(read));
    for (std::size_t k = program.po_position(read) + 1; k < seq.size(); ++k)
      if (program.is_write(seq[k]) && seq[k] != write) r.insert(write, seq[k]);
  }
  return r;
}

/// Per-process views as closed relations, keyed by process.
inline std::map<ProcessId, Relation> view_relations(const Program& program, const ViewSet& vs) {
  std::map<ProcessId, Relation> out;
  for (const auto& [p, v] : vs) out.emplace(p, v.relation(program.size()));
  return out;
}

}  // namespace causal_rnr
