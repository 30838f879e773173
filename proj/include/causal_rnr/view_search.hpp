#pragma once

// Backtracking enumeration of view-sets.
//
// Views are built process by process (ascending id), each as an insertion
// sequence choosing the smallest available OpId first, so emission order is
// lexicographic and independent of anything but the inputs. An operation is
// available once all of its required predecessors are placed; requirements
// are PO, caller-supplied edges and the cross-view constraints discovered so
// far (SCO edges, or WO edges when causal).
//
// Cross-view constraints created while building view p are checked against
// the views already completed and become requirements of the views built
// after p.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "causal_rnr/errors.hpp"
#include "causal_rnr/model.hpp"

namespace causal_rnr {

enum class CausalityRule { causal, strong_causal };

struct SearchConfig {
  CausalityRule rule = CausalityRule::strong_causal;
  /// Non-null: every read must return exactly this execution's writes-to.
  /// Null: reads return whatever the candidate view dictates (replay).
  const Execution* fixed_reads = nullptr;
  /// Extra edges each view must contain (record edges, forced orientations).
  std::map<ProcessId, Relation> required;
  std::uint64_t node_budget = 200'000'000;
};

struct SearchStats {
  std::uint64_t nodes = 0;
  std::uint64_t emitted = 0;
  bool stopped_early = false;
};

inline constexpr std::size_t kMaxSearchOps = 64;

namespace detail {

class ViewSearch {
 public:
  using Visitor = std::function<bool(const ViewSet&)>;

  ViewSearch(const Program& program, const SearchConfig& config, Visitor visit)
      : program_(program), config_(config), visit_(std::move(visit)) {
    if (program.size() > kMaxSearchOps)
      throw BudgetExceeded("view search supports at most " + std::to_string(kMaxSearchOps) + " operations", 0);
    n_ = program.size();
    procs_ = program.processes();
    var_index_.resize(n_);
    auto vars = program.variables();
    for (std::size_t i = 0; i < n_; ++i) {
      const auto& v = program.op(static_cast<OpId>(i)).variable;
      var_index_[i] = static_cast<std::size_t>(std::lower_bound(vars.begin(), vars.end(), v) - vars.begin());
    }
    num_vars_ = vars.size();
    for (std::size_t i = 0; i < n_; ++i)
      if (program.is_write(static_cast<OpId>(i))) writes_mask_ |= bit(static_cast<OpId>(i));
    positions_.assign(procs_.size(), std::vector<int>(n_, -1));
    sequences_.resize(procs_.size());
    if (config_.fixed_reads && config_.rule == CausalityRule::causal) {
      for (auto [a, b] : write_read_write(*config_.fixed_reads).edges()) static_edges_.emplace_back(a, b);
    }
  }

  SearchStats run() {
    try {
      build(0);
    } catch (const Stop&) {
      stats_.stopped_early = true;
    }
    return stats_;
  }

 private:
  struct Stop {};

  static std::uint64_t bit(OpId a) { return std::uint64_t{1} << a; }

  void build(std::size_t pi) {
    if (pi == procs_.size()) {
      emit();
      return;
    }
    const ProcessId p = procs_[pi];
    ViewFrame frame;
    frame.universe = 0;
    for (OpId a : program_.universe(p)) frame.universe |= bit(a);
    frame.preds.assign(n_, 0);
    auto require = [&](OpId a, OpId b) {
      if ((frame.universe & bit(a)) && (frame.universe & bit(b))) frame.preds[b] |= bit(a);
    };
    for (ProcessId q : procs_) {
      const auto& seq = program_.program_order(q);
      OpId prev = 0;
      bool have_prev = false;
      for (OpId a : seq) {
        if (!(frame.universe & bit(a))) continue;
        if (have_prev) require(prev, a);
        prev = a;
        have_prev = true;
      }
    }
    if (auto it = config_.required.find(p); it != config_.required.end())
      for (auto [a, b] : it->second.edges()) require(a, b);
    for (auto [a, b] : static_edges_) require(a, b);
    for (auto [a, b] : global_edges_) require(a, b);
    frame.size = static_cast<std::size_t>(std::popcount(frame.universe));
    place(pi, frame, 0, std::vector<int>(num_vars_, -1));
  }

  struct ViewFrame {
    std::uint64_t universe = 0;
    std::uint64_t placed = 0;
    std::vector<std::uint64_t> preds;
    std::size_t size = 0;
  };

  // last_write[v]: last placed write on variable v in the current view, or -1.
  void place(std::size_t pi, ViewFrame& frame, std::size_t depth, std::vector<int> last_write) {
    if (depth == frame.size) {
      build(pi + 1);
      return;
    }
    const ProcessId p = procs_[pi];
    auto& seq = sequences_[pi];
    auto& pos = positions_[pi];
    std::uint64_t candidates = frame.universe & ~frame.placed;
    while (candidates) {
      const auto x = static_cast<OpId>(std::countr_zero(candidates));
      candidates &= candidates - 1;
      if (frame.preds[x] & ~frame.placed) continue;
      const std::size_t saved_edges = global_edges_.size();
      if (!admissible(pi, p, frame, x, last_write)) {
        global_edges_.resize(saved_edges);
        continue;
      }
      if (++stats_.nodes > config_.node_budget) throw BudgetExceeded("view search budget exhausted", stats_.nodes);
      frame.placed |= bit(x);
      pos[x] = static_cast<int>(seq.size());
      seq.push_back(x);
      const auto& op = program_.op(x);
      int saved_last = last_write[var_index_[x]];
      if (op.is_write()) last_write[var_index_[x]] = static_cast<int>(x);
      place(pi, frame, depth + 1, last_write);
      last_write[var_index_[x]] = saved_last;
      seq.pop_back();
      pos[x] = -1;
      frame.placed &= ~bit(x);
      global_edges_.resize(saved_edges);
    }
  }

  // Constraint (a, b) must hold in every completed view.
  bool holds_in_completed(std::size_t pi, OpId a, OpId b) const {
    for (std::size_t q = 0; q < pi; ++q)
      if (positions_[q][a] > positions_[q][b]) return false;
    return true;
  }

  bool admissible(std::size_t pi, ProcessId p, const ViewFrame& frame, OpId x, const std::vector<int>& last_write) {
    const auto& op = program_.op(x);
    const int last = last_write[var_index_[x]];
    if (config_.fixed_reads) {
      const Execution& e = *config_.fixed_reads;
      if (op.is_read()) {
        auto wt = e.writes_to(x);
        if (wt ? last != static_cast<int>(*wt) : last != -1) return false;
      } else {
        // Every pending own read of this variable must still be able to see its write.
        for (OpId r : program_.program_order(p)) {
          if (!program_.is_read(r) || (frame.placed & bit(r)) || var_index_[r] != var_index_[x]) continue;
          auto wt = e.writes_to(r);
          if (!wt || (frame.placed & bit(*wt))) return false;
        }
      }
    }
    if (config_.rule == CausalityRule::strong_causal) {
      if (op.is_write() && op.process == p) {
        std::uint64_t earlier = frame.placed & writes_mask_;
        while (earlier) {
          const auto y = static_cast<OpId>(std::countr_zero(earlier));
          earlier &= earlier - 1;
          if (!holds_in_completed(pi, y, x)) return false;
          global_edges_.emplace_back(y, x);
        }
      }
    } else if (!config_.fixed_reads && op.is_read() && last >= 0) {
      const auto w = static_cast<OpId>(last);
      const auto& seq = program_.program_order(p);
      for (std::size_t k = program_.po_position(x) + 1; k < seq.size(); ++k) {
        const OpId w2 = seq[k];
        if (!program_.is_write(w2) || w2 == w) continue;
        if (!holds_in_completed(pi, w, w2)) return false;
        global_edges_.emplace_back(w, w2);
      }
    }
    return true;
  }

  void emit() {
    ViewSet vs;
    for (std::size_t q = 0; q < procs_.size(); ++q) vs.emplace(procs_[q], View(procs_[q], sequences_[q]));
    ++stats_.emitted;
    if (!visit_(vs)) throw Stop{};
  }

  const Program& program_;
  const SearchConfig& config_;
  Visitor visit_;
  std::size_t n_ = 0;
  std::size_t num_vars_ = 0;
  std::vector<ProcessId> procs_;
  std::vector<std::size_t> var_index_;
  std::uint64_t writes_mask_ = 0;
  std::vector<std::vector<int>> positions_;
  std::vector<std::vector<OpId>> sequences_;
  std::vector<Edge> static_edges_;
  std::vector<Edge> global_edges_;
  SearchStats stats_;
};

}  // namespace detail

/// Calls visit for every view-set satisfying config, in lexicographic order,
/// until visit returns false.
template <class Visitor>
SearchStats search_view_sets(const Program& program, const SearchConfig& config, Visitor&& visit) {
  detail::ViewSearch search(program, config, std::forward<Visitor>(visit));
  return search.run();
}

inline std::optional<ViewSet> first_view_set(const Program& program, const SearchConfig& config) {
  std::optional<ViewSet> found;
  search_view_sets(program, config, [&](const ViewSet& vs) {
    found = vs;
    return false;
  });
  return found;
}

}  // namespace causal_rnr
