#pragma once

// Seeded random programs and strongly causal executions.
//
// Executions come from a simulated replicated memory. Each process holds a
// view; its own writes enter that view immediately and its reads return the
// last same-variable write there. A remote write is delivered to process k
// only after every write that preceded it in its writer's view at commit
// time, which keeps all views strongly causal.
//
// Randomness is std::mt19937_64 seeded with GenParams::seed. Bounded draws use
// rejection sampling so results are identical on every platform.

#include <cstdint>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "causal_rnr/model.hpp"
#include "causal_rnr/record_m1.hpp"

namespace causal_rnr {

struct GenParams {
  std::uint64_t seed = 1;
  std::size_t processes = 3;
  std::size_t ops_per_process = 2;  // upper bound; each process draws 0..bound
  std::size_t variables = 2;
  double write_ratio = 0.6;

  friend bool operator==(const GenParams&, const GenParams&) = default;
};

inline constexpr const char* kGeneratorAlgorithm = "mt19937_64";

class GenRng {
 public:
  explicit GenRng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, n); n > 0.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      const std::uint64_t r = engine_();
      if (r >= threshold) return r % n;
    }
  }

  /// Uniform in [0, 1) with 53 random bits.
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  bool chance(double p) { return unit() < p; }

 private:
  std::mt19937_64 engine_;
};

inline std::string variable_name(std::size_t k) {
  static const char* names[] = {"x", "y", "z", "u", "v", "t"};
  return k < 6 ? names[k] : "x" + std::to_string(k);
}

namespace detail {

inline Program draw_program(const GenParams& params, GenRng& rng) {
  if (params.processes == 0) throw std::invalid_argument("GenParams: processes must be at least 1");
  if (params.variables == 0) throw std::invalid_argument("GenParams: variables must be at least 1");
  std::vector<ProcessSpec> specs;
  for (std::size_t p = 1; p <= params.processes; ++p) {
    ProcessSpec spec{static_cast<ProcessId>(p), {}};
    const auto count = rng.below(params.ops_per_process + 1);
    for (std::uint64_t k = 0; k < count; ++k) {
      const bool write = rng.chance(params.write_ratio);
      const auto var = variable_name(rng.below(params.variables));
      const std::string id = std::string(write ? "w" : "r") + std::to_string(p) + "_" + std::to_string(k);
      spec.ops.push_back(OpSpec{write ? OpKind::write : OpKind::read, var, id});
    }
    specs.push_back(std::move(spec));
  }
  return Program(specs);
}

}  // namespace detail

inline Program gen_program(const GenParams& params) {
  GenRng rng(params.seed);
  return detail::draw_program(params, rng);
}

struct Generated {
  Execution execution;
  ViewSet views;
  ObservationStream events;  // every view append, in simulation order
};

inline Generated gen_strong_causal(const GenParams& params) {
  GenRng rng(params.seed);
  Program program = detail::draw_program(params, rng);
  Execution e(program);
  const auto& procs = program.processes();
  std::map<ProcessId, std::vector<OpId>> views;
  std::map<ProcessId, std::vector<bool>> has;
  std::map<ProcessId, std::size_t> next;
  std::map<OpId, std::vector<OpId>> preds;  // writes in the writer's view at commit time
  std::vector<OpId> committed;
  for (ProcessId p : procs) {
    views[p];
    has[p].assign(program.size(), false);
    next[p] = 0;
  }
  Generated out;
  auto append = [&](ProcessId p, OpId id) {
    views[p].push_back(id);
    has[p][id] = true;
    out.events.push_back({p, id});
  };

  struct Move {
    bool deliver;
    ProcessId process;
    OpId write;
  };
  for (;;) {
    std::vector<Move> moves;
    for (ProcessId p : procs)
      if (next[p] < program.program_order(p).size()) moves.push_back({false, p, 0});
    for (OpId w : committed)
      for (ProcessId k : procs) {
        if (has[k][w]) continue;
        bool ready = true;
        for (OpId y : preds[w]) ready = ready && has[k][y];
        if (ready) moves.push_back({true, k, w});
      }
    if (moves.empty()) break;
    const Move m = moves[rng.below(moves.size())];
    if (m.deliver) {
      append(m.process, m.write);
      continue;
    }
    const OpId id = program.program_order(m.process)[next[m.process]++];
    if (program.is_write(id)) {
      for (OpId y : views[m.process])
        if (program.is_write(y)) preds[id].push_back(y);
      committed.push_back(id);
    } else {
      const auto& var = program.op(id).variable;
      const auto& seq = views[m.process];
      for (auto it = seq.rbegin(); it != seq.rend(); ++it)
        if (program.is_write(*it) && program.op(*it).variable == var) {
          e.set_writes_to(id, *it);
          break;
        }
    }
    append(m.process, id);
  }
  for (auto& [p, seq] : views) out.views.emplace(p, View(p, std::move(seq)));
  out.execution = std::move(e);
  return out;
}

inline std::string describe(const GenParams& params) {
  std::ostringstream os;
  os << "generator=" << kGeneratorAlgorithm << " seed=" << params.seed << " processes=" << params.processes
     << " ops_per_process=" << params.ops_per_process << " variables=" << params.variables
     << " write_ratio=" << params.write_ratio;
  return os.str();
}

}  // namespace causal_rnr
