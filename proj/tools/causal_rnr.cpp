// Command-line front end: consistency checks, recorders, replay oracle,
// generator, fuzzing and graph export.
//
// Exit codes: 0 ok/good, 1 violation/not good, 2 usage, input or budget errors.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "causal_rnr/battery.hpp"
#include "causal_rnr/consistency.hpp"
#include "causal_rnr/fixtures.hpp"
#include "causal_rnr/generator.hpp"
#include "causal_rnr/io.hpp"
#include "causal_rnr/oracle.hpp"
#include "causal_rnr/record_m1.hpp"
#include "causal_rnr/record_m2.hpp"

namespace fs = std::filesystem;
using namespace causal_rnr;

namespace {

constexpr int kOk = 0;
constexpr int kViolation = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A path if it exists, otherwise the name of a bundled fixture.
std::string load_text(const std::string& source) {
  if (fs::exists(source)) {
    std::ifstream in(source, std::ios::binary);
    if (!in) throw UsageError("cannot read " + source);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
  }
  if (auto f = find_fixture(source)) return std::string(f->text);
  throw UsageError("no such file or bundled example: " + source);
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write " + path);
  out << text;
}

ConsistencyModel parse_model(const std::string& s) {
  if (s == "causal") return ConsistencyModel::causal;
  if (s == "strong-causal") return ConsistencyModel::strong_causal;
  if (s == "cache") return ConsistencyModel::cache;
  throw UsageError("unknown consistency model: " + s);
}

std::size_t default_max_ops() {
  if (const char* env = std::getenv("CAUSAL_RNR_MAX_OPS")) {
    try {
      return std::stoul(env);
    } catch (const std::exception&) {
      throw UsageError(std::string("CAUSAL_RNR_MAX_OPS is not a number: ") + env);
    }
  }
  return 10;
}

const ViewSet& require_views(const ExecutionFile& f, const std::string& source) {
  if (!f.views) throw UsageError(source + " has no views");
  return *f.views;
}

void print_record(const Program& program, const Record& rec) {
  for (const auto& [p, r] : rec.per_process) std::cout << "R_" << p << ": " << format_edges(program, r) << "\n";
}

void print_views(const Program& program, const ViewSet& vs, const std::string& prefix) {
  for (const auto& [p, v] : vs) std::cout << prefix << p << ": " << format_view(program, v) << "\n";
}

void print_failure(const CheckResult& r, const Program& program) {
  if (r.process) std::cout << "process: " << *r.process << "\n";
  if (r.variable) std::cout << "variable: " << *r.variable << "\n";
  if (r.missing_edge)
    std::cout << "edge: " << program.name(r.missing_edge->first) << "->" << program.name(r.missing_edge->second)
              << "\n";
  std::cout << "reason: " << r.reason << "\n";
}

struct CommonOptions {
  std::string consistency = "strong-causal";
  std::optional<std::size_t> max_ops;
  unsigned jobs = 1;
  std::string dot;

  OracleLimits limits() const {
    OracleLimits l;
    l.max_ops = max_ops ? *max_ops : default_max_ops();
    l.jobs = jobs;
    return l;
  }
};

// ---- check ---------------------------------------------------------------

struct CheckOptions {
  std::string input;
  bool exists = false;
};

int run_check(const CheckOptions& o, const CommonOptions& c) {
  const ExecutionFile f = parse_execution(load_text(o.input));
  const Program& program = f.program();
  const ConsistencyModel model = parse_model(c.consistency);
  std::cout << "command: check\nmodel: " << to_string(model) << "\n";
  if (!c.dot.empty()) write_file(c.dot, to_dot(f.execution, f.views));

  if (model == ConsistencyModel::cache) {
    auto orders = find_cache_orders(f.execution);
    if (!orders) {
      std::cout << "result: violation\n";
      print_failure(check_cache(f.execution), program);
      return kViolation;
    }
    std::cout << "result: ok\n";
    for (const auto& [var, seq] : *orders) {
      std::cout << "order " << var << ":";
      for (OpId id : seq) std::cout << " " << program.name(id);
      std::cout << "\n";
    }
    return kOk;
  }

  if (o.exists || !f.views) {
    SearchLimits limits;
    limits.max_ops = c.limits().max_ops;
    auto found = exists_explanation(f.execution, model, limits);
    if (!found) {
      std::cout << "result: none\nmessage: no explanation exists\n";
      return kViolation;
    }
    std::cout << "result: explained\n";
    print_views(program, *found, "view ");
    return kOk;
  }

  const CheckResult r = check(model, *f.views, f.execution);
  if (!r) {
    std::cout << "result: violation\n";
    print_failure(r, program);
    return kViolation;
  }
  std::cout << "result: ok\n";
  return kOk;
}

// ---- record ----------------------------------------------------------------

struct RecordOptions {
  std::string input;
  bool model2 = false;
  bool online = false;
  bool naive = false;
  std::string out;
};

int run_record(const RecordOptions& o, const CommonOptions& c) {
  const ExecutionFile f = parse_execution(load_text(o.input));
  const Program& program = f.program();
  const ViewSet& vs = require_views(f, o.input);
  if (o.model2 && o.online) throw UsageError("model 2 has no online recorder");
  std::cout << "command: record\nfidelity: " << (o.model2 ? "model2" : "model1") << "\nmode: "
            << (o.naive ? "naive-causal" : o.online ? "online" : "offline") << "\n";
  Record rec;
  try {
    if (o.naive) {
      const CheckResult causal = check_causal(vs, f.execution);
      if (!causal) {
        std::cout << "result: violation\n";
        print_failure(causal, program);
        return kViolation;
      }
      rec = o.model2 ? naive_causal_record_m2(f.execution, vs) : naive_causal_record_m1(f.execution, vs);
    } else if (o.online) {
      require_strong_causal(program, vs);
      rec = online_record_m1(program, interleave_views(vs), compute_sco(program, vs));
    } else {
      rec = o.model2 ? offline_record_m2(program, vs) : offline_record_m1(program, vs);
    }
  } catch (const NotStronglyCausal& e) {
    std::cout << "result: violation\nreason: " << e.what() << "\n";
    return kViolation;
  }
  std::cout << "result: ok\nedges: " << rec.total_edges() << "\n";
  print_record(program, rec);
  if (!o.out.empty()) write_file(o.out, serialize_record(program, rec));
  if (!c.dot.empty()) write_file(c.dot, to_dot(f.execution, f.views, rec));
  return kOk;
}

// ---- verify ----------------------------------------------------------------

struct VerifyOptions {
  std::string input;
  std::string record;
  bool model2 = false;
  bool exhaustive = false;
};

int run_verify(const VerifyOptions& o, const CommonOptions& c) {
  const ExecutionFile f = parse_execution(load_text(o.input));
  const Program& program = f.program();
  const ViewSet& vs = require_views(f, o.input);
  const Record rec = parse_record(load_text(o.record), program);
  const ConsistencyModel model = parse_model(c.consistency);
  const Fidelity fidelity = o.model2 ? Fidelity::model2 : Fidelity::model1;
  std::cout << "command: verify\nfidelity: " << (o.model2 ? "model2" : "model1") << "\nmodel: " << to_string(model)
            << "\n";
  const Verdict v = o.exhaustive ? is_good_record_exhaustive(program, vs, rec, fidelity, model, c.limits())
                                 : is_good_record(program, vs, rec, fidelity, model, c.limits());
  if (!c.dot.empty()) write_file(c.dot, to_dot(f.execution, f.views, rec));
  std::cout << "nodes: " << v.nodes << "\n";
  if (v.good) {
    std::cout << "result: good\n";
    return kOk;
  }
  std::cout << "result: not-good\n";
  if (v.process) std::cout << "process: " << *v.process << "\n";
  if (v.flipped) std::cout << "flipped: " << program.name(v.flipped->first) << "->" << program.name(v.flipped->second) << "\n";
  const Execution replay = derive_writes_to(program, *v.counterexample);
  std::cout << "counterexample:\n";
  print_views(program, *v.counterexample, "view ");
  std::cout << serialize_reads(replay);
  return kViolation;
}

// ---- gen / fuzz ------------------------------------------------------------

struct GenOptions {
  GenParams params;
  std::size_t count = 1;
};

int run_gen(const GenOptions& o) {
  for (std::size_t k = 0; k < o.count; ++k) {
    GenParams params = o.params;
    params.seed += k;
    const Generated g = gen_strong_causal(params);
    if (k) std::cout << "\n";
    std::cout << "# " << describe(params) << "\n" << serialize_execution(g.execution, g.views);
  }
  return kOk;
}

struct FuzzOptions {
  std::uint64_t seed = 1;
  std::size_t iterations = 100;
};

int run_fuzz(const FuzzOptions& o, const CommonOptions& c) {
  const OracleLimits limits = c.limits();
  std::size_t passed = 0;
  for (std::size_t k = 0; k < o.iterations; ++k) {
    const GenParams params = corpus_params(o.seed, k);
    const Generated g = gen_strong_causal(params);
    const Program& program = g.execution.program();
    const Subject subject{program, g.views, g.events};
    Failures failures;
    if (auto r = check_strong_causal(g.views, g.execution); !r) failures.push_back("generated views: " + r.reason);
    for (const auto& group : {check_model1_offline(subject, limits), check_model1_online(subject, limits),
                              check_model2_offline(subject, limits), check_invariants(subject, limits)})
      failures.insert(failures.end(), group.begin(), group.end());
    const Record m1 = offline_record_m1(program, g.views);
    std::cout << "iteration " << k << " seed " << params.seed << " ops " << program.size() << " m1_edges "
              << m1.total_edges();
    if (failures.empty()) {
      std::cout << " m2_edges " << offline_record_m2(program, g.views).total_edges() << ": ok\n";
      ++passed;
      continue;
    }
    std::cout << ": FAILED\n";
    for (const auto& why : failures) std::cout << "failure: " << why << "\n";
    std::cout << "reproducer:\n# " << describe(params) << "\n" << serialize_execution(g.execution, g.views);
    std::cout << "result: failed\niterations: " << k + 1 << "\n";
    return kViolation;
  }
  std::cout << "result: ok\niterations: " << passed << "\n";
  return kOk;
}

// ---- dot / examples ----------------------------------------------------------

int run_dot(const std::string& input, const std::string& record, const std::string& out) {
  const ExecutionFile f = parse_execution(load_text(input));
  std::optional<Record> rec = f.record;
  if (!record.empty()) rec = parse_record(load_text(record), f.program());
  const std::string dot = to_dot(f.execution, f.views, rec);
  if (out.empty() || out == "-")
    std::cout << dot;
  else
    write_file(out, dot);
  return kOk;
}

int run_examples(const std::string& name, const std::string& dir) {
  if (!dir.empty()) {
    fs::create_directories(dir);
    for (const auto& f : bundled_fixtures()) write_file((fs::path(dir) / std::string(f.name)).string(), std::string(f.text));
    std::cout << "wrote " << bundled_fixtures().size() << " files to " << dir << "\n";
    return kOk;
  }
  if (!name.empty()) {
    auto f = find_fixture(name);
    if (!f) throw UsageError("no bundled example named " + name);
    std::cout << f->text;
    return kOk;
  }
  for (const auto& f : bundled_fixtures()) std::cout << f.name << ": " << f.summary << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Record and replay analysis for causally consistent shared memory"};
  app.require_subcommand(1);
  CommonOptions common;

  auto add_consistency = [&](CLI::App* cmd) {
    cmd->add_option("--consistency,--model", common.consistency, "causal, strong-causal or cache")
        ->check(CLI::IsMember({"causal", "strong-causal", "cache"}));
  };
  auto add_limits = [&](CLI::App* cmd) {
    cmd->add_option("--max-ops", common.max_ops, "enumeration cap on total operations (env CAUSAL_RNR_MAX_OPS)");
    cmd->add_option("--jobs", common.jobs, "parallel oracle searches")->check(CLI::PositiveNumber);
  };

  CheckOptions check_opts;
  auto* check_cmd = app.add_subcommand("check", "check views against a consistency model, or search for an explanation");
  check_cmd->add_option("input", check_opts.input, "execution file or bundled example")->required();
  check_cmd->add_flag("--exists", check_opts.exists, "search for any explaining view-set instead of checking the given views");
  check_cmd->add_option("--dot", common.dot, "write a Graphviz rendering");
  add_limits(check_cmd);
  add_consistency(check_cmd);

  RecordOptions record_opts;
  auto* record_cmd = app.add_subcommand("record", "compute a record of the given views");
  record_cmd->add_option("input", record_opts.input, "execution file or bundled example")->required();
  auto* m1 = record_cmd->add_flag("--model1", "views must be reproduced exactly (default)");
  record_cmd->add_flag("--model2", record_opts.model2, "only data-race orders must be reproduced")->excludes(m1);
  auto* offline = record_cmd->add_flag("--offline", "record with knowledge of all views (default)");
  record_cmd->add_flag("--online", record_opts.online, "record while views are observed")->excludes(offline);
  record_cmd->add_flag("--naive", record_opts.naive, "reduction minus WO and PO, the causal-consistency analogue");
  record_cmd->add_option("--out,-o", record_opts.out, "write the record file");
  record_cmd->add_option("--dot", common.dot, "write a Graphviz rendering");

  VerifyOptions verify_opts;
  auto* verify_cmd = app.add_subcommand("verify", "decide whether a record is good");
  verify_cmd->add_option("input", verify_opts.input, "execution file or bundled example")->required();
  verify_cmd->add_option("record", verify_opts.record, "record file or bundled example")->required();
  auto* vm1 = verify_cmd->add_flag("--model1", "replays must reproduce every view (default)");
  verify_cmd->add_flag("--model2", verify_opts.model2, "replays must reproduce every data-race order")->excludes(vm1);
  verify_cmd->add_flag("--exhaustive", verify_opts.exhaustive, "enumerate every certifying replay");
  verify_cmd->add_option("--dot", common.dot, "write a Graphviz rendering");
  add_limits(verify_cmd);
  add_consistency(verify_cmd);

  GenOptions gen_opts;
  auto* gen_cmd = app.add_subcommand("gen", "generate strongly causal executions");
  gen_cmd->add_option("--seed", gen_opts.params.seed, "PRNG seed");
  gen_cmd->add_option("--processes", gen_opts.params.processes)->check(CLI::PositiveNumber);
  gen_cmd->add_option("--ops", gen_opts.params.ops_per_process, "maximum operations per process");
  gen_cmd->add_option("--variables", gen_opts.params.variables)->check(CLI::PositiveNumber);
  gen_cmd->add_option("--write-ratio", gen_opts.params.write_ratio)->check(CLI::Range(0.0, 1.0));
  gen_cmd->add_option("--count", gen_opts.count, "number of executions, seeds counting up");

  FuzzOptions fuzz_opts;
  auto* fuzz_cmd = app.add_subcommand("fuzz", "run the record property battery on generated executions");
  fuzz_cmd->add_option("--seed", fuzz_opts.seed, "base seed");
  fuzz_cmd->add_option("--iterations,-n", fuzz_opts.iterations);
  add_limits(fuzz_cmd);

  std::string dot_input, dot_record, dot_out;
  auto* dot_cmd = app.add_subcommand("dot", "export an execution as Graphviz");
  dot_cmd->add_option("input", dot_input, "execution file or bundled example")->required();
  dot_cmd->add_option("--record", dot_record, "record file to highlight");
  dot_cmd->add_option("--out,-o", dot_out, "output file, default stdout");

  std::string example_name, example_dir;
  auto* examples_cmd = app.add_subcommand("examples", "list, print or export the bundled examples");
  examples_cmd->add_option("name", example_name);
  examples_cmd->add_option("--write", example_dir, "write every example into this directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*check_cmd) return run_check(check_opts, common);
    if (*record_cmd) return run_record(record_opts, common);
    if (*verify_cmd) return run_verify(verify_opts, common);
    if (*gen_cmd) return run_gen(gen_opts);
    if (*fuzz_cmd) return run_fuzz(fuzz_opts, common);
    if (*dot_cmd) return run_dot(dot_input, dot_record, dot_out);
    if (*examples_cmd) return run_examples(example_name, example_dir);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
  } catch (const causal_rnr::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
  } catch (const BudgetExceeded& e) {
    std::cerr << "error: " << e.what() << "; raise --max-ops or CAUSAL_RNR_MAX_OPS\n";
  } catch (const causal_rnr::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return kUsage;
}
