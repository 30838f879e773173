#pragma once

// Line-oriented text formats.
//
//   process <pid>: w(<var>)#<id> r(<var>)#<id> ...   program order of <pid>
//   view <pid>: <id> <id> ...                         total order V_pid
//   reads: <rid><-<wid> ...                           explicit writes-to
//   record <pid>: <id>-><id> ...                      record edges of <pid>
//
// `#` starts a comment at the beginning of a line or after whitespace; inside
// an op token it separates the variable from the id. Without a `reads:` line
// the writes-to map is derived from the views, or empty when there are none.

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "causal_rnr/consistency.hpp"
#include "causal_rnr/errors.hpp"
#include "causal_rnr/model.hpp"
#include "causal_rnr/record.hpp"

namespace causal_rnr {

struct ExecutionFile {
  Execution execution;
  std::optional<ViewSet> views;
  bool explicit_reads = false;
  std::optional<Record> record;  // present when the file also holds record lines

  const Program& program() const noexcept { return execution.program(); }
};

namespace detail {

struct Token {
  std::string text;
  std::size_t line;
  std::size_t column;  // 1-based
};

struct Line {
  std::string keyword;
  std::optional<ProcessId> process;
  std::vector<Token> tokens;
  std::size_t number;
  std::size_t column;
};

inline bool id_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.';
}

inline bool valid_id(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!id_char(c)) return false;
  return true;
}

// Splits one source line into whitespace-separated tokens, dropping comments.
inline std::vector<Token> tokenize(std::string_view line, std::size_t number) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    if (std::isspace(static_cast<unsigned char>(line[i]))) {
      ++i;
      continue;
    }
    if (line[i] == '#') break;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    out.push_back({std::string(line.substr(i, j - i)), number, i + 1});
    i = j;
  }
  return out;
}

inline std::vector<Line> split_lines(std::string_view text) {
  std::vector<Line> out;
  std::size_t number = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view raw = text.substr(start, end - start);
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    ++number;
    auto tokens = tokenize(raw, number);
    start = end + 1;
    if (tokens.empty()) continue;
    // Header: "<keyword> <pid>:" or "reads:"; the colon may be glued to either word.
    Line l;
    l.number = number;
    l.column = tokens.front().column;
    std::string head = tokens.front().text;
    std::size_t consumed = 1;
    if (head == "reads:" || head == "reads") {
      l.keyword = "reads";
      if (head == "reads") {
        if (tokens.size() < 2 || tokens[1].text != ":") throw ParseError("expected ':' after 'reads'", number, l.column);
        consumed = 2;
      }
    } else if (head == "process" || head == "view" || head == "record") {
      l.keyword = head;
      if (tokens.size() < 2) throw ParseError("expected process id after '" + head + "'", number, l.column);
      std::string pid = tokens[1].text;
      consumed = 2;
      if (!pid.empty() && pid.back() == ':') {
        pid.pop_back();
      } else if (tokens.size() > 2 && tokens[2].text == ":") {
        consumed = 3;
      } else {
        throw ParseError("expected ':' after process id", number, tokens[1].column + tokens[1].text.size());
      }
      if (pid.empty() || pid.size() > 9 || !std::all_of(pid.begin(), pid.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
        throw ParseError("process id must be a non-negative integer", number, tokens[1].column);
      l.process = static_cast<ProcessId>(std::stoul(pid));
    } else {
      throw ParseError("unknown directive '" + head + "'", number, l.column);
    }
    l.tokens.assign(tokens.begin() + static_cast<std::ptrdiff_t>(consumed), tokens.end());
    out.push_back(std::move(l));
  }
  return out;
}

inline OpSpec parse_op(const Token& t) {
  const std::string& s = t.text;
  if (s.size() < 6 || (s[0] != 'w' && s[0] != 'r') || s[1] != '(')
    throw ParseError("malformed operation '" + s + "', expected w(<var>)#<id> or r(<var>)#<id>", t.line, t.column);
  const auto close = s.find(')');
  if (close == std::string::npos || close + 1 >= s.size() || s[close + 1] != '#')
    throw ParseError("malformed operation '" + s + "'", t.line, t.column);
  std::string var = s.substr(2, close - 2);
  std::string id = s.substr(close + 2);
  if (!valid_id(var)) throw ParseError("malformed variable name in '" + s + "'", t.line, t.column + 2);
  if (!valid_id(id)) throw ParseError("malformed operation id in '" + s + "'", t.line, t.column + close + 2);
  return OpSpec{s[0] == 'w' ? OpKind::write : OpKind::read, std::move(var), std::move(id)};
}

inline OpId resolve(const Program& program, const Token& t, std::string_view id, std::size_t offset = 0) {
  if (!valid_id(id)) throw ParseError("malformed operation id '" + std::string(id) + "'", t.line, t.column + offset);
  auto found = program.find(id);
  if (!found)
    throw SemanticError("line " + std::to_string(t.line) + ": unknown operation '" + std::string(id) + "'");
  return *found;
}

// Splits "<a><sep><b>" at the first occurrence of sep.
inline std::pair<std::string, std::string> split_pair(const Token& t, std::string_view sep) {
  const auto at = t.text.find(sep);
  if (at == std::string::npos || at == 0 || at + sep.size() >= t.text.size())
    throw ParseError("malformed pair '" + t.text + "', expected <id>" + std::string(sep) + "<id>", t.line, t.column);
  return {t.text.substr(0, at), t.text.substr(at + sep.size())};
}

inline Record parse_record_lines(const Program& program, const std::vector<Line>& lines) {
  Record rec = Record::empty_for(program);
  for (const auto& l : lines) {
    if (l.keyword != "record") continue;
    if (!program.has_process(*l.process))
      throw SemanticError("line " + std::to_string(l.number) + ": record for unknown process " +
                          std::to_string(*l.process));
    for (const auto& t : l.tokens) {
      auto [a, b] = split_pair(t, "->");
      const OpId x = resolve(program, t, a);
      const OpId y = resolve(program, t, b, a.size() + 2);
      if (x == y || !program.in_universe(*l.process, x) || !program.in_universe(*l.process, y))
        throw SemanticError("line " + std::to_string(l.number) + ": edge " + t.text + " is outside view " +
                            std::to_string(*l.process));
      rec.of(*l.process).insert(x, y);
    }
  }
  return rec;
}

}  // namespace detail

inline ExecutionFile parse_execution(std::string_view text) {
  const auto lines = detail::split_lines(text);
  std::vector<ProcessSpec> specs;
  for (const auto& l : lines) {
    if (l.keyword != "process") continue;
    ProcessSpec spec{*l.process, {}};
    for (const auto& t : l.tokens) spec.ops.push_back(detail::parse_op(t));
    specs.push_back(std::move(spec));
  }
  Program program(specs);

  ExecutionFile out;
  ViewSet views;
  bool have_views = false;
  bool have_record = false;
  const detail::Line* reads_line = nullptr;
  for (const auto& l : lines) {
    if (l.keyword == "view") {
      have_views = true;
      if (!program.has_process(*l.process))
        throw SemanticError("line " + std::to_string(l.number) + ": view for unknown process " +
                            std::to_string(*l.process));
      if (views.count(*l.process))
        throw SemanticError("line " + std::to_string(l.number) + ": second view for process " +
                            std::to_string(*l.process));
      std::vector<OpId> order;
      for (const auto& t : l.tokens) order.push_back(detail::resolve(program, t, t.text));
      views.emplace(*l.process, View(*l.process, std::move(order)));
    } else if (l.keyword == "reads") {
      if (reads_line) throw SemanticError("line " + std::to_string(l.number) + ": second 'reads:' line");
      reads_line = &l;
    } else if (l.keyword == "record") {
      have_record = true;
    }
  }
  if (have_views) check_view_set_universe(program, views);

  if (reads_line) {
    Execution e(program);
    for (const auto& t : reads_line->tokens) {
      auto [r, w] = detail::split_pair(t, "<-");
      const OpId read = detail::resolve(program, t, r);
      const OpId write = detail::resolve(program, t, w, r.size() + 2);
      if (e.writes_to(read)) throw SemanticError("read '" + r + "' has two writes-to entries");
      e.set_writes_to(read, write);
    }
    out.execution = std::move(e);
    out.explicit_reads = true;
  } else if (have_views) {
    out.execution = derive_writes_to(program, views);
  } else {
    out.execution = Execution(program);
  }
  if (have_views) out.views = std::move(views);
  if (have_record) out.record = detail::parse_record_lines(out.program(), lines);
  return out;
}

inline Record parse_record(std::string_view text, const Program& program) {
  const auto lines = detail::split_lines(text);
  for (const auto& l : lines)
    if (l.keyword != "record")
      throw ParseError("record files hold only 'record <pid>:' lines", l.number, l.column);
  return detail::parse_record_lines(program, lines);
}

inline std::string format_op(const Operation& o) {
  return std::string(o.is_write() ? "w(" : "r(") + o.variable + ")#" + o.id;
}

inline std::string serialize_program(const Program& program) {
  std::string out;
  for (const auto& spec : program.listing()) {
    out += "process " + std::to_string(spec.process) + ":";
    for (const auto& op : spec.ops) out += " " + format_op(Operation{op.kind, spec.process, op.variable, op.id});
    out += "\n";
  }
  return out;
}

inline std::string serialize_views(const Program& program, const ViewSet& vs) {
  std::string out;
  for (const auto& [p, v] : vs) {
    out += "view " + std::to_string(p) + ":";
    for (OpId id : v.order()) out += " " + program.name(id);
    out += "\n";
  }
  return out;
}

inline std::string serialize_reads(const Execution& e) {
  std::string out = "reads:";
  for (auto [r, w] : e.writes_to_pairs()) out += " " + e.program().name(r) + "<-" + e.program().name(w);
  return out + "\n";
}

inline std::string serialize_record(const Program& program, const Record& rec) {
  std::string out;
  for (const auto& [p, r] : rec.per_process) {
    out += "record " + std::to_string(p) + ":";
    for (auto [a, b] : r.edges()) out += " " + program.name(a) + "->" + program.name(b);
    out += "\n";
  }
  return out;
}

/// Inverse of parse_execution. The reads line is always written when the
/// program has reads, so the writes-to map survives without views.
inline std::string serialize_execution(const Execution& e, const std::optional<ViewSet>& views = std::nullopt,
                                       const std::optional<Record>& record = std::nullopt) {
  const Program& program = e.program();
  std::string out = serialize_program(program);
  if (views) out += serialize_views(program, *views);
  if (!program.reads().empty()) out += serialize_reads(e);
  if (record) out += serialize_record(program, *record);
  return out;
}

inline std::string serialize_execution(const ExecutionFile& f) {
  return serialize_execution(f.execution, f.views, f.record);
}

/// Record edges as "{a->b, c->d}" or "{}".
inline std::string format_edges(const Program& program, const Relation& r) {
  std::string out = "{";
  bool first = true;
  for (auto [a, b] : r.edges()) {
    if (!first) out += ", ";
    out += program.name(a) + "->" + program.name(b);
    first = false;
  }
  return out + "}";
}

inline std::string format_view(const Program& program, const View& v) {
  std::string out;
  for (OpId id : v.order()) {
    if (!out.empty()) out += ' ';
    out += program.name(id);
  }
  return out;
}

/// Graphviz rendering: one cluster per view (or per process without views).
/// Consecutive view edges are styled by the strongest class they belong to:
/// record, PO, SCO, WO, plain view order. Record edges that are not
/// consecutive in the view are drawn as extra non-constraining edges.
inline std::string to_dot(const Execution& e, const std::optional<ViewSet>& views,
                          const std::optional<Record>& record = std::nullopt) {
  const Program& program = e.program();
  std::ostringstream os;
  os << "digraph execution {\n  rankdir=LR;\n  node [shape=box, fontname=\"monospace\"];\n";
  auto node = [&](ProcessId p, OpId id) { return "\"p" + std::to_string(p) + "_" + program.name(id) + "\""; };
  auto label = [&](OpId id) { return format_op(program.op(id)); };
  const Relation po = program.po();
  const Relation wo = write_read_write(e);
  const Relation sco = views ? compute_sco(program, *views) : Relation(program.size(), program.writes());

  for (ProcessId p : program.processes()) {
    os << "  subgraph cluster_" << p << " {\n    label=\"" << (views ? "view " : "process ") << p << "\";\n";
    const std::vector<OpId> seq = views ? views->at(p).order() : program.program_order(p);
    for (OpId id : seq) os << "    " << node(p, id) << " [label=\"" << label(id) << "\"];\n";
    for (std::size_t k = 0; k + 1 < seq.size(); ++k) {
      const Edge edge{seq[k], seq[k + 1]};
      std::string style = "class=view, color=gray";
      if (record && record->per_process.count(p) && record->of(p).contains(edge))
        style = "class=record, color=red, penwidth=2";
      else if (po.contains(edge))
        style = "class=po, style=bold";
      else if (sco.contains(edge))
        style = "class=sco, color=blue, style=dashed";
      else if (wo.contains(edge))
        style = "class=wo, color=darkgreen, style=dotted";
      os << "    " << node(p, edge.first) << " -> " << node(p, edge.second) << " [" << style << "];\n";
    }
    if (record && record->per_process.count(p)) {
      for (auto [a, b] : record->of(p).edges()) {
        auto pa = std::find(seq.begin(), seq.end(), a);
        if (pa != seq.end() && pa + 1 != seq.end() && *(pa + 1) == b) continue;
        os << "    " << node(p, a) << " -> " << node(p, b)
           << " [class=record, color=red, penwidth=2, constraint=false];\n";
      }
    }
    os << "  }\n";
  }
  for (auto [r, w] : e.writes_to_pairs()) {
    const ProcessId p = program.process_of(r);
    const ProcessId owner = views ? p : program.process_of(w);
    os << "  " << node(owner, w) << " -> " << node(p, r) << " [class=writes_to, color=black, style=bold, constraint=false];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace causal_rnr
