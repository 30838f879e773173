#include <gtest/gtest.h>

#include "causal_rnr/fixtures.hpp"
#include "causal_rnr/generator.hpp"
#include "causal_rnr/io.hpp"
#include "causal_rnr/record_m1.hpp"

using namespace causal_rnr;

namespace {

ExecutionFile load(std::string_view name) { return parse_execution(find_fixture(name)->text); }

Edge edge(const Program& p, std::string_view a, std::string_view b) { return {p.at(a), p.at(b)}; }

template <class Fn>
std::pair<std::size_t, std::size_t> parse_error_position(Fn&& fn) {
  try {
    fn();
  } catch (const ParseError& e) {
    return {e.line(), e.column()};
  }
  ADD_FAILURE() << "expected a ParseError";
  return {0, 0};
}

}  // namespace

TEST(Program, ProcessOrderAndUniverse) {
  const auto f = load("fig4");
  const Program& p = f.program();
  EXPECT_EQ(p.size(), 6u);
  EXPECT_EQ(p.processes(), (std::vector<ProcessId>{1, 2, 3, 4}));
  EXPECT_TRUE(p.po_before(p.at("r2"), p.at("w2")));
  EXPECT_FALSE(p.po_before(p.at("w2"), p.at("r2")));
  EXPECT_FALSE(p.po_before(p.at("w1"), p.at("w2")));
  // Own ops plus all writes.
  std::vector<OpId> u2{p.at("r2"), p.at("w1"), p.at("w2"), p.at("w3"), p.at("w4")};
  std::sort(u2.begin(), u2.end());
  EXPECT_EQ(p.universe(2), u2);
  EXPECT_EQ(p.variables(), (std::vector<std::string>{"x", "y"}));
}

TEST(Program, RejectsDuplicates) {
  EXPECT_THROW(Program({{1, {{OpKind::write, "x", "a"}}}, {2, {{OpKind::write, "y", "a"}}}}), SemanticError);
  EXPECT_THROW(Program({{1, {}}, {1, {}}}), SemanticError);
}

TEST(Execution, WritesToMustMatchKindAndVariable) {
  const Program p({{1, {{OpKind::write, "x", "w"}, {OpKind::read, "y", "r"}}}});
  Execution e(p);
  EXPECT_THROW(e.set_writes_to(p.at("r"), p.at("w")), SemanticError);
  EXPECT_THROW(e.set_writes_to(p.at("w"), p.at("w")), SemanticError);
  EXPECT_FALSE(e.writes_to(p.at("r")));
}

TEST(View, UniverseChecks) {
  const auto f = load("fig3");
  const Program& p = f.program();
  EXPECT_NO_THROW(check_view_set_universe(p, *f.views));
  EXPECT_THROW(check_view_universe(p, View(1, {p.at("w1")})), UniverseMismatch);
  EXPECT_THROW(check_view_universe(p, View(1, {p.at("w1"), p.at("w2"), p.at("w1")})), UniverseMismatch);
  ViewSet missing = *f.views;
  missing.erase(3);
  EXPECT_THROW(check_view_set_universe(p, missing), UniverseMismatch);
}

TEST(View, ValidationReportsFirstBadRead) {
  const auto f = load("fig2");
  const Program& p = f.program();
  for (const auto& [pid, v] : *f.views) EXPECT_TRUE(validate_view(v, f.execution)) << pid;
  // Move r11x in front of w1x: it would return w2x instead.
  View bad(1, {p.at("w2x"), p.at("r11x"), p.at("w1x"), p.at("w2y"), p.at("r1y"), p.at("w1y"), p.at("r21x")});
  const auto r = validate_view(bad, f.execution);
  EXPECT_FALSE(r);
  EXPECT_EQ(r.read, p.at("r11x"));
  EXPECT_EQ(r.expected, p.at("w1x"));
  EXPECT_EQ(r.observed, p.at("w2x"));
}

TEST(View, DataRaceOrderIsPerVariable) {
  const auto f = load("fig4");
  const Program& p = f.program();
  const Relation d = dro(p, f.views->at(2));
  EXPECT_TRUE(d.contains(edge(p, "w1", "r2")));
  EXPECT_TRUE(d.contains(edge(p, "w1", "w2")));
  EXPECT_TRUE(d.contains(edge(p, "w3", "w4")));
  EXPECT_FALSE(d.contains(edge(p, "w1", "w3")));
  EXPECT_EQ(d.size(), 4u);
}

TEST(Execution, WriteReadWriteOrder) {
  const auto f = load("fig4");
  const Program& p = f.program();
  const Relation wo = write_read_write(f.execution);
  EXPECT_EQ(wo.edges(), (std::vector<Edge>{edge(p, "w1", "w2"), edge(p, "w3", "w4")}));
}

TEST(Execution, DerivedWritesToMatchesExplicitReads) {
  for (const auto* name : {"fig2", "fig4", "fig5", "fig7", "fig8"}) {
    const auto f = load(name);
    EXPECT_EQ(derive_writes_to(f.program(), *f.views), f.execution) << name;
  }
}

TEST(Io, ParsesCommentsAndGluedColons) {
  const auto f = parse_execution(
      "# leading comment\n"
      "process 1 : w(x)#a   # trailing\n"
      "process 2: r(x)#b\n"
      "view 1: a\n"
      "view 2 : a b\n");
  const Program& p = f.program();
  EXPECT_EQ(p.size(), 2u);
  EXPECT_EQ(f.execution.writes_to(p.at("b")), p.at("a"));
  EXPECT_FALSE(f.explicit_reads);
}

TEST(Io, EmptyReadsLineMeansInitialValues) {
  const auto f = load("fig5");
  EXPECT_TRUE(f.explicit_reads);
  EXPECT_TRUE(f.execution.writes_to_pairs().empty());
}

TEST(Io, ParseErrorsCarryLineAndColumn) {
  EXPECT_EQ(parse_error_position([] { parse_execution("process 1: w(x)#a\nprocess 2: w(y)#b zz\n"); }),
            (std::pair<std::size_t, std::size_t>{2, 19}));
  EXPECT_EQ(parse_error_position([] { parse_execution("process 1 w(x)#a\n"); }),
            (std::pair<std::size_t, std::size_t>{1, 10}));
  EXPECT_EQ(parse_error_position([] { parse_execution("\n\nfrobnicate 1: a\n"); }),
            (std::pair<std::size_t, std::size_t>{3, 1}));
  EXPECT_EQ(parse_error_position([] { parse_execution("process x: w(x)#a\n"); }),
            (std::pair<std::size_t, std::size_t>{1, 9}));
  EXPECT_EQ(parse_error_position([] { parse_execution("process 1: w(x)#a\nreads: a-b\n"); }),
            (std::pair<std::size_t, std::size_t>{2, 8}));
}

TEST(Io, SemanticErrors) {
  EXPECT_THROW(parse_execution("process 1: w(x)#a\nview 1: a q\n"), SemanticError);
  EXPECT_THROW(parse_execution("process 1: w(x)#a\nview 2: a\n"), SemanticError);
  EXPECT_THROW(parse_execution("process 1: w(x)#a r(x)#b\nreads: b<-a b<-a\n"), SemanticError);
  EXPECT_THROW(parse_execution("process 1: w(x)#a\nprocess 2: w(y)#b\nview 1: a b\n"), UniverseMismatch);
}

TEST(Io, RecordFiles) {
  const auto f = load("fig3");
  const Program& p = f.program();
  const Record rec = parse_record(find_fixture("fig3.record")->text, p);
  EXPECT_TRUE(rec.of(1).empty());
  EXPECT_EQ(rec.of(2).edges(), (std::vector<Edge>{edge(p, "w2", "w1")}));
  EXPECT_EQ(rec.of(3).edges(), (std::vector<Edge>{edge(p, "w1", "w2")}));
  EXPECT_THROW(parse_record("view 1: w1 w2\n", p), ParseError);
  EXPECT_THROW(parse_record("record 9: w1->w2\n", p), SemanticError);
  EXPECT_EQ(format_edges(p, rec.of(2)), "{w2->w1}");
}

TEST(Io, RoundTripsBundledFixtures) {
  for (const auto& fx : bundled_fixtures()) {
    if (std::string_view(fx.name).find("record") != std::string_view::npos) continue;
    const auto f = parse_execution(fx.text);
    const auto again = parse_execution(serialize_execution(f));
    EXPECT_EQ(again.program(), f.program()) << fx.name;
    EXPECT_EQ(again.execution, f.execution) << fx.name;
    EXPECT_EQ(again.views.has_value(), f.views.has_value()) << fx.name;
    if (f.views) {
      for (const auto& [p, v] : *f.views) EXPECT_EQ(again.views->at(p).order(), v.order()) << fx.name;
    }
  }
}

TEST(Io, RoundTripsGeneratedExecutionsWithRecords) {
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    GenParams params;
    params.seed = seed;
    const Generated g = gen_strong_causal(params);
    const Program& p = g.execution.program();
    const Record rec = offline_record_m1(p, g.views);
    const auto again = parse_execution(serialize_execution(g.execution, g.views, rec));
    ASSERT_EQ(again.program(), p);
    ASSERT_EQ(again.execution, g.execution);
    ASSERT_TRUE(again.record);
    ASSERT_EQ(*again.record, rec);
  }
}

TEST(Io, DotMarksRecordEdges) {
  const auto f = load("fig3");
  const Record rec = parse_record(find_fixture("fig3.record")->text, f.program());
  const std::string dot = to_dot(f.execution, f.views, rec);
  EXPECT_EQ(dot.rfind("digraph execution {", 0), 0u);
  EXPECT_NE(dot.find("cluster_3"), std::string::npos);
  EXPECT_NE(dot.find("\"p2_w2\" -> \"p2_w1\""), std::string::npos);
}
