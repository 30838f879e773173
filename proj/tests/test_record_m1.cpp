#include <gtest/gtest.h>

#include "brute_force.hpp"
#include "causal_rnr/battery.hpp"
#include "causal_rnr/fixtures.hpp"
#include "causal_rnr/io.hpp"
#include "causal_rnr/record_m1.hpp"

using namespace causal_rnr;

namespace {

ExecutionFile load(std::string_view name) { return parse_execution(find_fixture(name)->text); }

std::vector<Edge> edges(const Program& p, std::initializer_list<std::pair<const char*, const char*>> named) {
  std::vector<Edge> out;
  for (auto [a, b] : named) out.emplace_back(p.at(a), p.at(b));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST(RecordM1, Fig3Offline) {
  const auto f = load("fig3");
  const Program& p = f.program();
  const Record rec = offline_record_m1(p, *f.views);
  EXPECT_TRUE(rec.of(1).empty());
  EXPECT_EQ(rec.of(2).edges(), edges(p, {{"w2", "w1"}}));
  EXPECT_EQ(rec.of(3).edges(), edges(p, {{"w1", "w2"}}));
  EXPECT_EQ(rec, parse_record(find_fixture("fig3.record")->text, p));
  // Process 1's order of w1 < w2 is implied by process 3 agreeing.
  EXPECT_EQ(b_i_m1(p, *f.views, 1).edges(), edges(p, {{"w1", "w2"}}));
  EXPECT_TRUE(b_i_m1(p, *f.views, 2).empty());
  EXPECT_TRUE(sco_i(p, *f.views, 1).empty());
}

TEST(RecordM1, AgreeingWritersNeedOnlyOneEdge) {
  const auto f = load("causal-vs-strong");
  const Program& p = f.program();
  EXPECT_EQ(sco_i(p, *f.views, 2).edges(), edges(p, {{"w2", "w1"}}));
  EXPECT_TRUE(sco_i(p, *f.views, 1).empty());
  const Record rec = offline_record_m1(p, *f.views);
  EXPECT_EQ(rec.of(1).edges(), edges(p, {{"w2", "w1"}}));
  EXPECT_TRUE(rec.of(2).empty());
}

TEST(RecordM1, RejectsViewsThatAreNotStronglyCausal) {
  for (const auto* name : {"fig2", "fig4", "fig7"}) {
    const auto f = load(name);
    EXPECT_THROW(offline_record_m1(f.program(), *f.views), NotStronglyCausal) << name;
  }
}

TEST(RecordM1, Fig3Online) {
  const auto f = load("fig3");
  const Program& p = f.program();
  const Record rec = online_record_m1(p, interleave_views(*f.views), compute_sco(p, *f.views));
  EXPECT_EQ(rec.of(1).edges(), edges(p, {{"w1", "w2"}}));
  EXPECT_EQ(rec.of(2).edges(), edges(p, {{"w2", "w1"}}));
  EXPECT_EQ(rec.of(3).edges(), edges(p, {{"w1", "w2"}}));
  EXPECT_TRUE(offline_record_m1(p, *f.views).subset_of(rec));
}

TEST(RecordM1, OnlineRecorderRejectsMalformedStreams) {
  const auto f = load("fig3");
  const Program& p = f.program();
  OnlineRecorderM1 recorder(p, compute_sco(p, *f.views));
  EXPECT_THROW(recorder.observe(9, p.at("w1")), MalformedStream);
  recorder.observe(1, p.at("w1"));
  EXPECT_THROW(recorder.observe(1, p.at("w1")), MalformedStream);
  EXPECT_THROW(recorder.observe(1, static_cast<OpId>(p.size())), MalformedStream);
  const auto f4 = load("fig4");
  OnlineRecorderM1 other(f4.program(), compute_sco(f4.program(), *f4.views));
  EXPECT_THROW(other.observe(1, f4.program().at("r2")), MalformedStream);
}

TEST(RecordM1, OnlineIsIndependentOfInterleaving) {
  // Per-process edges depend only on each view's own sequence.
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    GenParams params;
    params.seed = seed;
    const Generated g = gen_strong_causal(params);
    const Program& p = g.execution.program();
    const Relation sco = compute_sco(p, g.views);
    ASSERT_EQ(online_record_m1(p, g.events, sco), online_record_m1(p, interleave_views(g.views), sco)) << seed;
  }
}

TEST(RecordM1, NaiveCausalRecordOfFig4) {
  const auto f = load("fig4");
  const Program& p = f.program();
  const Record naive = naive_causal_record_m1(f.execution, *f.views);
  EXPECT_EQ(naive.of(1).edges(), edges(p, {{"w1", "w3"}, {"w4", "w2"}}));
  EXPECT_EQ(naive.of(2).edges(), edges(p, {{"w1", "w3"}, {"w4", "r2"}}));
  EXPECT_EQ(naive.of(3).edges(), edges(p, {{"w3", "w1"}, {"w2", "w4"}}));
  EXPECT_EQ(naive.of(4).edges(), edges(p, {{"w3", "w1"}, {"w2", "r4"}}));
  EXPECT_EQ(naive, parse_record(find_fixture("fig4.naive-record")->text, p));
}

TEST(RecordM1, RecordsAreSubsetsOfViews) {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    GenParams params;
    params.seed = seed;
    params.ops_per_process = 3;
    const Generated g = gen_strong_causal(params);
    const Program& p = g.execution.program();
    ASSERT_TRUE(is_record_m1(p, g.views, offline_record_m1(p, g.views))) << seed;
  }
}

// Reference check: the offline record admits exactly one replay, and dropping
// any one edge admits another. The online record also admits only V.
TEST(RecordM1, OfflineIsGoodAndMinimalAgainstBruteForce) {
  std::size_t nonempty = 0;
  for (const GenParams& params : build_corpus(500, 200)) {
    const Generated g = gen_strong_causal(params);
    const Program& p = g.execution.program();
    if (p.size() > 6) continue;
    const Record rec = offline_record_m1(p, g.views);
    ASSERT_TRUE(brute::good(p, g.views, rec, false)) << describe(params);
    for (const auto& [pid, r] : rec.per_process)
      for (auto e : r.edges()) ASSERT_FALSE(brute::good(p, g.views, rec.without(pid, e), false)) << describe(params);
    const Record online = online_record_m1(p, g.events, compute_sco(p, g.views));
    ASSERT_TRUE(brute::good(p, g.views, online, false)) << describe(params);
    nonempty += rec.total_edges() > 0;
  }
  EXPECT_GT(nonempty, 50u);
}

TEST(RecordM1, Fig3EmptyRecordAdmitsOtherReplays) {
  const auto f = load("fig3");
  const Program& p = f.program();
  // Frozen from the brute-force reference.
  EXPECT_EQ(brute::replays(p, brute::Model::strong_causal, Record::empty_for(p), nullptr), 4u);
  EXPECT_EQ(brute::replays(p, brute::Model::strong_causal, offline_record_m1(p, *f.views), nullptr), 1u);
}
