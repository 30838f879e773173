#include <gtest/gtest.h>

#include "causal_rnr/battery.hpp"
#include "causal_rnr/generator.hpp"
#include "causal_rnr/io.hpp"

using namespace causal_rnr;

TEST(Generator, RngBelowStaysInRangeAndIsDeterministic) {
  GenRng a(3), b(3);
  for (int k = 0; k < 1000; ++k) {
    const auto n = static_cast<std::uint64_t>(1 + k % 7);
    const auto x = a.below(n);
    ASSERT_LT(x, n);
    ASSERT_EQ(x, b.below(n));
  }
  GenRng c(9);
  for (int k = 0; k < 1000; ++k) {
    const double u = c.unit();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(Generator, VariableNames) {
  EXPECT_EQ(variable_name(0), "x");
  EXPECT_EQ(variable_name(5), "t");
  EXPECT_EQ(variable_name(6), "x6");
}

TEST(Generator, DescribeNamesAlgorithmAndParameters) {
  GenParams params;
  params.seed = 7;
  params.ops_per_process = 3;
  EXPECT_EQ(describe(params),
            "generator=mt19937_64 seed=7 processes=3 ops_per_process=3 variables=2 write_ratio=0.6");
}

TEST(Generator, FrozenOutputForSeed7) {
  GenParams params;
  params.seed = 7;
  params.ops_per_process = 3;
  const Generated g = gen_strong_causal(params);
  EXPECT_EQ(serialize_execution(g.execution, g.views),
            "process 1: r(x)#r1_0 r(y)#r1_1 w(y)#w1_2\n"
            "process 2: w(x)#w2_0 r(y)#r2_1\n"
            "process 3: w(x)#w3_0 w(y)#w3_1 r(y)#r3_2\n"
            "view 1: r1_0 r1_1 w3_0 w1_2 w2_0 w3_1\n"
            "view 2: w3_0 w2_0 r2_1 w1_2 w3_1\n"
            "view 3: w3_0 w1_2 w2_0 w3_1 r3_2\n"
            "reads: r3_2<-w3_1\n");
}

TEST(Generator, SameSeedSameExecution) {
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    GenParams params;
    params.seed = seed;
    params.processes = 4;
    params.ops_per_process = 3;
    const Generated a = gen_strong_causal(params);
    const Generated b = gen_strong_causal(params);
    ASSERT_EQ(a.execution, b.execution);
    ASSERT_EQ(a.views, b.views);
    ASSERT_EQ(a.events, b.events);
    ASSERT_EQ(gen_program(params), a.execution.program());
  }
}

TEST(Generator, ProducesStronglyCausalExecutions) {
  for (std::uint64_t seed = 1; seed <= 400; ++seed) {
    GenParams params;
    params.seed = seed;
    params.processes = 1 + seed % 4;
    params.ops_per_process = 1 + seed % 4;
    params.variables = 1 + seed % 3;
    params.write_ratio = 0.3 + 0.1 * static_cast<double>(seed % 6);
    const Generated g = gen_strong_causal(params);
    const Program& p = g.execution.program();
    ASSERT_NO_THROW(check_view_set_universe(p, g.views)) << describe(params);
    ASSERT_TRUE(check_strong_causal(g.views, g.execution)) << describe(params);
    ASSERT_EQ(derive_writes_to(p, g.views), g.execution) << describe(params);
    for (ProcessId i : p.processes()) ASSERT_LE(p.program_order(i).size(), params.ops_per_process);
  }
}

TEST(Generator, EventsReplayTheViews) {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    GenParams params;
    params.seed = seed;
    const Generated g = gen_strong_causal(params);
    std::map<ProcessId, std::vector<OpId>> replayed;
    for (const auto& ev : g.events) replayed[ev.process].push_back(ev.op);
    for (const auto& [p, v] : g.views) ASSERT_EQ(replayed[p], v.order()) << seed;
  }
}

TEST(Generator, RejectsDegenerateParameters) {
  GenParams none;
  none.processes = 0;
  EXPECT_THROW(gen_program(none), std::invalid_argument);
  GenParams novars;
  novars.variables = 0;
  EXPECT_THROW(gen_strong_causal(novars), std::invalid_argument);
}

TEST(Generator, CorpusHasRequestedSizeAndShape) {
  const auto corpus = build_corpus(1, 200);
  ASSERT_EQ(corpus.size(), 200u);
  for (const auto& params : corpus) {
    const Program p = gen_program(params);
    ASSERT_GE(p.size(), 4u);
    ASSERT_LE(p.size(), 6u);
  }
  EXPECT_EQ(build_corpus(1, 200), corpus);
}
