#pragma once

// Bundled example corpus. Names ending in ".record" or ".naive-record" are
// record files for the execution named before the first dot.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace causal_rnr {

struct Fixture {
  std::string_view name;
  std::string_view summary;
  std::string_view text;
};

inline const std::vector<Fixture>& bundled_fixtures() {
  static const std::vector<Fixture> all = {
      {"fig2", "causally consistent execution that no strongly causal view-set explains",
       R"(# Two processes racing on x and y.
process 1: w(x)#w1x r(x)#r11x r(y)#r1y w(y)#w1y r(x)#r21x
process 2: w(x)#w2x r(x)#r12x w(y)#w2y r(y)#r2y r(x)#r22x
view 1: w2x w1x r11x w2y r1y w1y r21x
view 2: w1x w2x r12x w2y w1y r2y r22x
reads: r11x<-w1x r12x<-w2x r1y<-w2y r21x<-w1x r22x<-w2x r2y<-w1y
)"},
      {"fig3", "third process fixes the order of two independent writes",
       R"(# Process 3 observes both writes and issues nothing.
process 1: w(x)#w1
process 2: w(y)#w2
process 3:
view 1: w1 w2
view 2: w2 w1
view 3: w1 w2
)"},
      {"fig3.record", "optimal offline model 1 record of fig3",
       R"(record 1:
record 2: w2->w1
record 3: w1->w2
)"},
      {"causal-vs-strong", "two writers that agree on an order",
       R"(process 1: w(x)#w1
process 2: w(y)#w2
view 1: w2 w1
view 2: w2 w1
)"},
      {"fig4", "causally consistent execution whose naive model 1 record is not good",
       R"(process 1: w(x)#w1
process 2: r(x)#r2 w(x)#w2
process 3: w(y)#w3
process 4: r(y)#r4 w(y)#w4
view 1: w1 w3 w4 w2
view 2: w1 w3 w4 r2 w2
view 3: w3 w1 w2 w4
view 4: w3 w1 w2 r4 w4
reads: r2<-w1 r4<-w3
)"},
      {"fig4.naive-record", "reduce(V_i) minus WO and PO for fig4",
       R"(record 1: w1->w3 w4->w2
record 2: w1->w3 w4->r2
record 3: w3->w1 w2->w4
record 4: w3->w1 w2->r4
)"},
      {"fig5", "replay of fig4 that respects its naive record with both reads returning the initial value",
       R"(process 1: w(x)#w1
process 2: r(x)#r2 w(x)#w2
process 3: w(y)#w3
process 4: r(y)#r4 w(y)#w4
view 1: w4 w2 w1 w3
view 2: w4 r2 w2 w1 w3
view 3: w2 w4 w3 w1
view 4: w2 r4 w4 w3 w1
reads:
)"},
      {"fig6", "four-process program for the model 2 counterexample, original writes-to",
       R"(# Variable a stands for alpha.
process 1: w(x)#w1x w(y)#w1y
process 2: w(a)#w2a r(x)#r2x w(z)#w2z
process 3: w(y)#w3y w(x)#w3x
process 4: w(z)#w4z r(y)#r4y w(a)#w4a
reads: r2x<-w1x r4y<-w3y
)"},
      {"fig7", "causal views of fig6 whose naive model 2 record is not good",
       R"(process 1: w(x)#w1x w(y)#w1y
process 2: w(a)#w2a r(x)#r2x w(z)#w2z
process 3: w(y)#w3y w(x)#w3x
process 4: w(z)#w4z r(y)#r4y w(a)#w4a
view 1: w1x w1y w3y w4z w4a w2a w2z w3x
view 2: w1x w1y w3y w4z w4a w2a r2x w2z w3x
view 3: w3y w3x w1x w2a w2z w4z w4a w1y
view 4: w3y w3x w1x w2a w2z w4z r4y w4a w1y
reads: r2x<-w1x r4y<-w3y
)"},
      {"fig7.naive-record", "naive model 2 record of fig7",
       R"(record 1: w1y->w3y w4a->w2a
record 2: w1y->w3y w4a->w2a r2x->w3x
record 3: w3x->w1x w2z->w4z
record 4: w3x->w1x w2z->w4z r4y->w1y
)"},
      {"fig8", "replay of fig7 respecting its naive record with a different data-race order",
       R"(process 1: w(x)#w1x w(y)#w1y
process 2: w(a)#w2a r(x)#r2x w(z)#w2z
process 3: w(y)#w3y w(x)#w3x
process 4: w(z)#w4z r(y)#r4y w(a)#w4a
view 1: w4z w4a w2a w2z w1x w1y w3y w3x
view 2: w4z w4a w2a r2x w2z w1x w1y w3y w3x
view 3: w2a w2z w4z w4a w3y w3x w1x w1y
view 4: w2a w2z w4z r4y w4a w3y w3x w1x w1y
reads:
)"},
  };
  return all;
}

inline std::optional<Fixture> find_fixture(std::string_view name) {
  for (const auto& f : bundled_fixtures())
    if (f.name == name) return f;
  return std::nullopt;
}

}  // namespace causal_rnr
