#include <doctest.h>

#include "rankmin/trace_io.hpp"
#include "test_util.hpp"

using namespace rankmin;

namespace {

SolveReport small_report() {
  AffineOperator empty(2, {}, Vector());
  PalmConfig config;
  config.rho_x = 0.0;
  config.max_iters = 12;
  return solve(empty, config);
}

}  // namespace

TEST_CASE("trace csv round-trips through the reader") {
  SolveReport report = small_report();
  std::string text = format_trace_csv(report);
  CHECK(text.rfind("iter,f_rho,comp,rank_x,trace_u,newton_iters,cg_iters,elapsed_ms\n", 0) == 0);
  auto cells = read_csv(text);
  CHECK(write_csv(cells) == text);
}

TEST_CASE("typed trace rows survive the round trip") {
  SolveReport report = small_report();
  std::string text = format_trace_csv(report);
  auto rows = parse_trace_rows(text);
  REQUIRE(rows.size() == report.trace.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].iter == report.trace[i].iter);
    CHECK(rows[i].f_rho == report.trace[i].f_rho);  // exact through %.17g
    CHECK(rows[i].comp == report.trace[i].comp);
    CHECK(rows[i].rank_x == report.trace[i].rank_x);
    CHECK(rows[i].trace_u == report.trace[i].trace_u);
  }
}

TEST_CASE("csv codec keeps comment rows verbatim") {
  std::string text = "a,b\n# section\n1,2\n";
  CHECK(write_csv(read_csv(text)) == text);
}
