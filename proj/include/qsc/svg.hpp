#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qsc {

// Bad or empty plot input; the CLI maps it to exit code 2.
struct PlotError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct QuerySeries {
  std::string label;  // case/oracle/policy/seed
  std::string color;
  std::vector<std::pair<int, int>> points;  // (epoch, queries)
};

struct FailureBar {
  std::string label;  // oracle/policy
  std::string color;
  double value = 0.0;  // mean failure pct over rows
};

// Input: queries CSV (case,oracle,policy,seed,epoch,queries). One series per
// (case, oracle, policy, seed) in row order. Throws PlotError on malformed
// input or when no data rows are present.
std::vector<QuerySeries> parse_queries_csv(std::istream& in);

// Input: results CSV (case,oracle,policy,seed,failure_pct,...). One bar per
// (case, oracle, policy), averaging failure_pct over seeds.
std::vector<FailureBar> parse_failure_csv(std::istream& in);

void render_queries_svg(std::ostream& out, const std::vector<QuerySeries>& series);
void render_failure_svg(std::ostream& out, const std::vector<FailureBar>& bars);

}  // namespace qsc
