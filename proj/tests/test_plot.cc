#include <doctest.h>

#include <cmath>
#include <regex>

#include "fcopt/experiments.hpp"
#include "fcopt/plot.hpp"

using namespace fcopt;

namespace {

RunTrace sample_trace() {
  RunTrace t;
  for (int k = 0; k < 4; ++k) {
    TraceRecord r;
    r.iter = k;
    r.objective = 1.0 / (k + 1.0) + 0.1;
    r.delta = k == 2 ? std::nan("") : 0.5 / (k + 1);
    r.fo_calls = k + 1;
    r.oracle_calls = 3 * k;
    r.lmo_calls = 7 * k;
    r.elapsed_ms = 0.25 * k;
    t.records.push_back(r);
  }
  return t;
}

}  // namespace

TEST_CASE("trace csv parses back exactly") {
  const RunTrace t = sample_trace();
  const auto rows = parse_trace_csv(trace_csv(t));
  REQUIRE(rows.size() == t.records.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].iter == t.records[i].iter);
    CHECK(rows[i].objective == t.records[i].objective);
    CHECK(rows[i].fo_calls == t.records[i].fo_calls);
    CHECK(rows[i].oracle_calls == t.records[i].oracle_calls);
    CHECK(rows[i].lmo_calls == t.records[i].lmo_calls);
    CHECK(rows[i].elapsed_ms == t.records[i].elapsed_ms);
    if (std::isnan(t.records[i].delta))
      CHECK(std::isnan(rows[i].delta));
    else
      CHECK(rows[i].delta == t.records[i].delta);
  }
}

TEST_CASE("malformed trace csv is rejected") {
  CHECK_THROWS_AS(parse_trace_csv("iter,objective\n0,1\n"), Error);
  const std::string header = std::string(kCsvHeader) + "\n";
  CHECK_THROWS_AS(parse_trace_csv(header + "0,1,2,3\n"), Error);
  CHECK_THROWS_AS(parse_trace_csv(header + "0,x,nan,1,0,0,0\n"), Error);
  CHECK(parse_trace_csv(header).empty());
}

TEST_CASE("convergence svg draws one path per method on a log axis") {
  std::map<std::string, std::vector<TraceRecord>> traces;
  traces["basic"] = sample_trace().records;
  auto lower = sample_trace().records;
  for (auto& r : lower) r.objective = 0.1 + 0.01 / (r.iter + 1.0);
  lower.back().objective = 0.1;  // zero residual lands on the bottom edge
  traces["accelerated"] = lower;

  const std::string svg = convergence_svg(traces, 0.1, PlotAxis::FoCalls);
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(svg.find("FO calls") != std::string::npos);
  CHECK(svg.find(">1e0<") != std::string::npos);
  CHECK(svg.find(">1e-3<") != std::string::npos);

  const std::regex path_re("data-method=\"(\\w+)\"[^>]* d=\"([^\"]*)\"");
  std::map<std::string, std::vector<std::pair<double, double>>> pts;
  for (std::sregex_iterator it(svg.begin(), svg.end(), path_re), end; it != end; ++it) {
    const std::string d = (*it)[2];
    const std::regex pt_re("([0-9.]+),([0-9.]+)");
    for (std::sregex_iterator p(d.begin(), d.end(), pt_re); p != end; ++p)
      pts[(*it)[1]].emplace_back(std::stod((*p)[1]), std::stod((*p)[2]));
  }
  REQUIRE(pts.size() == 2);
  REQUIRE(pts["basic"].size() == 4);
  REQUIRE(pts["accelerated"].size() == 4);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(pts["basic"][i].first == pts["accelerated"][i].first);
    CHECK(pts["accelerated"][i].second > pts["basic"][i].second);  // svg y grows downward
  }
  CHECK(convergence_svg(traces, 0.1, PlotAxis::OracleCalls).find("subproblem oracle calls") !=
        std::string::npos);
}
