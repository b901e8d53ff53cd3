#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include "doctest.h"
#include "fdflow/svg.hpp"

using namespace fdflow;

namespace {

size_t count_occurrences(const std::string& hay, const std::string& needle) {
  size_t n = 0;
  for (size_t pos = hay.find(needle); pos != std::string::npos;
       pos = hay.find(needle, pos + needle.size()))
    ++n;
  return n;
}

}  // namespace

TEST_CASE("plot structure") {
  PlotSeries a{"beta = 0", {{1.0, 1.0}, {0.1, 0.3}, {0.01, 0.1}}};
  PlotSeries b{"beta = 0.5", {{1.0, 0.8}, {0.1, 0.1}, {0.01, 0.01}}};
  const std::string svg = svg_log_log_plot("errors", "epsilon", "error", {a, b});
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(count_occurrences(svg, "<polyline") == 2);
  CHECK(svg.find("beta = 0") != std::string::npos);
  CHECK(svg.find("beta = 0.5") != std::string::npos);
  CHECK(svg.find("errors") != std::string::npos);
  CHECK(svg.find("epsilon") != std::string::npos);
  // Whole-decade tick labels cover the data span.
  CHECK(svg.find(">1<") != std::string::npos);
  CHECK(svg.find("1e-2") != std::string::npos);
  // One marker circle per plotted point.
  CHECK(count_occurrences(svg, "<circle") == 6);
}

TEST_CASE("nonpositive and non-finite points are dropped") {
  PlotSeries s{"data",
               {{1.0, 1.0},
                {0.1, -0.5},
                {0.0, 0.2},
                {0.01, 0.0},
                {1e-3, std::nan("")},
                {1e-4, 1e-2}}};
  const std::string svg = svg_log_log_plot("t", "x", "y", {s});
  CHECK(count_occurrences(svg, "<circle") == 2);
  CHECK(count_occurrences(svg, "<polyline") == 1);
}

TEST_CASE("empty input still renders a frame") {
  const std::string svg = svg_log_log_plot("t", "x", "y", {});
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("</svg>") != std::string::npos);
}

TEST_CASE("sweep plots group rows by beta") {
  std::vector<SweepRecord> rows;
  for (double beta : {0.0, 0.5}) {
    for (int k = 0; k <= 2; ++k) {
      SweepRecord r;
      r.beta = beta;
      r.epsilon = std::pow(10.0, -k);
      r.err_l2h1 = std::sqrt(r.epsilon) * (1.0 + beta);
      r.err_l2_final = 0.3 * std::sqrt(r.epsilon);
      r.status = "ok";
      rows.push_back(r);
    }
  }
  const auto paths = write_svg_plots("test_svg_tmp", rows);
  REQUIRE(paths.size() == 2);
  CHECK(paths[0] == "test_svg_tmp_l2h1.svg");
  CHECK(paths[1] == "test_svg_tmp_l2final.svg");
  for (const std::string& p : paths) {
    std::ifstream in(p);
    REQUIRE(in.good());
    std::string content((std::istreambuf_iterator<char>(in)),
                        std::istreambuf_iterator<char>());
    CHECK(content.rfind("<svg", 0) == 0);
    CHECK(count_occurrences(content, "<polyline") == 2);
    CHECK(content.find("beta = 0") != std::string::npos);
    CHECK(content.find("beta = 0.5") != std::string::npos);
    std::remove(p.c_str());
  }
}
