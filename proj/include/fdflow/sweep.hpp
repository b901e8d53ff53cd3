#pragma once

#include <string>
#include <vector>

#include "fdflow/timeloop.hpp"

namespace fdflow {

inline constexpr const char* kCsvHeader =
    "beta,epsilon,h,dt,mu,err_l2_final,err_l2h1,max_div,max_energy,"
    "cond_estimate,wall_seconds,status";

struct SweepRecord {
  double beta = 0.0;
  double epsilon = 0.0;
  double h = 0.0;
  double dt = 0.0;
  double mu = 0.0;
  double err_l2_final = 0.0;
  double err_l2h1 = 0.0;
  double max_div = 0.0;
  double max_energy = 0.0;
  double cond_estimate = 0.0;
  double wall_seconds = 0.0;
  std::string status = "ok";  // "ok" or "solver_failed"
};

SweepRecord make_record(const RunConfig& cfg, const RunResult& result);

/// One CSV row, floats at 17 significant digits, no trailing newline.
std::string format_csv_row(const SweepRecord& rec);

/// Run every (beta, epsilon) combination of the base config. Rows come back
/// in deterministic order: beta outer, epsilon inner, both in input order.
/// Individual solver failures are recorded and the sweep continues. threads
/// <= 1 runs serially; more run that many sweep points concurrently.
std::vector<SweepRecord> run_sweep(const RunConfig& base,
                                   const std::vector<double>& epsilons,
                                   const std::vector<double>& betas,
                                   int threads = 1);

void write_csv(const std::string& path, const std::vector<SweepRecord>& rows);

/// Parse a CSV produced by write_csv. Throws std::runtime_error on a missing
/// or wrong header, short rows, or unparsable numbers (inf/nan accepted).
std::vector<SweepRecord> read_csv(const std::string& path);
std::vector<SweepRecord> read_csv_text(const std::string& text);

}  // namespace fdflow
