#include "fdflow/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace fdflow {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double parse_field(const std::string& s, size_t row) {
  const char* begin = s.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin)
    throw std::runtime_error("csv row " + std::to_string(row) +
                             ": bad numeric field '" + s + "'");
  return v;
}

}  // namespace

SweepRecord make_record(const RunConfig& cfg, const RunResult& result) {
  SweepRecord rec;
  rec.beta = cfg.beta;
  rec.epsilon = cfg.epsilon;
  rec.h = result.h;
  rec.dt = cfg.dt;
  rec.mu = cfg.mu;
  rec.err_l2_final = result.err_l2_final;
  rec.err_l2h1 = result.err_l2h1;
  rec.max_div = result.max_div;
  rec.max_energy = result.max_energy;
  rec.cond_estimate = result.cond_estimate;
  rec.wall_seconds = result.wall_seconds;
  rec.status = result.ok ? "ok" : "solver_failed";
  return rec;
}

std::string format_csv_row(const SweepRecord& rec) {
  std::string out;
  out += fmt(rec.beta);
  out += ',';
  out += fmt(rec.epsilon);
  out += ',';
  out += fmt(rec.h);
  out += ',';
  out += fmt(rec.dt);
  out += ',';
  out += fmt(rec.mu);
  out += ',';
  out += fmt(rec.err_l2_final);
  out += ',';
  out += fmt(rec.err_l2h1);
  out += ',';
  out += fmt(rec.max_div);
  out += ',';
  out += fmt(rec.max_energy);
  out += ',';
  out += fmt(rec.cond_estimate);
  out += ',';
  out += fmt(rec.wall_seconds);
  out += ',';
  out += rec.status;
  return out;
}

std::vector<SweepRecord> run_sweep(const RunConfig& base,
                                   const std::vector<double>& epsilons,
                                   const std::vector<double>& betas,
                                   int threads) {
  if (epsilons.empty() || betas.empty())
    throw std::invalid_argument("run_sweep: empty epsilon or beta list");

  struct Point {
    RunConfig cfg;
  };
  std::vector<Point> points;
  points.reserve(betas.size() * epsilons.size());
  for (double beta : betas)
    for (double eps : epsilons) {
      RunConfig cfg = base;
      cfg.beta = beta;
      cfg.epsilon = eps;
      validate(cfg);
      points.push_back({cfg});
    }

  std::vector<SweepRecord> rows(points.size());
  const int n_workers =
      std::max(1, std::min<int>(threads, static_cast<int>(points.size())));
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const size_t i = next.fetch_add(1);
      if (i >= points.size()) return;
      rows[i] = make_record(points[i].cfg, run(points[i].cfg));
    }
  };
  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (int w = 0; w < n_workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return rows;
}

void write_csv(const std::string& path, const std::vector<SweepRecord>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << kCsvHeader << '\n';
  for (const auto& rec : rows) out << format_csv_row(rec) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<SweepRecord> read_csv_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty csv");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kCsvHeader)
    throw std::runtime_error("unexpected csv header: '" + line + "'");

  std::vector<SweepRecord> rows;
  size_t rownum = 1;
  while (std::getline(in, line)) {
    ++rownum;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::istringstream ls(line);
    std::string field;
    while (std::getline(ls, field, ',')) fields.push_back(field);
    if (fields.size() != 12)
      throw std::runtime_error("csv row " + std::to_string(rownum) +
                               ": expected 12 fields, got " +
                               std::to_string(fields.size()));
    SweepRecord rec;
    rec.beta = parse_field(fields[0], rownum);
    rec.epsilon = parse_field(fields[1], rownum);
    rec.h = parse_field(fields[2], rownum);
    rec.dt = parse_field(fields[3], rownum);
    rec.mu = parse_field(fields[4], rownum);
    rec.err_l2_final = parse_field(fields[5], rownum);
    rec.err_l2h1 = parse_field(fields[6], rownum);
    rec.max_div = parse_field(fields[7], rownum);
    rec.max_energy = parse_field(fields[8], rownum);
    rec.cond_estimate = parse_field(fields[9], rownum);
    rec.wall_seconds = parse_field(fields[10], rownum);
    rec.status = fields[11];
    rows.push_back(std::move(rec));
  }
  return rows;
}

std::vector<SweepRecord> read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open csv: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return read_csv_text(buf.str());
}

}  // namespace fdflow
