#include "hjcvx/cli.hpp"

#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "hjcvx/config.hpp"
#include "hjcvx/diagnostics.hpp"
#include "hjcvx/report.hpp"
#include "hjcvx/solver.hpp"

namespace hjcvx::cli {

namespace fs = std::filesystem;

namespace {

// Creates the directory and checks that a file can be written into it.
bool prepare_out_dir(const fs::path& dir, std::ostream& err) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    err << "error: cannot create output directory " << dir << ": " << ec.message() << '\n';
    return false;
  }
  const fs::path probe = dir / ".write_probe";
  {
    std::ofstream f(probe);
    if (!f) {
      err << "error: output directory " << dir << " is not writable\n";
      return false;
    }
  }
  fs::remove(probe, ec);
  return true;
}

template <class Writer>
void write_file(const fs::path& path, Writer&& w) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  w(f);
  if (!f) throw std::runtime_error("failed while writing " + path.string());
}

}  // namespace

int cmd_solve(const fs::path& config_path, const fs::path& out_dir, bool verbose, std::ostream& out,
              std::ostream& err) {
  SolveConfig cfg;
  try {
    cfg = load_config(config_path);
  } catch (const ConfigError& e) {
    err << "config error (" << e.key() << "): " << e.what() << '\n';
    return kConfigError;
  }
  if (!prepare_out_dir(out_dir, err)) return kRuntimeError;

  SolveResult res;
  try {
    std::ofstream log;
    if (verbose) log.open(out_dir / "iterations.csv", std::ios::binary);
    res = solve(cfg, verbose ? &log : nullptr);
  } catch (const std::exception& e) {
    err << "solver error: " << e.what() << '\n';
    return kRuntimeError;
  }

  try {
    write_file(out_dir / "solution.csv", [&](std::ostream& os) { write_csv(os, res.u_on_G); });
    write_file(out_dir / "vmin.csv", [&](std::ostream& os) { write_csv(os, res.v_min); });
    if (res.error_field) {
      write_file(out_dir / "error.csv", [&](std::ostream& os) { write_error_csv(os, res); });
    }
    write_file(out_dir / "trace.csv", [&](std::ostream& os) { write_trace_csv(os, res.trace); });
    write_file(out_dir / "summary.json", [&](std::ostream& os) { os << summary_json(cfg, res).dump(2) << '\n'; });
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntimeError;
  }

  out << "termination: " << to_string(res.trace.termination_reason) << " after " << res.trace.iterates_count
      << " iterations\n";
  if (res.max_relative_error) out << "max relative error on G: " << format_double(*res.max_relative_error) << '\n';
  out << "wall time: " << std::fixed << std::setprecision(2) << res.wall_time_s << " s\n";
  out.unsetf(std::ios::floatfield);
  return kOk;
}

int cmd_bench(const fs::path& out_dir, const std::vector<int>& test_ids, bool parallel, std::ostream& out,
              std::ostream& err) {
  for (int id : test_ids) {
    if (id < 1 || id > kBuiltinCount) {
      err << "error: benchmark id " << id << " is not in 1..6\n";
      return kConfigError;
    }
  }
  if (!prepare_out_dir(out_dir, err)) return kRuntimeError;

  BenchmarkOptions opts;
  opts.test_ids = test_ids;
  opts.parallel = parallel;
  const std::vector<BenchmarkRow> rows = run_benchmark_suite(opts);

  try {
    write_file(out_dir / "bench.csv", [&](std::ostream& os) { write_bench_csv(os, rows); });
    write_file(out_dir / "bench.json", [&](std::ostream& os) { os << bench_json(rows).dump(2) << '\n'; });
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntimeError;
  }

  out << "test  error      ref      ratio  iters   time[s]  status\n";
  std::vector<int> failing;
  for (const auto& r : rows) {
    std::ostringstream line;
    line << std::setw(4) << r.test_id << "  " << std::setw(9) << std::setprecision(4) << r.max_relative_error << "  "
         << std::setw(7) << r.reference_error << "  " << std::setw(5) << std::setprecision(3) << r.ratio()
         << "  " << std::setw(6) << r.iterations << "  " << std::setw(8) << std::fixed << std::setprecision(1)
         << r.wall_time_s << "  " << (r.within_factor() ? "pass" : "FAIL");
    out << line.str() << '\n';
    if (!r.failure.empty()) out << "      " << r.failure << '\n';
    if (!r.within_factor()) failing.push_back(r.test_id);
  }
  if (!failing.empty()) {
    err << "benchmarks outside factor " << kAcceptanceFactor << " of the reference:";
    for (int id : failing) err << ' ' << id;
    err << '\n';
    return kCheckFailed;
  }
  return kOk;
}

int cmd_diag(const fs::path& config_path, std::uint64_t seed, std::ostream& out, std::ostream& err) {
  SolveConfig cfg;
  try {
    cfg = load_config(config_path);
  } catch (const ConfigError& e) {
    err << "config error (" << e.key() << "): " << e.what() << '\n';
    return kConfigError;
  }
  DiagnosticsReport rep;
  try {
    rep = run_diagnostics(cfg, seed);
  } catch (const std::exception& e) {
    err << "diagnostics error: " << e.what() << '\n';
    return kRuntimeError;
  }
  out << to_json(rep, cfg).dump(2) << '\n';
  if (rep.passed()) return kOk;
  if (!rep.gradient_ok()) err << "failed check: gradient_check\n";
  if (!rep.convexity_ok()) err << "failed check: convexity_probe\n";
  if (!rep.carleman_ok()) err << "failed check: carleman_estimate\n";
  return kCheckFailed;
}

}  // namespace hjcvx::cli
