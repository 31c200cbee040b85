#pragma once

#include <iosfwd>
#include <vector>

#include "json.hpp"

#include "hjcvx/functional.hpp"
#include "hjcvx/optimizer.hpp"
#include "hjcvx/solver.hpp"

namespace hjcvx {

nlohmann::json to_json(const ObjectiveReport& r);

/// Header "x[,y],u_true,u_comp,rel_error"; requires a known exact solution.
void write_error_csv(std::ostream& os, const SolveResult& res);

/// Header "iteration,objective,grad_norm,step".
void write_trace_csv(std::ostream& os, const OptimizeTrace& trace);

/// Deterministic run summary: configuration echo, error metrics, optimizer
/// outcome, final objective terms and cutoff constants. Wall time is kept out
/// so that repeated runs produce identical files.
nlohmann::json summary_json(const SolveConfig& cfg, const SolveResult& res);

/// Header "test_id,max_relative_error,paper_reference_error,observed_over_paper,iterations,termination,wall_time_s,status".
void write_bench_csv(std::ostream& os, const std::vector<BenchmarkRow>& rows);
nlohmann::json bench_json(const std::vector<BenchmarkRow>& rows);

}  // namespace hjcvx
