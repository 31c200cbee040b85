#include "hjcvx/report.hpp"

#include <ostream>

#include "hjcvx/config.hpp"

namespace hjcvx {

using nlohmann::json;

json to_json(const ObjectiveReport& r) {
  return {{"total", r.total},
          {"residual_term", r.residual_term},
          {"boundary_term", r.boundary_term},
          {"regularization_term", r.regularization_term}};
}

void write_error_csv(std::ostream& os, const SolveResult& res) {
  if (!res.u_true_on_G || !res.error_field) throw std::logic_error("error CSV requires an exact solution");
  const SubdomainNodes& nodes = res.u_on_G.nodes;
  const int dim = nodes.grid.dim;
  os << (dim == 1 ? "x" : "x,y") << ",u_true,u_comp,rel_error\n";
  for (std::size_t k = 0; k < res.u_on_G.values.size(); ++k) {
    const Point x = nodes.node(k);
    os << format_double(x[0]);
    if (dim > 1) os << ',' << format_double(x[1]);
    os << ',' << format_double(res.u_true_on_G->values[k]) << ',' << format_double(res.u_on_G.values[k]) << ','
       << format_double(res.error_field->values[k]) << '\n';
  }
}

void write_trace_csv(std::ostream& os, const OptimizeTrace& trace) {
  os << "iteration,objective,grad_norm,step\n";
  for (std::size_t i = 0; i < trace.objective_history.size(); ++i) {
    os << i << ',' << format_double(trace.objective_history[i]) << ',' << format_double(trace.grad_norms[i]) << ','
       << format_double(i == 0 ? 0.0 : trace.steps[i - 1]) << '\n';
  }
}

json summary_json(const SolveConfig& cfg, const SolveResult& res) {
  json s;
  s["config"] = config_to_json(cfg);
  s["max_relative_error"] = res.max_relative_error ? json(*res.max_relative_error) : json(nullptr);
  s["termination_reason"] = to_string(res.trace.termination_reason);
  s["iterations"] = res.trace.iterates_count;
  s["final_grad_norm"] = res.trace.final_grad_norm;
  s["ball_violations"] = res.trace.ball_violations;
  s["objective"] = to_json(res.final_objective);
  s["cutoff"] = {{"delta", res.cutoff.delta}, {"c", res.cutoff.c}};
  return s;
}

void write_bench_csv(std::ostream& os, const std::vector<BenchmarkRow>& rows) {
  os << "test_id,max_relative_error,paper_reference_error,observed_over_paper,iterations,termination,wall_time_s,"
        "status\n";
  for (const auto& r : rows) {
    os << r.test_id << ',' << format_double(r.max_relative_error) << ',' << format_double(r.reference_error)
       << ',' << format_double(r.ratio()) << ',' << r.iterations << ',' << r.termination << ','
       << format_double(r.wall_time_s) << ',' << (r.within_factor() ? "pass" : "fail") << '\n';
  }
}

json bench_json(const std::vector<BenchmarkRow>& rows) {
  json out = json::array();
  for (const auto& r : rows) {
    json row{{"test_id", r.test_id},
             {"max_relative_error", std::isfinite(r.max_relative_error) ? json(r.max_relative_error) : json(nullptr)},
             {"paper_reference_error", r.reference_error},
             {"observed_over_paper", std::isfinite(r.ratio()) ? json(r.ratio()) : json(nullptr)},
             {"iterations", r.iterations},
             {"termination", r.termination},
             {"wall_time_s", r.wall_time_s},
             {"within_factor", r.within_factor()}};
    if (!r.failure.empty()) row["failure"] = r.failure;
    out.push_back(row);
  }
  return out;
}

}  // namespace hjcvx
