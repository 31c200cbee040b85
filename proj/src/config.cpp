#include "hjcvx/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace hjcvx {

using nlohmann::json;

ConfigError::ConfigError(std::string key, const std::string& what)
    : std::invalid_argument(what), key_(std::move(key)) {}

namespace {

// Reads typed entries out of one JSON object and remembers which keys were
// consumed so that leftovers can be rejected.
class Section {
 public:
  Section(const json& doc, std::string name) : name_(std::move(name)) {
    if (doc.contains(name_)) {
      node_ = &doc.at(name_);
      if (!node_->is_object()) throw ConfigError(name_, name_ + " must be an object");
    }
  }

  std::string key(const std::string& k) const { return name_ + "." + k; }

  const json* find(const std::string& k) {
    seen_.insert(k);
    if (!node_ || !node_->contains(k)) return nullptr;
    return &node_->at(k);
  }

  void read(const std::string& k, double& out) {
    if (const json* v = find(k)) {
      if (!v->is_number()) throw ConfigError(key(k), key(k) + " must be a number");
      out = v->get<double>();
    }
  }

  void read(const std::string& k, int& out) {
    if (const json* v = find(k)) {
      if (!v->is_number_integer()) throw ConfigError(key(k), key(k) + " must be an integer");
      out = v->get<int>();
    }
  }

  void read(const std::string& k, std::string& out) {
    if (const json* v = find(k)) {
      if (!v->is_string()) throw ConfigError(key(k), key(k) + " must be a string");
      out = v->get<std::string>();
    }
  }

  void finish() const {
    if (!node_) return;
    for (const auto& [k, _] : node_->items()) {
      if (!seen_.count(k)) throw ConfigError(key(k), "unknown key " + key(k));
    }
  }

 private:
  std::string name_;
  const json* node_ = nullptr;
  std::set<std::string> seen_;
};

RhsVariant rhs_variant_from_string(const std::string& s) {
  if (s == "consistent") return RhsVariant::consistent;
  if (s == "as_printed") return RhsVariant::as_printed;
  throw ConfigError("problem.rhs_variant", "problem.rhs_variant must be \"consistent\" or \"as_printed\"");
}

std::string to_string(RhsVariant v) { return v == RhsVariant::consistent ? "consistent" : "as_printed"; }

ProblemSelection parse_problem(const json& doc) {
  Section s(doc, "problem");
  ProblemSelection sel;
  const json* builtin = s.find("builtin");
  const json* custom = s.find("custom");
  std::string variant = "consistent";
  s.read("rhs_variant", variant);
  sel.rhs_variant = rhs_variant_from_string(variant);
  s.finish();
  if (builtin && custom) throw ConfigError("problem", "problem.builtin and problem.custom are exclusive");
  if (builtin) {
    if (!builtin->is_number_integer()) throw ConfigError("problem.builtin", "problem.builtin must be an integer");
    const int id = builtin->get<int>();
    if (id < 1 || id > kBuiltinCount) {
      throw ConfigError("problem.builtin", "problem.builtin must be in 1..6");
    }
    sel.builtin = id;
  }
  if (custom) {
    if (!custom->is_object()) throw ConfigError("problem.custom", "problem.custom must be an object");
    json wrapper{{"custom", *custom}};
    Section c(wrapper, "custom");
    CustomProblemSpec spec;
    c.read("dim", spec.dim);
    c.read("lambda", spec.lambda_eq);
    c.read("hamiltonian", spec.hamiltonian);
    c.read("rhs", spec.rhs);
    c.read("growth_k", spec.growth_k);
    if (const json* e = c.find("exact")) {
      if (!e->is_null()) {
        if (!e->is_string()) throw ConfigError("problem.custom.exact", "problem.custom.exact must be a string");
        spec.exact = e->get<std::string>();
      }
    }
    try {
      c.finish();
    } catch (const ConfigError& err) {
      throw ConfigError("problem." + err.key(), std::string("unknown key problem.") + err.key());
    }
    if (spec.hamiltonian.empty()) throw ConfigError("problem.custom.hamiltonian", "problem.custom.hamiltonian is required");
    if (spec.rhs.empty()) throw ConfigError("problem.custom.rhs", "problem.custom.rhs is required");
    if (spec.dim != 1 && spec.dim != 2) throw ConfigError("problem.custom.dim", "problem.custom.dim must be 1 or 2");
    sel.builtin.reset();
    sel.custom = spec;
  }
  return sel;
}

std::string key_of_message(const std::string& msg) {
  const auto end = msg.find(' ');
  const std::string head = msg.substr(0, end);
  return head.find('.') != std::string::npos ? head : std::string("config");
}

}  // namespace

SolveConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config", "configuration must be a JSON object");
  static const std::set<std::string> kSections{"grid", "cutoff", "carleman", "functional", "optimizer", "problem"};
  for (const auto& [k, _] : doc.items()) {
    if (!kSections.count(k)) throw ConfigError(k, "unknown key " + k);
  }

  const ProblemSelection sel = parse_problem(doc);
  SolveConfig cfg = reference_config(sel.custom ? 1 : *sel.builtin);
  cfg.problem = sel;
  cfg.dim = sel.dim();
  if (sel.custom) cfg.optimizer = benchmark_optimizer(cfg.dim == 1 ? 1 : 4);

  Section grid(doc, "grid");
  grid.read("dim", cfg.dim);
  grid.read("n", cfg.n);
  grid.read("half_width", cfg.half_width);
  grid.finish();

  Section cutoff(doc, "cutoff");
  cutoff.read("subdomain_half_width", cfg.subdomain_half_width);
  cutoff.finish();

  Section carl(doc, "carleman");
  if (const json* x0 = carl.find("x0")) {
    const bool ok = x0->is_array() && x0->size() == static_cast<std::size_t>(cfg.dim) &&
                    std::all_of(x0->begin(), x0->end(), [](const json& e) { return e.is_number(); });
    if (!ok) {
      throw ConfigError("carleman.x0", "carleman.x0 must be an array of " + std::to_string(cfg.dim) + " numbers");
    }
    cfg.carleman.x0 = {(*x0)[0].get<double>(), cfg.dim == 2 ? (*x0)[1].get<double>() : 0.0};
  }
  carl.read("beta", cfg.carleman.beta);
  carl.read("lambda", cfg.carleman.lambda_c);
  carl.finish();
  cfg.functional.carleman = cfg.carleman;

  Section fun(doc, "functional");
  fun.read("epsilon0", cfg.functional.epsilon0);
  fun.read("eta", cfg.functional.eta);
  if (const json* bw = fun.find("boundary_weight")) {
    if (bw->is_null()) {
      cfg.functional.boundary_weight.reset();
    } else if (bw->is_number()) {
      cfg.functional.boundary_weight = bw->get<double>();
    } else {
      throw ConfigError("functional.boundary_weight", "functional.boundary_weight must be a number or null");
    }
  }
  fun.finish();

  Section opt(doc, "optimizer");
  std::string method = to_string(cfg.optimizer.method);
  opt.read("method", method);
  try {
    cfg.optimizer.method = descent_method_from_string(method);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("optimizer.method", e.what());
  }
  opt.read("max_iters", cfg.optimizer.max_iters);
  opt.read("grad_tol", cfg.optimizer.grad_tol);
  opt.read("grad_tol_rel", cfg.optimizer.grad_tol_rel);
  opt.read("step_init", cfg.optimizer.step_init);
  opt.read("armijo_c", cfg.optimizer.armijo_c);
  opt.read("backtrack_factor", cfg.optimizer.backtrack_factor);
  opt.read("M_monitor", cfg.optimizer.M_monitor);
  opt.read("history_capacity", cfg.optimizer.history_capacity);
  opt.finish();

  try {
    validate(cfg);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(key_of_message(e.what()), e.what());
  }
  return cfg;
}

SolveConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot read configuration file " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config", std::string("malformed configuration: ") + e.what());
  }
  return parse_config(doc);
}

json config_to_json(const SolveConfig& cfg) {
  json doc;
  doc["grid"] = {{"dim", cfg.dim}, {"n", cfg.n}, {"half_width", cfg.half_width}};
  doc["cutoff"] = {{"subdomain_half_width", cfg.subdomain_half_width}};
  json x0 = json::array({cfg.carleman.x0[0]});
  if (cfg.dim == 2) x0.push_back(cfg.carleman.x0[1]);
  doc["carleman"] = {{"x0", x0}, {"beta", cfg.carleman.beta}, {"lambda", cfg.carleman.lambda_c}};
  doc["functional"] = {{"epsilon0", cfg.functional.epsilon0},
                       {"eta", cfg.functional.eta},
                       {"boundary_weight", cfg.functional.boundary_weight
                                               ? json(*cfg.functional.boundary_weight)
                                               : json(nullptr)}};
  const OptimizerConfig& o = cfg.optimizer;
  doc["optimizer"] = {{"method", to_string(o.method)},
                      {"max_iters", o.max_iters},
                      {"grad_tol", o.grad_tol},
                      {"grad_tol_rel", o.grad_tol_rel},
                      {"step_init", o.step_init},
                      {"armijo_c", o.armijo_c},
                      {"backtrack_factor", o.backtrack_factor},
                      {"M_monitor", o.M_monitor},
                      {"history_capacity", o.history_capacity}};
  json problem;
  if (cfg.problem.custom) {
    const CustomProblemSpec& c = *cfg.problem.custom;
    problem["custom"] = {{"dim", c.dim},
                         {"lambda", c.lambda_eq},
                         {"hamiltonian", c.hamiltonian},
                         {"rhs", c.rhs},
                         {"growth_k", c.growth_k},
                         {"exact", c.exact ? json(*c.exact) : json(nullptr)}};
  } else {
    problem["builtin"] = cfg.problem.builtin.value_or(1);
  }
  problem["rhs_variant"] = to_string(cfg.problem.rhs_variant);
  doc["problem"] = problem;
  return doc;
}

}  // namespace hjcvx
