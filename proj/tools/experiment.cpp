#include "experiment.hpp"

#include <Eigen/Core>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "peierls/animals.hpp"
#include "peierls/audit.hpp"
#include "peierls/correlation_length.hpp"
#include "peierls/disorder.hpp"
#include "peierls/ground_state.hpp"
#include "peierls/mcmc.hpp"
#include "peierls/parallel.hpp"

#ifndef PEIERLS_VERSION
#define PEIERLS_VERSION "0.0.0"
#endif

namespace peierls::cli {

using Json = nlohmann::ordered_json;

namespace {

const std::vector<std::string> kCommands{"exact", "gs", "mcmc", "animals", "audit", "psi"};
const std::vector<std::string> kLemmas{"one-point", "two-point", "lipschitz", "event-E",
                                       "series", "comparison", "chain"};

bool one_of(const std::string& value, const std::vector<std::string>& options) {
  return std::find(options.begin(), options.end(), value) != options.end();
}

std::string joined(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) out += (out.empty() ? "" : "|") + s;
  return out;
}

// Shortest round-trip decimal form.
std::string num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

Json finite_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

std::string set_label(const SiteSet& a) {
  std::string out;
  for (const Site& s : a) out += (out.empty() ? "" : ";") + to_string(s, a.dimension());
  return out;
}

Json estimate_json(const Estimate& e) { return Json{{"value", e.value}, {"SE", e.se}}; }

// Replica counts used when the config leaves them unset.
int default_replicas(const ExperimentConfig& c) {
  if (c.command == "audit") {
    if (c.lemma == "one-point") return 100000;
    if (c.lemma == "two-point") return 10000;
    if (c.lemma == "chain") return 100;
    return 1000;
  }
  if (c.command == "psi") return 30;
  if (c.command == "animals") return 50;
  return 1;
}

int replicas_of(const ExperimentConfig& c) { return c.replicas.value_or(default_replicas(c)); }

bool enumerates(const ExperimentConfig& c) {
  if (c.command == "exact") return true;
  return c.command == "audit" && c.lemma != "series";
}

class Diagnostics {
 public:
  void config(std::string field, std::string message) {
    items.push_back({DiagnosticKind::config, std::move(field), std::move(message)});
  }
  void budget(std::string field, std::string message) {
    items.push_back({DiagnosticKind::budget, std::move(field), std::move(message)});
  }
  std::vector<Diagnostic> items;
};

Json tail_json(const TailReport& r) {
  Json rows = Json::array();
  for (const TailRow& row : r.rows)
    rows.push_back({{"lambda", row.lambda},
                    {"P_abs_Delta_ge_lambda", row.tail.value},
                    {"SE", row.tail.se},
                    {"bound", row.bound},
                    {"margin", row.margin},
                    {"pass", row.pass}});
  return Json{{"statistic", r.statistic},
              {"set_size", r.set_size},
              {"replicas", r.replicas},
              {"mean_Delta", r.mean.value},
              {"mean_SE", r.mean.se},
              {"mean_pass", r.mean_pass},
              {"rows", rows},
              {"pass", r.pass()}};
}

Json series_json(const PeierlsSum& s) {
  return Json{{"diverges", s.diverges},
              {"value", finite_or_null(s.value)},
              {"log_value", finite_or_null(s.log_value)},
              {"tail_bound", finite_or_null(s.tail_bound)},
              {"terms", s.terms},
              {"capped", s.capped},
              {"critical_temperature", s.critical_temperature}};
}

struct Output {
  std::string content;
  std::string extension;
  bool violation = false;
};

Output run_exact(const ExperimentConfig& c) {
  const ModelParams p = c.params();
  const GibbsSystem system(p, c.budget);
  const DisorderField h = sample_field(p, c.seed);
  const GibbsSummary summary = system.summarize(h);
  const LatticeBox box = p.box();

  Json j;
  j["model"] = c.model;
  j["d"] = c.d;
  j["N"] = c.N;
  j["T"] = c.T;
  j["eps"] = c.eps;
  if (p.is_potts()) j["q"] = c.q;
  j["bc"] = c.bc;
  j["seed"] = c.seed;
  j["logZ"] = summary.log_partition;
  j["free_energy"] = -c.T * summary.log_partition;
  if (p.is_ising()) j["m"] = boundary_influence(h, p, c.budget);

  Json spins = Json::array();
  for (int row = 0; row < static_cast<int>(summary.marginals.rows()); ++row) spins.push_back(row_spin(p.kind, row));
  j["spins"] = spins;
  Json marginals = Json::array();
  for (std::size_t v = 0; v < box.size(); ++v) {
    Json probs = Json::array();
    for (Eigen::Index row = 0; row < summary.marginals.rows(); ++row)
      probs.push_back(summary.marginals(row, static_cast<Eigen::Index>(v)));
    marginals.push_back({{"site", to_string(box.site(v), c.d)}, {"p", probs}});
  }
  j["marginals"] = marginals;

  Json table = Json::array();
  for (const SiteSet& a : enumerate_box_animals(box, c.max_cells)) {
    const double delta = p.is_ising() ? delta_flip(h, p, a, c.budget)
                                      : delta_rotation(h, p, a, Rotation(c.q, c.rotation), c.budget);
    Json row{{"A", set_label(a)}, {"size", a.size()}, {"boundary", a.boundary_size()}};
    if (p.is_potts()) row["rotation"] = c.rotation;
    row["Delta_A"] = delta;
    table.push_back(row);
  }
  j["Delta"] = table;
  return {j.dump(2) + "\n", "json"};
}

Output run_gs(const ExperimentConfig& c) {
  const ModelParams p = c.params();
  const std::size_t o = p.box().origin_index();
  struct Row {
    int plus, minus;
    double cut;
  };
  const auto n = static_cast<std::size_t>(replicas_of(c));
  const auto rows = parallel_map(n, c.workers, [&](std::size_t r) {
    const DisorderField h = sample_field(p, c.seed + r);
    const GroundState plus = solve_ground_state(h, p.with_boundary(1));
    const GroundState minus = solve_ground_state(h, p.with_boundary(-1));
    return Row{plus.spins[o], minus.spins[o], static_cast<double>(plus.cut_value)};
  });
  std::string out = "d,N,eps,seed,m_plus,m_minus,m,cut_value\n";
  for (std::size_t r = 0; r < n; ++r) {
    const int m = (rows[r].plus == 1 ? 1 : 0) - (rows[r].minus == 1 ? 1 : 0);
    out += std::to_string(c.d) + "," + std::to_string(c.N) + "," + num(c.eps) + "," + std::to_string(c.seed + r) + "," +
           std::to_string(rows[r].plus) + "," + std::to_string(rows[r].minus) + "," + std::to_string(m) + "," +
           num(rows[r].cut) + "\n";
  }
  return {out, "csv"};
}

Output run_mcmc(const ExperimentConfig& c) {
  const ModelParams p = c.params();
  std::string out = "model,d,N,T,eps,q,bc,seed,sweeps,burn_in,chains,quantity,estimate,SE,tau_int\n";
  const int n = replicas_of(c);
  for (int r = 0; r < n; ++r) {
    const std::uint64_t seed = c.seed + static_cast<std::uint64_t>(r);
    const DisorderField h = sample_field(p, seed);
    McmcOptions o;
    o.sweeps = c.sweeps;
    o.burn_in = c.burn_in;
    o.replicas = c.chains;
    o.seed = splitmix64(seed);
    o.workers = c.workers;
    const Estimate e = p.is_ising() ? estimate_boundary_influence(h, p, o) : estimate_marginal(h, p, origin(), c.bc, o);
    out += c.model + "," + std::to_string(c.d) + "," + std::to_string(c.N) + "," + num(c.T) + "," + num(c.eps) + "," +
           (p.is_potts() ? std::to_string(c.q) : std::string()) + "," + std::to_string(c.bc) + "," +
           std::to_string(seed) + "," + std::to_string(c.sweeps) + "," + std::to_string(o.effective_burn_in()) + "," +
           std::to_string(c.chains) + "," + (p.is_ising() ? "m" : "mu_o") + "," + num(e.value) + "," + num(e.se) +
           "," + num(e.tau_int) + "\n";
  }
  return {out, "csv"};
}

Output run_animals(const ExperimentConfig& c) {
  std::string out;
  if (c.task == "counts") {
    out = "d,n,exact_count,bound\n";
    for (int d : c.dims) {
      const auto counts = count_by_boundary(d, c.max_boundary);
      for (int n = 2 * d; n <= c.max_boundary; n += 2) {
        const auto it = counts.find(n);
        out += std::to_string(d) + "," + std::to_string(n) + "," +
               std::to_string(it == counts.end() ? 0 : it->second) + "," + num(count_bound(n, d)) + "\n";
      }
    }
    return {out, "csv"};
  }
  SupOptions o;
  o.max_cells = c.max_cells;
  o.steps = c.steps;
  o.restarts = c.restarts;
  o.seed = c.seed;
  const SupMode mode = parse_sup_mode(c.mode);
  const auto rows = scaling_experiment(c.dims, c.radii, replicas_of(c), c.seed, mode, c.workers, o);
  out = "d,N,mode,sup_H_A_over_dA,SE,replicas\n";
  for (const ScalingRow& r : rows)
    out += std::to_string(r.dimension) + "," + std::to_string(r.radius) + "," + to_string(r.mode) + "," +
           num(r.value.value) + "," + num(r.value.se) + "," + std::to_string(r.samples.size()) + "\n";
  return {out, "csv"};
}

TailOptions tail_options(const ExperimentConfig& c) {
  TailOptions o;
  o.replicas = static_cast<std::size_t>(replicas_of(c));
  o.lambdas = c.lambdas;
  o.seed = c.seed;
  o.rotation = c.rotation;
  o.workers = c.workers;
  o.budget = c.budget;
  return o;
}

Output run_audit(const ExperimentConfig& c) {
  const ModelParams p = c.params();
  Json j;
  bool violation = false;
  const auto n = static_cast<std::size_t>(replicas_of(c));

  if (c.lemma == "one-point") {
    const TailReport r = concentration_check(p, parse_set(c.set_a, c.d), tail_options(c));
    j["delta-one-point-tail"] = tail_json(r);
    violation = !r.pass();
  } else if (c.lemma == "two-point") {
    const TwoPointReport r = two_point_check(p, parse_set(c.set_a, c.d), parse_set(c.set_b, c.d), tail_options(c));
    Json body = tail_json(r.tails);
    body["ks"] = r.ks;
    body["ks_critical"] = r.ks_critical;
    body["ks_pass"] = r.ks_pass;
    body["pass"] = r.pass();
    j["delta-two-point-tail"] = body;
    violation = !r.pass();
  } else if (c.lemma == "lipschitz") {
    const DisorderField h = sample_field(p, c.seed);
    const GradientReport r = lipschitz_check(p, parse_set(c.set_a, c.d), h, c.rotation);
    Json rows = Json::array();
    for (const GradientRow& g : r.rows)
      rows.push_back({{"site", to_string(g.site, c.d)},
                      {"state", g.state},
                      {"finite_difference", g.finite_difference},
                      {"analytic", g.analytic},
                      {"match", g.match},
                      {"bounded", g.bounded}});
    j["delta-lipschitz"] = Json{{"step", r.step}, {"tolerance", r.tolerance}, {"rows", rows}, {"pass", r.pass()}};
    violation = !r.pass();
  } else if (c.lemma == "event-E") {
    const std::vector<double> eps = c.eps_list.empty() ? std::vector<double>{c.eps} : c.eps_list;
    const EventReport r = event_E_probe(p, eps, n, c.seed, c.workers);
    Json rows = Json::array();
    for (const EventRow& e : r.rows)
      rows.push_back({{"eps", e.eps}, {"P_not_E", e.violation.value}, {"SE", e.violation.se}});
    j["event-E"] = Json{{"threshold", r.threshold}, {"family_size", r.family_size}, {"replicas", n}, {"rows", rows}};
  } else if (c.lemma == "series") {
    j["peierls-series"] = series_json(peierls_sum(c.T, c.d));
  } else if (c.lemma == "comparison") {
    ComparisonOptions o;
    o.replicas = n;
    o.dyadic_class = c.dyadic;
    o.max_cells = c.max_cells;
    o.seed = c.seed;
    o.workers = c.workers;
    const ComparisonReport r = talagrand_comparison(p, o);
    j["gaussian-comparison"] = Json{{"sup_Delta_A", estimate_json(r.sup_delta)},
                                    {"two_eps_sup_H_A", estimate_json(r.sup_field)},
                                    {"ratio", finite_or_null(r.ratio)},
                                    {"ratio_SE", finite_or_null(r.ratio_se)},
                                    {"degenerate", r.degenerate},
                                    {"family_size", r.family_size}};
  } else if (c.lemma == "chain" && p.is_ising()) {
    const ChainAudit a = peierls_chain_audit(p, n, c.seed, c.workers);
    Json rows = Json::array();
    for (const ChainReplica& r : a.replicas)
      rows.push_back({{"seed", r.seed},
                      {"origin_minus", r.origin_minus},
                      {"fiber_sum", r.fiber_sum},
                      {"ratio_sum", r.ratio_sum},
                      {"contour_sum", r.contour_sum},
                      {"on_event", r.on_event},
                      {"identity_error", r.identity_error},
                      {"violations", r.violations}});
    j["peierls-chain"] = Json{{"T", a.temperature},     {"eps", a.eps},
                              {"family_size", a.family_size}, {"series", series_json(a.series)},
                              {"violations", a.violations},   {"replicas", rows}};
    violation = a.violations != 0;
  } else if (c.lemma == "chain") {
    const PottsChainAudit a = potts_chain_audit(p, n, c.seed);
    j["potts-chain"] = Json{{"replicas", a.replicas},
                            {"configurations", a.configurations},
                            {"identity_failures", a.identity_failures},
                            {"bound_failures", a.bound_failures},
                            {"violations", a.violations()}};
    violation = a.violations() != 0;
  }
  return {j.dump(2) + "\n", "json", violation};
}

Output run_psi(const ExperimentConfig& c) {
  const ModelParams p = c.params();
  PsiOptions o;
  o.threshold = c.threshold;
  o.replicas = replicas_of(c);
  o.max_radius = c.max_radius;
  o.seed = c.seed;
  o.workers = c.workers;
  o.mcmc.sweeps = c.sweeps;
  o.mcmc.burn_in = c.burn_in;
  o.mcmc.replicas = c.chains;
  const PsiScan scan = psi_scan(p, o);
  Json curve = Json::array();
  for (const PsiPoint& pt : scan.curve) curve.push_back({{"N", pt.radius}, {"m", pt.m.value}, {"SE", pt.m.se}});
  Json j{{"d", c.d}, {"T", c.T}, {"eps", c.eps}, {"threshold", c.threshold}, {"replicas", o.replicas},
         {"seed", c.seed}, {"curve", curve}};
  j["psi"] = scan.psi ? Json(*scan.psi) : Json(nullptr);
  j["lower_bound"] = scan.lower_bound;
  return {j.dump(2) + "\n", "json"};
}

// Reads a TOML file through CLI11, or a JSON object when the text starts with '{'.
class ConfigFile : public CLI::ConfigBase {
 public:
  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    std::stringstream buffer;
    buffer << input.rdbuf();
    const std::string text = buffer.str();
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first == std::string::npos || text[first] != '{') {
      std::istringstream again(text);
      return CLI::ConfigBase::from_config(again);
    }
    Json doc;
    try {
      doc = Json::parse(text);
    } catch (const Json::parse_error& e) {
      throw CLI::ConversionError(std::string("config: invalid JSON: ") + e.what());
    }
    std::vector<CLI::ConfigItem> items;
    for (const auto& [key, value] : doc.items()) {
      CLI::ConfigItem item;
      item.name = key;
      if (value.is_array()) {
        for (const auto& v : value) item.inputs.push_back(scalar(key, v));
      } else {
        item.inputs.push_back(scalar(key, value));
      }
      items.push_back(std::move(item));
    }
    return items;
  }

 private:
  static std::string scalar(const std::string& key, const Json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number_integer()) return v.dump();
    if (v.is_number()) return num(v.get<double>());
    throw CLI::ConversionError(key + ": expected a scalar or a list of scalars");
  }
};

std::string version_string() { return PEIERLS_VERSION; }

Json versions() {
  return Json{{"peierls", version_string()},
              {"compiler", __VERSION__},
              {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                            std::to_string(EIGEN_MINOR_VERSION)},
              {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                    std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                    std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
              {"cli11", CLI11_VERSION}};
}

}  // namespace

ModelParams ExperimentConfig::params() const {
  return model == "potts" ? ModelParams::potts(d, N, T, eps, q, bc) : ModelParams::ising(d, N, T, eps, bc);
}

nlohmann::json ExperimentConfig::to_json() const {
  nlohmann::json j;
  j["command"] = command;
  j["model"] = model;
  j["d"] = d;
  j["N"] = N;
  j["T"] = T;
  j["eps"] = eps;
  j["q"] = q;
  j["bc"] = bc;
  j["seed"] = seed;
  j["replicas"] = replicas ? nlohmann::json(*replicas) : nlohmann::json(nullptr);
  j["budget"] = budget;
  j["workers"] = workers;
  j["out"] = out;
  j["max_cells"] = max_cells;
  j["rotation"] = rotation;
  j["sweeps"] = sweeps;
  j["burn_in"] = burn_in ? nlohmann::json(*burn_in) : nlohmann::json(nullptr);
  j["chains"] = chains;
  j["task"] = task;
  j["max_boundary"] = max_boundary;
  j["mode"] = mode;
  j["dims"] = dims;
  j["radii"] = radii;
  j["steps"] = steps;
  j["restarts"] = restarts;
  j["lemma"] = lemma;
  j["A"] = set_a;
  j["B"] = set_b;
  j["lambdas"] = lambdas;
  j["eps_list"] = eps_list;
  j["dyadic"] = dyadic ? nlohmann::json(*dyadic) : nlohmann::json(nullptr);
  j["threshold"] = threshold;
  j["max_radius"] = max_radius;
  return j;
}

SiteSet parse_set(const std::string& text, int d) {
  if (text == "singleton" || text == "origin") return SiteSet(d, {origin()});
  if (text == "domino") return SiteSet(d, {origin(), shifted(origin(), 0, 1)});
  std::string body = text;
  if (!body.empty() && body.front() == '@') {
    std::ifstream in(body.substr(1));
    if (!in) throw std::invalid_argument("cannot read set file '" + body.substr(1) + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    body = buffer.str();
  }
  for (char& ch : body)
    if (ch == ';') ch = '\n';
  SiteSet a = SiteSet::from_text(d, body);
  if (a.empty()) throw std::invalid_argument("empty set '" + text + "'");
  return a;
}

std::vector<Diagnostic> validate(const ExperimentConfig& c) {
  Diagnostics out;
  if (!one_of(c.command, kCommands)) out.config("command", "unknown subcommand '" + c.command + "'; expected " + joined(kCommands));
  const bool potts = c.model == "potts";
  if (!potts && c.model != "ising") out.config("model", "expected ising|potts, got '" + c.model + "'");
  if (c.d < 2 || c.d > kMaxDimension) out.config("d", "d must be in [2, " + std::to_string(kMaxDimension) + "]");
  if (c.N < 0) out.config("N", "N must be >= 0");
  if (!std::isfinite(c.T) || c.T < 0) out.config("T", "T must be finite and >= 0");
  if (!std::isfinite(c.eps) || c.eps < 0) out.config("eps", "eps must be finite and >= 0");
  if (potts) {
    if (c.q < 3) out.config("q", "q must be >= 3");
    else if (c.bc < 1 || c.bc > c.q) out.config("bc", "Potts boundary state must be in 1..q");
    else if (c.rotation < 1 || c.rotation >= c.q) out.config("rotation", "rotation must be in 1..q-1");
  } else if (c.bc != 1 && c.bc != -1) {
    out.config("bc", "Ising boundary must be +1 or -1");
  }
  if (c.replicas && *c.replicas < 1) out.config("replicas", "replicas must be >= 1");
  if (c.workers < 0) out.config("workers", "workers must be >= 0");
  if (c.budget == 0) out.config("budget", "budget must be >= 1");

  if (c.command == "exact" && c.T == 0) out.config("T", "T = 0 has no Gibbs measure to enumerate; use the gs subcommand");
  if (c.command == "exact" && c.max_cells < 0) out.config("max_cells", "max_cells must be >= 0");
  if (c.command == "gs" && potts) out.config("model", "gs supports ising only");
  if (c.command == "mcmc") {
    if (c.T == 0) out.config("T", "T = 0 has no heat-bath dynamics; use the gs subcommand");
    if (c.chains < 2) out.config("chains", "chains must be >= 2");
    if (c.sweeps <= c.burn_in.value_or(c.sweeps / 10)) out.config("sweeps", "sweeps must exceed burn_in");
  }
  if (c.command == "animals") {
    if (c.task != "counts" && c.task != "sup") out.config("task", "expected counts|sup, got '" + c.task + "'");
    if (c.dims.empty()) out.config("dims", "dims must not be empty");
    for (int d : c.dims)
      if (d < 2 || d > kMaxDimension) out.config("dims", "each dimension must be in [2, " + std::to_string(kMaxDimension) + "]");
    if (c.task == "sup") {
      try {
        const SupMode mode = parse_sup_mode(c.mode);
        if (mode != SupMode::exact)
          for (int d : c.dims)
            if (d > 3) out.config("dims", "mode " + c.mode + " supports d = 2, 3");
      } catch (const std::invalid_argument&) {
        out.config("mode", "expected exact|rectangles|anneal, got '" + c.mode + "'");
      }
      if (c.radii.empty()) out.config("radii", "radii must not be empty");
      for (int r : c.radii)
        if (r < 0) out.config("radii", "each radius must be >= 0");
      if (c.steps < 1) out.config("steps", "steps must be >= 1");
      if (c.restarts < 1) out.config("restarts", "restarts must be >= 1");
    } else if (c.task == "counts") {
      for (int d : c.dims)
        if (d >= 2 && d <= kMaxDimension && cell_cap_for_boundary(d, c.max_boundary) > max_enumeration_cells(d))
          out.budget("max_boundary", "|dA| <= " + std::to_string(c.max_boundary) + " in d = " + std::to_string(d) +
                                         " needs animals of up to " +
                                         std::to_string(cell_cap_for_boundary(d, c.max_boundary)) + " cells; limit is " +
                                         std::to_string(max_enumeration_cells(d)));
    }
  }
  if (c.command == "audit") {
    if (!one_of(c.lemma, kLemmas)) out.config("lemma", "unknown lemma '" + c.lemma + "'; expected " + joined(kLemmas));
    if (c.lemma == "one-point" || c.lemma == "two-point" || c.lemma == "lipschitz") {
      try {
        parse_set(c.set_a, c.d >= 2 && c.d <= kMaxDimension ? c.d : 2);
      } catch (const std::invalid_argument& e) {
        out.config("A", e.what());
      }
    }
    if (c.lemma == "two-point") {
      if (potts) out.config("model", "two-point supports ising only");
      try {
        parse_set(c.set_b, c.d >= 2 && c.d <= kMaxDimension ? c.d : 2);
      } catch (const std::invalid_argument& e) {
        out.config("B", e.what());
      }
    }
    if (c.lemma != "series" && c.T == 0) out.config("T", "T must be > 0 for " + c.lemma);
    if (c.lemma == "series" && c.T <= 0) out.config("T", "T must be > 0 for the series");
    for (double l : c.lambdas)
      if (!(l > 0)) out.config("lambdas", "each lambda must be > 0");
    for (double e : c.eps_list)
      if (!(e >= 0)) out.config("eps_list", "each eps must be >= 0");
    if (c.dyadic && *c.dyadic < 1) out.config("dyadic", "dyadic class must be >= 1");
  }
  if (c.command == "psi") {
    if (potts) out.config("model", "psi supports ising only");
    if (!(c.threshold > 0 && c.threshold < 1)) out.config("threshold", "threshold must be in (0, 1)");
    if (c.replicas && *c.replicas < 30) out.config("replicas", "psi needs at least 30 replicas");
    if (c.max_radius < 1) out.config("max_radius", "max_radius must be >= 1");
    if (c.T > 0 && c.chains < 2) out.config("chains", "chains must be >= 2");
  }

  if (enumerates(c) && c.d >= 2 && c.d <= kMaxDimension && c.N >= 0 && (!potts || c.q >= 3)) {
    const int states = potts ? c.q : 2;
    const std::size_t sites = LatticeBox(c.d, c.N).size();
    const std::uint64_t count = configuration_count(states, sites);
    if (count > c.budget) {
      const double log2_states = static_cast<double>(sites) * std::log2(static_cast<double>(states));
      const std::string about = states == 2 ? "" : " (about 2^" + num(std::round(log2_states * 100) / 100) + ")";
      out.budget("budget", "enumeration needs " + std::to_string(states) + "^" + std::to_string(sites) + about +
                               " states; budget is " + std::to_string(c.budget));
    }
  }
  return out.items;
}

RunResult run(const ExperimentConfig& config) {
  RunResult result;
  const auto diagnostics = validate(config);
  if (!diagnostics.empty()) {
    bool config_error = false;
    for (const Diagnostic& d : diagnostics) {
      result.errors.push_back(d.text());
      config_error = config_error || d.kind == DiagnosticKind::config;
    }
    result.exit_code = config_error ? kExitConfig : kExitBudget;
    return result;
  }
  try {
    Output o;
    if (config.command == "exact") o = run_exact(config);
    else if (config.command == "gs") o = run_gs(config);
    else if (config.command == "mcmc") o = run_mcmc(config);
    else if (config.command == "animals") o = run_animals(config);
    else if (config.command == "audit") o = run_audit(config);
    else o = run_psi(config);
    result.content = std::move(o.content);
    result.extension = std::move(o.extension);
    result.exit_code = o.violation ? kExitViolation : kExitOk;
    if (o.violation) result.errors.push_back(config.lemma + ": audit violation");
  } catch (const BudgetExceeded& e) {
    result = RunResult{kExitBudget, {}, {}, {std::string("budget: ") + e.what()}};
  } catch (const std::invalid_argument& e) {
    result = RunResult{kExitConfig, {}, {}, {e.what()}};
  }
  return result;
}

std::string config_hash(const ExperimentConfig& config) {
  std::uint64_t hash = 14695981039346656037ull;
  nlohmann::json canonical = config.to_json();
  canonical.erase("out");
  for (unsigned char ch : canonical.dump()) {
    hash ^= ch;
    hash *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  fs::path temp = target;
  temp += ".tmp";
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + temp.string() + "'");
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed for '" + temp.string() + "'");
  }
  fs::rename(temp, target);
}

std::optional<int> parse_command_line(int argc, const char* const* argv, ExperimentConfig& c, bool& check_only) {
  CLI::App app{"Random-field Ising and Potts numerics", "peierls"};
  app.config_formatter(std::make_shared<ConfigFile>());
  app.set_config("--config", "", "TOML or JSON config file; flags given on the command line take precedence");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.set_version_flag("--version", version_string());
  app.require_subcommand(1);

  app.add_option("--model", c.model, "ising | potts");
  app.add_option("--d", c.d, "lattice dimension");
  app.add_option("--N", c.N, "box radius");
  app.add_option("--T", c.T, "temperature");
  app.add_option("--eps", c.eps, "field strength");
  app.add_option("--q", c.q, "Potts states");
  app.add_option("--bc", c.bc, "boundary: +1/-1 (Ising) or a state (Potts)");
  app.add_option("--seed", c.seed, "base seed");
  app.add_option("--replicas", c.replicas, "disorder replicas");
  app.add_option("--budget", c.budget, "enumeration state budget");
  app.add_option("--workers", c.workers, "worker threads (0 = all cores)");
  app.add_option("--out", c.out, "output file");
  app.add_option("--max-cells,--max_cells", c.max_cells, "cell cap for set families");
  app.add_option("--rotation", c.rotation, "Potts rotation power j");
  app.add_option("--sweeps", c.sweeps, "heat-bath sweeps per chain");
  app.add_option("--burn-in,--burn_in", c.burn_in, "discarded sweeps (default sweeps/10)");
  app.add_option("--chains", c.chains, "independent chains per field");
  app.add_option("--task", c.task, "animals: counts | sup");
  app.add_option("--max-boundary,--max_boundary", c.max_boundary, "largest |dA| counted");
  app.add_option("--mode", c.mode, "sup family: exact | rectangles | anneal");
  app.add_option("--dims", c.dims, "dimensions")->delimiter(',');
  app.add_option("--radii", c.radii, "box radii")->delimiter(',');
  app.add_option("--steps", c.steps, "anneal steps per restart");
  app.add_option("--restarts", c.restarts, "anneal restarts");
  app.add_option("--lemma", c.lemma, joined(kLemmas));
  app.add_option("--A", c.set_a, "set: singleton | domino | (x,y);(x,y) | @file");
  app.add_option("--B", c.set_b, "second set for two-point");
  app.add_option("--lambdas", c.lambdas, "tail thresholds")->delimiter(',');
  app.add_option("--eps-list,--eps_list", c.eps_list, "field strengths for event-E")->delimiter(',');
  app.add_option("--dyadic", c.dyadic, "dyadic boundary class k");
  app.add_option("--threshold", c.threshold, "psi threshold on E m");
  app.add_option("--max-radius,--max_radius", c.max_radius, "largest N probed by psi");
  app.add_flag("--check", check_only, "validate only");

  const std::vector<std::pair<std::string, std::string>> commands{
      {"exact", "exact enumeration: logZ, marginals, m, Delta_A table (JSON)"},
      {"gs", "T = 0 ground states by min-cut (CSV)"},
      {"mcmc", "heat-bath estimates (CSV)"},
      {"animals", "animal counts or the greedy animal sup (CSV)"},
      {"audit", "lemma audits (JSON)"},
      {"psi", "correlation length scan (JSON)"}};
  for (const auto& [name, help] : commands)
    app.add_subcommand(name, help)->fallthrough()->callback([&c, name = name] { c.command = name; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }
  return std::nullopt;
}

int main_entry(int argc, const char* const* argv) {
  ExperimentConfig config;
  bool check_only = false;
  if (auto code = parse_command_line(argc, argv, config, check_only)) return *code;

  if (check_only) {
    const auto diagnostics = validate(config);
    int code = kExitOk;
    for (const Diagnostic& d : diagnostics) {
      std::cerr << "error: " << d.text() << "\n";
      if (d.kind == DiagnosticKind::config) code = kExitConfig;
      else if (code == kExitOk) code = kExitBudget;
    }
    if (diagnostics.empty()) std::cerr << "config ok\n";
    return code;
  }

  const auto start = std::chrono::steady_clock::now();
  RunResult result = run(config);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  std::string path = config.out;
  if (path.empty()) {
    if (const char* dir = std::getenv(kOutputDirVariable); dir != nullptr && *dir != '\0')
      path = (std::filesystem::path(dir) / (config.command + "." + (result.extension.empty() ? "out" : result.extension))).string();
  }

  for (const std::string& e : result.errors) std::cerr << "error: " << e << "\n";
  try {
    if (path.empty()) {
      std::cout << result.content;
    } else {
      if (!result.content.empty()) write_atomic(path, result.content);
      Json manifest{{"command", config.command},
                    {"artifact", result.content.empty() ? Json(nullptr) : Json(path)},
                    {"config_hash", config_hash(config)},
                    {"config", Json::parse(config.to_json().dump())},
                    {"versions", versions()},
                    {"wall_time_seconds", seconds},
                    {"exit_code", result.exit_code},
                    {"errors", result.errors}};
      write_atomic(path + ".manifest.json", manifest.dump(2) + "\n");
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return result.exit_code;
}

}  // namespace peierls::cli
