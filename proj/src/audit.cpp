#include "peierls/audit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "peierls/log_sum_exp.hpp"
#include "peierls/parallel.hpp"

namespace peierls {

namespace {

std::uint64_t replica_seed(std::uint64_t seed, std::size_t r) { return splitmix64(seed + 1 + r); }

double delta(const DisorderField& h, const ModelParams& p, const SiteSet& a, int rotation, std::uint64_t budget) {
  return p.is_ising() ? delta_flip(h, p, a, budget) : delta_rotation(h, p, a, Rotation(p.states, rotation), budget);
}

TailReport tail_report(std::string statistic, const std::vector<double>& samples, int set_size,
                       const ModelParams& p, std::vector<double> lambdas) {
  std::sort(lambdas.begin(), lambdas.end());
  TailReport report;
  report.statistic = std::move(statistic);
  report.set_size = set_size;
  report.replicas = samples.size();
  for (double lambda : lambdas) {
    if (!(lambda > 0.0)) throw std::invalid_argument("lambda: thresholds must be > 0");
    std::size_t hits = 0;
    for (double x : samples) hits += std::fabs(x) >= lambda;
    TailRow row;
    row.lambda = lambda;
    row.tail = proportion(hits, samples.size());
    row.bound = delta_tail_bound(lambda, p.field_strength, set_size, p);
    row.margin = row.bound - row.tail.value;
    row.pass = row.tail.value == 0.0 || row.tail.value <= row.bound * (1.0 + 3.0 * row.tail.se / row.tail.value);
    report.rows.push_back(row);
  }
  report.mean = mean_estimate(samples);
  report.mean_pass = std::fabs(report.mean.value) <= std::max(3.0 * report.mean.se, 1e-12);
  return report;
}

void require_small_sets(const ModelParams& p, std::initializer_list<const SiteSet*> sets) {
  for (const SiteSet* a : sets) {
    if (!is_subset(*a, p.box())) throw std::invalid_argument("A: set must lie inside the box");
  }
}

// Throws BudgetExceeded or invalid_argument before any replica runs.
void require_enumerable(const ModelParams& p, std::uint64_t budget) { static_cast<void>(GibbsSystem(p, budget)); }

double relative_slack(double x) { return 1e-12 * std::max(1.0, std::fabs(x)); }

}  // namespace

bool TailReport::pass() const {
  return mean_pass && std::all_of(rows.begin(), rows.end(), [](const TailRow& r) { return r.pass; });
}

bool GradientReport::pass() const {
  return std::all_of(rows.begin(), rows.end(), [](const GradientRow& r) { return r.match && r.bounded; });
}

double delta_tail_bound(double lambda, double eps, int set_size, const ModelParams& p) {
  if (eps == 0.0 || set_size == 0) return 0.0;
  const double m = p.is_ising() ? set_size : static_cast<double>(p.states) * set_size;
  return 2.0 * std::exp(-lambda * lambda / (8.0 * eps * eps * m));
}

TailReport concentration_check(const ModelParams& p, const SiteSet& a, const TailOptions& o) {
  p.validate();
  require_small_sets(p, {&a});
  require_enumerable(p, o.budget);
  const DisorderField base = sample_field(p, o.seed);
  const auto samples = parallel_map(o.replicas, o.workers, [&](std::size_t r) {
    return delta(base.resampled_on(a, replica_seed(o.seed, r)), p, a, o.rotation, o.budget);
  });
  return tail_report(p.is_ising() ? "Delta_A" : "Delta_A_j", samples, static_cast<int>(a.size()), p, o.lambdas);
}

TwoPointReport two_point_check(const ModelParams& p, const SiteSet& a, const SiteSet& b, const TailOptions& o) {
  p.validate();
  if (!p.is_ising()) throw std::invalid_argument("kind: the two-point check is implemented for Ising");
  require_small_sets(p, {&a, &b});
  require_enumerable(p, o.budget);
  const SiteSet both = set_union(a, b);
  const SiteSet sym = symmetric_difference(a, b);
  const DisorderField base = sample_field(p, o.seed);
  const auto diff = parallel_map(o.replicas, o.workers, [&](std::size_t r) {
    const DisorderField h = base.resampled_on(both, replica_seed(o.seed, r));
    return delta_flip(h, p, a, o.budget) - delta_flip(h, p, b, o.budget);
  });
  const auto direct = parallel_map(o.replicas, o.workers, [&](std::size_t r) {
    return delta_flip(base.resampled_on(both, replica_seed(o.seed, o.replicas + r)), p, sym, o.budget);
  });
  TwoPointReport report;
  report.tails = tail_report("Delta_A-Delta_A'", diff, static_cast<int>(sym.size()), p, o.lambdas);
  report.ks = sym.empty() ? 0.0 : ks_statistic(diff, direct);
  report.ks_critical = ks_critical_value(diff.size(), direct.size(), 0.01);
  report.ks_pass = report.ks <= report.ks_critical;
  return report;
}

GradientReport lipschitz_check(const ModelParams& p, const SiteSet& a, const DisorderField& h, int rotation,
                               double step, double tolerance) {
  p.validate();
  require_small_sets(p, {&a});
  GradientReport report;
  report.step = step;
  report.tolerance = tolerance;
  const double eps = p.field_strength;
  if (p.is_ising()) {
    const DisorderField flipped = flip(h, a);
    const ModelParams plus = p.with_boundary(1);
    for (const Site& v : a) {
      const std::size_t i = p.box().index(v);
      GradientRow row;
      row.site = v;
      row.finite_difference =
          (delta_flip(h.with_entry(0, i, h[i] + step), p, a) - delta_flip(h.with_entry(0, i, h[i] - step), p, a)) /
          (2.0 * step);
      row.analytic = -eps * (magnetization(h, plus, v) + magnetization(flipped, plus, v));
      row.match = std::fabs(row.finite_difference - row.analytic) <= tolerance;
      row.bounded = std::fabs(row.finite_difference) <= 2.0 * eps + tolerance;
      report.rows.push_back(row);
    }
    return report;
  }
  const Rotation r(p.states, rotation);
  const DisorderField rotated = rotate_field(h, a, r);
  const ModelParams one = p.with_boundary(1);
  for (const Site& v : a) {
    const std::size_t i = p.box().index(v);
    const Eigen::VectorXd mu = marginal(h, one, v);
    const Eigen::VectorXd mu_rot = marginal(rotated, one, v);
    for (int state = 1; state <= p.states; ++state) {
      GradientRow row;
      row.site = v;
      row.state = state;
      const double x = h.value(state, i);
      row.finite_difference = (delta_rotation(h.with_entry(state - 1, i, x + step), p, a, r) -
                               delta_rotation(h.with_entry(state - 1, i, x - step), p, a, r)) /
                              (2.0 * step);
      row.analytic = eps * (mu_rot(r.apply(state) - 1) - mu(state - 1));
      row.match = std::fabs(row.finite_difference - row.analytic) <= tolerance;
      row.bounded = std::fabs(row.finite_difference) <= 2.0 * eps + tolerance;
      report.rows.push_back(row);
    }
  }
  return report;
}

EventReport event_E_probe(const ModelParams& p, const std::vector<double>& eps_values, std::size_t replicas,
                          std::uint64_t seed, int workers) {
  p.validate();
  require_enumerable(p, kDefaultEnumerationBudget);
  const auto family = enumerate_box_animals(p.box(), static_cast<int>(p.box().size()));
  EventReport report;
  report.threshold = p.is_ising() ? 1.0 : 1.0 / (2.0 * p.states);
  report.family_size = family.size();
  for (double eps : eps_values) {
    const ModelParams q = p.with_field_strength(eps).with_boundary(1);
    const auto hits = parallel_map(replicas, workers, [&](std::size_t r) {
      const DisorderField h = sample_field(q, replica_seed(seed, r));
      const double log_z = log_partition_function(h, q);
      for (const SiteSet& a : family) {
        const double boundary = static_cast<double>(a.boundary_size());
        if (q.is_ising()) {
          const double d = q.temperature * (log_partition_function(flip(h, a), q) - log_z);
          if (d / boundary > report.threshold) return 1;
          continue;
        }
        for (int j = 1; j < q.states; ++j) {
          const double d = q.temperature * (log_partition_function(rotate_field(h, a, Rotation(q.states, j)), q) - log_z);
          if (d / boundary > report.threshold) return 1;
        }
      }
      return 0;
    });
    std::size_t count = 0;
    for (int x : hits) count += static_cast<std::size_t>(x);
    report.rows.push_back({eps, proportion(count, replicas)});
  }
  return report;
}

double peierls_critical_temperature(int d) { return 1.0 / (2.0 * std::log(16.0 * d * d * d)); }

PeierlsSum peierls_sum(double temperature, int d, double cutoff) {
  if (!(temperature > 0.0)) throw std::invalid_argument("T: the series needs T > 0");
  if (d < 1) throw std::invalid_argument("d: must be >= 1");
  PeierlsSum out;
  out.critical_temperature = peierls_critical_temperature(d);
  // Ratio of consecutive terms tends to (16 d^3)^2 e^{-1/T}.
  if (2.0 * std::log(16.0 * d * d * d) - 1.0 / temperature >= 0.0) {
    out.diverges = true;
    out.value = out.log_value = out.tail_bound = std::numeric_limits<double>::infinity();
    return out;
  }
  const auto log_term = [&](int n) { return log_count_bound(n, d) - n / temperature; };
  const double log_cutoff = std::log(cutoff);
  LogSumExp<double> acc;
  double lt = log_term(1);
  double next = log_term(2);
  out.tail_bound = std::numeric_limits<double>::infinity();
  out.capped = true;
  for (int n = 1; n <= kMaxSeriesTerms; ++n) {
    acc.add(lt);
    out.terms = n;
    const double after = log_term(n + 2);
    const double ratio = std::exp(after - next);
    if (ratio < 1.0 && (lt < log_cutoff || n == kMaxSeriesTerms)) {
      // Ratios decrease in n, so the tail after n is dominated by a geometric series.
      out.tail_bound = std::exp(next) / (1.0 - ratio);
      out.capped = !(lt < log_cutoff);
      break;
    }
    lt = next;
    next = after;
  }
  out.log_value = acc.value();
  out.value = std::exp(out.log_value);
  return out;
}

ComparisonReport talagrand_comparison(const ModelParams& p, const ComparisonOptions& o) {
  p.validate();
  if (!p.is_ising()) throw std::invalid_argument("kind: the comparison is implemented for Ising");
  require_enumerable(p, kDefaultEnumerationBudget);
  std::vector<SiteSet> family;
  if (o.family) {
    family = *o.family;
  } else {
    const int cap = o.max_cells > 0 ? o.max_cells : static_cast<int>(p.box().size());
    for (auto& a : enumerate_box_animals(p.box(), cap)) {
      if (!o.dyadic_class || dyadic_class(static_cast<int>(a.boundary_size())) == *o.dyadic_class) family.push_back(std::move(a));
    }
  }
  if (family.empty()) throw std::invalid_argument("family: no sets in the requested class");
  int inner = p.radius;
  if (o.dyadic_class) inner = std::min(inner, 1 << std::min(*o.dyadic_class + 1, 20));
  const SiteSet resampled(p.dimension, box_sites(LatticeBox(p.dimension, inner)));
  const DisorderField base = sample_field(p, o.seed);
  struct Pair {
    double delta;
    double field;
  };
  const auto pairs = parallel_map(o.replicas, o.workers, [&](std::size_t r) {
    const DisorderField h = base.resampled_on(resampled, replica_seed(o.seed, r));
    double best_delta = -std::numeric_limits<double>::infinity();
    double best_field = -std::numeric_limits<double>::infinity();
    for (const SiteSet& a : family) {
      best_delta = std::max(best_delta, delta_flip(h, p, a));
      best_field = std::max(best_field, 2.0 * p.field_strength * field_sum(h, a));
    }
    return Pair{best_delta, best_field};
  });
  std::vector<double> xs;
  std::vector<double> ys;
  for (const auto& pr : pairs) {
    xs.push_back(pr.delta);
    ys.push_back(pr.field);
  }
  ComparisonReport report;
  report.family_size = family.size();
  report.sup_delta = mean_estimate(xs);
  report.sup_field = mean_estimate(ys);
  const double b = report.sup_field.value;
  report.degenerate = p.field_strength == 0.0 || std::fabs(b) <= 3.0 * report.sup_field.se || b <= 0.0;
  if (!report.degenerate) {
    const double ratio = report.sup_delta.value / b;
    const double mx = report.sup_delta.value;
    double cov = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) cov += (xs[i] - mx) * (ys[i] - b);
    cov /= static_cast<double>(xs.size() - 1);
    const double n = static_cast<double>(xs.size());
    const double var = (sample_variance(xs) + ratio * ratio * sample_variance(ys) - 2.0 * ratio * cov) / (b * b * n);
    report.ratio = ratio;
    report.ratio_se = std::sqrt(std::max(var, 0.0));
  }
  return report;
}

ChainAudit peierls_chain_audit(const ModelParams& p, std::size_t replicas, std::uint64_t seed, int workers) {
  p.validate();
  if (!p.is_ising() || p.boundary != 1) throw std::invalid_argument("kind: the chain audit needs Ising with plus boundary");
  const GibbsSystem system(p);
  const auto family = enumerate_box_animals(p.box(), static_cast<int>(p.box().size()));
  std::map<SiteSet, std::size_t> slot;
  for (std::size_t i = 0; i < family.size(); ++i) slot.emplace(family[i], i);
  const double t = p.temperature;
  ChainAudit audit;
  audit.temperature = t;
  audit.eps = p.field_strength;
  audit.family_size = family.size();
  audit.series = peierls_sum(t, p.dimension);
  const std::size_t o = p.box().origin_index();

  audit.replicas = parallel_map(replicas, workers, [&](std::size_t r) {
    ChainReplica rep;
    rep.seed = replica_seed(seed, r);
    const DisorderField h = sample_field(p, rep.seed);
    const double log_z = system.log_partition(h);
    std::vector<DisorderField> flipped;
    std::vector<double> log_ratio(family.size());
    rep.on_event = true;
    for (std::size_t i = 0; i < family.size(); ++i) {
      flipped.push_back(flip(h, family[i]));
      log_ratio[i] = system.log_partition(flipped.back()) - log_z;
      const double boundary = static_cast<double>(family[i].boundary_size());
      rep.ratio_sum += std::exp(-2.0 * boundary / t + log_ratio[i]);
      rep.contour_sum += std::exp(-boundary / t);
      rep.on_event = rep.on_event && log_ratio[i] <= boundary / t;
    }
    std::vector<double> fiber(family.size(), 0.0);
    system.for_each_configuration(h, [&](const SpinConfig& sigma, double energy) {
      if (sigma[o] != -1) return;
      const double log_mu = -energy / t - log_z;
      rep.origin_minus += std::exp(log_mu);
      const SiteSet a = sign_component(sigma, p.kind);
      const auto it = slot.find(a);
      if (it == slot.end()) {
        ++rep.violations;
        return;
      }
      const std::size_t i = it->second;
      fiber[i] += std::exp(log_mu);
      const double log_mu_flipped = -hamiltonian(flip_spins(sigma, a), flipped[i], p) / t - (log_z + log_ratio[i]);
      const double lhs = log_mu - log_mu_flipped;
      const double rhs = -2.0 * static_cast<double>(a.boundary_size()) / t + log_ratio[i];
      rep.identity_error = std::max(rep.identity_error, std::fabs(std::expm1(lhs - rhs)));
    });
    for (std::size_t i = 0; i < family.size(); ++i) {
      rep.fiber_sum += fiber[i];
      const double cap = std::exp(-2.0 * static_cast<double>(family[i].boundary_size()) / t + log_ratio[i]);
      if (fiber[i] > cap + relative_slack(cap)) ++rep.violations;
    }
    if (rep.origin_minus > rep.fiber_sum + relative_slack(rep.fiber_sum)) ++rep.violations;
    if (rep.fiber_sum > rep.ratio_sum + relative_slack(rep.ratio_sum)) ++rep.violations;
    if (rep.on_event && rep.ratio_sum > rep.contour_sum + relative_slack(rep.contour_sum)) ++rep.violations;
    if (!audit.series.diverges && rep.contour_sum > audit.series.value + relative_slack(audit.series.value)) ++rep.violations;
    if (rep.identity_error > 1e-9) ++rep.violations;
    return rep;
  });
  for (const auto& rep : audit.replicas) audit.violations += rep.violations;
  return audit;
}

PottsChainAudit potts_chain_audit(const ModelParams& p, std::size_t replicas, std::uint64_t seed) {
  p.validate();
  if (!p.is_potts() || p.boundary != 1) throw std::invalid_argument("kind: the Potts audit needs boundary state 1");
  const GibbsSystem system(p);
  const std::size_t o = p.box().origin_index();
  const double t = p.temperature;
  const int q = p.states;
  PottsChainAudit audit;
  audit.replicas = replicas;
  for (std::size_t r = 0; r < replicas; ++r) {
    const DisorderField h = sample_field(p, replica_seed(seed, r));
    const double log_z = system.log_partition(h);
    struct Rotated {
      std::vector<DisorderField> fields;
      std::vector<double> log_z;
    };
    std::map<SiteSet, Rotated> cache;
    system.for_each_configuration(h, [&](const SpinConfig& sigma, double energy) {
      if (sigma[o] != 2) return;
      ++audit.configurations;
      const SiteSet a = sign_component(sigma, p.kind);
      int agree = 0;
      for (int j = 1; j < q; ++j) {
        const Rotation rot(q, j);
        for (const Edge& e : a.boundary()) agree += rot.apply(sigma.at(e.inside)) == sigma.at(e.outside);
      }
      if (agree != static_cast<int>(a.boundary_size())) ++audit.identity_failures;

      auto it = cache.find(a);
      if (it == cache.end()) {
        Rotated rotated;
        for (int j = 1; j < q; ++j) {
          rotated.fields.push_back(rotate_field(h, a, Rotation(q, j)));
          rotated.log_z.push_back(system.log_partition(rotated.fields.back()));
        }
        it = cache.emplace(a, std::move(rotated)).first;
      }
      LogSumExp<double> denominator;
      double worst = -std::numeric_limits<double>::infinity();
      for (int j = 1; j < q; ++j) {
        const auto k = static_cast<std::size_t>(j - 1);
        const double e = hamiltonian(rotate_spins(sigma, a, Rotation(q, j)), it->second.fields[k], p);
        denominator.add(-e / t - it->second.log_z[k]);
        worst = std::max(worst, it->second.log_z[k] - log_z);
      }
      const double lhs = (-energy / t - log_z) - denominator.value();
      const double bound = -static_cast<double>(a.boundary_size()) / ((q - 1) * t) + worst;
      if (lhs > bound + 1e-10) ++audit.bound_failures;
    });
  }
  return audit;
}

}  // namespace peierls
