#include "peierls/animals.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

#include "peierls/exact_gibbs.hpp"
#include "peierls/mcmc.hpp"
#include "peierls/parallel.hpp"

namespace peierls {

namespace {

// Cube [-r-1, r+1]^d stored flat; the outer layer is never part of a set
// and gives flood fills room to go around.
class Grid {
 public:
  Grid(int d, int r) : d_(d), r_(r), side_(2 * r + 3) {
    stride_.assign(static_cast<std::size_t>(d), 1);
    for (int a = d - 2; a >= 0; --a) stride_[static_cast<std::size_t>(a)] = stride_[static_cast<std::size_t>(a) + 1] * side_;
    size_ = static_cast<std::size_t>(stride_[0]) * static_cast<std::size_t>(side_);
    for (int a = 0; a < d; ++a) {
      offsets_.push_back(stride_[static_cast<std::size_t>(a)]);
      offsets_.push_back(-stride_[static_cast<std::size_t>(a)]);
    }
    inner_.assign(size_, 0);
    for (std::size_t i = 0; i < size_; ++i) {
      const Site s = site(static_cast<int>(i));
      bool in = true;
      for (int a = 0; a < d; ++a) in = in && std::abs(s[a]) <= r;
      inner_[i] = in;
    }
    stamp_.assign(size_, 0);
  }

  int dimension() const { return d_; }
  std::size_t size() const { return size_; }
  const std::vector<int>& offsets() const { return offsets_; }
  bool inner(int i) const { return inner_[static_cast<std::size_t>(i)] != 0; }

  int index(const Site& s) const {
    int i = 0;
    for (int a = 0; a < d_; ++a) i += (s[a] + r_ + 1) * stride_[static_cast<std::size_t>(a)];
    return i;
  }
  Site site(int i) const {
    Site s = origin();
    for (int a = 0; a < d_; ++a) {
      s.x[static_cast<std::size_t>(a)] = i / stride_[static_cast<std::size_t>(a)] - r_ - 1;
      i %= stride_[static_cast<std::size_t>(a)];
    }
    return s;
  }

  void shuffle_offsets(std::uint64_t seed) {
    if (seed == 0) return;
    std::mt19937_64 rng(seed);
    for (std::size_t i = offsets_.size() - 1; i > 0; --i) std::swap(offsets_[i], offsets_[rng() % (i + 1)]);
  }

  // True when the cells marked in `member` leave no finite complement
  // component: flood the padded bounding box from its corner.
  bool hole_free(std::span<const int> cells, const std::vector<std::uint8_t>& member) {
    std::array<int, kMaxDimension> lo{};
    std::array<int, kMaxDimension> hi{};
    lo.fill(std::numeric_limits<int>::max());
    hi.fill(std::numeric_limits<int>::min());
    for (int c : cells) {
      const Site s = site(c);
      for (int a = 0; a < d_; ++a) {
        lo[static_cast<std::size_t>(a)] = std::min(lo[static_cast<std::size_t>(a)], s[a] - 1);
        hi[static_cast<std::size_t>(a)] = std::max(hi[static_cast<std::size_t>(a)], s[a] + 1);
      }
    }
    std::size_t volume = 1;
    for (int a = 0; a < d_; ++a) volume *= static_cast<std::size_t>(hi[static_cast<std::size_t>(a)] - lo[static_cast<std::size_t>(a)] + 1);
    if (++epoch_ == 0) {
      std::fill(stamp_.begin(), stamp_.end(), 0);
      epoch_ = 1;
    }
    Site corner = origin();
    for (int a = 0; a < d_; ++a) corner.x[static_cast<std::size_t>(a)] = lo[static_cast<std::size_t>(a)];
    stack_.assign(1, index(corner));
    stamp_[static_cast<std::size_t>(stack_[0])] = epoch_;
    std::size_t reached = 0;
    while (!stack_.empty()) {
      const int u = stack_.back();
      stack_.pop_back();
      ++reached;
      const Site su = site(u);
      for (int a = 0; a < d_; ++a) {
        for (int step : {-1, 1}) {
          const int x = su[a] + step;
          if (x < lo[static_cast<std::size_t>(a)] || x > hi[static_cast<std::size_t>(a)]) continue;
          const int v = u + step * stride_[static_cast<std::size_t>(a)];
          if (member[static_cast<std::size_t>(v)] || stamp_[static_cast<std::size_t>(v)] == epoch_) continue;
          stamp_[static_cast<std::size_t>(v)] = epoch_;
          stack_.push_back(v);
        }
      }
    }
    return reached + cells.size() == volume;
  }

 private:
  int d_;
  int r_;
  int side_;
  std::vector<int> stride_;
  std::size_t size_ = 0;
  std::vector<int> offsets_;
  std::vector<std::uint8_t> inner_;
  std::vector<std::uint32_t> stamp_;
  std::uint32_t epoch_ = 0;
  std::vector<int> stack_;
};

// Redelmeier-style growth of every connected set containing the root.
// Visitor gets the grower and reads the current set from it.
class Grower {
 public:
  Grower(const AnimalSearch& s)
      : grid_(s.dimension, s.box ? std::min(s.box->radius(), s.max_cells - 1) : s.max_cells - 1),
        cap_(s.max_cells),
        budget_(s.budget) {
    if (s.dimension < 2 || s.dimension > kMaxDimension) throw std::invalid_argument("d: unsupported dimension");
    if (s.max_cells < 1) throw std::invalid_argument("max_cells: must be >= 1");
    if (s.box && s.box->dimension() != s.dimension) throw std::invalid_argument("box dimension mismatch");
    grid_.shuffle_offsets(s.order_seed);
    member_.assign(grid_.size(), 0);
    seen_.assign(grid_.size(), 0);
    weight_.assign(grid_.size(), 0.0);
  }

  Grid& grid() { return grid_; }
  void set_weight(const Site& s, double w) { weight_[static_cast<std::size_t>(grid_.index(s))] = w; }

  std::span<const Site> sites() const { return sites_; }
  int boundary() const { return boundary_; }
  double weight() const { return weight_sum_; }
  bool hole_free() { return grid_.hole_free(cells_, member_); }

  template <typename Visitor>
  void run(Visitor&& visit) {
    const int root = grid_.index(origin());
    seen_[static_cast<std::size_t>(root)] = 1;
    std::vector<int> untried{root};
    grow(untried, visit);
  }

 private:
  template <typename Visitor>
  void grow(std::vector<int> untried, Visitor& visit) {
    const int d2 = 2 * grid_.dimension();
    while (!untried.empty()) {
      const int c = untried.back();
      untried.pop_back();
      int inside = 0;
      for (int off : grid_.offsets()) inside += member_[static_cast<std::size_t>(c + off)];
      member_[static_cast<std::size_t>(c)] = 1;
      cells_.push_back(c);
      sites_.push_back(grid_.site(c));
      boundary_ += d2 - 2 * inside;
      weight_sum_ += weight_[static_cast<std::size_t>(c)];
      if (++grown_ > budget_) throw BudgetExceeded("animal enumeration exceeded its budget of " + std::to_string(budget_) + " sets");
      visit(*this);
      if (static_cast<int>(cells_.size()) < cap_) {
        std::vector<int> next = untried;
        const std::size_t mark = next.size();
        for (int off : grid_.offsets()) {
          const int n = c + off;
          if (grid_.inner(n) && !seen_[static_cast<std::size_t>(n)]) {
            seen_[static_cast<std::size_t>(n)] = 1;
            next.push_back(n);
          }
        }
        const std::vector<int> added(next.begin() + static_cast<std::ptrdiff_t>(mark), next.end());
        grow(std::move(next), visit);
        for (int n : added) seen_[static_cast<std::size_t>(n)] = 0;
      }
      weight_sum_ -= weight_[static_cast<std::size_t>(c)];
      boundary_ -= d2 - 2 * inside;
      sites_.pop_back();
      cells_.pop_back();
      member_[static_cast<std::size_t>(c)] = 0;
    }
  }

  Grid grid_;
  int cap_;
  std::uint64_t budget_;
  std::uint64_t grown_ = 0;
  std::vector<std::uint8_t> member_;
  std::vector<std::uint8_t> seen_;
  std::vector<double> weight_;
  std::vector<int> cells_;
  std::vector<Site> sites_;
  int boundary_ = 0;
  double weight_sum_ = 0.0;
};

void require_ising_field(const DisorderField& h) {
  if (h.kind() != ModelKind::ising) throw std::invalid_argument("kind: animal sums use Ising fields");
}

AnimalSup make_sup(const DisorderField& h, SiteSet a) {
  AnimalSup out;
  out.field = field_sum(h, a);
  out.boundary = static_cast<int>(a.boundary_size());
  out.value = out.field / out.boundary;
  out.argmax = std::move(a);
  return out;
}

AnimalSup exact_sup(const DisorderField& h, const SupOptions& o) {
  const LatticeBox& box = h.box();
  AnimalSearch search;
  search.dimension = box.dimension();
  search.box = box;
  search.max_cells = o.max_cells > 0 ? o.max_cells : static_cast<int>(box.size());
  search.budget = o.budget;
  search.order_seed = o.order_seed;
  Grower grower(search);
  for (std::size_t i = 0; i < box.size(); ++i) grower.set_weight(box.site(i), h[i]);
  double best = -std::numeric_limits<double>::infinity();
  std::vector<Site> argmax;
  grower.run([&](Grower& g) {
    const double ratio = g.weight() / g.boundary();
    if (ratio > best && g.hole_free()) {
      best = ratio;
      argmax.assign(g.sites().begin(), g.sites().end());
    }
  });
  return make_sup(h, SiteSet(box.dimension(), argmax));
}

struct Rect {
  std::array<int, 3> lo{};
  std::array<int, 3> hi{};
};

SiteSet rect_sites(int d, int n, const Rect& r) {
  std::vector<Site> out;
  Site s = origin();
  std::function<void(int)> rec = [&](int a) {
    if (a == d) {
      out.push_back(s);
      return;
    }
    for (int x = r.lo[static_cast<std::size_t>(a)]; x <= r.hi[static_cast<std::size_t>(a)]; ++x) {
      s.x[static_cast<std::size_t>(a)] = x - n;
      rec(a + 1);
    }
  };
  rec(0);
  return SiteSet(d, out);
}

// Best extension along the first axis: columns c[x] with per-cell cost,
// x ranges over [lo, n] U [n, hi] with the column n always included.
struct Extension {
  double value;
  int lo;
  int hi;
};

Extension best_extension(const std::vector<double>& col, int n, double cost) {
  const int side = static_cast<int>(col.size());
  double run = col[static_cast<std::size_t>(n)] - cost;
  double right = run;
  int hi = n;
  for (int x = n + 1; x < side; ++x) {
    run += col[static_cast<std::size_t>(x)] - cost;
    if (run > right) {
      right = run;
      hi = x;
    }
  }
  run = 0.0;
  double left = 0.0;
  int lo = n;
  for (int x = n - 1; x >= 0; --x) {
    run += col[static_cast<std::size_t>(x)] - cost;
    if (run > left) {
      left = run;
      lo = x;
    }
  }
  return {right + left, lo, hi};
}

// max over rectangles containing the centre of H_R - lambda |dR|.
std::pair<double, Rect> parametric_rectangle(const DisorderField& h, double lambda) {
  const int d = h.box().dimension();
  const int n = h.box().radius();
  const int side = h.box().side();
  const auto at = [&](int x, int y, int z) {
    const std::size_t i = d == 2 ? static_cast<std::size_t>(x * side + y)
                                 : static_cast<std::size_t>((x * side + y) * side + z);
    return h[i];
  };
  double best = -std::numeric_limits<double>::infinity();
  Rect arg;
  std::vector<double> col(static_cast<std::size_t>(side));
  if (d == 2) {
    for (int ylo = n; ylo >= 0; --ylo) {
      std::fill(col.begin(), col.end(), 0.0);
      for (int y = ylo; y < n; ++y)
        for (int x = 0; x < side; ++x) col[static_cast<std::size_t>(x)] += at(x, y, 0);
      for (int yhi = n; yhi < side; ++yhi) {
        for (int x = 0; x < side; ++x) col[static_cast<std::size_t>(x)] += at(x, yhi, 0);
        const int b = yhi - ylo + 1;
        const Extension e = best_extension(col, n, 2.0 * lambda);
        const double value = e.value - 2.0 * lambda * b;
        if (value > best) {
          best = value;
          arg.lo = {e.lo, ylo, 0};
          arg.hi = {e.hi, yhi, 0};
        }
      }
    }
    return {best, arg};
  }
  // d = 3: per-x prefix sums over (y, z).
  const int p = side + 1;
  std::vector<double> prefix(static_cast<std::size_t>(side) * static_cast<std::size_t>(p * p), 0.0);
  const auto pre = [&](int x, int y, int z) -> double& {
    return prefix[(static_cast<std::size_t>(x) * static_cast<std::size_t>(p) + static_cast<std::size_t>(y)) *
                      static_cast<std::size_t>(p) + static_cast<std::size_t>(z)];
  };
  for (int x = 0; x < side; ++x)
    for (int y = 0; y < side; ++y)
      for (int z = 0; z < side; ++z)
        pre(x, y + 1, z + 1) = at(x, y, z) + pre(x, y, z + 1) + pre(x, y + 1, z) - pre(x, y, z);
  for (int ylo = 0; ylo <= n; ++ylo)
    for (int yhi = n; yhi < side; ++yhi)
      for (int zlo = 0; zlo <= n; ++zlo)
        for (int zhi = n; zhi < side; ++zhi) {
          for (int x = 0; x < side; ++x) {
            col[static_cast<std::size_t>(x)] =
                pre(x, yhi + 1, zhi + 1) - pre(x, ylo, zhi + 1) - pre(x, yhi + 1, zlo) + pre(x, ylo, zlo);
          }
          const int b = yhi - ylo + 1;
          const int c = zhi - zlo + 1;
          const Extension e = best_extension(col, n, 2.0 * lambda * (b + c));
          const double value = e.value - 2.0 * lambda * b * c;
          if (value > best) {
            best = value;
            arg.lo = {e.lo, ylo, zlo};
            arg.hi = {e.hi, yhi, zhi};
          }
        }
  return {best, arg};
}

// Dinkelbach iteration on the ratio.
AnimalSup rectangle_sup(const DisorderField& h) {
  const int d = h.box().dimension();
  if (d != 2 && d != 3) throw std::invalid_argument("d: rectangles mode supports d = 2 and 3");
  const int n = h.box().radius();
  AnimalSup best = make_sup(h, SiteSet(d, {origin()}));
  for (int iteration = 0; iteration < 200; ++iteration) {
    const auto [value, rect] = parametric_rectangle(h, best.value);
    if (!(value > 1e-12 * (1.0 + std::abs(best.field)))) break;
    AnimalSup next = make_sup(h, rect_sites(d, n, rect));
    if (!(next.value > best.value)) break;
    best = std::move(next);
  }
  return best;
}

class Annealer {
 public:
  Annealer(const DisorderField& h, const SupOptions& o)
      : h_(h), o_(o), grid_(h.box().dimension(), h.box().radius()) {
    member_.assign(grid_.size(), 0);
    weight_.assign(grid_.size(), 0.0);
    for (std::size_t i = 0; i < h.box().size(); ++i) weight_[static_cast<std::size_t>(grid_.index(h.box().site(i)))] = h[i];
    root_ = grid_.index(origin());
  }

  AnimalSup run(const AnimalSup& start, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    load(start.argmax);
    AnimalSup best = start;
    double ratio = field_ / boundary_;
    const double cool = o_.steps > 1 ? std::pow(o_.final_temperature / o_.initial_temperature, 1.0 / (o_.steps - 1)) : 1.0;
    double temp = o_.initial_temperature;
    for (int step = 0; step < o_.steps; ++step, temp *= cool) {
      const int c = cells_[rng() % cells_.size()];
      const bool add = (rng() & 1) != 0;
      int target = c;
      if (add) {
        target = c + grid_.offsets()[rng() % grid_.offsets().size()];
        if (!grid_.inner(target) || member_[static_cast<std::size_t>(target)]) continue;
        if (o_.max_cells > 0 && static_cast<int>(cells_.size()) >= o_.max_cells) continue;
      } else if (c == root_) {
        continue;
      }
      const int inside = neighbours_in(target);
      const int d2 = 2 * grid_.dimension();
      const double w = weight_[static_cast<std::size_t>(target)];
      const double new_field = add ? field_ + w : field_ - w;
      const int new_boundary = add ? boundary_ + d2 - 2 * inside : boundary_ - d2 + 2 * inside;
      const double new_ratio = new_field / new_boundary;
      const double delta = new_ratio - ratio;
      if (delta < 0.0 && !(uniform01(rng) < std::exp(delta / temp))) continue;
      toggle(target, add);
      if (!(add ? true : connected()) || !grid_.hole_free(cells_, member_)) {
        toggle(target, !add);
        continue;
      }
      field_ = new_field;
      boundary_ = new_boundary;
      ratio = new_ratio;
      if (ratio > best.value) {
        std::vector<Site> sites;
        for (int cell : cells_) sites.push_back(grid_.site(cell));
        best = make_sup(h_, SiteSet(grid_.dimension(), sites));
      }
    }
    return best;
  }

 private:
  int neighbours_in(int c) const {
    int k = 0;
    for (int off : grid_.offsets()) k += member_[static_cast<std::size_t>(c + off)];
    return k;
  }

  void toggle(int c, bool on) {
    member_[static_cast<std::size_t>(c)] = on;
    if (on) {
      cells_.push_back(c);
    } else {
      cells_.erase(std::find(cells_.begin(), cells_.end(), c));
    }
  }

  bool connected() {
    std::vector<std::uint8_t> seen(grid_.size(), 0);
    std::vector<int> stack{root_};
    seen[static_cast<std::size_t>(root_)] = 1;
    std::size_t count = 0;
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      ++count;
      for (int off : grid_.offsets()) {
        const int v = u + off;
        if (member_[static_cast<std::size_t>(v)] && !seen[static_cast<std::size_t>(v)]) {
          seen[static_cast<std::size_t>(v)] = 1;
          stack.push_back(v);
        }
      }
    }
    return count == cells_.size();
  }

  void load(const SiteSet& a) {
    for (int c : cells_) member_[static_cast<std::size_t>(c)] = 0;
    cells_.clear();
    field_ = 0.0;
    for (const Site& s : a) {
      const int c = grid_.index(s);
      member_[static_cast<std::size_t>(c)] = 1;
      cells_.push_back(c);
      field_ += weight_[static_cast<std::size_t>(c)];
    }
    boundary_ = static_cast<int>(a.boundary_size());
  }

  const DisorderField& h_;
  SupOptions o_;
  Grid grid_;
  std::vector<std::uint8_t> member_;
  std::vector<double> weight_;
  std::vector<int> cells_;
  int root_;
  double field_ = 0.0;
  int boundary_ = 0;
};

AnimalSup anneal_sup(const DisorderField& h, const SupOptions& o) {
  if (o.steps < 0 || o.restarts < 1) throw std::invalid_argument("anneal: need restarts >= 1 and steps >= 0");
  if (!(o.initial_temperature > 0.0 && o.final_temperature > 0.0)) throw std::invalid_argument("anneal: temperatures must be > 0");
  AnimalSup start = h.box().dimension() <= 3 ? rectangle_sup(h) : make_sup(h, SiteSet(h.box().dimension(), {origin()}));
  if (o.max_cells > 0 && static_cast<int>(start.argmax.size()) > o.max_cells) {
    start = make_sup(h, SiteSet(h.box().dimension(), {origin()}));
  }
  AnimalSup best = start;
  Annealer annealer(h, o);
  for (int r = 0; r < o.restarts; ++r) {
    AnimalSup found = annealer.run(start, splitmix64(o.seed + static_cast<std::uint64_t>(r)));
    if (found.value > best.value) best = std::move(found);
  }
  return best;
}

}  // namespace

int max_enumeration_cells(int d) {
  switch (d) {
    case 2: return 10;
    case 3: return 7;
    case 4: return 5;
    default: throw std::invalid_argument("d: unsupported dimension");
  }
}

void for_each_animal(const AnimalSearch& search, const std::function<void(std::span<const Site>, int)>& visit) {
  Grower grower(search);
  grower.run([&](Grower& g) {
    if (search.all_connected || g.hole_free()) visit(g.sites(), g.boundary());
  });
}

std::vector<SiteSet> enumerate_animals(int d, int max_cells) {
  if (max_cells > max_enumeration_cells(d)) {
    throw BudgetExceeded("max_cells: " + std::to_string(max_cells) + " exceeds the enumeration cap " +
                         std::to_string(max_enumeration_cells(d)) + " for d = " + std::to_string(d));
  }
  AnimalSearch search;
  search.dimension = d;
  search.max_cells = max_cells;
  std::vector<SiteSet> out;
  for_each_animal(search, [&](std::span<const Site> s, int) { out.emplace_back(d, std::vector<Site>(s.begin(), s.end())); });
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<SiteSet> enumerate_box_animals(const LatticeBox& box, int max_cells) {
  AnimalSearch search;
  search.dimension = box.dimension();
  search.max_cells = max_cells;
  search.box = box;
  std::vector<SiteSet> out;
  for_each_animal(search, [&](std::span<const Site> s, int) {
    out.emplace_back(box.dimension(), std::vector<Site>(s.begin(), s.end()));
  });
  std::sort(out.begin(), out.end());
  return out;
}

int cell_cap_for_boundary(int d, int n) {
  if (n < 2 * d) return 0;
  const double cap = std::pow(static_cast<double>(n) / (2.0 * d), static_cast<double>(d) / (d - 1));
  return static_cast<int>(std::floor(cap + 1e-9));
}

std::map<int, std::uint64_t> count_by_boundary(int d, int max_boundary) {
  std::map<int, std::uint64_t> counts;
  const int cap = cell_cap_for_boundary(d, max_boundary);
  if (cap == 0) return counts;
  AnimalSearch search;
  search.dimension = d;
  search.max_cells = cap;
  for_each_animal(search, [&](std::span<const Site>, int boundary) {
    if (boundary <= max_boundary) ++counts[boundary];
  });
  return counts;
}

double log_count_bound(int n, int d) {
  if (n < 1) throw std::invalid_argument("n: must be >= 1");
  return d * std::log(2.0 * d * n) + 2.0 * n * std::log(16.0 * d * d * d);
}

double count_bound(int n, int d) { return std::exp(log_count_bound(n, d)); }

int dyadic_class(int boundary) {
  if (boundary < 1) throw std::invalid_argument("boundary: must be >= 1");
  return std::bit_width(static_cast<unsigned>(boundary)) - 1;
}

double field_sum(const DisorderField& h, const SiteSet& a) {
  require_ising_field(h);
  double sum = 0.0;
  for (const Site& s : a) {
    if (!h.box().contains(s)) throw std::invalid_argument("field_sum: set leaves the field's box");
    sum += h[h.box().index(s)];
  }
  return sum;
}

std::string to_string(SupMode mode) {
  switch (mode) {
    case SupMode::exact: return "exact";
    case SupMode::rectangles: return "rectangles";
    case SupMode::anneal: return "anneal";
  }
  return "?";
}

SupMode parse_sup_mode(const std::string& name) {
  if (name == "exact") return SupMode::exact;
  if (name == "rectangles") return SupMode::rectangles;
  if (name == "anneal") return SupMode::anneal;
  throw std::invalid_argument("mode: expected exact, rectangles or anneal, got '" + name + "'");
}

AnimalSup greedy_animal_sup(const DisorderField& h, SupMode mode, const SupOptions& options) {
  require_ising_field(h);
  switch (mode) {
    case SupMode::exact: return exact_sup(h, options);
    case SupMode::rectangles: return rectangle_sup(h);
    case SupMode::anneal: return anneal_sup(h, options);
  }
  throw std::invalid_argument("mode: unknown");
}

std::vector<ScalingRow> scaling_experiment(const std::vector<int>& dimensions, const std::vector<int>& radii,
                                           int replicas, std::uint64_t seed, SupMode mode, int workers,
                                           const SupOptions& options) {
  if (replicas < 2) throw std::invalid_argument("replicas: need at least 2");
  std::vector<ScalingRow> rows;
  for (int d : dimensions) {
    for (int n : radii) {
      const ModelParams p = ModelParams::ising(d, n, 1.0, 1.0);
      ScalingRow row;
      row.dimension = d;
      row.radius = n;
      row.mode = mode;
      row.samples = parallel_map(static_cast<std::size_t>(replicas), workers, [&](std::size_t r) {
        return greedy_animal_sup(sample_field(p, seed + r), mode, options).value;
      });
      row.value = mean_estimate(row.samples);
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

}  // namespace peierls
