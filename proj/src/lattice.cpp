#include "peierls/lattice.hpp"

#include <algorithm>
#include <deque>
#include <sstream>
#include <stdexcept>

namespace peierls {

Site make_site(std::initializer_list<int> coords) {
  if (coords.size() > static_cast<std::size_t>(kMaxDimension)) {
    throw std::invalid_argument("make_site: too many coordinates");
  }
  Site s;
  std::copy(coords.begin(), coords.end(), s.x.begin());
  return s;
}

int l1_distance(const Site& a, const Site& b, int dimension) {
  int dist = 0;
  for (int i = 0; i < dimension; ++i) dist += std::abs(a[i] - b[i]);
  return dist;
}

std::string to_string(const Site& s, int dimension) {
  std::string out = "(";
  for (int i = 0; i < dimension; ++i) {
    if (i) out += ',';
    out += std::to_string(s[i]);
  }
  out += ')';
  return out;
}

std::size_t SiteHash::operator()(const Site& s) const noexcept {
  std::uint64_t h = 0x9e3779b97f4a7c15ULL;
  for (int c : s.x) {
    h ^= static_cast<std::uint64_t>(static_cast<std::uint32_t>(c)) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return static_cast<std::size_t>(h);
}

LatticeBox::LatticeBox(int dimension, int radius) : dimension_(dimension), radius_(radius), size_(1) {
  if (dimension < 2 || dimension > kMaxDimension) {
    throw std::invalid_argument("LatticeBox: dimension must be in [2, " + std::to_string(kMaxDimension) + "]");
  }
  if (radius < 0) throw std::invalid_argument("LatticeBox: radius must be >= 0");
  for (int i = 0; i < dimension; ++i) size_ *= static_cast<std::size_t>(side());
}

bool LatticeBox::contains(const Site& s) const {
  for (int i = 0; i < dimension_; ++i) {
    if (s[i] < -radius_ || s[i] > radius_) return false;
  }
  for (int i = dimension_; i < kMaxDimension; ++i) {
    if (s[i] != 0) return false;
  }
  return true;
}

std::size_t LatticeBox::index(const Site& s) const {
  std::size_t idx = 0;
  const auto L = static_cast<std::size_t>(side());
  for (int i = 0; i < dimension_; ++i) idx = idx * L + static_cast<std::size_t>(s[i] + radius_);
  return idx;
}

Site LatticeBox::site(std::size_t index) const {
  Site s;
  const auto L = static_cast<std::size_t>(side());
  for (int i = dimension_ - 1; i >= 0; --i) {
    s[i] = static_cast<int>(index % L) - radius_;
    index /= L;
  }
  return s;
}

std::vector<Site> box_sites(const LatticeBox& box) {
  std::vector<Site> out;
  out.reserve(box.size());
  for (std::size_t i = 0; i < box.size(); ++i) out.push_back(box.site(i));
  return out;
}

BoxGraph::BoxGraph(const LatticeBox& b) : box(b), neighbors(b.size()), exterior_bonds(b.size(), 0) {
  const int d = box.dimension();
  for (std::size_t i = 0; i < box.size(); ++i) {
    const Site s = box.site(i);
    for (int axis = 0; axis < d; ++axis) {
      for (int step : {-1, 1}) {
        const Site t = shifted(s, axis, step);
        if (box.contains(t)) {
          neighbors[i].push_back(static_cast<int>(box.index(t)));
        } else {
          ++exterior_bonds[i];
        }
      }
    }
    bond_count += neighbors[i].size();
  }
  bond_count /= 2;
}

namespace {

using Members = std::unordered_set<Site, SiteHash>;

std::vector<Edge> compute_boundary(int d, const std::vector<Site>& sites, const Members& members) {
  std::vector<Edge> out;
  for (const Site& u : sites) {
    for (int axis = 0; axis < d; ++axis) {
      for (int step : {-1, 1}) {
        const Site v = shifted(u, axis, step);
        if (!members.count(v)) out.push_back({u, v});
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool compute_connected(int d, const std::vector<Site>& sites, const Members& members) {
  if (sites.empty()) return false;
  Members seen{sites.front()};
  std::deque<Site> queue{sites.front()};
  while (!queue.empty()) {
    const Site u = queue.front();
    queue.pop_front();
    for (int axis = 0; axis < d; ++axis) {
      for (int step : {-1, 1}) {
        const Site v = shifted(u, axis, step);
        if (members.count(v) && seen.insert(v).second) queue.push_back(v);
      }
    }
  }
  return seen.size() == sites.size();
}

// Complement cells of A that are cut off from infinity. The search runs on the
// bounding box of A padded by one cell; the padding shell is connected and
// lies in the unbounded complement component.
std::vector<Site> finite_complement(int d, const std::vector<Site>& sites) {
  if (sites.empty()) return {};
  Site lo = sites.front();
  Site hi = sites.front();
  for (const Site& s : sites) {
    for (int i = 0; i < d; ++i) {
      lo[i] = std::min(lo[i], s[i]);
      hi[i] = std::max(hi[i], s[i]);
    }
  }
  std::array<std::size_t, kMaxDimension> extent{};
  std::size_t volume = 1;
  for (int i = 0; i < d; ++i) {
    lo[i] -= 1;
    hi[i] += 1;
    extent[i] = static_cast<std::size_t>(hi[i] - lo[i] + 1);
    volume *= extent[i];
  }
  auto cell_index = [&](const Site& s) {
    std::size_t idx = 0;
    for (int i = 0; i < d; ++i) idx = idx * extent[i] + static_cast<std::size_t>(s[i] - lo[i]);
    return idx;
  };
  auto cell_site = [&](std::size_t idx) {
    Site s;
    for (int i = d - 1; i >= 0; --i) {
      s[i] = lo[i] + static_cast<int>(idx % extent[i]);
      idx /= extent[i];
    }
    return s;
  };
  auto inside_bbox = [&](const Site& s) {
    for (int i = 0; i < d; ++i) {
      if (s[i] < lo[i] || s[i] > hi[i]) return false;
    }
    return true;
  };

  // 0 = unvisited complement, 1 = member of A, 2 = reached from infinity
  std::vector<std::uint8_t> state(volume, 0);
  for (const Site& s : sites) state[cell_index(s)] = 1;
  std::vector<std::size_t> stack{0};
  state[0] = 2;
  while (!stack.empty()) {
    const Site u = cell_site(stack.back());
    stack.pop_back();
    for (int axis = 0; axis < d; ++axis) {
      for (int step : {-1, 1}) {
        const Site v = shifted(u, axis, step);
        if (!inside_bbox(v)) continue;
        const std::size_t vi = cell_index(v);
        if (state[vi] == 0) {
          state[vi] = 2;
          stack.push_back(vi);
        }
      }
    }
  }
  std::vector<Site> holes;
  for (std::size_t i = 0; i < volume; ++i) {
    if (state[i] == 0) holes.push_back(cell_site(i));
  }
  return holes;
}

}  // namespace

SiteSet::SiteSet(int dimension) : SiteSet(dimension, {}) {}

SiteSet::SiteSet(int dimension, std::vector<Site> sites) : dimension_(dimension), sites_(std::move(sites)) {
  if (dimension < 1 || dimension > kMaxDimension) throw std::invalid_argument("SiteSet: bad dimension");
  std::sort(sites_.begin(), sites_.end());
  sites_.erase(std::unique(sites_.begin(), sites_.end()), sites_.end());
  members_.reserve(sites_.size());
  members_.insert(sites_.begin(), sites_.end());
  boundary_ = compute_boundary(dimension_, sites_, members_);
  connected_ = compute_connected(dimension_, sites_, members_);
  simply_connected_ = connected_ && finite_complement(dimension_, sites_).empty();
}

std::string SiteSet::to_text() const {
  std::string out;
  for (const Site& s : sites_) {
    out += to_string(s, dimension_);
    out += '\n';
  }
  return out;
}

SiteSet SiteSet::from_text(int dimension, std::string_view text) {
  std::vector<Site> sites;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    std::string cleaned;
    for (char c : line) cleaned += (c == '(' || c == ')' || c == ',') ? ' ' : c;
    std::istringstream fields(cleaned);
    Site s;
    int count = 0;
    int value = 0;
    while (fields >> value) {
      if (count >= dimension) throw std::invalid_argument("SiteSet::from_text: too many coordinates in '" + line + "'");
      s[count++] = value;
    }
    if (count == 0) continue;
    if (count != dimension) throw std::invalid_argument("SiteSet::from_text: expected " + std::to_string(dimension) + " coordinates in '" + line + "'");
    sites.push_back(s);
  }
  return SiteSet(dimension, std::move(sites));
}

std::vector<Edge> edge_boundary(const SiteSet& a) { return a.boundary(); }

bool is_connected(const SiteSet& a) { return a.connected(); }

bool is_simply_connected(const SiteSet& a) { return a.simply_connected(); }

SiteSet fill(const SiteSet& a) {
  if (!a.connected()) throw std::invalid_argument("fill: input set is not connected");
  std::vector<Site> sites = a.sites();
  std::vector<Site> holes = finite_complement(a.dimension(), sites);
  sites.insert(sites.end(), holes.begin(), holes.end());
  return SiteSet(a.dimension(), std::move(sites));
}

SiteSet symmetric_difference(const SiteSet& a, const SiteSet& b) {
  if (a.dimension() != b.dimension()) throw std::invalid_argument("symmetric_difference: dimension mismatch");
  std::vector<Site> out;
  std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return SiteSet(a.dimension(), std::move(out));
}

SiteSet set_union(const SiteSet& a, const SiteSet& b) {
  if (a.dimension() != b.dimension()) throw std::invalid_argument("set_union: dimension mismatch");
  std::vector<Site> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return SiteSet(a.dimension(), std::move(out));
}

std::vector<std::size_t> box_indices(const SiteSet& a, const LatticeBox& box) {
  if (a.dimension() != box.dimension()) throw std::invalid_argument("box_indices: dimension mismatch");
  std::vector<std::size_t> out;
  out.reserve(a.size());
  for (const Site& s : a) {
    if (!box.contains(s)) throw std::invalid_argument("box_indices: site " + to_string(s, a.dimension()) + " lies outside the box");
    out.push_back(box.index(s));
  }
  return out;
}

bool is_subset(const SiteSet& a, const LatticeBox& box) {
  return a.dimension() == box.dimension() &&
         std::all_of(a.begin(), a.end(), [&](const Site& s) { return box.contains(s); });
}

}  // namespace peierls
