#include "dfd/placement.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <set>
#include <tuple>

#include "dfd/error.hpp"
#include "dfd/text.hpp"

namespace dfd {

namespace {
constexpr double kEdgeTol = 1e-9;
}

OccupancyGrid::OccupancyGrid(const Box3& bounds, double resolution)
    : bounds_(bounds), resolution_(resolution) {
  if (!(resolution > 0)) throw DomainError("grid resolution must be > 0");
  if (bounds.isEmpty()) throw DomainError("grid bounds are empty");
  Vec3 extent = bounds.sizes();
  for (int a = 0; a < 3; ++a) {
    int n = static_cast<int>(std::ceil(extent[a] / resolution - kEdgeTol));
    dims_[a] = std::max(n, 1);
    cell_[a] = extent[a] / dims_[a];
  }
  cells_.assign(static_cast<std::size_t>(dims_.prod()), 0);
}

std::size_t OccupancyGrid::occupied_count() const {
  return static_cast<std::size_t>(std::count(cells_.begin(), cells_.end(), 1));
}

Vec3 OccupancyGrid::cell_centre(int i, int j, int k) const {
  return bounds_.min() + (Vec3(i, j, k).array() + 0.5).matrix().cwiseProduct(cell_);
}

bool OccupancyGrid::contains(const Box3& box) const {
  Vec3 tol = cell_ * kEdgeTol;
  return (box.min().array() >= (bounds_.min() - tol).array()).all() &&
         (box.max().array() <= (bounds_.max() + tol).array()).all();
}

CellRange OccupancyGrid::touched_cells(const Box3& box) const {
  CellRange r;
  for (int a = 0; a < 3; ++a) {
    double lo = (box.min()[a] - bounds_.min()[a]) / cell_[a];
    double hi = (box.max()[a] - bounds_.min()[a]) / cell_[a];
    int ilo = static_cast<int>(std::floor(lo + kEdgeTol));
    int ihi = static_cast<int>(std::ceil(hi - kEdgeTol)) - 1;
    if (ihi < ilo) ihi = ilo;
    r.lo[a] = std::clamp(ilo, 0, dims_[a] - 1);
    r.hi[a] = std::clamp(ihi, 0, dims_[a] - 1);
  }
  return r;
}

bool OccupancyGrid::is_free(const Box3& box) const {
  if (!contains(box)) return false;
  auto r = touched_cells(box);
  for (int i = r.lo[0]; i <= r.hi[0]; ++i)
    for (int j = r.lo[1]; j <= r.hi[1]; ++j)
      for (int k = r.lo[2]; k <= r.hi[2]; ++k)
        if (cells_[flat(i, j, k)]) return false;
  return true;
}

void OccupancyGrid::insert(const Box3& box) {
  if (!contains(box)) throw OutOfBounds("box lies outside the occupancy grid");
  auto r = touched_cells(box);
  for (int i = r.lo[0]; i <= r.hi[0]; ++i)
    for (int j = r.lo[1]; j <= r.hi[1]; ++j)
      for (int k = r.lo[2]; k <= r.hi[2]; ++k) cells_[flat(i, j, k)] = 1;
}

void OccupancyGrid::write_csv(std::ostream& os) const {
  os << "i,j,k,x,y,z\n";
  for (int i = 0; i < dims_[0]; ++i)
    for (int j = 0; j < dims_[1]; ++j)
      for (int k = 0; k < dims_[2]; ++k) {
        if (!occupied(i, j, k)) continue;
        Vec3 c = cell_centre(i, j, k);
        os << i << ',' << j << ',' << k << ',' << text::format_double(c.x()) << ','
           << text::format_double(c.y()) << ',' << text::format_double(c.z()) << '\n';
      }
}

OccupancyGrid insert_component(OccupancyGrid grid, const SpacecraftConfig& config,
                               const ComponentNode& node) {
  grid.insert(body_box(config, node));
  return grid;
}

namespace {

bool overlaps_with_volume(const Box3& a, const Box3& b) {
  for (int ax = 0; ax < 3; ++ax) {
    double lo = std::max(a.min()[ax], b.min()[ax]);
    double hi = std::min(a.max()[ax], b.max()[ax]);
    if (hi - lo <= 1e-12) return false;
  }
  return true;
}

std::vector<std::size_t> top_level_indices(const SpacecraftConfig& config) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < config.components.size(); ++i) {
    if (is_top_level(config, config.components[i])) out.push_back(i);
  }
  return out;
}

NodeRef ref_of(const ComponentNode& n) { return {n.id, n.instance}; }

}  // namespace

std::vector<std::pair<NodeRef, NodeRef>> detect_overlaps(const SpacecraftConfig& config) {
  auto top = top_level_indices(config);
  std::vector<Box3> boxes;
  boxes.reserve(top.size());
  for (auto i : top) boxes.push_back(body_box(config, config.components[i]));

  std::vector<std::pair<NodeRef, NodeRef>> out;
  for (std::size_t a = 0; a < top.size(); ++a) {
    for (std::size_t b = a + 1; b < top.size(); ++b) {
      if (!overlaps_with_volume(boxes[a], boxes[b])) continue;
      auto ra = ref_of(config.components[top[a]]);
      auto rb = ref_of(config.components[top[b]]);
      if (rb < ra) std::swap(ra, rb);
      out.emplace_back(ra, rb);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

PlacementOutcome repair_positions(const SpacecraftConfig& config, double grid_resolution) {
  PlacementOutcome outcome;
  auto pairs = detect_overlaps(config);
  if (pairs.empty()) {
    outcome.config = config;
    return outcome;
  }

  std::set<NodeRef> involved;
  for (const auto& [a, b] : pairs) {
    involved.insert(a);
    involved.insert(b);
  }

  SpacecraftConfig repaired = config;
  OccupancyGrid grid(interior_box(config), grid_resolution);
  auto top = top_level_indices(repaired);
  auto reject = [&](std::string why) {
    outcome.config.reset();
    outcome.reason = "placement";
    outcome.detail = std::move(why);
    outcome.moved.clear();
    return outcome;
  };

  std::vector<std::size_t> to_place;
  for (auto i : top) {
    const auto& n = repaired.components[i];
    if (involved.count(ref_of(n))) {
      to_place.push_back(i);
      continue;
    }
    Box3 box = body_box(repaired, n);
    if (!grid.contains(box)) return reject("component " + std::to_string(n.id) + " lies outside the parent interior");
    grid.insert(box);
  }
  std::sort(to_place.begin(), to_place.end(), [&](std::size_t a, std::size_t b) {
    return ref_of(repaired.components[a]) < ref_of(repaired.components[b]);
  });

  const auto& dims = grid.dims();
  for (auto idx : to_place) {
    auto& node = repaired.components[idx];
    Box3 original = body_box(repaired, node);
    if (grid.is_free(original)) {
      grid.insert(original);
      continue;
    }

    // (squared distance, cell index) so ties resolve lexicographically.
    using Candidate = std::tuple<double, int, int, int>;
    std::vector<Candidate> candidates;
    auto attached = attached_panel(repaired, node);
    if (attached) {
      auto f = panel_frame(*attached, repaired.parent_dims());
      for (int iu = 0; iu < dims[f.u_axis]; ++iu)
        for (int iv = 0; iv < dims[f.v_axis]; ++iv) {
          Eigen::Vector3i c = Eigen::Vector3i::Zero();
          c[f.u_axis] = iu;
          c[f.v_axis] = iv;
          Vec3 p = grid.cell_centre(c[0], c[1], c[2]);
          double du = p[f.u_axis] - node.position.x();
          double dv = p[f.v_axis] - node.position.y();
          candidates.emplace_back(du * du + dv * dv, iu, iv, 0);
        }
    } else {
      for (int i = 0; i < dims[0]; ++i)
        for (int j = 0; j < dims[1]; ++j)
          for (int k = 0; k < dims[2]; ++k) {
            double d2 = (grid.cell_centre(i, j, k) - node.position).squaredNorm();
            candidates.emplace_back(d2, i, j, k);
          }
    }
    std::sort(candidates.begin(), candidates.end());

    bool placed = false;
    for (const auto& [d2, a, b, c] : candidates) {
      ComponentNode trial = node;
      if (attached) {
        auto f = panel_frame(*attached, repaired.parent_dims());
        Eigen::Vector3i cell = Eigen::Vector3i::Zero();
        cell[f.u_axis] = a;
        cell[f.v_axis] = b;
        Vec3 p = grid.cell_centre(cell[0], cell[1], cell[2]);
        trial.position = Vec3(p[f.u_axis], p[f.v_axis], 0.0);
      } else {
        trial.position = grid.cell_centre(a, b, c);
      }
      Box3 box = body_box(repaired, trial);
      if (!grid.is_free(box)) continue;
      grid.insert(box);
      node.position = trial.position;
      outcome.moved.push_back(ref_of(node));
      placed = true;
      break;
    }
    if (!placed) return reject("no free grid point for component " + std::to_string(node.id));
  }

  outcome.config = std::move(repaired);
  return outcome;
}

}  // namespace dfd
