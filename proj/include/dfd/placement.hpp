#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "dfd/config.hpp"

namespace dfd {

/// Inclusive range of cell indices along each axis. Empty when any hi < lo.
struct CellRange {
  Eigen::Vector3i lo;
  Eigen::Vector3i hi;
};

/// Boolean occupancy over the parent interior. Each axis is split into
/// ceil(extent / resolution) equal cells so the cells tile the bounds exactly.
class OccupancyGrid {
public:
  OccupancyGrid(const Box3& bounds, double resolution);

  const Box3& bounds() const { return bounds_; }
  double resolution() const { return resolution_; }
  const Eigen::Vector3i& dims() const { return dims_; }
  const Vec3& cell_size() const { return cell_; }
  std::size_t cell_count() const { return cells_.size(); }
  std::size_t occupied_count() const;

  bool occupied(int i, int j, int k) const { return cells_[flat(i, j, k)] != 0; }
  Vec3 cell_centre(int i, int j, int k) const;

  bool contains(const Box3& box) const;
  /// Cells a box intersects with positive volume (a degenerate box still
  /// claims the cell it lies in).
  CellRange touched_cells(const Box3& box) const;
  /// In bounds and every touched cell free.
  bool is_free(const Box3& box) const;
  /// Marks every touched cell; throws OutOfBounds if the box leaves the grid.
  void insert(const Box3& box);

  /// Occupied cells as `i,j,k,x,y,z` rows.
  void write_csv(std::ostream& os) const;

private:
  std::size_t flat(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * dims_[1] + j) * dims_[2] + k;
  }

  Box3 bounds_;
  double resolution_;
  Eigen::Vector3i dims_;
  Vec3 cell_;
  std::vector<unsigned char> cells_;
};

/// Returns a copy of `grid` with the node's body-frame box marked.
OccupancyGrid insert_component(OccupancyGrid grid, const SpacecraftConfig& config,
                               const ComponentNode& node);

struct NodeRef {
  int id = 0;
  int instance = 0;
  auto operator<=>(const NodeRef&) const = default;
};

/// Unordered pairs of top-level components whose boxes share positive volume,
/// sorted, each pair ordered (lower, higher).
std::vector<std::pair<NodeRef, NodeRef>> detect_overlaps(const SpacecraftConfig& config);

struct PlacementOutcome {
  std::optional<SpacecraftConfig> config;  // empty when rejected
  std::string reason;                      // "placement" when rejected
  std::string detail;
  std::vector<NodeRef> moved;
};

constexpr double kDefaultGridResolution = 0.05;

/// Moves intersecting components, in ascending (id, instance) order, to the
/// nearest free grid point. Components not involved keep their position; an
/// involved component whose original spot is still free stays put. Ties
/// between equidistant points go to the lexicographically smallest cell
/// index. Attached components search the 2D lattice of their panel.
PlacementOutcome repair_positions(const SpacecraftConfig& config,
                                  double grid_resolution = kDefaultGridResolution);

}  // namespace dfd
