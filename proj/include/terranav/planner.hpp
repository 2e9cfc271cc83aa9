#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "terranav/grid.hpp"
#include "terranav/mapping.hpp"

namespace terranav {

enum class NodeKind { Root, Leaf, Edge, Frontier };

struct PlanNode {
  int id = -1;
  Vec3 position = Vec3::Zero();   // robot-centered frame
  int parent = -1;                // -1 for root
  double cost = 0.0;              // cumulative 3D path length from root
  NodeKind kind = NodeKind::Leaf;
};

struct PlanTree {
  std::vector<PlanNode> nodes;     // append-only
  std::vector<int> leaves;         // V_l
  std::vector<int> edge_nodes;     // V_E
  std::vector<int> frontier_nodes; // V_F
};

struct PlannerParams {
  int max_iterations = 1500;
  double steer_step = 1.0;            // m
  double neighbor_radius_gamma = 3.0; // shrinking-ball constant (2D)
  double resample_spacing = 0.3;      // m, <= footprint half_extent
  int coll_max = 5;
  double goal_tolerance = 0.5;        // m
  double goal_bias = 0.05;
  double refine_fraction = 0.2;       // extra budget after first goal hit
  std::uint64_t rng_seed = 0;

  void validate(const Footprint& footprint) const;
};

// z from bilinear interpolation of the elevation layer.
// Throws std::invalid_argument outside map bounds.
Vec3 project(const Vec2& p, const GridMap& elevation);

// Number of in-bounds footprint-window cells strictly above tau_crit around
// the cell containing `center`. Windows are clipped at the map border.
int collision_count(const GridMap& traversability, const Vec2& center,
                    const Footprint& footprint, double tau_crit);

enum class SegmentKind { Traversable, Edge, Frontier, Rejected };

struct SegmentResult {
  SegmentKind kind = SegmentKind::Rejected;
  Vec3 node = Vec3::Zero();  // valid for Traversable / Edge / Frontier
};

// Footprint walk along from->to at <= resample_spacing. The endpoint window
// poking past the map boundary makes the target a frontier candidate, but
// only if every walk sample whose window lies fully inside the map is
// collision-free; otherwise the usual edge/reject rules apply. An edge node
// sits at the end of the collision-free prefix of the walk.
SegmentResult classify_segment(const GridMap& traversability,
                               const GridMap& elevation, const Vec3& from,
                               const Vec2& to_2d, const Footprint& footprint,
                               const PlannerParams& params);

struct PlanResult {
  PlanTree tree;
  std::optional<std::vector<PlanNode>> path;  // root -> goal region
  std::vector<PlanNode> frontiers;            // V_F snapshot
  std::vector<PlanNode> edges;                // V_E snapshot
  int iterations_used = 0;
};

// Called every iteration when set (testing hook): tree, iteration index,
// best goal-region cost so far (+inf if none).
using PlanObserver =
    std::function<void(const PlanTree&, int iteration, double best_cost)>;

// RRT* over the traversability map. Samples in 2D map bounds (goal-biased
// when the goal is inside), projects nodes to 3D via the elevation layer,
// gates every extension and rewiring edge with classify_segment, and stops
// after max_iterations or once a goal-region node has aged the refinement
// budget. Throws PlanningError when no collision-free root cell exists.
PlanResult plan(const GridMap& traversability, const GridMap& elevation,
                const Vec2& goal_2d, const Footprint& footprint,
                const PlannerParams& params,
                const PlanObserver& observer = nullptr);

// Parent-chain walk, root first. Throws InternalError on a broken chain.
std::vector<PlanNode> extract_path(const PlanTree& tree, int terminal);

// CSV dumps: "id,parent,x,y,z,cost,kind" / "x,y,z" per waypoint.
void write_tree_csv(const PlanTree& tree, const std::string& path);
void write_path_csv(const std::vector<PlanNode>& path, const std::string& file);

}  // namespace terranav
