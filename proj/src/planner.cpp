#include "terranav/planner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "terranav/errors.hpp"
#include "terranav/rng.hpp"

namespace terranav {

void PlannerParams::validate(const Footprint& footprint) const {
  if (max_iterations < 1)
    throw std::invalid_argument("planner: max_iterations must be >= 1");
  if (!(steer_step > 0.0 && neighbor_radius_gamma > 0.0 &&
        resample_spacing > 0.0 && goal_tolerance > 0.0))
    throw std::invalid_argument("planner: lengths must be > 0");
  if (coll_max < 1)
    throw std::invalid_argument("planner: coll_max must be >= 1");
  if (resample_spacing > footprint.half_extent)
    throw std::invalid_argument(
        "planner: resample_spacing must be <= footprint half_extent");
  if (goal_bias < 0.0 || goal_bias > 1.0)
    throw std::invalid_argument("planner: goal_bias must be in [0,1]");
  if (refine_fraction < 0.0)
    throw std::invalid_argument("planner: refine_fraction must be >= 0");
}

Vec3 project(const Vec2& p, const GridMap& elevation) {
  return {p.x(), p.y(), elevation.interpolate(p.x(), p.y())};
}

int collision_count(const GridMap& traversability, const Vec2& center,
                    const Footprint& footprint, double tau_crit) {
  const GridSpec& spec = traversability.spec;
  const int r = footprint.cell_radius(spec.resolution);
  const int ci = spec.row_of(center.y());
  const int cj = spec.col_of(center.x());
  const int i_lo = std::max(0, ci - r), i_hi = std::min(spec.rows() - 1, ci + r);
  const int j_lo = std::max(0, cj - r), j_hi = std::min(spec.cols() - 1, cj + r);
  int count = 0;
  for (int i = i_lo; i <= i_hi; ++i)
    for (int j = j_lo; j <= j_hi; ++j)
      if (traversability.at(i, j) > tau_crit) ++count;
  return count;
}

namespace {

bool window_fully_inside(const GridSpec& spec, const Vec2& center, int radius) {
  const int ci = spec.row_of(center.y());
  const int cj = spec.col_of(center.x());
  return ci - radius >= 0 && ci + radius < spec.rows() && cj - radius >= 0 &&
         cj + radius < spec.cols();
}

// Nearest in-bounds elevation for points whose own column may poke out.
Vec3 project_clamped(const Vec2& p, const GridMap& elevation) {
  const GridSpec& spec = elevation.spec;
  const double x =
      std::max(-spec.half_extent_x(), std::min(spec.half_extent_x(), p.x()));
  const double y =
      std::max(-spec.half_extent_y(), std::min(spec.half_extent_y(), p.y()));
  return {p.x(), p.y(), elevation.interpolate(x, y)};
}

}  // namespace

SegmentResult classify_segment(const GridMap& traversability,
                               const GridMap& elevation, const Vec3& from,
                               const Vec2& to_2d, const Footprint& footprint,
                               const PlannerParams& params) {
  const GridSpec& spec = traversability.spec;
  const int radius = footprint.cell_radius(spec.resolution);
  const Vec2 from_2d(from.x(), from.y());
  const Vec2 delta = to_2d - from_2d;
  const double dist = delta.norm();
  const int n_samples =
      std::max(1, static_cast<int>(std::ceil(dist / params.resample_spacing)));

  const bool frontier_candidate = !window_fully_inside(spec, to_2d, radius);

  // Walk the equidistant samples. For frontier candidates only samples whose
  // window is fully inside the map participate; the boundary band is the
  // uncertainty-masked frontier zone by construction.
  int free_prefix = 0;
  bool prefix_broken = false;
  bool any_collision = false;
  bool any_exceeds_max = false;
  Vec2 last_free = from_2d;

  for (int k = 1; k <= n_samples; ++k) {
    const Vec2 s = from_2d + delta * (static_cast<double>(k) / n_samples);
    if (frontier_candidate && !window_fully_inside(spec, s, radius)) continue;
    const int n_coll = collision_count(traversability, s, footprint,
                                       /*tau_crit=*/params_tau(traversability, params));
    if (n_coll == 0) {
      if (!prefix_broken) {
        ++free_prefix;
        last_free = s;
      }
    } else {
      prefix_broken = true;
      any_collision = true;
      if (n_coll > params.coll_max) any_exceeds_max = true;
    }
  }

  SegmentResult result;
  if (frontier_candidate) {
    if (!any_collision) {
      result.kind = SegmentKind::Frontier;
      result.node = project_clamped(to_2d, elevation);
      return result;
    }
  } else if (!any_collision) {
    result.kind = SegmentKind::Traversable;
    result.node = project(to_2d, elevation);
    return result;
  }

  if (any_exceeds_max && free_prefix > 0) {
    result.kind = SegmentKind::Edge;
    result.node = project_clamped(last_free, elevation);
    return result;
  }
  result.kind = SegmentKind::Rejected;
  return result;
}

namespace {

double seglen(const Vec3& a, const Vec3& b) { return (a - b).norm(); }

struct TreeImpl {
  PlanTree tree;
  std::vector<std::vector<int>> children;

  int add(const Vec3& pos, int parent, double cost, NodeKind kind) {
    PlanNode n;
    n.id = static_cast<int>(tree.nodes.size());
    n.position = pos;
    n.parent = parent;
    n.cost = cost;
    n.kind = kind;
    tree.nodes.push_back(n);
    children.emplace_back();
    if (parent >= 0) children[parent].push_back(n.id);
    switch (kind) {
      case NodeKind::Leaf: tree.leaves.push_back(n.id); break;
      case NodeKind::Edge: tree.edge_nodes.push_back(n.id); break;
      case NodeKind::Frontier: tree.frontier_nodes.push_back(n.id); break;
      case NodeKind::Root: break;
    }
    return n.id;
  }

  void reparent(int node, int new_parent, double new_cost) {
    auto& n = tree.nodes[node];
    auto& old_children = children[n.parent];
    old_children.erase(std::find(old_children.begin(), old_children.end(), node));
    n.parent = new_parent;
    children[new_parent].push_back(node);
    const double delta = new_cost - n.cost;
    n.cost = new_cost;
    // Propagate the improvement through the subtree.
    std::vector<int> stack(children[node]);
    while (!stack.empty()) {
      const int id = stack.back();
      stack.pop_back();
      tree.nodes[id].cost += delta;
      stack.insert(stack.end(), children[id].begin(), children[id].end());
    }
  }
};

}  // namespace

PlanResult plan(const GridMap& traversability, const GridMap& elevation,
                const Vec2& goal_2d, const Footprint& footprint,
                const PlannerParams& params, const PlanObserver& observer) {
  const GridSpec& spec = traversability.spec;
  if (traversability.spec != elevation.spec)
    throw std::invalid_argument("plan: traversability/elevation specs differ");
  params.validate(footprint);
  footprint.validate(spec.resolution);

  const double tau_crit = params_tau(traversability, params);
  const double ex = spec.half_extent_x();
  const double ey = spec.half_extent_y();

  // Root at the robot (map center), or the nearest collision-free cell.
  Vec2 root_2d(0.0, 0.0);
  if (collision_count(traversability, root_2d, footprint, tau_crit) > 0) {
    double best_d2 = std::numeric_limits<double>::infinity();
    bool found = false;
    for (int i = 0; i < spec.rows(); ++i)
      for (int j = 0; j < spec.cols(); ++j) {
        const Vec2 c(spec.cell_x(j), spec.cell_y(i));
        if (collision_count(traversability, c, footprint, tau_crit) > 0)
          continue;
        const double d2 = c.squaredNorm();
        if (d2 < best_d2) {
          best_d2 = d2;
          root_2d = c;
          found = true;
        }
      }
    if (!found)
      throw PlanningError("plan: no collision-free root cell in the map");
  }

  TreeImpl impl;
  impl.add(project(root_2d, elevation), -1, 0.0, NodeKind::Root);

  Rng rng(params.rng_seed);
  const bool goal_inside = spec.contains(goal_2d.x(), goal_2d.y());

  const auto extendable = [&](const PlanNode& n) {
    return n.kind != NodeKind::Edge;
  };

  int first_goal_iter = -1;
  const auto best_goal_node = [&]() -> int {
    int best = -1;
    double best_cost = std::numeric_limits<double>::infinity();
    for (const auto& n : impl.tree.nodes) {
      if ((Vec2(n.position.x(), n.position.y()) - goal_2d).norm() <=
              params.goal_tolerance &&
          n.cost < best_cost) {
        best_cost = n.cost;
        best = n.id;
      }
    }
    return best;
  };

  int iterations = 0;
  for (int iter = 0; iter < params.max_iterations; ++iter) {
    iterations = iter + 1;

    Vec2 sample;
    if (goal_inside && rng.uniform() < params.goal_bias) {
      sample = goal_2d;
    } else {
      sample = {rng.uniform(-ex, ex), rng.uniform(-ey, ey)};
    }

    // Nearest extendable node (2D).
    int nearest = -1;
    double nearest_d2 = std::numeric_limits<double>::infinity();
    for (const auto& n : impl.tree.nodes) {
      if (!extendable(n)) continue;
      const double d2 =
          (Vec2(n.position.x(), n.position.y()) - sample).squaredNorm();
      if (d2 < nearest_d2) {
        nearest_d2 = d2;
        nearest = n.id;
      }
    }
    if (nearest < 0) break;  // everything became an edge node

    const PlanNode& near_node = impl.tree.nodes[nearest];
    const Vec2 near_2d(near_node.position.x(), near_node.position.y());
    const double d = std::sqrt(nearest_d2);
    Vec2 new_2d = sample;
    if (d > params.steer_step)
      new_2d = near_2d + (sample - near_2d) * (params.steer_step / d);
    if (d < 1e-9) continue;  // degenerate sample on an existing node

    const SegmentResult seg = classify_segment(traversability, elevation,
                                               near_node.position, new_2d,
                                               footprint, params);
    if (seg.kind == SegmentKind::Rejected) {
      if (observer) {
        const int g = best_goal_node();
        observer(impl.tree, iter,
                 g >= 0 ? impl.tree.nodes[g].cost
                        : std::numeric_limits<double>::infinity());
      }
      continue;
    }

    if (seg.kind == SegmentKind::Frontier) {
      impl.add(seg.node, nearest,
               near_node.cost + seglen(near_node.position, seg.node),
               NodeKind::Frontier);
    } else if (seg.kind == SegmentKind::Edge) {
      impl.add(seg.node, nearest,
               near_node.cost + seglen(near_node.position, seg.node),
               NodeKind::Edge);
    } else {
      // RRT*: choose the cheapest valid parent in the shrinking ball, then
      // rewire the neighborhood through the new node.
      const double n_nodes = static_cast<double>(impl.tree.nodes.size());
      const double ball =
          std::min(params.steer_step,
                   params.neighbor_radius_gamma *
                       std::sqrt(std::log(n_nodes + 1.0) / (n_nodes + 1.0)));

      std::vector<int> neighbors;
      for (const auto& n : impl.tree.nodes) {
        if (n.kind == NodeKind::Edge || n.kind == NodeKind::Frontier) continue;
        if ((Vec2(n.position.x(), n.position.y()) - new_2d).norm() <= ball)
          neighbors.push_back(n.id);
      }

      int parent = nearest;
      Vec3 new_pos = seg.node;
      double best_cost = near_node.cost + seglen(near_node.position, new_pos);
      for (const int nb : neighbors) {
        if (nb == nearest) continue;
        const PlanNode& cand = impl.tree.nodes[nb];
        const double c = cand.cost + seglen(cand.position, new_pos);
        if (c >= best_cost) continue;
        const SegmentResult link = classify_segment(
            traversability, elevation, cand.position, new_2d, footprint, params);
        if (link.kind != SegmentKind::Traversable) continue;
        parent = nb;
        best_cost = c;
      }
      const int new_id = impl.add(new_pos, parent, best_cost, NodeKind::Leaf);

      for (const int nb : neighbors) {
        PlanNode& cand = impl.tree.nodes[nb];
        if (cand.kind != NodeKind::Leaf) continue;
        const double via = best_cost + seglen(new_pos, cand.position);
        if (via + 1e-12 >= cand.cost) continue;
        const SegmentResult link = classify_segment(
            traversability, elevation, new_pos,
            Vec2(cand.position.x(), cand.position.y()), footprint, params);
        if (link.kind != SegmentKind::Traversable) continue;
        impl.reparent(nb, new_id, via);
      }
    }

    const int goal_node = best_goal_node();
    if (goal_node >= 0 && first_goal_iter < 0) first_goal_iter = iter;
    if (observer)
      observer(impl.tree, iter,
               goal_node >= 0 ? impl.tree.nodes[goal_node].cost
                              : std::numeric_limits<double>::infinity());

    if (first_goal_iter >= 0 &&
        iter - first_goal_iter >=
            static_cast<int>(params.refine_fraction * params.max_iterations))
      break;
  }

  PlanResult result;
  const int goal_node = best_goal_node();
  result.iterations_used = iterations;
  if (goal_node >= 0) result.path = extract_path(impl.tree, goal_node);
  for (const int id : impl.tree.frontier_nodes)
    result.frontiers.push_back(impl.tree.nodes[id]);
  for (const int id : impl.tree.edge_nodes)
    result.edges.push_back(impl.tree.nodes[id]);
  result.tree = std::move(impl.tree);
  return result;
}

std::vector<PlanNode> extract_path(const PlanTree& tree, int terminal) {
  if (terminal < 0 || terminal >= static_cast<int>(tree.nodes.size()))
    throw InternalError("extract_path: terminal not in tree");
  std::vector<PlanNode> path;
  int id = terminal;
  std::size_t guard = 0;
  while (id >= 0) {
    if (guard++ > tree.nodes.size())
      throw InternalError("extract_path: parent chain cycle");
    if (id >= static_cast<int>(tree.nodes.size()))
      throw InternalError("extract_path: broken parent chain");
    path.push_back(tree.nodes[id]);
    id = tree.nodes[id].parent;
  }
  std::reverse(path.begin(), path.end());
  if (path.front().parent != -1)
    throw InternalError("extract_path: chain does not reach the root");
  return path;
}

namespace {

const char* kind_name(NodeKind k) {
  switch (k) {
    case NodeKind::Root: return "root";
    case NodeKind::Leaf: return "leaf";
    case NodeKind::Edge: return "edge";
    case NodeKind::Frontier: return "frontier";
  }
  return "?";
}

}  // namespace

void write_tree_csv(const PlanTree& tree, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open for write: " + path);
  os << "id,parent,x,y,z,cost,kind\n";
  char buf[160];
  for (const auto& n : tree.nodes) {
    std::snprintf(buf, sizeof(buf), "%d,%d,%.17g,%.17g,%.17g,%.17g,%s\n", n.id,
                  n.parent, n.position.x(), n.position.y(), n.position.z(),
                  n.cost, kind_name(n.kind));
    os << buf;
  }
}

void write_path_csv(const std::vector<PlanNode>& path, const std::string& file) {
  std::ofstream os(file, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open for write: " + file);
  os << "x,y,z\n";
  char buf[120];
  for (const auto& n : path) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", n.position.x(),
                  n.position.y(), n.position.z());
    os << buf;
  }
}

}  // namespace terranav
