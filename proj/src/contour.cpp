#include "steinerlab/contour.hpp"

#include <cstdint>
#include <unordered_map>

namespace steinerlab {

bool ContourSet::all_closed() const {
  for (const Polyline& p : polylines) {
    if (!p.closed) return false;
  }
  return !polylines.empty();
}

namespace {

// Edge keys: horizontal edge (i,j)-(i+1,j) and vertical edge (i,j)-(i,j+1).
inline std::int64_t hkey(int i, int j, int n) {
  return 2 * (static_cast<std::int64_t>(j) * n + i);
}
inline std::int64_t vkey(int i, int j, int n) {
  return 2 * (static_cast<std::int64_t>(j) * n + i) + 1;
}

struct Builder {
  const GridField& f;
  double level;
  int n;
  std::unordered_map<std::int64_t, int> node_of_edge;
  std::vector<std::array<double, 2>> nodes;
  std::vector<std::array<int, 2>> segments;

  int node_on_h(int i, int j) {
    std::int64_t key = hkey(i, j, n);
    auto it = node_of_edge.find(key);
    if (it != node_of_edge.end()) return it->second;
    double va = f(i, j), vb = f(i + 1, j);
    double t = (level - va) / (vb - va);
    nodes.push_back({f.x(i) + t * f.spacing(), f.y(j)});
    int id = static_cast<int>(nodes.size()) - 1;
    node_of_edge.emplace(key, id);
    return id;
  }

  int node_on_v(int i, int j) {
    std::int64_t key = vkey(i, j, n);
    auto it = node_of_edge.find(key);
    if (it != node_of_edge.end()) return it->second;
    double va = f(i, j), vb = f(i, j + 1);
    double t = (level - va) / (vb - va);
    nodes.push_back({f.x(i), f.y(j) + t * f.spacing()});
    int id = static_cast<int>(nodes.size()) - 1;
    node_of_edge.emplace(key, id);
    return id;
  }

  void add(int a, int b) { segments.push_back({a, b}); }
};

}  // namespace

ContourSet extract_contours(const GridField& f, double level) {
  const int n = f.size();
  Builder B{f, level, n, {}, {}, {}};

  for (int j = 0; j < n - 1; ++j) {
    for (int i = 0; i < n - 1; ++i) {
      bool s00 = f(i, j) > level;
      bool s10 = f(i + 1, j) > level;
      bool s01 = f(i, j + 1) > level;
      bool s11 = f(i + 1, j + 1) > level;
      int code = (s00 ? 1 : 0) | (s10 ? 2 : 0) | (s11 ? 4 : 0) | (s01 ? 8 : 0);
      if (code == 0 || code == 15) continue;

      // Edge crossings for this cell: bottom, right, top, left.
      auto bottom = [&] { return B.node_on_h(i, j); };
      auto top = [&] { return B.node_on_h(i, j + 1); };
      auto left = [&] { return B.node_on_v(i, j); };
      auto right = [&] { return B.node_on_v(i + 1, j); };

      switch (code) {
        case 1: case 14: B.add(left(), bottom()); break;
        case 2: case 13: B.add(bottom(), right()); break;
        case 4: case 11: B.add(right(), top()); break;
        case 8: case 7:  B.add(top(), left()); break;
        case 3: case 12: B.add(left(), right()); break;
        case 6: case 9:  B.add(bottom(), top()); break;
        case 5: case 10: {
          // Saddle: pair the crossings according to the cell-center value.
          double center = 0.25 * (f(i, j) + f(i + 1, j) + f(i, j + 1) + f(i + 1, j + 1));
          bool center_inside = center > level;
          bool diag00 = (code == 5);  // inside corners on the 00-11 diagonal
          if (diag00 == center_inside) {
            B.add(left(), top());
            B.add(bottom(), right());
          } else {
            B.add(left(), bottom());
            B.add(right(), top());
          }
          break;
        }
        default: break;
      }
    }
  }

  // Chain the segments: every node has degree <= 2, so the segment graph is
  // a disjoint union of paths and cycles.
  const int num_nodes = static_cast<int>(B.nodes.size());
  std::vector<std::array<int, 2>> adj(num_nodes, {-1, -1});
  auto attach = [&](int node, int seg) {
    if (adj[node][0] < 0) adj[node][0] = seg;
    else adj[node][1] = seg;
  };
  for (int s = 0; s < static_cast<int>(B.segments.size()); ++s) {
    attach(B.segments[s][0], s);
    attach(B.segments[s][1], s);
  }

  ContourSet out;
  out.level = level;
  std::vector<char> seg_used(B.segments.size(), 0);

  auto walk = [&](int start_node, int first_seg) {
    Polyline line;
    int node = start_node;
    int seg = first_seg;
    line.points.push_back(B.nodes[node]);
    while (seg >= 0 && !seg_used[seg]) {
      seg_used[seg] = 1;
      int next = (B.segments[seg][0] == node) ? B.segments[seg][1] : B.segments[seg][0];
      line.points.push_back(B.nodes[next]);
      node = next;
      seg = (adj[node][0] >= 0 && !seg_used[adj[node][0]]) ? adj[node][0]
            : (adj[node][1] >= 0 && !seg_used[adj[node][1]]) ? adj[node][1]
                                                             : -1;
    }
    line.closed = (node == start_node) && line.points.size() > 2;
    return line;
  };

  // Open chains start at degree-1 nodes (contour meets the grid boundary).
  for (int v = 0; v < num_nodes; ++v) {
    if (adj[v][0] >= 0 && adj[v][1] < 0 && !seg_used[adj[v][0]]) {
      out.polylines.push_back(walk(v, adj[v][0]));
    }
  }
  // Remaining segments belong to cycles.
  for (int s = 0; s < static_cast<int>(B.segments.size()); ++s) {
    if (!seg_used[s]) out.polylines.push_back(walk(B.segments[s][0], s));
  }

  out.connected_component_count = static_cast<int>(out.polylines.size());
  return out;
}

}  // namespace steinerlab
