#pragma once

// Backtracking isomorphism search between incidence geometries.  Small,
// exact, and fast on the rigid graphs that occur here (girth >= 6,
// valency <= 4).  Used for link-vs-model certificates and for harvesting
// automorphisms of the hexagon.

#include <functional>
#include <optional>
#include <random>
#include <vector>

#include "forge/action.hpp"
#include "forge/polygon.hpp"

namespace forge::iso {

using polygon::IncidenceGeometry;

struct PanelMap {
  // image of point i / line i of the source in the target
  std::vector<std::uint8_t> point_map;
  std::vector<std::uint8_t> line_map;
};

namespace detail {

struct Searcher {
  const IncidenceGeometry& a;
  const IncidenceGeometry& b;
  // unified ids: points then lines, for each geometry
  std::vector<int> order;                   // source panel visit order (BFS)
  std::vector<int> assigned;                // prefix of order currently mapped
  std::vector<int> map;                     // source uid -> target uid or -1
  std::vector<bool> used_point, used_line;  // target occupancy
  std::function<bool(const PanelMap&)> emit;  // return true to stop
  std::mt19937* shuffle_rng = nullptr;
  bool stopped = false;

  Searcher(const IncidenceGeometry& a_, const IncidenceGeometry& b_) : a(a_), b(b_) {
    map.assign(a.num_panels(), -1);
    used_point.assign(b.num_points(), false);
    used_line.assign(b.num_lines(), false);
    // BFS order so every vertex after the first has a mapped neighbor
    std::vector<bool> seen(a.num_panels(), false);
    for (int s = 0; s < a.num_panels(); ++s) {
      if (seen[s]) continue;
      std::vector<int> queue{s};
      seen[s] = true;
      for (size_t h = 0; h < queue.size(); ++h) {
        int u = queue[h];
        order.push_back(u);
        for (int v : neighbors(a, u))
          if (!seen[v]) {
            seen[v] = true;
            queue.push_back(v);
          }
      }
    }
  }

  static std::vector<int> neighbors(const IncidenceGeometry& g, int uid) {
    std::vector<int> out;
    if (uid < g.num_points())
      for (int l : g.lines_of(uid)) out.push_back(g.num_points() + l);
    else
      for (int p : g.points_of(uid - g.num_points())) out.push_back(p);
    return out;
  }

  // Kind, occupancy, degree, and the full distance profile against every
  // vertex assigned so far.  Distance consistency is what keeps the search
  // from wandering down locally-consistent but globally-impossible branches
  // in high-girth graphs.
  bool compatible(int src_uid, int dst_uid) const {
    bool src_is_point = src_uid < a.num_points();
    bool dst_is_point = dst_uid < b.num_points();
    if (src_is_point != dst_is_point) return false;
    if (src_is_point ? used_point[dst_uid] : used_line[dst_uid - b.num_points()]) return false;
    size_t deg_src = src_is_point ? a.lines_of(src_uid).size()
                                  : a.points_of(src_uid - a.num_points()).size();
    size_t deg_dst = dst_is_point ? b.lines_of(dst_uid).size()
                                  : b.points_of(dst_uid - b.num_points()).size();
    if (deg_src != deg_dst) return false;
    for (int w : assigned)
      if (a.distance_uid(src_uid, w) != b.distance_uid(dst_uid, map[w])) return false;
    return true;
  }

  void assign(int src_uid, int dst_uid, bool on) {
    map[src_uid] = on ? dst_uid : -1;
    bool is_point = dst_uid < b.num_points();
    if (is_point)
      used_point[dst_uid] = on;
    else
      used_line[dst_uid - b.num_points()] = on;
    if (on)
      assigned.push_back(src_uid);
    else
      assigned.pop_back();
  }

  void run(size_t depth) {
    if (stopped) return;
    if (depth == order.size()) {
      PanelMap pm;
      pm.point_map.resize(a.num_points());
      pm.line_map.resize(a.num_lines());
      for (int p = 0; p < a.num_points(); ++p) pm.point_map[p] = std::uint8_t(map[p]);
      for (int l = 0; l < a.num_lines(); ++l)
        pm.line_map[l] = std::uint8_t(map[a.num_points() + l] - b.num_points());
      if (emit(pm)) stopped = true;
      return;
    }
    int u = order[depth];
    // candidates: neighbors of a mapped neighbor when one exists, else all
    std::vector<int> candidates;
    int anchor = -1;
    for (int w : neighbors(a, u))
      if (map[w] >= 0) {
        anchor = map[w];
        break;
      }
    if (anchor >= 0) {
      candidates = neighbors(b, anchor);
    } else {
      for (int v = 0; v < b.num_panels(); ++v) candidates.push_back(v);
    }
    if (shuffle_rng) std::shuffle(candidates.begin(), candidates.end(), *shuffle_rng);
    for (int v : candidates) {
      if (!compatible(u, v)) continue;
      assign(u, v, true);
      run(depth + 1);
      assign(u, v, false);
      if (stopped) return;
    }
  }
};

inline bool shape_matches(const IncidenceGeometry& a, const IncidenceGeometry& b) {
  return a.num_points() == b.num_points() && a.num_lines() == b.num_lines() &&
         a.incidence().size() == b.incidence().size();
}

}  // namespace detail

// Verifies that the map is a genuine isomorphism (bijective, incidence
// preserved both ways by the edge count argument).
inline bool check_isomorphism(const IncidenceGeometry& a, const IncidenceGeometry& b,
                              const PanelMap& m) {
  if (!detail::shape_matches(a, b)) return false;
  if (!action::is_permutation(m.point_map, a.num_points()) ||
      !action::is_permutation(m.line_map, a.num_lines()))
    return false;
  for (auto [p, l] : a.incidence())
    if (!b.incident(m.point_map[p], m.line_map[l])) return false;
  return true;
}

// First isomorphism in deterministic search order, or nullopt.
inline std::optional<PanelMap> find_isomorphism(const IncidenceGeometry& a,
                                                const IncidenceGeometry& b) {
  if (!detail::shape_matches(a, b)) return std::nullopt;
  detail::Searcher s(a, b);
  std::optional<PanelMap> out;
  s.emit = [&](const PanelMap& m) {
    out = m;
    return true;
  };
  s.run(0);
  if (out && !check_isomorphism(a, b, *out)) throw Error("isomorphism search produced a non-map");
  return out;
}

// A pseudo-random automorphism (uniformity is not claimed; determinism
// given the rng state is).
inline action::Automorphism random_automorphism(const IncidenceGeometry& g, std::mt19937& rng) {
  detail::Searcher s(g, g);
  s.shuffle_rng = &rng;
  std::optional<PanelMap> out;
  s.emit = [&](const PanelMap& m) {
    out = m;
    return true;
  };
  s.run(0);
  if (!out) throw Error("no automorphism found (geometry inconsistent?)");
  return action::make_automorphism(g, out->point_map, out->line_map);
}

// Enumerate all automorphisms (callback may stop the search by returning
// true).  Intended for the desk-scale geometries only.
inline void for_each_automorphism(const IncidenceGeometry& g,
                                  const std::function<bool(const action::Automorphism&)>& fn) {
  detail::Searcher s(g, g);
  s.emit = [&](const PanelMap& m) {
    return fn(action::make_automorphism(g, m.point_map, m.line_map));
  };
  s.run(0);
}

}  // namespace forge::iso
