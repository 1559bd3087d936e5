#pragma once

// Finite generalized polygons (spherical buildings of rank 2) and their
// CAT(1) realization.  The realization is the metric incidence graph: each
// flag is an arc of length pi/n between its point-vertex and line-vertex,
// and distances are shortest path lengths capped at pi.  All offsets and
// distances are exact rational multiples of pi.

#include <algorithm>
#include <deque>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "forge/errors.hpp"
#include "forge/gf.hpp"
#include "forge/numeric.hpp"
#include "json.hpp"

namespace forge::polygon {

enum class Kind { A2, C2, G2 };

inline int gonality(Kind k) {
  switch (k) {
    case Kind::A2: return 3;
    case Kind::C2: return 4;
    case Kind::G2: return 6;
  }
  throw Error("bad kind");
}

inline std::string kind_name(Kind k) {
  switch (k) {
    case Kind::A2: return "A2";
    case Kind::C2: return "C2";
    case Kind::G2: return "G2";
  }
  throw Error("bad kind");
}

inline Kind kind_from_name(const std::string& s) {
  if (s == "A2") return Kind::A2;
  if (s == "C2") return Kind::C2;
  if (s == "G2") return Kind::G2;
  throw Error("unknown geometry kind: " + s);
}

enum class PanelKind { Point, Line };

struct PanelId {
  PanelKind kind = PanelKind::Point;
  int idx = 0;

  friend bool operator==(const PanelId&, const PanelId&) = default;
  friend auto operator<=>(const PanelId&, const PanelId&) = default;
};

inline PanelId point_panel(int i) { return {PanelKind::Point, i}; }
inline PanelId line_panel(int i) { return {PanelKind::Line, i}; }

struct Flag {
  int point = 0;
  int line = 0;
  friend bool operator==(const Flag&, const Flag&) = default;
  friend auto operator<=>(const Flag&, const Flag&) = default;
};

class IncidenceGeometry {
 public:
  IncidenceGeometry(Kind kind, int num_points, int num_lines,
                    std::vector<std::pair<int, int>> incidence)
      : kind_(kind),
        n_(gonality(kind)),
        num_points_(num_points),
        num_lines_(num_lines),
        incidence_(std::move(incidence)) {
    std::sort(incidence_.begin(), incidence_.end());
    incidence_.erase(std::unique(incidence_.begin(), incidence_.end()), incidence_.end());
    lines_of_.assign(num_points_, {});
    points_of_.assign(num_lines_, {});
    for (auto [p, l] : incidence_) {
      if (p < 0 || p >= num_points_ || l < 0 || l >= num_lines_)
        throw Error("incidence pair out of range");
      lines_of_[p].push_back(l);
      points_of_[l].push_back(p);
    }
    compute_distances();
  }

  Kind kind() const { return kind_; }
  int n() const { return n_; }
  int num_points() const { return num_points_; }
  int num_lines() const { return num_lines_; }
  int num_panels() const { return num_points_ + num_lines_; }
  const std::vector<std::pair<int, int>>& incidence() const { return incidence_; }

  const std::vector<int>& lines_of(int p) const { return lines_of_.at(p); }
  const std::vector<int>& points_of(int l) const { return points_of_.at(l); }

  bool incident(int p, int l) const {
    const auto& ls = lines_of_[p];
    return std::binary_search(ls.begin(), ls.end(), l);
  }

  bool valid_panel(PanelId a) const {
    int count = a.kind == PanelKind::Point ? num_points_ : num_lines_;
    return a.idx >= 0 && a.idx < count;
  }
  void require_panel(PanelId a) const {
    if (!valid_panel(a)) throw UnknownPanel("panel id out of range");
  }
  bool valid_flag(const Flag& f) const {
    return f.point >= 0 && f.point < num_points_ && f.line >= 0 && f.line < num_lines_ &&
           incident(f.point, f.line);
  }
  void require_flag(const Flag& f) const {
    if (!valid_flag(f)) throw UnknownFlag("not an incident point-line pair");
  }

  // Unified panel indexing: points first, then lines.
  int uid(PanelId a) const { return a.kind == PanelKind::Point ? a.idx : num_points_ + a.idx; }
  PanelId panel_from_uid(int u) const {
    if (u < 0 || u >= num_panels()) throw UnknownPanel("panel uid out of range");
    return u < num_points_ ? point_panel(u) : line_panel(u - num_points_);
  }

  int graph_distance(PanelId a, PanelId b) const {
    require_panel(a);
    require_panel(b);
    return dist_[uid(a)][uid(b)];
  }

  // Unchecked distance between unified panel ids (hot paths).
  int distance_uid(int a, int b) const { return dist_[a][b]; }

  // All flags in (point, line) ascending order.
  std::vector<Flag> all_flags() const {
    std::vector<Flag> out;
    for (int p = 0; p < num_points_; ++p)
      for (int l : lines_of_[p]) out.push_back({p, l});
    return out;
  }

  IncidenceGeometry dual() const {
    std::vector<std::pair<int, int>> inc;
    inc.reserve(incidence_.size());
    for (auto [p, l] : incidence_) inc.emplace_back(l, p);
    return IncidenceGeometry(kind_, num_lines_, num_points_, std::move(inc));
  }

 private:
  void compute_distances() {
    int n = num_panels();
    dist_.assign(n, std::vector<int>(n, -1));
    for (int s = 0; s < n; ++s) {
      auto& d = dist_[s];
      d[s] = 0;
      std::deque<int> queue{s};
      while (!queue.empty()) {
        int u = queue.front();
        queue.pop_front();
        auto visit = [&](int v) {
          if (d[v] < 0) {
            d[v] = d[u] + 1;
            queue.push_back(v);
          }
        };
        if (u < num_points_)
          for (int l : lines_of_[u]) visit(num_points_ + l);
        else
          for (int p : points_of_[u - num_points_]) visit(p);
      }
    }
  }

  Kind kind_;
  int n_;
  int num_points_;
  int num_lines_;
  std::vector<std::pair<int, int>> incidence_;
  std::vector<std::vector<int>> lines_of_;
  std::vector<std::vector<int>> points_of_;
  std::vector<std::vector<int>> dist_;
};

// A point of the CAT(1) realization: a flag plus the arc offset from the
// point-vertex.  theta = 0 is the point-panel, theta = pi/n the line-panel;
// panel representations are canonicalized to the least incident flag.
struct RealizedPoint {
  Flag flag;
  Angle theta;

  static RealizedPoint at_panel(const IncidenceGeometry& g, PanelId p) {
    g.require_panel(p);
    if (p.kind == PanelKind::Point) {
      const auto& ls = g.lines_of(p.idx);
      if (ls.empty()) throw UnknownFlag("panel lies on no flag");
      return {{p.idx, ls.front()}, Angle::zero()};
    }
    const auto& ps = g.points_of(p.idx);
    if (ps.empty()) throw UnknownFlag("panel lies on no flag");
    return {{ps.front(), p.idx}, Angle::pi_over(g.n())};
  }

  static RealizedPoint on_arc(const IncidenceGeometry& g, Flag f, Angle theta) {
    g.require_flag(f);
    if (theta < Angle::zero() || theta > Angle::pi_over(g.n()))
      throw UnknownFlag("offset outside [0, pi/n]");
    RealizedPoint x{f, theta};
    return x.canonical(g);
  }

  static RealizedPoint arc_midpoint(const IncidenceGeometry& g, Flag f) {
    return on_arc(g, f, Angle(Rational(1, 2 * g.n())));
  }

  bool is_panel(const IncidenceGeometry& g) const {
    return theta.is_zero() || theta == Angle::pi_over(g.n());
  }
  PanelId panel(const IncidenceGeometry& g) const {
    if (theta.is_zero()) return point_panel(flag.point);
    if (theta == Angle::pi_over(g.n())) return line_panel(flag.line);
    throw UnknownFlag("realized point is not a panel");
  }

  RealizedPoint canonical(const IncidenceGeometry& g) const {
    if (is_panel(g)) return at_panel(g, panel(g));
    return *this;
  }

  friend bool operator==(const RealizedPoint&, const RealizedPoint&) = default;
};

inline bool realized_equal(const IncidenceGeometry& g, const RealizedPoint& x,
                           const RealizedPoint& y) {
  return x.canonical(g) == y.canonical(g);
}

// ---------------------------------------------------------------------------
// Metric

inline Angle cat1_distance(const IncidenceGeometry& g, const RealizedPoint& x,
                           const RealizedPoint& y) {
  g.require_flag(x.flag);
  g.require_flag(y.flag);
  Angle arc = Angle::pi_over(g.n());
  if (x.theta < Angle::zero() || x.theta > arc || y.theta < Angle::zero() || y.theta > arc)
    throw UnknownFlag("offset outside [0, pi/n]");
  Angle best = Angle::pi();
  if (x.flag == y.flag) best = std::min(best, (x.theta - y.theta).abs());
  const PanelId ends_x[2] = {point_panel(x.flag.point), line_panel(x.flag.line)};
  const Angle off_x[2] = {x.theta, arc - x.theta};
  const PanelId ends_y[2] = {point_panel(y.flag.point), line_panel(y.flag.line)};
  const Angle off_y[2] = {y.theta, arc - y.theta};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      int hops = g.graph_distance(ends_x[i], ends_y[j]);
      Angle cand = off_x[i] + Rational(hops) * arc + off_y[j];
      best = std::min(best, cand);
    }
  return best;
}

inline Angle cat1_distance(const IncidenceGeometry& g, PanelId a, const RealizedPoint& y) {
  return cat1_distance(g, RealizedPoint::at_panel(g, a), y);
}

inline Angle cat1_distance(const IncidenceGeometry& g, PanelId a, PanelId b) {
  return cat1_distance(g, RealizedPoint::at_panel(g, a), RealizedPoint::at_panel(g, b));
}

inline bool is_opposite(const IncidenceGeometry& g, PanelId a, PanelId b) {
  return g.graph_distance(a, b) == g.n();
}

// ---------------------------------------------------------------------------
// Axiom audit

struct AxiomReport {
  bool connected = false;
  int girth = 0;
  int diameter = 0;
  int min_point_degree = 0;
  int min_line_degree = 0;
  int n = 0;

  bool ok() const {
    return connected && girth == 2 * n && diameter == n && min_point_degree >= 2 &&
           min_line_degree >= 2;
  }
};

inline AxiomReport verify_axioms(const IncidenceGeometry& g) {
  AxiomReport r;
  r.n = g.n();
  int n = g.num_panels();
  r.connected = true;
  r.diameter = 0;
  for (int a = 0; a < n && r.connected; ++a)
    for (int b = 0; b < n; ++b) {
      int d = g.graph_distance(g.panel_from_uid(a), g.panel_from_uid(b));
      if (d < 0) {
        r.connected = false;
        break;
      }
      r.diameter = std::max(r.diameter, d);
    }
  // girth by BFS from every vertex; the first non-tree edge seen from s
  // closes a shortest cycle through s
  int girth = INT32_MAX;
  auto neighbors = [&](int u) {
    std::vector<int> out;
    if (u < g.num_points())
      for (int l : g.lines_of(u)) out.push_back(g.num_points() + l);
    else
      for (int p : g.points_of(u - g.num_points())) out.push_back(p);
    return out;
  };
  for (int s = 0; s < n; ++s) {
    std::vector<int> dist(n, -1), parent(n, -1);
    std::deque<int> queue{s};
    dist[s] = 0;
    while (!queue.empty()) {
      int u = queue.front();
      queue.pop_front();
      for (int v : neighbors(u)) {
        if (dist[v] < 0) {
          dist[v] = dist[u] + 1;
          parent[v] = u;
          queue.push_back(v);
        } else if (v != parent[u]) {
          girth = std::min(girth, dist[u] + dist[v] + 1);
        }
      }
    }
  }
  r.girth = girth == INT32_MAX ? 0 : girth;
  r.min_point_degree = INT32_MAX;
  for (int p = 0; p < g.num_points(); ++p)
    r.min_point_degree = std::min(r.min_point_degree, int(g.lines_of(p).size()));
  r.min_line_degree = INT32_MAX;
  for (int l = 0; l < g.num_lines(); ++l)
    r.min_line_degree = std::min(r.min_line_degree, int(g.points_of(l).size()));
  return r;
}

inline void require_axioms(const IncidenceGeometry& g, const std::string& what) {
  AxiomReport r = verify_axioms(g);
  if (!r.ok())
    throw Contradiction(what + ": generalized polygon axioms failed (girth " +
                        std::to_string(r.girth) + ", diameter " + std::to_string(r.diameter) +
                        ", expected 2n=" + std::to_string(2 * r.n) + ")");
}

// ---------------------------------------------------------------------------
// Builders

// Desarguesian projective plane PG(2,q): points and lines are the 1- and
// 2-dimensional subspaces of GF(q)^3.  Desk scale keeps q in {2,3,4,5}.
inline IncidenceGeometry build_projective_plane(int q) {
  if (q < 2 || q > 5 || !gf::Field::is_prime_power(q))
    throw UnsupportedOrder("projective plane order must be a prime power in {2,3,4,5}");
  gf::Field F(q);
  auto pts = gf::projective_points(F, 3);
  // a line is the kernel of a linear form; forms are indexed like points
  std::vector<std::pair<int, int>> inc;
  for (int l = 0; l < int(pts.size()); ++l)
    for (int p = 0; p < int(pts.size()); ++p)
      if (gf::dot(F, pts[l], pts[p]) == 0) inc.emplace_back(p, l);
  IncidenceGeometry g(Kind::A2, int(pts.size()), int(pts.size()), std::move(inc));
  require_axioms(g, "PG(2," + std::to_string(q) + ")");
  return g;
}

// Symplectic quadrangle W(q): all points of PG(3,q), lines the totally
// isotropic lines of the standard alternating form.
inline IncidenceGeometry build_symplectic_quadrangle(int q) {
  if (q != 2 && q != 3)
    throw UnsupportedOrder("symplectic quadrangle order must be in {2,3}");
  gf::Field F(q);
  auto pts = gf::projective_points(F, 4);
  auto sym = [&](const gf::Vec& u, const gf::Vec& v) {
    // u0 v1 - u1 v0 + u2 v3 - u3 v2
    gf::elt s = F.sub(F.mul(u[0], v[1]), F.mul(u[1], v[0]));
    return F.add(s, F.sub(F.mul(u[2], v[3]), F.mul(u[3], v[2])));
  };
  auto spaces = gf::two_dim_subspaces(F, 4);
  std::vector<gf::Mat> lines;
  for (auto& sp : spaces) {
    gf::Vec b0(sp.a.begin(), sp.a.begin() + 4);
    gf::Vec b1(sp.a.begin() + 4, sp.a.end());
    if (sym(b0, b1) == 0) lines.push_back(sp);
  }
  std::vector<std::pair<int, int>> inc;
  for (int l = 0; l < int(lines.size()); ++l)
    for (int p = 0; p < int(pts.size()); ++p)
      if (gf::subspace_contains(F, lines[l], pts[p])) inc.emplace_back(p, l);
  IncidenceGeometry g(Kind::C2, int(pts.size()), int(lines.size()), std::move(inc));
  require_axioms(g, "W(" + std::to_string(q) + ")");
  return g;
}

// Split Cayley hexagon of order (2,2), via the standard embedding in the
// parabolic quadric Q(6,2): x0 x4 + x1 x5 + x2 x6 = x3^2.  Hexagon lines are
// the quadric lines whose Grassmann coordinates satisfy the six classical
// relations.  The axiom audit below is what certifies the construction.
inline IncidenceGeometry build_split_cayley_hexagon() {
  gf::Field F(2);
  auto quadric = [&](const gf::Vec& x) {
    gf::elt s = F.mul(x[3], x[3]);
    s = F.add(s, F.mul(x[0], x[4]));
    s = F.add(s, F.mul(x[1], x[5]));
    s = F.add(s, F.mul(x[2], x[6]));
    return s;
  };
  std::vector<gf::Vec> pts;
  for (const auto& v : gf::projective_points(F, 7))
    if (quadric(v) == 0) pts.push_back(v);

  auto on_quadric_line = [&](const gf::Vec& u, const gf::Vec& v) {
    // polarization of the quadric (char 2: the x3^2 term drops out)
    gf::elt b = 0;
    b = F.add(b, F.add(F.mul(u[0], v[4]), F.mul(u[4], v[0])));
    b = F.add(b, F.add(F.mul(u[1], v[5]), F.mul(u[5], v[1])));
    b = F.add(b, F.add(F.mul(u[2], v[6]), F.mul(u[6], v[2])));
    return b == 0;
  };
  auto grassmann = [&](const gf::Vec& u, const gf::Vec& v, int i, int j) {
    return F.add(F.mul(u[i], v[j]), F.mul(u[j], v[i]));
  };
  auto hexagon_line = [&](const gf::Vec& u, const gf::Vec& v) {
    auto p = [&](int i, int j) { return grassmann(u, v, i, j); };
    return p(1, 2) == p(3, 4) && p(2, 0) == p(3, 5) && p(0, 1) == p(3, 6) &&
           p(5, 6) == p(3, 0) && p(6, 4) == p(3, 1) && p(4, 5) == p(3, 2);
  };

  std::map<std::vector<int>, bool> line_set;
  for (int i = 0; i < int(pts.size()); ++i)
    for (int j = i + 1; j < int(pts.size()); ++j) {
      if (!on_quadric_line(pts[i], pts[j])) continue;
      if (!hexagon_line(pts[i], pts[j])) continue;
      gf::Vec third(7);
      for (int k = 0; k < 7; ++k) third[k] = F.add(pts[i][k], pts[j][k]);
      int t = -1;
      for (int k = 0; k < int(pts.size()); ++k)
        if (pts[k] == third) { t = k; break; }
      if (t < 0) throw Contradiction("hexagon: third point of a line left the quadric");
      std::vector<int> key{i, j, t};
      std::sort(key.begin(), key.end());
      line_set[key] = true;
    }

  std::vector<std::pair<int, int>> inc;
  int line_id = 0;
  for (const auto& [key, _] : line_set) {
    for (int p : key) inc.emplace_back(p, line_id);
    ++line_id;
  }
  IncidenceGeometry g(Kind::G2, int(pts.size()), line_id, std::move(inc));
  require_axioms(g, "split Cayley hexagon G2(2)");
  return g;
}

// ---------------------------------------------------------------------------
// Serialization

inline nlohmann::json to_json(const IncidenceGeometry& g) {
  nlohmann::json j;
  j["kind"] = kind_name(g.kind());
  j["n"] = g.n();
  std::vector<int> pts(g.num_points()), lns(g.num_lines());
  for (int i = 0; i < g.num_points(); ++i) pts[i] = i;
  for (int i = 0; i < g.num_lines(); ++i) lns[i] = i;
  j["points"] = pts;
  j["lines"] = lns;
  auto inc = nlohmann::json::array();
  for (auto [p, l] : g.incidence()) inc.push_back({p, l});
  j["incidence"] = inc;
  return j;
}

inline IncidenceGeometry geometry_from_json(const nlohmann::json& j) {
  Kind kind = kind_from_name(j.at("kind").get<std::string>());
  if (j.contains("n") && j.at("n").get<int>() != gonality(kind))
    throw Error("geometry JSON: n does not match kind");
  int np = int(j.at("points").size());
  int nl = int(j.at("lines").size());
  std::vector<std::pair<int, int>> inc;
  for (const auto& e : j.at("incidence")) inc.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
  return IncidenceGeometry(kind, np, nl, std::move(inc));
}

inline std::string to_dot(const IncidenceGeometry& g) {
  std::ostringstream os;
  os << "graph incidence {\n";
  for (int p = 0; p < g.num_points(); ++p)
    os << "  p" << p << " [shape=circle];\n";
  for (int l = 0; l < g.num_lines(); ++l)
    os << "  l" << l << " [shape=box];\n";
  for (auto [p, l] : g.incidence()) os << "  p" << p << " -- l" << l << ";\n";
  os << "}\n";
  return os.str();
}

}  // namespace forge::polygon
