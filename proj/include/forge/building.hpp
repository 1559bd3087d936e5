#pragma once

// The desk-scale discrete affine building for SL3 over GF(q)((t)): vertices
// are homothety classes of rank-3 lattices in canonical Hermite form, the
// exact metric comes from Smith normal form valuations, links are projective
// planes handed back as polygon geometries, and matrices act as isometries
// classified elliptic/hyperbolic through Newton polygons.

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "forge/errors.hpp"
#include "forge/gf.hpp"
#include "forge/laurent.hpp"
#include "forge/numeric.hpp"
#include "forge/polygon.hpp"
#include "json.hpp"

namespace forge::lattice {

using laurent::Series;
using laurent::SMat;

struct Context {
  const gf::Field& F;  // interned; series keep pointers into it
  int window;

  Context(int q, int window_) : F(gf::shared_field(q)), window(window_) {
    if (q != 2 && q != 3) throw UnsupportedOrder("lattice building supports q in {2,3}");
    if (window < 4) throw EmptyInput("precision window too small");
  }

  // working precision for an operation whose inputs span the given exponents
  int op_window(int span) const { return std::max(window, span + 8); }
};

inline int exponent_span(const SMat& m) {
  int lo = 0, hi = 0;
  for (const auto& s : m.a) {
    if (s.is_zero_known() || s.is_truncated_zero()) continue;
    lo = std::min(lo, s.content_lower());
    hi = std::max(hi, s.content_upper());
  }
  return hi - lo;
}

class LatticeVertex {
 public:
  LatticeVertex() = default;
  const SMat& basis() const { return *basis_; }
  const std::string& key() const { return key_; }
  int det_valuation() const { return det_val_; }
  int type() const { return ((det_val_ % 3) + 3) % 3; }

  friend bool operator==(const LatticeVertex& a, const LatticeVertex& b) {
    return a.key_ == b.key_;
  }
  friend bool operator!=(const LatticeVertex& a, const LatticeVertex& b) { return !(a == b); }
  friend bool operator<(const LatticeVertex& a, const LatticeVertex& b) {
    return a.key_ < b.key_;
  }

 private:
  friend LatticeVertex canonicalize(const Context&, const SMat&);
  std::shared_ptr<const SMat> basis_;
  std::string key_;
  int det_val_ = 0;
};

// Unique representative per homothety class: Hermite basis, then a global
// t-shift making the minimal entry valuation zero.  Idempotent.
inline LatticeVertex canonicalize(const Context& ctx, const SMat& generators) {
  int w = ctx.op_window(exponent_span(generators));
  SMat h = laurent::hermite_basis(generators, w);
  int minv = laurent::kInfVal;
  for (const auto& s : h.a) {
    if (s.is_zero_known()) continue;
    if (s.is_truncated_zero()) continue;
    minv = std::min(minv, s.val());
  }
  if (minv == laurent::kInfVal) throw SingularBasis("canonicalize: zero matrix");
  SMat shifted(ctx.F, 3, 3);
  for (int i = 0; i < 9; ++i) shifted.a[i] = h.a[i].shifted(-minv);
  // every entry of row i must be fully known below the diagonal valuation
  for (int i = 0; i < 3; ++i) {
    int ai = shifted.at(i, i).val();
    for (int j = 0; j < 3; ++j)
      if (shifted.at(i, j).prec() < ai)
        throw PrecisionExhausted("canonical form not determined at this window");
  }
  LatticeVertex v;
  v.basis_ = std::make_shared<SMat>(shifted);
  v.key_ = shifted.key();
  v.det_val_ = shifted.at(0, 0).val() + shifted.at(1, 1).val() + shifted.at(2, 2).val();
  return v;
}

inline LatticeVertex base_vertex(const Context& ctx) {
  return canonicalize(ctx, SMat::identity(ctx.F, 3));
}

// ---------------------------------------------------------------------------
// Relative position and metric

// Elementary-divisor valuations of the basis change from a to b, sorted
// descending and normalized so the last entry is 0.
inline std::array<int, 3> snf_valuations(const Context& ctx, const LatticeVertex& a,
                                         const LatticeVertex& b) {
  int span = exponent_span(a.basis()) + exponent_span(b.basis());
  int w = ctx.op_window(span);
  SMat rel = laurent::mat_mul(laurent::inverse3(a.basis(), w), b.basis());
  auto vals = laurent::smith3(rel, w).vals;  // ascending
  return {vals[2] - vals[0], vals[1] - vals[0], 0};
}

// sqrt(3/2) * || m - mean ||_2 so that adjacent vertices sit at distance 1.
inline Surd cat0_distance_from_position(const std::array<int, 3>& m) {
  Rational mean(m[0] + m[1] + m[2], 3);
  Rational q(0);
  for (int i = 0; i < 3; ++i) {
    Rational d = Rational(m[i]) - mean;
    q += d * d;
  }
  return Surd::sqrt_of(Rational(3, 2) * q);
}

inline Surd cat0_distance(const Context& ctx, const LatticeVertex& a, const LatticeVertex& b) {
  return cat0_distance_from_position(snf_valuations(ctx, a, b));
}

inline bool adjacent(const Context& ctx, const LatticeVertex& a, const LatticeVertex& b) {
  auto m = snf_valuations(ctx, a, b);
  return (m[0] == 1 && m[1] == 0) || (m[0] == 1 && m[1] == 1);
}

// ---------------------------------------------------------------------------
// Neighbors: sublattice chains t L < L' < L, indexed by the subspaces of
// L / tL.  Type tau+1 neighbors come from 2-dimensional subspaces (index q),
// type tau+2 neighbors from 1-dimensional ones (index q^2); enumeration
// order follows the canonical subspace order, which fixes all ids downstream.

inline LatticeVertex neighbor_from_subspace(const Context& ctx, const LatticeVertex& v,
                                            const std::vector<gf::Vec>& subspace_basis) {
  const SMat& B = v.basis();
  int k = int(subspace_basis.size());
  SMat gens(ctx.F, 3, 3 + k);
  Series t = Series::monomial(ctx.F, 1, 1);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) gens.at(i, j) = t * B.at(i, j);
  for (int c = 0; c < k; ++c)
    for (int i = 0; i < 3; ++i) {
      Series acc = Series::zero(ctx.F);
      for (int j = 0; j < 3; ++j)
        if (subspace_basis[c][j])
          acc = acc + Series::monomial(ctx.F, subspace_basis[c][j], 0) * B.at(i, j);
      gens.at(i, 3 + c) = acc;
    }
  return canonicalize(ctx, gens);
}

struct NeighborSet {
  std::vector<LatticeVertex> type_up;    // type tau+1 (2-dim subspaces)
  std::vector<LatticeVertex> type_down;  // type tau+2 (1-dim subspaces)

  std::vector<LatticeVertex> all() const {
    std::vector<LatticeVertex> out = type_up;
    out.insert(out.end(), type_down.begin(), type_down.end());
    return out;
  }
};

inline NeighborSet neighbors(const Context& ctx, const LatticeVertex& v) {
  NeighborSet out;
  auto pts = gf::projective_points(ctx.F, 3);
  // 2-dimensional subspaces as kernels of the canonical forms
  for (const auto& form : pts) {
    std::vector<gf::Vec> basis;
    for (const auto& p : pts)
      if (gf::dot(ctx.F, form, p) == 0) basis.push_back(p);
    out.type_up.push_back(neighbor_from_subspace(ctx, v, {basis[0], basis[1]}));
  }
  for (const auto& p : pts) out.type_down.push_back(neighbor_from_subspace(ctx, v, {p}));
  return out;
}

// ---------------------------------------------------------------------------
// Matrix isometries

struct MatrixIsometry {
  SMat matrix;
  int det_valuation = 0;

  bool type_preserving() const { return det_valuation % 3 == 0; }
};

inline MatrixIsometry make_isometry(const Context& ctx, const SMat& m) {
  if (m.rows != 3 || m.cols != 3) throw Error("isometries are 3x3 matrices");
  Series d = laurent::det3(m);
  if (d.is_zero_known()) throw SingularBasis("isometry matrix has zero determinant");
  MatrixIsometry g{m, d.val()};
  (void)ctx;
  return g;
}

inline MatrixIsometry compose(const MatrixIsometry& a, const MatrixIsometry& b) {
  // apply a, then b (column action: matrices multiply on the left)
  return {laurent::mat_mul(b.matrix, a.matrix), a.det_valuation + b.det_valuation};
}

inline MatrixIsometry isometry_inverse(const Context& ctx, const MatrixIsometry& g) {
  int w = ctx.op_window(2 * exponent_span(g.matrix));
  return {laurent::inverse3(g.matrix, w), -g.det_valuation};
}

inline LatticeVertex act(const Context& ctx, const MatrixIsometry& g, const LatticeVertex& v) {
  return canonicalize(ctx, laurent::mat_mul(g.matrix, v.basis()));
}

// ---------------------------------------------------------------------------
// Balls

struct BuildingBall {
  int q = 2;
  int radius = 0;
  std::vector<LatticeVertex> vertices;  // BFS discovery order; [0] = center
  std::vector<int> depth;
  std::vector<std::pair<int, int>> edges;          // index pairs, i < j
  std::vector<std::array<int, 3>> triangles;       // sorted index triples
  std::unordered_map<std::string, int> index_of;   // key -> vertex index
  std::vector<std::vector<int>> adjacency;         // per-vertex neighbor indices

  bool contains(const LatticeVertex& v) const { return index_of.count(v.key()) > 0; }
  int index(const LatticeVertex& v) const {
    auto it = index_of.find(v.key());
    if (it == index_of.end()) throw UnknownPanel("vertex not in ball");
    return it->second;
  }
  bool interior(int idx) const { return depth.at(idx) < radius; }
};

inline BuildingBall build_ball(int q, int radius) {
  if (radius < 0 || radius > 3) throw UnsupportedOrder("desk-scale balls have radius <= 3");
  Context ctx(q, 2 * radius + 4);
  BuildingBall ball;
  ball.q = q;
  ball.radius = radius;
  LatticeVertex v0 = base_vertex(ctx);
  ball.vertices.push_back(v0);
  ball.depth.push_back(0);
  ball.index_of.emplace(v0.key(), 0);
  std::set<std::pair<int, int>> edge_set;
  for (size_t head = 0; head < ball.vertices.size(); ++head) {
    if (ball.depth[head] == radius) continue;
    auto nbrs = neighbors(ctx, ball.vertices[head]);
    for (const auto& n : nbrs.all()) {
      auto it = ball.index_of.find(n.key());
      int idx;
      if (it == ball.index_of.end()) {
        idx = int(ball.vertices.size());
        ball.vertices.push_back(n);
        ball.depth.push_back(ball.depth[head] + 1);
        ball.index_of.emplace(n.key(), idx);
      } else {
        idx = it->second;
      }
      edge_set.insert({std::min(int(head), idx), std::max(int(head), idx)});
    }
  }
  ball.edges.assign(edge_set.begin(), edge_set.end());
  ball.adjacency.assign(ball.vertices.size(), {});
  for (auto [i, j] : ball.edges) {
    ball.adjacency[i].push_back(j);
    ball.adjacency[j].push_back(i);
    if (ball.vertices[i].type() == ball.vertices[j].type())
      throw Contradiction("ball: adjacent vertices with equal type");
  }
  for (auto& adj : ball.adjacency) std::sort(adj.begin(), adj.end());
  // triangles: for each edge, common neighbors with larger index
  std::set<std::array<int, 3>> tri_set;
  for (auto [i, j] : ball.edges) {
    std::vector<int> common;
    std::set_intersection(ball.adjacency[i].begin(), ball.adjacency[i].end(),
                          ball.adjacency[j].begin(), ball.adjacency[j].end(),
                          std::back_inserter(common));
    for (int k : common) {
      std::array<int, 3> tri{i, j, k};
      std::sort(tri.begin(), tri.end());
      tri_set.insert(tri);
    }
  }
  ball.triangles.assign(tri_set.begin(), tri_set.end());
  // every edge lies in at least one triangle (chamber condition at desk scale)
  std::map<std::pair<int, int>, int> edge_tris;
  for (const auto& tri : ball.triangles) {
    edge_tris[{tri[0], tri[1]}]++;
    edge_tris[{tri[0], tri[2]}]++;
    edge_tris[{tri[1], tri[2]}]++;
  }
  for (auto [i, j] : ball.edges)
    if (ball.interior(i) && ball.interior(j) && edge_tris[{i, j}] == 0)
      throw Contradiction("ball: interior edge in no chamber");
  return ball;
}

// ---------------------------------------------------------------------------
// Links.  The link of a vertex is a projective plane of order q; points are
// the type tau+1 neighbors, lines the type tau+2 neighbors, incidence is
// adjacency in the building.

struct LinkModel {
  polygon::IncidenceGeometry geometry;
  std::vector<LatticeVertex> points;
  std::vector<LatticeVertex> lines;

  int point_index(const LatticeVertex& v) const {
    for (size_t i = 0; i < points.size(); ++i)
      if (points[i] == v) return int(i);
    throw UnknownPanel("vertex is not a point of this link");
  }
  int line_index(const LatticeVertex& v) const {
    for (size_t i = 0; i < lines.size(); ++i)
      if (lines[i] == v) return int(i);
    throw UnknownPanel("vertex is not a line of this link");
  }
};

inline LinkModel link_model(const Context& ctx, const LatticeVertex& v) {
  auto nbrs = neighbors(ctx, v);
  std::vector<std::pair<int, int>> inc;
  for (int i = 0; i < int(nbrs.type_up.size()); ++i)
    for (int j = 0; j < int(nbrs.type_down.size()); ++j)
      if (adjacent(ctx, nbrs.type_up[i], nbrs.type_down[j])) inc.emplace_back(i, j);
  polygon::IncidenceGeometry g(polygon::Kind::A2, int(nbrs.type_up.size()),
                               int(nbrs.type_down.size()), std::move(inc));
  return LinkModel{std::move(g), std::move(nbrs.type_up), std::move(nbrs.type_down)};
}

inline LinkModel link_of(const Context& ctx, const LatticeVertex& v, const BuildingBall& ball) {
  int idx = ball.index(v);
  if (!ball.interior(idx))
    throw BoundaryVertex("link undefined: vertex has neighbors outside the ball");
  return link_model(ctx, v);
}

// ---------------------------------------------------------------------------
// Isometry classification

enum class IsometryKind { Elliptic, Hyperbolic, Inconclusive };

struct IsometryVerdict {
  IsometryKind kind = IsometryKind::Inconclusive;
  std::optional<int> fixed_vertex;            // ball index, elliptic case
  Surd translation_length = Surd(Rational(0));
  std::array<Rational, 3> root_valuations{};  // descending
  std::vector<Surd> displacements;            // d(v0, g^k v0), k = 1..powers
};

inline Surd translation_length_from_valuations(const std::array<Rational, 3>& nu) {
  Rational mean = (nu[0] + nu[1] + nu[2]) / Rational(3);
  Rational q(0);
  for (int i = 0; i < 3; ++i) {
    Rational d = nu[i] - mean;
    q += d * d;
  }
  return Surd::sqrt_of(Rational(3, 2) * q);
}

inline IsometryVerdict classify_isometry(const Context& ctx, const MatrixIsometry& g,
                                         const BuildingBall& ball, int powers = 4) {
  if (!g.type_preserving())
    throw TypePreservationViolation("classification requires a type-preserving isometry");
  IsometryVerdict verdict;
  verdict.root_valuations = laurent::newton_root_valuations(laurent::char_poly3(g.matrix));
  verdict.translation_length = translation_length_from_valuations(verdict.root_valuations);

  for (int i = 0; i < int(ball.vertices.size()); ++i) {
    if (act(ctx, g, ball.vertices[i]) == ball.vertices[i]) {
      verdict.fixed_vertex = i;
      break;
    }
  }
  if (verdict.fixed_vertex) {
    if (verdict.translation_length.sign() != 0)
      throw ContradictionDetected(
          "fixed vertex found for an isometry with positive translation length");
    verdict.kind = IsometryKind::Elliptic;
    return verdict;
  }
  if (verdict.translation_length.sign() > 0) {
    verdict.kind = IsometryKind::Hyperbolic;
    LatticeVertex v0 = base_vertex(ctx);
    MatrixIsometry power = g;
    for (int k = 1; k <= powers; ++k) {
      Surd d = cat0_distance(ctx, v0, act(ctx, power, v0));
      // d(x, g^k x) >= k * l(g) for every isometry
      if (d < Rational(k) * verdict.translation_length)
        throw ContradictionDetected("displacement fell below k times the translation length");
      verdict.displacements.push_back(d);
      if (k < powers) power = compose(power, g);
    }
    return verdict;
  }
  verdict.kind = IsometryKind::Inconclusive;
  return verdict;
}

// ---------------------------------------------------------------------------
// Fixed sets of generator lists (simplex sets at barycenter resolution)

struct FixedSet {
  std::vector<int> vertices;
  std::vector<std::pair<int, int>> edges;
  std::vector<std::array<int, 3>> triangles;

  bool empty() const { return vertices.empty() && edges.empty() && triangles.empty(); }
};

inline FixedSet fixed_set(const Context& ctx, const std::vector<MatrixIsometry>& gens,
                          const BuildingBall& ball) {
  for (const auto& g : gens) {
    if (!g.type_preserving())
      throw TypePreservationViolation("fixed sets are computed for type-preserving generators");
    auto verdict = classify_isometry(ctx, g, ball);
    if (verdict.kind == IsometryKind::Hyperbolic)
      throw NotElliptic("generator is hyperbolic; its fixed set is empty");
    if (verdict.kind == IsometryKind::Inconclusive)
      throw EmptyOnBall("generator fixes nothing within this ball (inconclusive)");
  }
  FixedSet out;
  std::vector<bool> vfixed(ball.vertices.size(), false);
  for (int i = 0; i < int(ball.vertices.size()); ++i) {
    bool fixed = true;
    for (const auto& g : gens)
      if (!(act(ctx, g, ball.vertices[i]) == ball.vertices[i])) {
        fixed = false;
        break;
      }
    vfixed[i] = fixed;
    if (fixed) out.vertices.push_back(i);
  }
  // type-preserving maps cannot permute a simplex's vertices (types are
  // pairwise distinct), so setwise fixed = pointwise fixed
  for (auto [i, j] : ball.edges)
    if (vfixed[i] && vfixed[j]) out.edges.emplace_back(i, j);
  for (const auto& tri : ball.triangles)
    if (vfixed[tri[0]] && vfixed[tri[1]] && vfixed[tri[2]]) out.triangles.push_back(tri);
  if (out.empty()) throw EmptyOnBall("no fixed simplex within the ball radius");
  // convexity spot-check: unique midpoint vertices between fixed vertices
  // must be fixed
  for (size_t a = 0; a < out.vertices.size(); ++a)
    for (size_t b = a + 1; b < out.vertices.size(); ++b) {
      int i = out.vertices[a], j = out.vertices[b];
      Surd d = cat0_distance(ctx, ball.vertices[i], ball.vertices[j]);
      std::vector<int> mids;
      for (int m = 0; m < int(ball.vertices.size()); ++m) {
        Surd dm1 = cat0_distance(ctx, ball.vertices[i], ball.vertices[m]);
        Surd dm2 = cat0_distance(ctx, ball.vertices[m], ball.vertices[j]);
        if (dm1 == dm2 && dm1 + dm2 == d) mids.push_back(m);
      }
      if (mids.size() == 1 && !vfixed[mids.front()])
        throw Contradiction("fixed set fails convexity at a unique midpoint vertex");
    }
  return out;
}

// ---------------------------------------------------------------------------
// Serialization

inline nlohmann::json ball_to_json(const BuildingBall& ball) {
  nlohmann::json j;
  j["q"] = ball.q;
  j["radius"] = ball.radius;
  auto verts = nlohmann::json::array();
  for (size_t i = 0; i < ball.vertices.size(); ++i) {
    verts.push_back({{"basis", laurent::mat_to_json(ball.vertices[i].basis())},
                     {"type", ball.vertices[i].type()},
                     {"depth", ball.depth[i]}});
  }
  j["vertices"] = verts;
  auto edges = nlohmann::json::array();
  for (auto [a, b] : ball.edges) edges.push_back({a, b});
  j["edges"] = edges;
  auto tris = nlohmann::json::array();
  for (const auto& t : ball.triangles) tris.push_back({t[0], t[1], t[2]});
  j["triangles"] = tris;
  return j;
}

inline MatrixIsometry isometry_from_json(const Context& ctx, const nlohmann::json& j) {
  return make_isometry(ctx, laurent::mat_from_json(ctx.F, j));
}

// The diagonal isometry diag(t^a, t^b, t^c).
inline MatrixIsometry diag_isometry(const Context& ctx, int a, int b, int c) {
  SMat m(ctx.F, 3, 3);
  m.at(0, 0) = Series::monomial(ctx.F, 1, a);
  m.at(1, 1) = Series::monomial(ctx.F, 1, b);
  m.at(2, 2) = Series::monomial(ctx.F, 1, c);
  return make_isometry(ctx, m);
}

// The Singer companion matrix (of x^3 + x + 1 for q=2, x^3 + 2x + 1 for
// q=3), a constant-matrix isometry of order dividing q^2 + q + 1 fixing the
// base vertex and acting fixed-point-freely on its link panels.
inline MatrixIsometry singer_isometry(const Context& ctx) {
  SMat m(ctx.F, 3, 3);
  m.at(1, 0) = Series::one(ctx.F);
  m.at(2, 1) = Series::one(ctx.F);
  if (ctx.F.q() == 2) {
    m.at(0, 2) = Series::one(ctx.F);
    m.at(1, 2) = Series::one(ctx.F);
  } else {
    // x^3 = -1 - 2x = 2 + x over GF(3)
    m.at(0, 2) = Series::monomial(ctx.F, 2, 0);
    m.at(1, 2) = Series::one(ctx.F);
  }
  return make_isometry(ctx, m);
}

}  // namespace forge::lattice
