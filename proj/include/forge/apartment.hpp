#pragma once

// A Euclidean apartment: the plane with affine Weyl arrangement data of type
// A2 or C2, exact rational coordinates, Busemann functions of rays, and
// horoballs.  Coordinates are taken in a lattice basis whose Gram matrix
// makes every inner product rational (adjacent special vertices at distance
// 1); angles come out as exact cosines.

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "forge/errors.hpp"
#include "forge/numeric.hpp"
#include "json.hpp"

namespace forge::apartment {

struct Vec2 {
  Rational x, y;

  friend Vec2 operator+(const Vec2& a, const Vec2& b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(const Vec2& a, const Vec2& b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(const Rational& s, const Vec2& v) { return {s * v.x, s * v.y}; }
  Vec2 operator-() const { return {-x, -y}; }
  bool is_zero() const { return x.is_zero() && y.is_zero(); }
  friend bool operator==(const Vec2&, const Vec2&) = default;

  std::string to_string() const { return "(" + x.to_string() + ", " + y.to_string() + ")"; }
};

using ApartmentPoint = Vec2;

enum class WeylKind { A2affine, C2affine };

inline std::string weyl_kind_name(WeylKind k) {
  return k == WeylKind::A2affine ? "A2affine" : "C2affine";
}
inline WeylKind weyl_kind_from_name(const std::string& s) {
  if (s == "A2affine") return WeylKind::A2affine;
  if (s == "C2affine") return WeylKind::C2affine;
  throw Error("unknown apartment kind: " + s);
}

struct Ray {
  ApartmentPoint base;
  Vec2 direction;  // any nonzero rational vector; scaling is normalized away
};

// An affine wall: { p : form(p) = level }, with the form one of the root
// forms of the arrangement.
struct Wall {
  int family = 0;
  Rational level;
};

class WeylData {
 public:
  explicit WeylData(WeylKind kind) : kind_(kind) {
    if (kind == WeylKind::A2affine) {
      g00_ = Rational(1);
      g01_ = Rational(1, 2);
      g11_ = Rational(1);
      // wall families: y = k, x = k, x + y = k; directions along the walls
      forms_ = {{Rational(0), Rational(1)}, {Rational(1), Rational(0)}, {Rational(1), Rational(1)}};
      wall_dirs_ = {{Rational(1), Rational(0)},
                    {Rational(0), Rational(1)},
                    {Rational(1), Rational(-1)}};
    } else {
      g00_ = Rational(1);
      g01_ = Rational(0);
      g11_ = Rational(1);
      // wall families: x = k, y = k, x + y = k, x - y = k
      forms_ = {{Rational(1), Rational(0)},
                {Rational(0), Rational(1)},
                {Rational(1), Rational(1)},
                {Rational(1), Rational(-1)}};
      wall_dirs_ = {{Rational(0), Rational(1)},
                    {Rational(1), Rational(0)},
                    {Rational(1), Rational(-1)},
                    {Rational(1), Rational(1)}};
    }
  }

  WeylKind kind() const { return kind_; }
  int num_wall_families() const { return int(forms_.size()); }
  Vec2 wall_direction(int family) const { return wall_dirs_.at(family); }

  Rational inner(const Vec2& u, const Vec2& v) const {
    return g00_ * u.x * v.x + g01_ * (u.x * v.y + u.y * v.x) + g11_ * u.y * v.y;
  }
  Rational norm2(const Vec2& u) const { return inner(u, u); }
  Surd norm(const Vec2& u) const { return Surd::sqrt_of(norm2(u)); }

  Rational form(int family, const Vec2& p) const {
    return forms_.at(family).x * p.x + forms_.at(family).y * p.y;
  }

  // The two sector-panel types.  Ray directions along walls fall into the
  // two orbits of the finite reflection group; in A2 opposite rays on one
  // wall have different types, in C2 they agree.
  std::optional<int> ray_type(const Vec2& dir) const {
    if (dir.is_zero()) throw DegenerateDirection("zero direction has no type");
    if (kind_ == WeylKind::A2affine) {
      // type 0: rays of {e1, e2-e1, -e2}; type 1: the negatives
      static const std::vector<std::pair<i64, i64>> type0 = {{1, 0}, {-1, 1}, {0, -1}};
      for (auto [a, b] : type0) {
        if (same_ray(dir, {Rational(a), Rational(b)})) return 0;
        if (same_ray(dir, {Rational(-a), Rational(-b)})) return 1;
      }
      return std::nullopt;
    }
    static const std::vector<std::pair<i64, i64>> axis = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    for (auto [a, b] : axis)
      if (same_ray(dir, {Rational(a), Rational(b)})) return 0;
    static const std::vector<std::pair<i64, i64>> diag = {{1, 1}, {1, -1}, {-1, 1}, {-1, -1}};
    for (auto [a, b] : diag)
      if (same_ray(dir, {Rational(a), Rational(b)})) return 1;
    return std::nullopt;
  }

  // Reflection across the wall, w.r.t. the Gram inner product.
  Vec2 reflect(const Wall& wall, const Vec2& p) const {
    // normal n with <n, v> = form(v): n = G^{-1} f
    Vec2 f = forms_.at(wall.family);
    Rational det = g00_ * g11_ - g01_ * g01_;
    Vec2 n{(g11_ * f.x - g01_ * f.y) / det, (g00_ * f.y - g01_ * f.x) / det};
    Rational t = (form(wall.family, p) - wall.level) / form(wall.family, n);
    return p - (Rational(2) * t) * n;
  }

  // Special vertices form the integer lattice in these coordinates.
  bool is_special_vertex(const Vec2& p) const { return p.x.den() == 1 && p.y.den() == 1; }

 private:
  static bool same_ray(const Vec2& u, const Vec2& v) {
    // u = s v with s > 0
    Rational cross = u.x * v.y - u.y * v.x;
    if (!cross.is_zero()) return false;
    Rational dot = u.x * v.x + u.y * v.y;  // coordinate dot is fine for sign
    return dot.sign() > 0;
  }

  WeylKind kind_;
  Rational g00_, g01_, g11_;
  std::vector<Vec2> forms_;
  std::vector<Vec2> wall_dirs_;
};

// ---------------------------------------------------------------------------
// Busemann functions and horoballs

// Closed form of lim_{t->inf} [ d(x, r(t)) - t ] in the flat plane.
inline Surd busemann(const WeylData& w, const Ray& r, const ApartmentPoint& x) {
  if (r.direction.is_zero()) throw DegenerateDirection("ray with zero direction");
  Rational ip = w.inner(x - r.base, r.direction);
  return Surd(-ip) / w.norm(r.direction);
}

inline bool horoball_contains(const WeylData& w, const Ray& r, const Surd& level,
                              const ApartmentPoint& x) {
  return busemann(w, r, x) <= level;
}
inline bool horoball_contains(const WeylData& w, const Ray& r, const Rational& level,
                              const ApartmentPoint& x) {
  return horoball_contains(w, r, Surd(level), x);
}

// Angle at a between the directions toward u and v, as an exact cosine.
inline CosAngle vertex_angle(const WeylData& w, const ApartmentPoint& a, const ApartmentPoint& u,
                             const ApartmentPoint& v) {
  Vec2 du = u - a, dv = v - a;
  if (du.is_zero() || dv.is_zero())
    throw DegenerateDirection("vertex_angle needs directions distinct from the vertex");
  Surd denom = Surd::sqrt_of(w.norm2(du) * w.norm2(dv));
  return CosAngle(Surd(w.inner(du, dv)) / denom);
}

inline CosAngle direction_angle(const WeylData& w, const Vec2& du, const Vec2& dv) {
  if (du.is_zero() || dv.is_zero()) throw DegenerateDirection("zero direction");
  Surd denom = Surd::sqrt_of(w.norm2(du) * w.norm2(dv));
  return CosAngle(Surd(w.inner(du, dv)) / denom);
}

// Guaranteed Busemann increment for a step of length d at the given angle
// from the ray direction: d * max(0, -cos(angle)).
inline Surd busemann_step_bound(const Surd& d, const CosAngle& angle) {
  if (d.sign() <= 0) throw EmptyInput("step bound needs d > 0");
  Surd drop = -angle.cosine();
  if (drop.sign() <= 0) return Surd(Rational(0));
  return d * drop;
}
inline Surd busemann_step_bound(const Surd& d, const Angle& angle) {
  return busemann_step_bound(d, CosAngle::of(angle));
}

struct WallThrough {
  Wall wall;
  Vec2 direction;
  std::optional<int> positive_ray_type;
  std::optional<int> negative_ray_type;
};

// All walls of the affine arrangement through p.
inline std::vector<WallThrough> weyl_walls_through(const WeylData& w, const ApartmentPoint& p) {
  std::vector<WallThrough> out;
  for (int fam = 0; fam < w.num_wall_families(); ++fam) {
    Rational level = w.form(fam, p);
    if (level.den() != 1) continue;  // walls sit at integer levels
    WallThrough wt;
    wt.wall = {fam, level};
    wt.direction = w.wall_direction(fam);
    wt.positive_ray_type = w.ray_type(wt.direction);
    wt.negative_ray_type = w.ray_type(-wt.direction);
    out.push_back(wt);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Scene serialization and the SVG emitter (report figures)

struct Scene {
  WeylKind kind = WeylKind::A2affine;
  std::vector<std::pair<ApartmentPoint, std::string>> points;
  std::vector<std::pair<Ray, std::string>> rays;
  std::vector<std::pair<Wall, std::string>> walls;
  std::vector<std::pair<int, Rational>> horoball_levels;  // (ray index, level)
};

inline nlohmann::json to_json(const Vec2& v) { return {v.x.to_string(), v.y.to_string()}; }
inline Vec2 vec2_from_json(const nlohmann::json& j) {
  return {Rational::parse(j.at(0).get<std::string>()), Rational::parse(j.at(1).get<std::string>())};
}

inline nlohmann::json to_json(const Scene& s) {
  nlohmann::json j;
  j["kind"] = weyl_kind_name(s.kind);
  auto pts = nlohmann::json::array();
  for (const auto& [p, label] : s.points) pts.push_back({{"at", to_json(p)}, {"label", label}});
  j["points"] = pts;
  auto rays = nlohmann::json::array();
  for (const auto& [r, label] : s.rays)
    rays.push_back(
        {{"base", to_json(r.base)}, {"dir", to_json(r.direction)}, {"label", label}});
  j["rays"] = rays;
  auto walls = nlohmann::json::array();
  for (const auto& [wl, label] : s.walls)
    walls.push_back(
        {{"family", wl.family}, {"level", wl.level.to_string()}, {"label", label}});
  j["walls"] = walls;
  auto levels = nlohmann::json::array();
  for (const auto& [ri, lv] : s.horoball_levels)
    levels.push_back({{"ray", ri}, {"level", lv.to_string()}});
  j["levels"] = levels;
  return j;
}

inline Scene scene_from_json(const nlohmann::json& j) {
  Scene s;
  s.kind = weyl_kind_from_name(j.at("kind").get<std::string>());
  for (const auto& e : j.value("points", nlohmann::json::array()))
    s.points.emplace_back(vec2_from_json(e.at("at")), e.value("label", ""));
  for (const auto& e : j.value("rays", nlohmann::json::array()))
    s.rays.emplace_back(Ray{vec2_from_json(e.at("base")), vec2_from_json(e.at("dir"))},
                        e.value("label", ""));
  for (const auto& e : j.value("walls", nlohmann::json::array()))
    s.walls.emplace_back(Wall{e.at("family").get<int>(),
                              Rational::parse(e.at("level").get<std::string>())},
                         e.value("label", ""));
  for (const auto& e : j.value("levels", nlohmann::json::array()))
    s.horoball_levels.emplace_back(e.at("ray").get<int>(),
                                   Rational::parse(e.at("level").get<std::string>()));
  return s;
}

namespace detail {

// Cartesian embedding for drawing only (floats are fine here; nothing
// load-bearing is computed from the figure).
inline std::pair<double, double> to_cartesian(WeylKind kind, const Vec2& v) {
  double x = v.x.to_double(), y = v.y.to_double();
  if (kind == WeylKind::A2affine) return {x + 0.5 * y, y * 0.8660254037844386};
  return {x, y};
}

}  // namespace detail

inline std::string to_svg(const Scene& s) {
  using detail::to_cartesian;
  double minx = -1, maxx = 1, miny = -1, maxy = 1;
  auto grow = [&](std::pair<double, double> c) {
    minx = std::min(minx, c.first - 1);
    maxx = std::max(maxx, c.first + 1);
    miny = std::min(miny, c.second - 1);
    maxy = std::max(maxy, c.second + 1);
  };
  for (const auto& [p, _] : s.points) grow(to_cartesian(s.kind, p));
  for (const auto& [r, _] : s.rays) grow(to_cartesian(s.kind, r.base));
  double scale = 60;
  double width = (maxx - minx) * scale, height = (maxy - miny) * scale;
  auto tx = [&](std::pair<double, double> c) {
    return std::make_pair((c.first - minx) * scale, (maxy - c.second) * scale);
  };
  std::ostringstream os;
  os << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width << "' height='" << height
     << "'>\n";
  WeylData w(s.kind);
  for (const auto& [wall, label] : s.walls) {
    // draw the wall segment across the bounding box: parametrize by the wall
    // direction through one anchor point on it
    Vec2 f = w.wall_direction(wall.family);
    // find an anchor: solve form(p) = level with p on an axis
    Vec2 anchor{Rational(0), Rational(0)};
    if (!w.form(wall.family, {Rational(1), Rational(0)}).is_zero()) {
      Rational x = wall.level / w.form(wall.family, {Rational(1), Rational(0)});
      anchor = {x, Rational(0)};
    } else {
      Rational y = wall.level / w.form(wall.family, {Rational(0), Rational(1)});
      anchor = {Rational(0), y};
    }
    auto a0 = to_cartesian(s.kind, anchor - Rational(12) * f);
    auto a1 = to_cartesian(s.kind, anchor + Rational(12) * f);
    auto p0 = tx(a0), p1 = tx(a1);
    os << "  <line x1='" << p0.first << "' y1='" << p0.second << "' x2='" << p1.first << "' y2='"
       << p1.second << "' stroke='#999' stroke-width='1'/>\n";
    if (!label.empty()) {
      auto pm = tx(to_cartesian(s.kind, anchor));
      os << "  <text x='" << pm.first + 4 << "' y='" << pm.second - 4
         << "' font-size='11' fill='#666'>" << label << "</text>\n";
    }
  }
  for (const auto& [r, label] : s.rays) {
    auto p0 = tx(to_cartesian(s.kind, r.base));
    auto p1 = tx(to_cartesian(s.kind, r.base + Rational(10) * r.direction));
    os << "  <line x1='" << p0.first << "' y1='" << p0.second << "' x2='" << p1.first << "' y2='"
       << p1.second << "' stroke='#1a6' stroke-width='1.5' stroke-dasharray='6 3'/>\n";
    if (!label.empty())
      os << "  <text x='" << (p0.first + p1.first) / 2 << "' y='" << (p0.second + p1.second) / 2
         << "' font-size='11' fill='#1a6'>" << label << "</text>\n";
  }
  for (const auto& [p, label] : s.points) {
    auto c = tx(to_cartesian(s.kind, p));
    os << "  <circle cx='" << c.first << "' cy='" << c.second << "' r='3' fill='#c33'/>\n";
    if (!label.empty())
      os << "  <text x='" << c.first + 5 << "' y='" << c.second - 5 << "' font-size='12'>" << label
         << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace forge::apartment
