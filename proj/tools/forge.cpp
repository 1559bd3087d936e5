// forge: desk-scale spherical and affine building computations.
// Subcommands are grown alongside the library; see README for usage.

#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "forge/polygon.hpp"

namespace {

forge::polygon::IncidenceGeometry build_by_kind(const std::string& kind, int q) {
  using namespace forge::polygon;
  Kind k = kind_from_name(kind);
  switch (k) {
    case Kind::A2: return build_projective_plane(q);
    case Kind::C2: return build_symplectic_quadrangle(q);
    case Kind::G2: return build_split_cayley_hexagon();
  }
  throw forge::Error("bad kind");
}

void write_file(const std::string& path, const std::string& body) {
  std::ofstream os(path);
  if (!os) throw forge::Error("cannot write " + path);
  os << body;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"desk-scale building-geometry toolkit"};
  app.require_subcommand(1);

  auto* geometry = app.add_subcommand("geometry", "build and audit rank-2 geometries");
  geometry->require_subcommand(1);

  std::string g_kind = "A2";
  int g_q = 2;
  std::string g_out, g_dot;
  auto* g_build = geometry->add_subcommand("build", "construct a geometry");
  g_build->add_option("--kind", g_kind, "A2 | C2 | G2")->required();
  g_build->add_option("--q", g_q, "order (ignored for G2)");
  g_build->add_option("--out", g_out, "write geometry JSON here");
  g_build->add_option("--dot", g_dot, "write incidence graph DOT here");

  std::string c_in;
  auto* g_check = geometry->add_subcommand("check", "audit a geometry JSON file");
  g_check->add_option("--in", c_in, "geometry JSON")->required();

  try {
    app.parse(argc, argv);

    if (g_build->parsed()) {
      auto g = build_by_kind(g_kind, g_q);
      auto j = forge::polygon::to_json(g);
      if (!g_out.empty())
        write_file(g_out, j.dump(2) + "\n");
      else
        std::cout << j.dump(2) << "\n";
      if (!g_dot.empty()) write_file(g_dot, forge::polygon::to_dot(g));
      auto r = forge::polygon::verify_axioms(g);
      std::cerr << "built " << forge::polygon::kind_name(g.kind()) << ": " << g.num_points()
                << " points, " << g.num_lines() << " lines, girth " << r.girth << ", diameter "
                << r.diameter << "\n";
      return 0;
    }
    if (g_check->parsed()) {
      std::ifstream is(c_in);
      if (!is) throw forge::Error("cannot read " + c_in);
      nlohmann::json j;
      is >> j;
      auto g = forge::polygon::geometry_from_json(j);
      auto r = forge::polygon::verify_axioms(g);
      std::cout << "girth " << r.girth << " diameter " << r.diameter << " connected "
                << (r.connected ? "yes" : "no") << "\n";
      return r.ok() ? 0 : 2;
    }
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const forge::Contradiction& e) {
    std::cerr << "contradiction: " << e.what() << "\n";
    return 3;
  } catch (const forge::HypothesisError& e) {
    std::cerr << "hypothesis failure: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
