#include "gidx/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <initializer_list>
#include <limits>
#include <map>
#include <memory>
#include <sstream>

#include <nlohmann/json.hpp>

#include "gidx/chern_weil.hpp"
#include "gidx/cohomology.hpp"
#include "gidx/error.hpp"
#include "gidx/parallel.hpp"
#include "gidx/presets.hpp"

namespace gidx {

namespace {

using json = nlohmann::ordered_json;

constexpr const char* kModule = "cli";

[[noreturn]] void bad_field(const std::string& field, const std::string& what) {
  throw Error(ErrorCode::ParseError, kModule, "parse_scenario", "field " + field + ": " + what);
}

[[noreturn]] void bad_input(const std::string& op, const std::string& what) {
  throw Error(ErrorCode::InvalidArgument, kModule, op, what);
}

void allow_keys(const json& j, const std::string& path, std::initializer_list<const char*> keys) {
  if (!j.is_object()) bad_field(path, "expected an object");
  for (const auto& [k, v] : j.items()) {
    bool known = false;
    for (const char* key : keys) known = known || k == key;
    if (!known) bad_field(path + "/" + k, "unknown key");
  }
}

long as_int(const json& v, const std::string& field) {
  if (!v.is_number_integer()) bad_field(field, "expected an integer");
  return v.get<long>();
}

double as_double(const json& v, const std::string& field) {
  if (!v.is_number()) bad_field(field, "expected a number");
  return v.get<double>();
}

bool as_bool(const json& v, const std::string& field) {
  if (!v.is_boolean()) bad_field(field, "expected true or false");
  return v.get<bool>();
}

std::string as_string(const json& v, const std::string& field) {
  if (!v.is_string()) bad_field(field, "expected a string");
  return v.get<std::string>();
}

Complex as_complex(const json& v, const std::string& field) {
  if (v.is_number()) return v.get<double>();
  if (!v.is_array() || v.size() != 2) bad_field(field, "expected a number or [re, im]");
  return {as_double(v[0], field + "/0"), as_double(v[1], field + "/1")};
}

Cochain as_cochain(const json& v, const std::string& field, std::size_t size) {
  if (!v.is_array()) bad_field(field, "expected an array of integers");
  if (v.size() != size) {
    bad_field(field, "expected " + std::to_string(size) + " values, got " + std::to_string(v.size()));
  }
  Cochain c;
  for (std::size_t i = 0; i < v.size(); ++i) c.emplace_back(as_int(v[i], field + "/" + std::to_string(i)));
  return c;
}

CMatrix as_matrix(const json& v, const std::string& field) {
  if (!v.is_array() || v.empty()) bad_field(field, "expected a non-empty array of rows");
  const std::size_t n = v.size();
  CMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::string row = field + "/" + std::to_string(i);
    if (!v[i].is_array() || v[i].size() != n) bad_field(row, "expected " + std::to_string(n) + " entries");
    for (std::size_t j = 0; j < n; ++j) m(i, j) = as_complex(v[i][j], row + "/" + std::to_string(j));
  }
  return m;
}

std::vector<CMatrix> as_edge_matrices(const json& v, const std::string& field, std::size_t edges) {
  if (!v.is_array() || v.size() != edges) {
    bad_field(field, "expected one matrix per edge (" + std::to_string(edges) + ")");
  }
  std::vector<CMatrix> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(as_matrix(v[i], field + "/" + std::to_string(i)));
  return out;
}

const std::map<std::string, std::function<SimplicialComplex()>>& complex_presets() {
  static const std::map<std::string, std::function<SimplicialComplex()>> m{
      {"point", complexes::point},
      {"edge", complexes::edge},
      {"triangle", complexes::triangle},
      {"tetrahedron-boundary", complexes::tetrahedron_boundary},
      {"circle", [] { return complexes::circle(); }},
      {"projective-plane", complexes::projective_plane6},
      {"suspended-projective-plane", complexes::suspended_projective_plane},
      {"projective-plane-times-circle", complexes::projective_plane_times_circle},
  };
  return m;
}

// Nerve of each atlas preset, known without building the grids.
SimplicialComplex atlas_nerve(const std::string& preset) {
  if (preset == "sphere-two-patch") return complexes::edge();
  if (preset == "sphere-three-patch") return complexes::triangle();
  if (preset == "point") return complexes::point();
  bad_field("/atlas/preset", "unknown atlas preset '" + preset + "'");
}

const std::vector<std::string>& known_checks() {
  static const std::vector<std::string> v{
      "partition", "gerbe-cocycle", "bundle-cocycle", "compat", "chern", "convergence",
      "descent", "ellipticity", "family-compat", "index", "det-line",
      "stabilizer-independence", "equivalence", "gauge", "thom-rr", "ddclass"};
  return v;
}

void require_sections(const Scenario& s, const std::string& check) {
  auto need = [&](bool ok, const char* what) {
    if (!ok) bad_field("/verification/checks", "check '" + check + "' needs " + what);
  };
  const bool geometric = !s.atlas_preset.empty();
  if (check == "partition") need(geometric, "an atlas section");
  if (check == "gerbe-cocycle" || check == "ddclass") need(s.gerbe.has_value(), "a gerbe section");
  if (check == "bundle-cocycle") need(s.bundle.has_value(), "a bundle section");
  if (check == "compat" || check == "chern") {
    need(s.bundle.has_value() && s.connection.has_value(), "bundle and connection sections");
  }
  if (check == "convergence") {
    need(s.connection && s.connection->preset == "monopole", "a monopole connection");
  }
  if (check == "descent") {
    need(s.bundle && s.connection && s.gerbe, "gerbe, bundle and connection sections");
  }
  if (check == "ellipticity" || check == "family-compat" || check == "index" || check == "det-line") {
    need(s.family.has_value(), "a family section");
  }
  if (check == "stabilizer-independence") {
    need(s.family && s.family->alternate_columns > 0, "family/alternate_stabilizer");
  }
  if (check == "equivalence") need(s.family && s.gerbe && s.gerbe->mu, "a family and gerbe/mu");
  if (check == "thom-rr") need(s.thom.has_value(), "a thom section");
}

std::string format_num(const char* fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

}  // namespace

// ---------------------------------------------------------------------------
// Parsing

Scenario parse_scenario(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw Error(ErrorCode::ParseError, kModule, "parse_scenario",
                "line " + std::to_string(line) + " column " + std::to_string(col) + ": malformed JSON");
  }
  allow_keys(j, "", {"version", "name", "complex", "atlas", "gerbe", "bundle", "connection",
                     "family", "thom", "verification"});
  Scenario s;
  if (!j.contains("version")) bad_field("/version", "missing");
  s.version = static_cast<int>(as_int(j["version"], "/version"));
  if (s.version != kScenarioVersion) {
    throw Error(ErrorCode::UnsupportedVersion, kModule, "parse_scenario",
                "version " + std::to_string(s.version) + " (supported: " +
                    std::to_string(kScenarioVersion) + ")");
  }
  if (j.contains("name")) s.name = as_string(j["name"], "/name");

  if (j.contains("atlas") && j.contains("complex")) {
    bad_field("/complex", "give either an atlas or a complex, not both");
  }
  if (j.contains("atlas")) {
    const json& a = j["atlas"];
    allow_keys(a, "/atlas", {"preset", "grid"});
    if (!a.contains("preset")) bad_field("/atlas/preset", "missing");
    s.atlas_preset = as_string(a["preset"], "/atlas/preset");
    if (a.contains("grid")) s.grid = static_cast<int>(as_int(a["grid"], "/atlas/grid"));
    if (s.grid < 3) bad_field("/atlas/grid", "needs at least 3 nodes per side");
    s.complex = std::make_shared<const SimplicialComplex>(atlas_nerve(s.atlas_preset));
  } else if (j.contains("complex")) {
    const json& c = j["complex"];
    allow_keys(c, "/complex", {"preset", "vertices", "maximal"});
    if (c.contains("preset")) {
      const std::string name = as_string(c["preset"], "/complex/preset");
      const auto it = complex_presets().find(name);
      if (it == complex_presets().end()) bad_field("/complex/preset", "unknown complex '" + name + "'");
      s.complex = std::make_shared<const SimplicialComplex>(it->second());
    } else {
      if (!c.contains("vertices") || !c.contains("maximal")) {
        bad_field("/complex", "needs a preset or vertices + maximal");
      }
      const int nv = static_cast<int>(as_int(c["vertices"], "/complex/vertices"));
      const json& m = c["maximal"];
      if (!m.is_array()) bad_field("/complex/maximal", "expected an array of simplices");
      std::vector<Simplex> maximal;
      for (std::size_t i = 0; i < m.size(); ++i) {
        const std::string f = "/complex/maximal/" + std::to_string(i);
        if (!m[i].is_array() || m[i].empty()) bad_field(f, "expected a vertex list");
        Simplex sx;
        for (std::size_t k = 0; k < m[i].size(); ++k) {
          const long v = as_int(m[i][k], f + "/" + std::to_string(k));
          if (v < 0 || v >= nv) bad_field(f, "vertex " + std::to_string(v) + " out of range");
          sx.push_back(static_cast<int>(v));
        }
        maximal.push_back(sx);
      }
      s.complex = std::make_shared<const SimplicialComplex>(SimplicialComplex::from_maximal(nv, maximal));
    }
  } else {
    bad_field("/atlas", "an atlas or complex section is required");
  }
  const SimplicialComplex& x = *s.complex;

  if (j.contains("gerbe")) {
    const json& g = j["gerbe"];
    allow_keys(g, "/gerbe", {"n", "theta", "mu", "torsion_generator", "lift", "expect"});
    Scenario::Gerbe gs;
    if (!g.contains("n")) bad_field("/gerbe/n", "missing");
    gs.n = as_int(g["n"], "/gerbe/n");
    if (gs.n < 1) bad_field("/gerbe/n", "must be >= 1");
    int sources = 0;
    if (g.contains("theta")) {
      gs.theta = as_cochain(g["theta"], "/gerbe/theta", x.count(2));
      ++sources;
    }
    if (g.contains("mu")) {
      gs.mu = as_cochain(g["mu"], "/gerbe/mu", x.count(1));
      ++sources;
    }
    if (g.contains("torsion_generator")) {
      gs.torsion_generator = static_cast<int>(as_int(g["torsion_generator"], "/gerbe/torsion_generator"));
      ++sources;
    }
    if (g.contains("lift")) {
      gs.lift = as_edge_matrices(g["lift"], "/gerbe/lift", x.count(1));
      for (std::size_t i = 0; i < gs.lift->size(); ++i)
        if ((*gs.lift)[i].rows() != gs.n) {
          bad_field("/gerbe/lift/" + std::to_string(i), "expected " + std::to_string(gs.n) + "x" +
                                                            std::to_string(gs.n) + " matrices");
        }
      ++sources;
    }
    if (sources > 1) bad_field("/gerbe", "give at most one of theta, mu, torsion_generator, lift");
    if (g.contains("expect")) gs.expect = as_string(g["expect"], "/gerbe/expect");
    s.gerbe = gs;
  }

  if (j.contains("bundle")) {
    const json& b = j["bundle"];
    allow_keys(b, "/bundle", {"preset", "degree", "rank", "edges"});
    Scenario::Bundle bs;
    if (!b.contains("preset")) bad_field("/bundle/preset", "missing");
    bs.preset = as_string(b["preset"], "/bundle/preset");
    if (bs.preset == "monopole") {
      if (s.atlas_preset.empty() || s.atlas_preset == "point") {
        bad_field("/bundle/preset", "monopole needs a sphere atlas");
      }
      if (b.contains("degree")) bs.degree = static_cast<int>(as_int(b["degree"], "/bundle/degree"));
    } else if (bs.preset == "constant") {
      if (!b.contains("edges")) bad_field("/bundle/edges", "missing");
      bs.edges = as_edge_matrices(b["edges"], "/bundle/edges", x.count(1));
      bs.rank = bs.edges.empty() ? static_cast<int>(as_int(b.value("rank", json(1)), "/bundle/rank"))
                                 : static_cast<int>(bs.edges.front().rows());
      for (std::size_t i = 0; i < bs.edges.size(); ++i)
        if (bs.edges[i].rows() != bs.rank) bad_field("/bundle/edges/" + std::to_string(i), "rank mismatch");
    } else {
      bad_field("/bundle/preset", "unknown bundle preset '" + bs.preset + "'");
    }
    s.bundle = bs;
  }

  if (j.contains("connection")) {
    const json& c = j["connection"];
    allow_keys(c, "/connection", {"preset", "degree", "analytic_override"});
    Scenario::Connection cs;
    if (!c.contains("preset")) bad_field("/connection/preset", "missing");
    cs.preset = as_string(c["preset"], "/connection/preset");
    if (cs.preset != "monopole" && cs.preset != "flat") {
      bad_field("/connection/preset", "unknown connection preset '" + cs.preset + "'");
    }
    if (s.atlas_preset.empty()) bad_field("/connection", "needs an atlas section");
    if (c.contains("degree")) cs.degree = static_cast<int>(as_int(c["degree"], "/connection/degree"));
    if (c.contains("analytic_override")) {
      cs.analytic_override = as_bool(c["analytic_override"], "/connection/analytic_override");
    }
    if (!s.bundle) bad_field("/connection", "needs a bundle section");
    s.connection = cs;
  }

  if (j.contains("family")) {
    const json& f = j["family"];
    allow_keys(f, "/family", {"preset", "truncation", "winding", "alternate_stabilizer"});
    Scenario::Family fs;
    if (!f.contains("preset")) bad_field("/family/preset", "missing");
    fs.preset = as_string(f["preset"], "/family/preset");
    if (fs.preset != "bott-toeplitz" && fs.preset != "winding" && fs.preset != "identity") {
      bad_field("/family/preset", "unknown family preset '" + fs.preset + "'");
    }
    if (s.atlas_preset.empty()) bad_field("/family", "needs an atlas section");
    if (fs.preset == "bott-toeplitz" && s.atlas_preset == "point") {
      bad_field("/family/preset", "bott-toeplitz needs a sphere atlas");
    }
    if (f.contains("truncation")) fs.truncation = static_cast<int>(as_int(f["truncation"], "/family/truncation"));
    if (fs.truncation < 1) bad_field("/family/truncation", "must be >= 1");
    if (f.contains("winding")) fs.winding = static_cast<int>(as_int(f["winding"], "/family/winding"));
    if (f.contains("alternate_stabilizer")) {
      const json& a = f["alternate_stabilizer"];
      const std::string p = "/family/alternate_stabilizer";
      allow_keys(a, p, {"columns", "entries"});
      if (!a.contains("columns") || !a.contains("entries")) bad_field(p, "needs columns and entries");
      fs.alternate_columns = static_cast<int>(as_int(a["columns"], p + "/columns"));
      if (fs.alternate_columns < 1) bad_field(p + "/columns", "must be >= 1");
      const json& e = a["entries"];
      if (!e.is_array()) bad_field(p + "/entries", "expected [row, column, value] triples");
      for (std::size_t i = 0; i < e.size(); ++i) {
        const std::string q = p + "/entries/" + std::to_string(i);
        if (!e[i].is_array() || e[i].size() != 3) bad_field(q, "expected [row, column, value]");
        const long r = as_int(e[i][0], q + "/0"), col = as_int(e[i][1], q + "/1");
        if (r < 0 || col < 0 || col >= fs.alternate_columns) bad_field(q, "index out of range");
        fs.alternate_entries.emplace_back(static_cast<int>(r), static_cast<int>(col),
                                          as_complex(e[i][2], q + "/2"));
      }
    }
    s.family = fs;
  }

  if (j.contains("thom")) {
    const json& t = j["thom"];
    allow_keys(t, "/thom", {"fixtures", "base_grid", "fiber_grid", "sigma"});
    Scenario::Thom ts;
    if (!t.contains("fixtures") || !t["fixtures"].is_array()) {
      bad_field("/thom/fixtures", "expected [[deg E, deg F], ...]");
    }
    for (std::size_t i = 0; i < t["fixtures"].size(); ++i) {
      const json& fx = t["fixtures"][i];
      const std::string q = "/thom/fixtures/" + std::to_string(i);
      if (!fx.is_array() || fx.size() != 2) bad_field(q, "expected [deg E, deg F]");
      ts.fixtures.emplace_back(static_cast<int>(as_int(fx[0], q + "/0")),
                               static_cast<int>(as_int(fx[1], q + "/1")));
    }
    if (t.contains("base_grid")) ts.base_grid = static_cast<int>(as_int(t["base_grid"], "/thom/base_grid"));
    if (t.contains("fiber_grid")) ts.fiber_grid = static_cast<int>(as_int(t["fiber_grid"], "/thom/fiber_grid"));
    if (t.contains("sigma")) ts.sigma = as_double(t["sigma"], "/thom/sigma");
    if (ts.base_grid < 3 || ts.fiber_grid < 2 || !(ts.sigma > 0.0)) bad_field("/thom", "grid or sigma out of range");
    s.thom = ts;
  }

  if (j.contains("verification")) {
    const json& v = j["verification"];
    allow_keys(v, "/verification", {"checks", "tolerance", "doubled_tolerance", "resolution_doubling",
                                    "chern_expected", "chern_tolerance", "stabilizer_tolerance",
                                    "gauge_tolerance"});
    auto& vs = s.verification;
    if (v.contains("checks")) {
      if (!v["checks"].is_array()) bad_field("/verification/checks", "expected an array of names");
      for (std::size_t i = 0; i < v["checks"].size(); ++i) {
        const std::string q = "/verification/checks/" + std::to_string(i);
        const std::string name = as_string(v["checks"][i], q);
        bool known = false;
        for (const auto& k : known_checks()) known = known || k == name;
        if (!known) bad_field(q, "unknown check '" + name + "'");
        vs.checks.push_back(name);
      }
    }
    auto num = [&](const char* key, double& out) {
      if (v.contains(key)) out = as_double(v[key], std::string("/verification/") + key);
    };
    num("tolerance", vs.tolerance);
    num("doubled_tolerance", vs.doubled_tolerance);
    num("chern_expected", vs.chern_expected);
    num("chern_tolerance", vs.chern_tolerance);
    num("stabilizer_tolerance", vs.stabilizer_tolerance);
    num("gauge_tolerance", vs.gauge_tolerance);
    if (v.contains("resolution_doubling")) {
      vs.resolution_doubling = as_bool(v["resolution_doubling"], "/verification/resolution_doubling");
    }
  }
  for (const auto& c : s.verification.checks) require_sections(s, c);
  return s;
}

// ---------------------------------------------------------------------------
// Bundled fixtures

namespace {

const std::map<std::string, std::string>& bundled() {
  static const std::map<std::string, std::string> m{
      {"monopole", R"({
  "version": 1,
  "name": "monopole",
  "atlas": {"preset": "sphere-two-patch", "grid": 64},
  "gerbe": {"n": 3, "expect": "zero"},
  "bundle": {"preset": "monopole", "degree": 1},
  "connection": {"preset": "monopole", "degree": 1, "analytic_override": true},
  "verification": {
    "checks": ["partition", "gerbe-cocycle", "bundle-cocycle", "compat", "chern", "convergence",
               "descent", "gauge", "ddclass"],
    "chern_expected": 1.0,
    "chern_tolerance": 1e-6
  }
}
)"},
      {"bott-toeplitz", R"({
  "version": 1,
  "name": "bott-toeplitz",
  "atlas": {"preset": "sphere-two-patch", "grid": 64},
  "gerbe": {"n": 2, "expect": "zero"},
  "family": {
    "preset": "bott-toeplitz",
    "truncation": 16,
    "alternate_stabilizer": {
      "columns": 2,
      "entries": [[0, 0, 1.0], [3, 0, 0.5], [1, 1, 1.0], [2, 1, -0.3]]
    }
  },
  "verification": {
    "checks": ["partition", "ellipticity", "family-compat", "index", "det-line",
               "stabilizer-independence", "gauge", "ddclass"],
    "tolerance": 1e-3,
    "doubled_tolerance": 2.5e-4,
    "resolution_doubling": true
  }
}
)"},
      {"bott-toeplitz-twisted", R"({
  "version": 1,
  "name": "bott-toeplitz-twisted",
  "atlas": {"preset": "sphere-three-patch", "grid": 64},
  "gerbe": {"n": 3, "mu": [1, 0, 0], "expect": "trivial class"},
  "family": {"preset": "bott-toeplitz", "truncation": 16},
  "verification": {
    "checks": ["partition", "gerbe-cocycle", "ellipticity", "family-compat", "index", "det-line",
               "equivalence", "gauge", "ddclass"],
    "tolerance": 1e-3,
    "doubled_tolerance": 2.5e-4,
    "resolution_doubling": true
  }
}
)"},
      {"suspended-rp2-gerbe", R"({
  "version": 1,
  "name": "suspended-rp2-gerbe",
  "complex": {"preset": "suspended-projective-plane"},
  "gerbe": {"n": 2, "torsion_generator": 0, "expect": "torsion Z/2 generator"},
  "verification": {"checks": ["gerbe-cocycle", "ddclass", "gauge"]}
}
)"},
      {"thom-rr-line", R"({
  "version": 1,
  "name": "thom-rr-line",
  "atlas": {"preset": "sphere-two-patch", "grid": 32},
  "gerbe": {"n": 2, "expect": "zero"},
  "thom": {"fixtures": [[0, 0], [1, 0], [2, 1]], "base_grid": 32, "fiber_grid": 24, "sigma": 1.0},
  "verification": {"checks": ["thom-rr", "gauge"], "tolerance": 1e-3}
}
)"},
  };
  return m;
}

}  // namespace

std::vector<std::string> bundled_scenario_names() {
  std::vector<std::string> out;
  for (const auto& [k, v] : bundled()) out.push_back(k);
  return out;
}

std::string bundled_scenario_text(const std::string& name) {
  const auto it = bundled().find(name);
  return it == bundled().end() ? std::string() : it->second;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    const std::string text = bundled_scenario_text(path);
    if (!text.empty()) return parse_scenario(text);
    throw Error(ErrorCode::InvalidArgument, kModule, "load_scenario",
                "cannot read '" + path + "' and no bundled scenario has that name");
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

// ---------------------------------------------------------------------------
// Builders

std::string dd_class_summary(const GerbeCocycle& theta) {
  if (theta.is_zero()) return "zero";
  const DDClass c = dd_class(theta);
  if (c.is_zero()) return "trivial class";
  const ClassCoordinates& co = c.bockstein.coordinates;
  for (const auto& v : co.free)
    if (v != 0) return "class of infinite order";
  int nonzero = 0;
  std::size_t at = 0;
  for (std::size_t i = 0; i < co.torsion.size(); ++i)
    if (co.torsion[i] != 0) {
      ++nonzero;
      at = i;
    }
  if (nonzero == 1 && co.torsion[at] == 1) return "torsion Z/" + co.torsion_orders[at].get_str() + " generator";
  return "torsion class of order " + c.order().get_str();
}

AtlasPtr scenario_atlas(const Scenario& s, int grid) {
  if (s.atlas_preset.empty()) return nullptr;
  if (s.atlas_preset == "sphere-two-patch") return Atlas::sphere_two_patch(grid);
  if (s.atlas_preset == "sphere-three-patch") return Atlas::sphere_three_patch(grid);
  return Atlas::point();
}

CombinatorialCover scenario_cover(const Scenario& s, const AtlasPtr& atlas) {
  return atlas ? atlas->cover() : CombinatorialCover{s.complex};
}

GerbeCocycle scenario_twist(const Scenario& s, const CombinatorialCover& cover) {
  if (!s.gerbe) return GerbeCocycle::zero(cover, 1);
  const auto& g = *s.gerbe;
  const SimplicialComplex& x = *cover.base;
  if (g.theta) return GerbeCocycle(cover, g.n, *g.theta);
  if (g.mu) return gauge_transform(GerbeCocycle::zero(cover, g.n), *g.mu);
  if (g.lift) return dd_cocycle(PULift(cover, static_cast<int>(g.n), *g.lift));
  if (g.torsion_generator) {
    const CohomologyGroup h3 = cohomology_group(x, 3);
    const int i = *g.torsion_generator;
    if (i < 0 || static_cast<std::size_t>(i) >= h3.torsion.size()) {
      bad_input("scenario_twist", "torsion_generator " + std::to_string(i) + " but H^3 has " +
                                      std::to_string(h3.torsion.size()) + " torsion factors");
    }
    const Integer d = h3.torsion[i];
    if (d != g.n) {
      bad_input("scenario_twist", "torsion generator has order " + d.get_str() + " but n = " +
                                      std::to_string(g.n));
    }
    return GerbeCocycle(cover, g.n, bockstein_preimage(x, 3, h3.torsion_generators[i], g.n));
  }
  return GerbeCocycle::zero(cover, g.n);
}

namespace {

// Flat line carrying the coboundary twist of the gerbe section (mu or zero).
std::optional<ProjectiveBundleData> twist_line(const Scenario& s, const CombinatorialCover& cover,
                                               const char* op) {
  if (!s.gerbe) return std::nullopt;
  const auto& g = *s.gerbe;
  if (g.theta || g.lift || g.torsion_generator) {
    bad_input(op, "geometric data can only carry a coboundary twist; give gerbe/mu");
  }
  return central_twist_line(cover, g.n, g.mu ? *g.mu : Cochain(cover.base->count(1), 0));
}

Cochain negate_mod(const Cochain& mu, long n) {
  Cochain out;
  for (const auto& v : mu) out.push_back(Integer((n - v % n) % n));
  return out;
}

}  // namespace

ProjectiveBundleData scenario_bundle(const Scenario& s, const AtlasPtr& atlas) {
  if (!s.bundle) bad_input("scenario_bundle", "no bundle section");
  const CombinatorialCover cover = scenario_cover(s, atlas);
  if (s.bundle->preset == "constant") {
    std::vector<Transition> q;
    for (const auto& m : s.bundle->edges) q.push_back(Transition::fixed(m));
    return ProjectiveBundleData(scenario_twist(s, cover), s.bundle->rank, std::move(q));
  }
  ProjectiveBundleData e = monopole_bundle(atlas, s.bundle->degree);
  if (auto line = twist_line(s, cover, "scenario_bundle")) e = twist_by_line(e, *line);
  return e;
}

ConnectionData scenario_connection(const Scenario& s, const AtlasPtr& atlas) {
  if (!s.connection) bad_input("scenario_connection", "no connection section");
  if (s.connection->preset == "monopole") {
    return monopole_connection(atlas, s.connection->degree, s.connection->analytic_override);
  }
  return flat_connection(atlas, s.bundle ? s.bundle->rank : 1);
}

FamilySpec scenario_family(const Scenario& s, const AtlasPtr& atlas, int truncation) {
  if (!s.family) bad_input("scenario_family", "no family section");
  const auto& fs = *s.family;
  FamilySpec f = fs.preset == "bott-toeplitz" ? families::bott_toeplitz(atlas, truncation)
                 : fs.preset == "winding"     ? families::winding(atlas, fs.winding, truncation)
                                              : families::identity(atlas, 1, truncation);
  if (auto line = twist_line(s, atlas->cover(), "scenario_family")) f = twist_family(f, *line);
  return f;
}

// ---------------------------------------------------------------------------
// Verification

bool VerificationReport::pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

namespace {

struct IndexRun {
  std::shared_ptr<FamilySpec> family;
  std::vector<double> topological;
  std::shared_ptr<IndexBundle> index;
  std::vector<double> analytic;
};

double c1_integral(const ConnectionData& c, bool use_override) {
  return integrate(degree_part(det_line_c1(curvature(c, use_override)), 2)).real();
}

IndexRun run_index(const FamilySpec& f) {
  IndexRun r;
  r.family = std::make_shared<FamilySpec>(f);
  r.topological = form_integrals(topological_index_chern(symbol_class(f)));
  const Stabilizer stab = stabilize(f);
  r.index = std::make_shared<IndexBundle>(analytic_index(f, stab));
  r.analytic = index_chern_integrals(*r.index, false);
  return r;
}

// Deterministic gauge 1-cochain with nonzero entries.
Cochain gauge_cochain(const SimplicialComplex& x, long n) {
  Cochain mu;
  for (std::size_t i = 0; i < x.count(1); ++i) mu.emplace_back(static_cast<long>(i % (n - 1)) + 1);
  return mu;
}

class Runner {
 public:
  Runner(const Scenario& s, const RunOptions& opt) : s_(s) {
    grid_ = opt.resolution > 0 ? opt.resolution : s.grid;
    truncation_ = opt.truncation > 0 ? opt.truncation : (s.family ? s.family->truncation : 0);
    tol_ = s.verification.tolerance;
    doubled_ = s.verification.doubled_tolerance;
    if (opt.tolerance > 0.0) {
      doubled_ = opt.tolerance * doubled_ / tol_;
      tol_ = opt.tolerance;
    }
    report_.scenario = s.name;
    report_.threads = thread_count();
    report_.grid = s.atlas_preset.empty() ? 0 : grid_;
    report_.truncation = truncation_;
  }

  VerificationReport run(const std::vector<std::string>& checks) {
    for (const auto& c : checks) dispatch(c);
    return report_;
  }

 private:
  void add(const std::string& check, const std::string& quantity, double value, double reference,
           double tol, std::string note = {}) {
    CheckResult r{check, quantity, value, reference, std::abs(value - reference), tol, false, std::move(note)};
    r.pass = std::isfinite(r.residual) && r.residual <= tol;
    report_.checks.push_back(std::move(r));
  }

  AtlasPtr atlas(int g) {
    auto& a = atlases_[g];
    if (!a) a = scenario_atlas(s_, g);
    return a;
  }

  const ProjectiveBundleData& bundle() {
    if (!bundle_) bundle_ = std::make_shared<ProjectiveBundleData>(scenario_bundle(s_, atlas(grid_)));
    return *bundle_;
  }

  const ConnectionData& connection() {
    if (!conn_) conn_ = std::make_shared<ConnectionData>(scenario_connection(s_, atlas(grid_)));
    return *conn_;
  }

  const FamilySpec& family() {
    if (!family_) family_ = std::make_shared<FamilySpec>(scenario_family(s_, atlas(grid_), truncation_));
    return *family_;
  }

  const IndexRun& index(int g) {
    auto it = index_.find(g);
    if (it == index_.end()) {
      it = index_.emplace(g, run_index(g == grid_ ? family() : scenario_family(s_, atlas(g), truncation_))).first;
    }
    return it->second;
  }

  GerbeCocycle twist() {
    return scenario_twist(s_, scenario_cover(s_, s_.atlas_preset.empty() ? nullptr : atlas(grid_)));
  }

  std::vector<int> resolutions() const {
    std::vector<int> r{grid_};
    if (s_.verification.resolution_doubling) r.push_back(2 * grid_);
    return r;
  }

  std::string at_grid(int g) const { return g == grid_ ? std::string() : " at grid " + std::to_string(g); }
  double tol_at(int g) const { return g == grid_ ? tol_ : doubled_; }

  void dispatch(const std::string& c) {
    if (c == "partition") {
      add(c, "partition of unity defect", atlas(grid_)->partition_defect(), 0.0, 1e-10);
    } else if (c == "gerbe-cocycle") {
      check_gerbe_cocycle();
    } else if (c == "bundle-cocycle") {
      const ValidationReport v = measure(bundle(), atlas(grid_) ? atlas(grid_)->sampler() : OverlapSampler{});
      const BundleTolerances bt;
      add(c, "weak cocycle residual", v.max_residual, 0.0,
          bundle().all_constant() ? bt.cocycle_constant : bt.cocycle_sampled,
          v.worst.empty() ? std::string() : "worst " + SimplicialComplex::label(v.worst));
      add(c, "unitarity defect", v.max_unitary_defect, 0.0, bt.unitary);
    } else if (c == "compat") {
      add(c, "connection compatibility residual", compatibility_residual(bundle(), connection()), 0.0,
          ChernWeilTolerances{}.conn);
    } else if (c == "chern") {
      const bool ov = connection().has_override();
      add(c, "c1 integral", c1_integral(connection(), true), s_.verification.chern_expected,
          s_.verification.chern_tolerance, ov ? "analytic curvature" : "grid curvature");
    } else if (c == "convergence") {
      check_convergence();
    } else if (c == "descent") {
      check_descent();
    } else if (c == "ellipticity") {
      const EllipticReport r = check_elliptic(family());
      const double kappa = FamilyTolerances{}.kappa_max;
      CheckResult cr{c, "worst symbol condition number", r.worst_condition, 1.0, r.worst_condition, kappa,
                     r.elliptic, {}};
      if (!r.elliptic) {
        cr.note = "patch " + std::to_string(r.patch) + " node " + std::to_string(r.node) + " xi " +
                  std::to_string(r.xi);
      }
      report_.checks.push_back(cr);
    } else if (c == "family-compat") {
      add(c, "operator compatibility residual", check_projective_compat(family()), 0.0,
          FamilyTolerances{}.compat);
    } else if (c == "index") {
      for (int g : resolutions()) {
        const IndexRun& r = index(g);
        add(c, "index degree 0" + at_grid(g), r.analytic[0], r.topological[0], tol_at(g),
            "N = " + std::to_string(r.index->stabilizer.n));
        if (r.topological.size() > 1) {
          add(c, "index degree 2" + at_grid(g), r.analytic[1], r.topological[1], tol_at(g),
              "absolute sign follows the orientation convention");
        }
      }
    } else if (c == "det-line") {
      for (int g : resolutions()) {
        const IndexRun& r = index(g);
        if (r.topological.size() < 2) continue;
        // The stabilizer bundle is flat, so c1(det index) = c1(det kernel).
        add(c, "c1(det index)" + at_grid(g), c1_integral(r.index->berry, false), r.topological[1], tol_at(g));
      }
    } else if (c == "stabilizer-independence") {
      check_stabilizer_independence();
    } else if (c == "equivalence") {
      check_equivalence();
    } else if (c == "gauge") {
      check_gauge();
    } else if (c == "thom-rr") {
      check_thom();
    } else if (c == "ddclass") {
      const std::string summary = dd_class_summary(twist());
      const std::string& expect = s_.gerbe->expect;
      CheckResult cr{c, "Dixmier-Douady class", 0.0, 0.0, 0.0, 0.0, expect.empty() || expect == summary,
                     summary};
      if (!cr.pass) cr.note += " (expected " + expect + ")";
      report_.checks.push_back(cr);
    }
  }

  void check_gerbe_cocycle() {
    const GerbeCocycle t = twist();
    const SimplicialComplex& x = *t.cover().base;
    const Cochain d = coboundary_mod(x, 2, t.values(), t.n());
    for (std::size_t i = 0; i < d.size(); ++i) {
      if (d[i] != 0) {
        throw Error(ErrorCode::NotACocycle, "cech-gerbe", "validate",
                    "delta theta = " + d[i].get_str() + " mod " + std::to_string(t.n()) + " on 3-simplex " +
                        SimplicialComplex::label(x.simplices(3)[i]));
      }
    }
    add("gerbe-cocycle", "delta theta (mod n) nonzero entries", 0.0, 0.0, 0.0);
  }

  void check_convergence() {
    const int k = s_.connection->degree;
    const double e1 = std::abs(c1_integral(monopole_connection(atlas(grid_), k, false), false) - k);
    const double e2 = std::abs(c1_integral(monopole_connection(atlas(2 * grid_), k, false), false) - k);
    add("convergence", "grid c1 error ratio " + std::to_string(grid_) + "/" + std::to_string(2 * grid_),
        e1 / e2, 4.0, 0.5, "errors " + format_num("%.3e", e1) + ", " + format_num("%.3e", e2));
  }

  void check_descent() {
    const long n = s_.gerbe->n;
    const OverlapSampler sampler = atlas(grid_)->sampler();
    const ProjectiveBundleData d = tensor_power_descend(bundle(), n, sampler);
    const BundleTolerances bt;
    const ValidationReport v = measure(d, sampler);
    add("descent", "descended cocycle residual", v.max_residual, 0.0,
        d.all_constant() ? bt.cocycle_constant : bt.cocycle_sampled,
        d.twist().is_zero() ? "strict cocycle law" : "twist not cancelled");
    if (!d.twist().is_zero()) report_.checks.back().pass = false;
    const ConnectionData tp = tensor_power_connection(connection(), static_cast<int>(n));
    add("descent", "descended connection compatibility", compatibility_residual(d, tp), 0.0,
        ChernWeilTolerances{}.conn);
    ConnectionData grid_conn = connection();
    grid_conn.analytic_curvature = {};
    add("descent", "integral of Ch_2 of the descended bundle", c1_integral(tp, false),
        static_cast<double>(n) * c1_integral(grid_conn, false), 1e-4, "reference n * c1, grid curvature");
  }

  void check_stabilizer_independence() {
    const IndexRun& r = index(grid_);
    const FamilySpec& f = *r.family;
    const auto& fs = *s_.family;
    CMatrix map = CMatrix::Zero(f.target.rank(), fs.alternate_columns);
    for (const auto& [row, col, v] : fs.alternate_entries) {
      if (row >= map.rows()) {
        bad_input("verify", "alternate stabilizer row " + std::to_string(row) + " outside the target (" +
                                std::to_string(map.rows()) + ")");
      }
      map(row, col) = v;
    }
    const Stabilizer alt = check_stabilizer(f, map);
    const IndexBundle idx = analytic_index(f, alt);
    const auto ints = index_chern_integrals(idx, false);
    add("stabilizer-independence", "c1 with the alternate stabilizer", ints.at(1), r.analytic.at(1),
        s_.verification.stabilizer_tolerance,
        "N = " + std::to_string(alt.n) + ", min singular value " + format_num("%.3f", alt.min_singular));
  }

  void check_equivalence() {
    const IndexRun& tw = index(grid_);
    const AtlasPtr a = atlas(grid_);
    const long n = s_.gerbe->n;
    const Cochain back = negate_mod(*s_.gerbe->mu, n);
    // Untwisted family with the same Z_n label.
    Scenario plain = s_;
    plain.gerbe->mu.reset();
    const IndexRun un = run_index(scenario_family(plain, a, truncation_));
    const OverlapSampler sampler = a->sampler();
    auto identity = [](const ProjectiveBundleData& e) {
      return std::vector<Transition>(e.cover().set_count(), Transition::fixed(CMatrix::Identity(e.rank(), e.rank())));
    };
    const ProjectiveBundleData plus = gauge_rescale(tw.index->cls.plus, back);
    const ProjectiveBundleData minus = gauge_rescale(tw.index->cls.minus, back);
    const bool same = plus.rank() == un.index->cls.plus.rank() &&
                      minus.rank() == un.index->cls.minus.rank() &&
                      check_equivalence_witness(plus, un.index->cls.plus, identity(plus), sampler) &&
                      check_equivalence_witness(minus, un.index->cls.minus, identity(minus), sampler);
    CheckResult cr{"equivalence", "untwisted index bundle after the gauge witness", same ? 1.0 : 0.0, 1.0,
                   same ? 0.0 : 1.0, 0.0, same, "identity witness, theta -> theta - delta mu"};
    report_.checks.push_back(cr);
    add("equivalence", "c1 of the untwisted index", un.analytic.at(1), tw.analytic.at(1),
        s_.verification.gauge_tolerance);
  }

  void check_gauge() {
    const long n = s_.gerbe ? s_.gerbe->n : 1;
    const double tol = s_.verification.gauge_tolerance;
    if (n < 2) {
      add("gauge", "no central scalars", 0.0, 0.0, tol, "n = 1");
      return;
    }
    const std::string note = "theta -> theta + delta mu";
    if (s_.atlas_preset.empty()) {
      const GerbeCocycle t = twist();
      const Cochain mu = gauge_cochain(*t.cover().base, n);
      const auto c0 = dd_class(t).bockstein.coordinates;
      const auto c1 = dd_class(gauge_transform(t, mu)).bockstein.coordinates;
      double diff = 0.0;
      for (std::size_t i = 0; i < c0.free.size(); ++i) diff += std::abs(Integer(c0.free[i] - c1.free[i]).get_d());
      for (std::size_t i = 0; i < c0.torsion.size(); ++i) {
        diff += std::abs(Integer(c0.torsion[i] - c1.torsion[i]).get_d());
      }
      add("gauge", "class coordinates", diff, 0.0, 0.0, note);
      return;
    }
    const AtlasPtr a = atlas(grid_);
    const Cochain mu = gauge_cochain(*a->cover().base, n);
    if (s_.bundle && s_.connection) {
      const ConnectionFn raw = connection().eval;
      const double ref = c1_integral(average_connection(bundle(), raw, a), false);
      const double val = c1_integral(average_connection(gauge_rescale(bundle(), mu), raw, a), false);
      add("gauge", "c1 integral of the averaged connection", val, ref, tol, note);
    }
    if (s_.family) {
      const IndexRun& r = index(grid_);
      const IndexRun g = run_index(gauge_family(*r.family, mu));
      add("gauge", "analytic virtual rank", g.analytic[0], r.analytic[0], tol, note);
      add("gauge", "topological degree 0", g.topological[0], r.topological[0], tol, note);
      if (r.topological.size() > 1) {
        add("gauge", "analytic degree 2", g.analytic[1], r.analytic[1], tol, note);
        add("gauge", "topological degree 2", g.topological[1], r.topological[1], tol, note);
      }
    }
    if (s_.thom) {
      const AtlasPtr b = Atlas::sphere_two_patch(thom_grid());
      const ProjectiveBundleData line = central_twist_line(b->cover(), n, Cochain(b->cover().base->count(1), 0));
      for (const auto& [ke, kf] : s_.thom->fixtures) {
        auto pairing = [&](bool gauged) {
          ProjectiveBundleData e = twist_by_line(monopole_bundle(b, ke), line);
          ProjectiveBundleData f = twist_by_line(monopole_bundle(b, kf), line);
          if (gauged) {
            e = gauge_rescale(e, mu);
            f = gauge_rescale(f, mu);
          }
          const ConnectionData ce = average_connection(e, monopole_connection(b, ke).eval, b);
          const ConnectionData cf = average_connection(f, monopole_connection(b, kf).eval, b);
          const ScalarFormField w =
              wedge(todd_inverse_form(curvature(ce, false)), chern_character_form(curvature(cf, false)));
          return form_integrals(w).at(0) + integrate(degree_part(w, 2)).real();
        };
        add("gauge", "Td(E)^-1 Ch(F) pairing, E^" + std::to_string(ke) + " F^" + std::to_string(kf),
            pairing(true), pairing(false), tol, note);
      }
    }
  }

  int thom_grid() const { return grid_ != s_.grid ? grid_ : s_.thom->base_grid; }

  void check_thom() {
    const auto& t = *s_.thom;
    for (const auto& [ke, kf] : t.fixtures) {
      const ThomFixture fx{ke, kf, thom_grid(), t.fiber_grid, t.sigma};
      const ThomReport r = thom_rr_check(fx, std::numeric_limits<double>::infinity());
      const std::string label = "E^" + std::to_string(ke) + " F^" + std::to_string(kf);
      CheckResult cr{"thom-rr", "Ch(Thom F) vs Td(E)^-1 Ch(F), " + label, r.total, r.base, r.residual, tol_,
                     r.residual <= tol_, "degree-0 defect " + format_num("%.2e", r.degree0_defect)};
      report_.checks.push_back(cr);
      add("thom-rr", "support leak on the disc boundary, " + label, r.support_leak, 0.0, 1e-6);
    }
  }

  const Scenario& s_;
  int grid_ = 0;
  int truncation_ = 0;
  double tol_ = 0.0;
  double doubled_ = 0.0;
  VerificationReport report_;
  std::map<int, AtlasPtr> atlases_;
  std::shared_ptr<ProjectiveBundleData> bundle_;
  std::shared_ptr<ConnectionData> conn_;
  std::shared_ptr<FamilySpec> family_;
  std::map<int, IndexRun> index_;
};

}  // namespace

VerificationReport validate_scenario(const Scenario& s, const RunOptions& opt) {
  std::vector<std::string> checks;
  if (!s.atlas_preset.empty()) checks.push_back("partition");
  if (s.gerbe) checks.push_back("gerbe-cocycle");
  if (s.bundle) checks.push_back("bundle-cocycle");
  if (s.bundle && s.connection) checks.push_back("compat");
  if (s.family) {
    checks.push_back("ellipticity");
    checks.push_back("family-compat");
  }
  return Runner(s, opt).run(checks);
}

VerificationReport verify_scenario(const Scenario& s, const RunOptions& opt) {
  return Runner(s, opt).run(s.verification.checks);
}

// ---------------------------------------------------------------------------
// Reports

namespace {

json num_json(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double json_num(const json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

}  // namespace

std::string report_to_json(const VerificationReport& r) {
  json j;
  j["scenario"] = r.scenario;
  j["version"] = r.version;
  j["threads"] = r.threads;
  j["grid"] = r.grid;
  j["truncation"] = r.truncation;
  j["pass"] = r.pass();
  json checks = json::array();
  for (const auto& c : r.checks) {
    json e;
    e["check"] = c.check;
    e["quantity"] = c.quantity;
    e["value"] = num_json(c.value);
    e["reference"] = num_json(c.reference);
    e["residual"] = num_json(c.residual);
    e["tolerance"] = num_json(c.tolerance);
    e["pass"] = c.pass;
    if (!c.note.empty()) e["note"] = c.note;
    checks.push_back(e);
  }
  j["checks"] = checks;
  return j.dump(2) + "\n";
}

VerificationReport report_from_json(const std::string& text) {
  VerificationReport r;
  try {
    const json j = json::parse(text);
    r.scenario = j.at("scenario").get<std::string>();
    r.version = j.at("version").get<int>();
    r.threads = j.at("threads").get<int>();
    r.grid = j.at("grid").get<int>();
    r.truncation = j.at("truncation").get<int>();
    for (const auto& e : j.at("checks")) {
      CheckResult c;
      c.check = e.at("check").get<std::string>();
      c.quantity = e.at("quantity").get<std::string>();
      c.value = json_num(e.at("value"));
      c.reference = json_num(e.at("reference"));
      c.residual = json_num(e.at("residual"));
      c.tolerance = json_num(e.at("tolerance"));
      c.pass = e.at("pass").get<bool>();
      c.note = e.value("note", "");
      r.checks.push_back(c);
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, kModule, "report_from_json", e.what());
  }
  return r;
}

std::string report_table(const VerificationReport& r) {
  std::ostringstream out;
  out << "scenario " << r.scenario << " (grid " << r.grid << ", truncation " << r.truncation << ", threads "
      << r.threads << ")\n";
  char line[512];
  std::snprintf(line, sizeof line, "%-24s %-52s %15s %15s %10s %10s  %s\n", "check", "quantity", "value",
                "reference", "residual", "tolerance", "status");
  out << line;
  for (const auto& c : r.checks) {
    std::snprintf(line, sizeof line, "%-24s %-52s %15.9g %15.9g %10.3e %10.3e  %s", c.check.c_str(),
                  c.quantity.c_str(), c.value, c.reference, c.residual, c.tolerance, c.pass ? "pass" : "FAIL");
    out << line;
    if (!c.note.empty()) out << "  [" << c.note << "]";
    out << "\n";
  }
  out << (r.pass() ? "PASS" : "FAIL") << "\n";
  return out.str();
}

}  // namespace gidx
