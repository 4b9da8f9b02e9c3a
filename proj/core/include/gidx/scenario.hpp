#pragma once

#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "gidx/atlas.hpp"
#include "gidx/elliptic_family.hpp"
#include "gidx/gerbe.hpp"
#include "gidx/index_theorem.hpp"

namespace gidx {

constexpr int kScenarioVersion = 1;

// Parsed scenario file. Sections absent from the file stay empty.
struct Scenario {
  int version = kScenarioVersion;
  std::string name;

  // Base: either a sphere atlas (its nerve is the cover) or a bare complex.
  std::string atlas_preset;  // "sphere-two-patch", "sphere-three-patch", "point"
  int grid = 64;
  ComplexPtr complex;

  struct Gerbe {
    long n = 1;
    std::optional<Cochain> theta;          // explicit 2-cochain
    std::optional<Cochain> mu;             // theta = delta mu
    std::optional<int> torsion_generator;  // Z_n lift of an H^3 torsion generator
    std::optional<std::vector<CMatrix>> lift;  // SU(n) edge matrices
    std::string expect;                    // expected ddclass summary
  };
  std::optional<Gerbe> gerbe;

  struct Bundle {
    std::string preset;  // "monopole", "constant"
    int degree = 1;
    int rank = 1;
    std::vector<CMatrix> edges;  // constant transitions in edge order
  };
  std::optional<Bundle> bundle;

  struct Connection {
    std::string preset;  // "monopole", "flat"
    int degree = 1;
    bool analytic_override = true;
  };
  std::optional<Connection> connection;

  struct Family {
    std::string preset;  // "bott-toeplitz", "winding", "identity"
    int truncation = 16;
    int winding = 1;
    // Second stabilizer for the independence check: N columns, entries
    // (row, column, value) of a target dim x N map.
    int alternate_columns = 0;
    std::vector<std::tuple<int, int, Complex>> alternate_entries;
  };
  std::optional<Family> family;

  struct Thom {
    std::vector<std::pair<int, int>> fixtures;  // (deg E, deg F)
    int base_grid = 32;
    int fiber_grid = 24;
    double sigma = 1.0;
  };
  std::optional<Thom> thom;

  struct Verification {
    std::vector<std::string> checks;
    double tolerance = 1e-3;
    double doubled_tolerance = 2.5e-4;
    bool resolution_doubling = false;
    double chern_expected = 1.0;
    double chern_tolerance = 1e-6;
    double stabilizer_tolerance = 1e-4;
    double gauge_tolerance = 1e-8;
  };
  Verification verification;
};

// Throws ParseError (with the offending field) or UnsupportedVersion.
Scenario parse_scenario(const std::string& text);
// Reads a file, or a bundled fixture when `path` names one.
Scenario load_scenario(const std::string& path);

std::vector<std::string> bundled_scenario_names();
std::string bundled_scenario_text(const std::string& name);  // empty if unknown

// "zero", "trivial class", "torsion Z/d generator", ... for a Z_n 2-cocycle.
std::string dd_class_summary(const GerbeCocycle& theta);

// Builders from a parsed scenario at a given resolution.
AtlasPtr scenario_atlas(const Scenario& s, int grid);
CombinatorialCover scenario_cover(const Scenario& s, const AtlasPtr& atlas);
GerbeCocycle scenario_twist(const Scenario& s, const CombinatorialCover& cover);
ProjectiveBundleData scenario_bundle(const Scenario& s, const AtlasPtr& atlas);
ConnectionData scenario_connection(const Scenario& s, const AtlasPtr& atlas);
FamilySpec scenario_family(const Scenario& s, const AtlasPtr& atlas, int truncation);

struct RunOptions {
  int resolution = 0;   // grid override, 0 = scenario value
  int truncation = 0;   // fiber truncation override
  double tolerance = 0; // primary tolerance override
};

struct CheckResult {
  std::string check;
  std::string quantity;
  double value = 0.0;
  double reference = 0.0;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string note;
};

struct VerificationReport {
  std::string scenario;
  int version = kScenarioVersion;
  int threads = 1;
  int grid = 0;
  int truncation = 0;
  std::vector<CheckResult> checks;
  bool pass() const;
};

// Structural checks only (cocycle, partition of unity, bundle cocycle,
// ellipticity, compatibility).
VerificationReport validate_scenario(const Scenario& s, const RunOptions& opt = {});
// Every check listed in the verification section.
VerificationReport verify_scenario(const Scenario& s, const RunOptions& opt = {});

std::string report_to_json(const VerificationReport& r);
VerificationReport report_from_json(const std::string& text);
std::string report_table(const VerificationReport& r);

}  // namespace gidx
