// Acceptance gate: one PASS/FAIL line per criterion, exit status 0 iff all pass.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "gidx/cohomology.hpp"
#include "gidx/error.hpp"
#include "gidx/gerbe.hpp"
#include "gidx/projective_bundle.hpp"
#include "gidx/scenario.hpp"

using namespace gidx;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const fs::path& work_dir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "gidx_acceptance";
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

// Runs `gerbe-index verify <name> --threads 1 --report <file>` in process.
struct VerifyRun {
  int code = -1;
  double seconds = 0.0;
  std::string json;
  VerificationReport report;
};

VerifyRun cli_verify(const std::string& scenario, const std::string& tag) {
  VerifyRun r;
  const fs::path out = work_dir() / (tag + ".json");
  fs::remove(out);
  std::ostringstream sink, err;
  const auto t0 = Clock::now();
  r.code = cli::run({"gerbe-index", "verify", scenario, "--threads", "1", "--report", out.string()}, sink, err);
  r.seconds = seconds_since(t0);
  if (!err.str().empty()) std::cerr << err.str();
  if (fs::exists(out)) {
    r.json = slurp(out);
    r.report = report_from_json(r.json);
  }
  return r;
}

// Rows of a report matching a check name (and optionally a quantity prefix).
std::vector<CheckResult> rows(const VerificationReport& r, const std::string& check,
                              const std::string& quantity_prefix = {}) {
  std::vector<CheckResult> out;
  for (const auto& c : r.checks)
    if (c.check == check && c.quantity.rfind(quantity_prefix, 0) == 0) out.push_back(c);
  return out;
}

bool all_pass(const std::vector<CheckResult>& v) {
  if (v.empty()) return false;
  for (const auto& c : v)
    if (!c.pass) return false;
  return true;
}

double worst_residual(const std::vector<CheckResult>& v) {
  double w = 0.0;
  for (const auto& c : v) w = std::max(w, c.residual);
  return w;
}

// --- criterion 1 -----------------------------------------------------------

Outcome torsion_pipeline() {
  const auto t0 = Clock::now();
  const SimplicialComplex x = complexes::suspended_projective_plane();
  const CohomologyGroup h3 = cohomology_group(x, 3);
  bool ok = h3.free_rank == 0 && h3.torsion.size() == 1 && h3.torsion[0] == 2;
  std::string cls = "n/a";
  if (ok) {
    const Cochain theta = bockstein_preimage(x, 3, h3.torsion_generators[0], 2);
    const BocksteinResult b = bockstein(x, theta, 2);
    ok = b.coordinates.torsion.size() == 1 && b.coordinates.torsion[0] == 1 && b.coordinates.order() == 2;
    cls = dd_class_summary(GerbeCocycle(CombinatorialCover::of(x), 2, theta));
  }
  const double t = seconds_since(t0);
  return {ok && t < 1.0, "H^3 torsion [" + (h3.torsion.empty() ? std::string() : h3.torsion[0].get_str()) +
                             "], free rank " + std::to_string(h3.free_rank) + ", bockstein class: " + cls +
                             ", " + fmt("%.3f", t) + " s (limit 1 s)"};
}

// --- criterion 2 -----------------------------------------------------------

struct ConstantFixture {
  ProjectiveBundleData bundle;
  long n;
};

// Valid projective data: Q_ab = zeta^{mu_ab} U_a U_b^* (twist delta mu) on
// assorted complexes, or U_a G_ab U_b^* for the flat PU(2) lift on
// RP^2 x S^1 (a twist of order 2 that is not a coboundary).
ConstantFixture random_fixture(std::mt19937_64& rng, int k) {
  static const std::vector<SimplicialComplex> bases{complexes::triangle(), complexes::tetrahedron_boundary(),
                                                    complexes::projective_plane6(),
                                                    complexes::suspended_projective_plane()};
  static const PULift lift = fixtures::projective_plane_times_circle_lift();
  static const GerbeCocycle lift_twist = dd_cocycle(lift);
  if (k % 4 == 3) {
    const auto& cover = lift.cover();
    std::vector<CMatrix> u;
    for (std::size_t a = 0; a < cover.set_count(); ++a) u.push_back(random_unitary(rng, 2));
    std::vector<Transition> q;
    const auto& edges = cover.base->simplices(1);
    for (std::size_t i = 0; i < edges.size(); ++i)
      q.push_back(Transition::fixed(u[edges[i][0]] * lift.edge_matrices()[i] * u[edges[i][1]].adjoint()));
    return {ProjectiveBundleData(lift_twist, 2, std::move(q)), 2};
  }
  static const std::vector<long> ns{2, 3, 5};
  const CombinatorialCover cover = CombinatorialCover::of(bases[k % 3 == 0 ? 3 : k % 3]);
  const long n = ns[rng() % ns.size()];
  const int rank = 1 + static_cast<int>(rng() % 3);
  std::vector<CMatrix> u;
  for (std::size_t a = 0; a < cover.set_count(); ++a) u.push_back(random_unitary(rng, rank));
  Cochain mu;
  std::vector<Transition> q;
  const auto& edges = cover.base->simplices(1);
  for (const auto& e : edges) {
    const long m = static_cast<long>(rng() % n);
    mu.emplace_back(m);
    q.push_back(Transition::fixed(root_of_unity(m, n) * u[e[0]] * u[e[1]].adjoint()));
  }
  return {ProjectiveBundleData(gauge_transform(GerbeCocycle::zero(cover, n), mu), rank, std::move(q)), n};
}

ProjectiveBundleData perturb(const ProjectiveBundleData& e, std::mt19937_64& rng) {
  std::vector<Transition> q = e.transitions();
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::size_t edge = rng() % q.size();
  CMatrix m = *q[edge].constant;
  const Eigen::Index r = static_cast<Eigen::Index>(rng() % m.rows()), c = static_cast<Eigen::Index>(rng() % m.cols());
  const double size = std::pow(10.0, -3.0 + 2.0 * unit(rng));  // [1e-3, 1e-1]
  m(r, c) += std::polar(size, 2.0 * kPi * unit(rng));
  q[edge] = Transition::fixed(m);
  return ProjectiveBundleData(e.twist(), e.rank(), std::move(q));
}

Outcome weak_cocycle_law() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(20240611);
  int valid_ok = 0, perturbed_caught = 0;
  for (int k = 0; k < 1000; ++k) {
    const ConstantFixture f = random_fixture(rng, k);
    try {
      validate(f.bundle);
      ++valid_ok;
    } catch (const Error& e) {
      std::cerr << "valid fixture " << k << " rejected: " << e.what() << "\n";
    }
    try {
      validate(perturb(f.bundle, rng));
    } catch (const Error& e) {
      if (e.code() == ErrorCode::WeakCocycleViolation || e.code() == ErrorCode::NotUnitary) ++perturbed_caught;
    }
  }
  const double t = seconds_since(t0);
  return {valid_ok == 1000 && perturbed_caught == 1000 && t < 10.0,
          std::to_string(valid_ok) + "/1000 valid accepted, " + std::to_string(perturbed_caught) +
              "/1000 perturbed rejected, " + fmt("%.2f", t) + " s (limit 10 s)"};
}

// --- criterion 3 -----------------------------------------------------------

const char* kTwistedMonopole = R"({
  "version": 1,
  "name": "twisted-monopole",
  "atlas": {"preset": "sphere-three-patch", "grid": 64},
  "gerbe": {"n": 3, "mu": [1, 0, 0]},
  "bundle": {"preset": "monopole", "degree": 1},
  "connection": {"preset": "monopole", "degree": 1, "analytic_override": false},
  "verification": {"checks": ["bundle-cocycle", "compat", "descent"]}
})";

Outcome tensor_power_descent() {
  // Strict cocycle law after descent on constant fixtures.
  std::mt19937_64 rng(7);
  int descended = 0, strict = 0;
  for (int k = 0; k < 40; ++k) {
    const ConstantFixture f = random_fixture(rng, k);
    if (std::pow(f.bundle.rank(), f.n) > 32) continue;
    ++descended;
    try {
      const ProjectiveBundleData d = tensor_power_descend(f.bundle, f.n);
      validate(d);
      if (d.twist().is_zero()) ++strict;
    } catch (const Error& e) {
      std::cerr << "descent fixture " << k << ": " << e.what() << "\n";
    }
  }
  const VerificationReport r = verify_scenario(parse_scenario(kTwistedMonopole));
  const auto integral = rows(r, "descent", "integral");
  const bool ok = descended > 0 && strict == descended && r.pass() && integral.size() == 1;
  std::string detail = std::to_string(strict) + "/" + std::to_string(descended) +
                       " constant fixtures descend to strict cocycles; twisted monopole";
  if (integral.size() == 1) {
    detail += " int Ch_2 = " + fmt("%.9f", integral[0].value) + " vs n int c1 = " +
              fmt("%.9f", integral[0].reference) + ", residual " + fmt("%.2e", integral[0].residual) +
              " (limit 1e-4)";
  }
  if (!r.pass()) detail += ", report has failing rows";
  return {ok, detail};
}

// --- criterion 4 -----------------------------------------------------------

Outcome chern_weil_floor() {
  const auto t0 = Clock::now();
  const VerificationReport r = verify_scenario(parse_scenario(bundled_scenario_text("monopole")));
  const double t = seconds_since(t0);
  const auto chern = rows(r, "chern");
  const auto conv = rows(r, "convergence");
  const bool ok = all_pass(chern) && all_pass(conv) && chern[0].residual <= 1e-6 && conv[0].value >= 3.5 &&
                  conv[0].value <= 4.5 && t < 5.0;
  std::string detail;
  if (!chern.empty() && !conv.empty()) {
    detail = "int c1 = " + fmt("%.10f", chern[0].value) + " (error " + fmt("%.1e", chern[0].residual) +
             ", limit 1e-6), 64/128 error ratio " + fmt("%.4f", conv[0].value) + " [" + conv[0].note + "], ";
  }
  return {ok, detail + fmt("%.2f", t) + " s (limit 5 s)"};
}

// --- criteria 5..11 from full fixture reports ---------------------------------

struct FixtureRuns {
  VerifyRun first, second;
};

Outcome thom(const FixtureRuns& f) {
  const auto pairing = rows(f.first.report, "thom-rr", "Ch(Thom");
  const auto leak = rows(f.first.report, "thom-rr", "support leak");
  double worst_leak = 0.0;
  for (const auto& c : leak) worst_leak = std::max(worst_leak, c.value);
  const bool ok = pairing.size() == 3 && leak.size() == 3 && all_pass(pairing) && all_pass(leak) &&
                  worst_residual(pairing) < 1e-3 && worst_leak < 1e-6;
  return {ok, std::to_string(pairing.size()) + " fixtures, worst residual " + fmt("%.2e", worst_residual(pairing)) +
                  " (limit 1e-3), worst boundary leak " + fmt("%.2e", worst_leak) + " (limit 1e-6)"};
}

Outcome untwisted_index() {
  // Index rows only, both resolutions, timed.
  Scenario s = parse_scenario(bundled_scenario_text("bott-toeplitz"));
  s.verification.checks = {"index"};
  const auto t0 = Clock::now();
  const VerificationReport r = verify_scenario(s);
  const double t = seconds_since(t0);
  const auto d2 = rows(r, "index", "index degree 2");
  const auto d0 = rows(r, "index", "index degree 0");
  bool ok = d2.size() == 2 && d0.size() == 2 && all_pass(d2) && all_pass(d0) && t < 60.0;
  std::string detail;
  if (d2.size() == 2) {
    for (const auto& c : d2) ok = ok && std::abs(std::abs(c.value) - 1.0) < 1e-2 && std::abs(std::abs(c.reference) - 1.0) < 1e-2;
    detail = "analytic " + fmt("%.8f", d2[0].value) + " vs topological " + fmt("%.8f", d2[0].reference) +
             " residual " + fmt("%.2e", d2[0].residual) + " (limit 1e-3); doubled residual " +
             fmt("%.2e", d2[1].residual) + " (limit 2.5e-4); ";
  }
  return {ok, detail + fmt("%.1f", t) + " s (limit 60 s)"};
}

Outcome twisted_index(const FixtureRuns& f) {
  const auto d2 = rows(f.first.report, "index", "index degree 2");
  const auto eq = rows(f.first.report, "equivalence");
  const bool ok = d2.size() == 2 && all_pass(d2) && d2[0].residual < 1e-3 && d2[1].residual < 2.5e-4 &&
                  all_pass(eq) && !eq.empty();
  std::string detail;
  if (d2.size() == 2) {
    detail = "residual " + fmt("%.2e", d2[0].residual) + " (limit 1e-3), doubled " + fmt("%.2e", d2[1].residual) +
             " (limit 2.5e-4); ";
  }
  return {ok, detail + (all_pass(eq) ? "witness-equivalent to the untwisted index" : "witness equivalence failed")};
}

Outcome determinant_line(const FixtureRuns& bt, const FixtureRuns& tw) {
  const auto a = rows(bt.first.report, "det-line");
  const auto b = rows(tw.first.report, "det-line");
  const bool ok = all_pass(a) && all_pass(b) && worst_residual(a) < 1e-3 && worst_residual(b) < 1e-3;
  return {ok, "untwisted worst residual " + fmt("%.2e", worst_residual(a)) + ", twisted " +
                  fmt("%.2e", worst_residual(b)) + " (limit 1e-3)"};
}

Outcome stabilizer_independence(const FixtureRuns& bt) {
  const auto r = rows(bt.first.report, "stabilizer-independence");
  const bool ok = r.size() == 1 && r[0].pass && r[0].residual < 1e-4;
  if (r.empty()) return {false, "no stabilizer-independence row"};
  return {ok, "int c1 " + fmt("%.8f", r[0].reference) + " vs " + fmt("%.8f", r[0].value) + " [" + r[0].note +
                  "], difference " + fmt("%.2e", r[0].residual) + " (limit 1e-4)"};
}

Outcome gauge_invariance(const std::vector<std::pair<std::string, FixtureRuns>>& all) {
  bool ok = true;
  std::size_t count = 0;
  double worst = 0.0;
  std::string missing;
  for (const auto& [name, runs] : all) {
    const auto g = rows(runs.first.report, "gauge");
    if (g.empty()) missing += " " + name;
    ok = ok && all_pass(g);
    count += g.size();
    worst = std::max(worst, worst_residual(g));
  }
  ok = ok && missing.empty() && worst <= 1e-8;
  return {ok, std::to_string(count) + " integrals over " + std::to_string(all.size()) + " fixtures, worst change " +
                  fmt("%.2e", worst) + " (limit 1e-8)" + (missing.empty() ? "" : ", missing:" + missing)};
}

Outcome determinism(const std::vector<std::pair<std::string, FixtureRuns>>& all) {
  bool ok = true;
  std::string detail;
  for (const auto& [name, runs] : all) {
    const bool same = !runs.first.json.empty() && runs.first.json == runs.second.json;
    ok = ok && same;
    detail += (detail.empty() ? "" : ", ") + name + (same ? " identical" : " DIFFERENT");
  }
  return {ok, detail};
}

}  // namespace

int main() {
  std::vector<std::pair<std::string, Outcome>> results;
  auto record = [&](const std::string& label, const std::function<Outcome()>& fn) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << label << ": " << o.detail << std::endl;
    results.emplace_back(label, o);
  };

  record("1 torsion pipeline on the suspended projective plane", torsion_pipeline);
  record("2 weak cocycle law on 1000 random fixtures", weak_cocycle_law);
  record("3 tensor-power descent", tensor_power_descent);
  record("4 Chern-Weil floor and order-2 convergence", chern_weil_floor);

  // Every bundled fixture through `verify --threads 1`, twice.
  std::vector<std::pair<std::string, FixtureRuns>> runs;
  for (const auto& name : bundled_scenario_names()) {
    FixtureRuns f;
    f.first = cli_verify(name, name + "-a");
    f.second = cli_verify(name, name + "-b");
    std::cerr << "verify " << name << ": exit " << f.first.code << ", " << fmt("%.1f", f.first.seconds) << " s / "
              << fmt("%.1f", f.second.seconds) << " s" << std::endl;
    runs.emplace_back(name, std::move(f));
  }
  auto fixture = [&](const std::string& name) -> const FixtureRuns& {
    for (const auto& [n, f] : runs)
      if (n == name) return f;
    throw std::runtime_error("fixture " + name + " missing");
  };

  record("5 Riemann-Roch form identity on line-bundle fixtures", [&] { return thom(fixture("thom-rr-line")); });
  record("6 index theorem, untwisted Bott-Toeplitz", untwisted_index);
  record("7 index theorem, twisted by a coboundary", [&] { return twisted_index(fixture("bott-toeplitz-twisted")); });
  record("8 determinant line", [&] {
    return determinant_line(fixture("bott-toeplitz"), fixture("bott-toeplitz-twisted"));
  });
  record("9 stabilization independence", [&] { return stabilizer_independence(fixture("bott-toeplitz")); });
  record("10 gauge/central invariance", [&] { return gauge_invariance(runs); });
  record("11 determinism of verify --threads 1", [&] { return determinism(runs); });

  int failed = 0;
  for (const auto& [label, o] : results) failed += o.pass ? 0 : 1;
  std::cout << (failed == 0 ? "ALL CRITERIA PASS" : std::to_string(failed) + " CRITERIA FAIL") << std::endl;
  return failed == 0 ? 0 : 1;
}
