#include "reproduce.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "eh/delaunay.hpp"
#include "eh/elastica.hpp"
#include "eh/energy.hpp"
#include "eh/meshgen.hpp"
#include "eh/plateau.hpp"
#include "eh/sampled_curve.hpp"

namespace ehtool {
namespace {

namespace fs = std::filesystem;
using namespace eh;

constexpr double kPi = 3.14159265358979323846;

json num_row(const std::string& name, double expected, double computed, double tol,
             const std::string& note = "") {
  json r{{"name", name},
         {"expected", expected},
         {"computed", computed},
         {"tolerance", tol},
         {"pass", std::abs(computed - expected) <= tol}};
  if (!note.empty()) r["note"] = note;
  return r;
}

json rel_row(const std::string& name, double expected, double computed, double rel_tol,
             const std::string& note = "") {
  json r = num_row(name, expected, computed, rel_tol * std::abs(expected), note);
  r["tolerance_kind"] = "relative " + std::to_string(rel_tol);
  return r;
}

json summary_skeleton(const std::string& id, const json& resolved) {
  return json{{"id", id},
              {"tool", "ehtool"},
              {"version", EHTOOL_VERSION},
              {"spec_hash", spec_hash(resolved)},
              {"rows", json::array()}};
}

bool finish_summary(json& summary, const fs::path& dir) {
  bool all = true;
  for (const auto& r : summary["rows"]) all = all && r["pass"].get<bool>();
  summary["all_pass"] = all;
  write_json(dir / "summary.json", summary);
  return all;
}

struct DiscRun {
  FlowResult flow;
  EquilibriumReport report;
};

DiscRun minimal_disc(int q, int samples_per_period, double tol, const fs::path& dir) {
  const CurveParams cp(0.0, 1.0);
  const FirstIntegrals fi = find_closed_curve(cp, q, 1, SearchBox{});
  const CurvatureProfile prof = curvature_profile(cp, fi, samples_per_period);
  const SampledCurve curve = reconstruct_curve(prof, q);
  write_curve_csv(curve, (dir / ("curve_q" + std::to_string(q) + ".csv")).string());

  FlowConfig cfg;
  cfg.time_step = 2e-3;
  cfg.max_iters = 4000;
  cfg.h_tolerance = tol;
  DiscRun run;
  run.flow = run_flow(make_disc_from_curve(curve, 24), cfg);
  write_obj(run.flow.mesh, (dir / ("disc_q" + std::to_string(q) + ".obj")).string());
  run.report = verify_equilibrium(run.flow.mesh, EnergyParams{});
  return run;
}

// Minimal discs spanned by the closed (q,1) elastic curves, q = 3, 4, 5.
json reproduce_fig1(const fs::path& dir) {
  json resolved{{"command", "reproduce"}, {"id", "fig1"},      {"qs", {3, 4, 5}},
                {"mu", 0.0},              {"lambda", 1.0},     {"rings", 24},
                {"time_step", 2e-3},      {"max_iters", 4000}};
  json summary = summary_skeleton("fig1", resolved);
  for (int q : {3, 4, 5}) {
    // The three-fold curve bends hardest per period; it gets the finer
    // boundary sampling and the deeper stop so the interior residual follows.
    const int per = q == 3 ? 120 : 80;
    const double tol = q == 3 ? 1e-5 : 1e-4;
    DiscRun run = minimal_disc(q, per, tol, dir);
    const std::string tag = "q" + std::to_string(q) + "_";
    const double max_h = run.flow.trace.rows.back().max_h_error;
    summary["rows"].push_back(num_row(tag + "max_mean_curvature", 0.0, max_h, 1e-2));
    summary["rows"].push_back(num_row(tag + "el2_residual", 0.0, run.report.boundary.r2, 1e-2));
    summary["rows"].push_back(num_row(tag + "el3_residual", 0.0, run.report.boundary.r3, 1e-2));
    summary["rows"].push_back(num_row(tag + "el4_residual", 0.0, run.report.boundary.r4, 1e-2));
    if (q == 3)
      summary["rows"].push_back(num_row(tag + "el1_residual", 0.0, run.report.r1, 1e-2));
  }
  finish_summary(summary, dir);
  return summary;
}

// Minimal annulus between coaxial circles of the critical radius.
json reproduce_fig2(const fs::path& dir) {
  json resolved{{"command", "reproduce"}, {"id", "fig2"},   {"radius", 1.0},
                {"separation", 1.0},      {"samples", 160}, {"rows", 20},
                {"time_step", 2e-3},      {"tolerance", 1e-4}};
  json summary = summary_skeleton("fig2", resolved);

  SampledCurve lo = make_circle(1.0, 160), hi = make_circle(1.0, 160);
  for (int i = 0; i < lo.sample_count(); ++i) {
    lo.points(2, i) = -0.5;
    hi.points(2, i) = 0.5;
  }
  FlowConfig cfg;
  cfg.time_step = 2e-3;
  cfg.max_iters = 4000;
  cfg.h_tolerance = 1e-4;
  FlowResult res = run_flow(make_annulus_between(lo, hi, 20), cfg);
  write_obj(res.mesh, (dir / "annulus.obj").string());
  write_flow_trace_csv(res.trace, (dir / "trace.csv").string());

  const EnergyParams p;
  const double energy = evaluate_energy(res.mesh, p).total;
  const EquilibriumReport rep = verify_equilibrium(res.mesh, p);
  summary["rows"].push_back(rel_row("annulus_energy", 8 * kPi, energy, 1e-2));
  summary["rows"].push_back(
      num_row("max_mean_curvature", 0.0, res.trace.rows.back().max_h_error, 1e-2));
  summary["rows"].push_back(num_row("el3_residual", 0.0, rep.boundary.r3, 1e-2));
  finish_summary(summary, dir);
  return summary;
}

// The four annular domains of the critical nodoid, rims at the critical
// radius; their spherical-image areas are -4pi, +4pi, 0, -4pi.
json reproduce_fig3(const fs::path& dir) {
  json resolved{{"command", "reproduce"}, {"id", "fig3"}, {"c0", 1.0},      {"alpha", 1.0},
                {"beta", 1.0},            {"samples", 513}, {"revolve", 256}};
  json summary = summary_skeleton("fig3", resolved);

  EnergyParams p;
  p.c0 = 1.0;
  const std::vector<NodoidDomain> domains = enumerate_domains(p, 513);
  const double expected_tc[4] = {-4 * kPi, 4 * kPi, 0.0, -4 * kPi};
  double worst_rim = 0.0;
  for (size_t i = 0; i < domains.size(); ++i) {
    const NodoidDomain& dom = domains[i];
    const std::string label = to_string(dom.label);
    const TriMesh mesh = revolve_domain(dom, 256, 256, 6.0);
    write_obj(mesh, (dir / (label + ".obj")).string());
    write_profile_csv((dir / (label + "_profile.csv")).string(), dom.profile);
    const double tc_discrete = compute_surface_moments(mesh).int_k;
    worst_rim = std::max(worst_rim, std::abs(dom.rim_radius - 1.0));
    summary["rows"].push_back(num_row(label + "_total_curvature", expected_tc[i], tc_discrete,
                                      1e-3 * 4 * kPi,
                                      "analytic " + std::to_string(analytic_total_curvature(dom))));
  }
  summary["rows"].push_back(num_row("rim_radius_error", 0.0, worst_rim, 1e-10));
  finish_summary(summary, dir);
  return summary;
}

// Catenoid panel: an embedded slice between critical-radius parallels. The
// remaining panels of the original figure show Riemann-type minimal annuli
// with no closed-form profile; they are out of scope here.
json reproduce_fig4(const fs::path& dir) {
  json resolved{{"command", "reproduce"}, {"id", "fig4"},  {"aspect", 1.0},
                {"radius", 1.0},          {"azimuth", 320}, {"rows", 80}};
  json summary = summary_skeleton("fig4", resolved);
  summary["note"] = "catenoid panel only; the non-rotational minimal annuli have no "
                    "closed-form profile and are not reproduced";

  const TriMesh slice = make_catenoid_slice(1.0, 1.0, 320, 80);
  write_obj(slice, (dir / "catenoid.obj").string());
  const EnergyParams p;
  const double energy = evaluate_energy(slice, p).total;
  const EquilibriumReport rep = verify_equilibrium(slice, p);
  summary["rows"].push_back(rel_row("catenoid_energy", 8 * kPi, energy, 1e-2));
  summary["rows"].push_back(num_row("el2_residual", 0.0, rep.boundary.r2, 1e-2));
  summary["rows"].push_back(num_row("el3_residual", 0.0, rep.boundary.r3, 1e-2));
  summary["rows"].push_back(num_row("el4_residual", 0.0, rep.boundary.r4, 1e-2));
  finish_summary(summary, dir);
  return summary;
}

EnergyParams table_params(double c0, double b) {
  EnergyParams p;
  p.c0 = c0;
  p.b = b;
  return p;
}

json sequence_row(const std::string& name, const EnergyParams& p, double expected,
                  double (*family)(const EnergyParams&, double), const std::string& witness) {
  json seq = json::array();
  double prev = std::numeric_limits<double>::infinity();
  bool monotone = true;
  double last = 0.0;
  for (double r : {2.0, 4.0, 8.0, 16.0}) {
    last = family(p, r);
    seq.push_back(last);
    monotone = monotone && last < prev;
    prev = last;
  }
  json row = rel_row(name, expected, last, 1e-2);
  row["witness"] = witness;
  row["attained"] = "infimum-only";
  row["sequence"] = seq;
  row["monotone_decreasing"] = monotone;
  row["pass"] = row["pass"].get<bool>() && monotone;
  return row;
}

json discrete_row(const std::string& name, const EnergyParams& p, double expected,
                  const TriMesh& mesh, const std::string& witness) {
  json row = rel_row(name, expected, evaluate_energy(mesh, p).total, 1e-2);
  row["witness"] = witness;
  row["attained"] = "minimum";
  return row;
}

// The eight-row infima table at alpha = beta = a = 1: witness energies against
// the closed-form infima, discrete meshes where the infimum is attained and
// monotone closed-form families where it is only approached.
json reproduce_table(const fs::path& dir) {
  json resolved{{"command", "reproduce"}, {"id", "table"}, {"a", 1.0},
                {"alpha", 1.0},           {"beta", 1.0},   {"revolve", 256}};
  json summary = summary_skeleton("table", resolved);

  EnergyParams nod;
  nod.c0 = 1.0;
  const std::vector<NodoidDomain> domains = enumerate_domains(nod, 513);
  const TriMesh n1 = revolve_domain(domains[0], 256, 256, 6.0);
  const TriMesh n2 = revolve_domain(domains[1], 256, 256, 6.0);
  const TriMesh slice = make_catenoid_slice(1.0, 1.0, 256, 64);
  const TriMesh sphann = make_spherical_annulus(2.0, 1.0, 256, 128);

  json& rows = summary["rows"];
  rows.push_back(discrete_row("(i) c0=1 b=1", table_params(1, 1), 4 * kPi, n1, "inner nodoid domain"));
  rows.push_back(discrete_row("(ii) c0=1 b=0", table_params(1, 0), 8 * kPi, n2, "CMC nodoid domain"));
  rows.push_back(
      discrete_row("(iii) c0=1 b=-1", table_params(1, -1), 4 * kPi, n2, "convex nodoid domain"));
  rows.push_back(sequence_row("(iv) c0=0 b=1", table_params(0, 1), 4 * kPi,
                              +[](const EnergyParams& p, double r) {
                                return catenoid_slice_energy(p, r);
                              },
                              "catenoid slices, growing aspect"));
  rows.push_back(
      discrete_row("(v) c0=0 b=0", table_params(0, 0), 8 * kPi, slice, "catenoid slice"));
  rows.push_back(sequence_row("(vi) c0=0 b=-2", table_params(0, -2), 4 * kPi,
                              +[](const EnergyParams& p, double r) {
                                return spherical_annulus_energy(p, r);
                              },
                              "spherical annuli, growing radius"));
  rows.push_back(discrete_row("(vii) c0=0 b=-1", table_params(0, -1), 8 * kPi, sphann,
                              "spherical annulus"));
  rows.push_back(sequence_row("(viii) c0=0 b=-0.5", table_params(0, -0.5), 8 * kPi,
                              +[](const EnergyParams& p, double r) {
                                return planar_annulus_energy(p, 1.0 - 1.0 / r, 1.0 + 1.0 / r);
                              },
                              "planar annuli, rims closing on the critical circle"));

  // Discrete spot checks of the closed-form families at moderate size.
  json checks = json::array();
  checks.push_back(rel_row("(iv) discrete catenoid aspect 2",
                           catenoid_slice_energy(table_params(0, 1), 2.0),
                           evaluate_energy(make_catenoid_slice(2.0, 1.0, 256, 64),
                                           table_params(0, 1))
                               .total,
                           1e-2));
  checks.push_back(rel_row("(vi) discrete spherical annulus R=2",
                           spherical_annulus_energy(table_params(0, -2), 2.0),
                           evaluate_energy(sphann, table_params(0, -2)).total, 1e-2));
  checks.push_back(rel_row("(viii) discrete planar annulus R=2",
                           planar_annulus_energy(table_params(0, -0.5), 0.5, 1.5),
                           evaluate_energy(make_planar_annulus(0.5, 1.5, 256, 64),
                                           table_params(0, -0.5))
                               .total,
                           1e-2));
  summary["checks"] = checks;

  bool all = finish_summary(summary, dir);
  for (const auto& c : checks) all = all && c["pass"].get<bool>();
  summary["all_pass"] = all;
  write_json(dir / "summary.json", summary);
  return summary;
}

}  // namespace

json run_reproduce(const std::string& id, const fs::path& out_root) {
  const fs::path dir = out_root / id;
  fs::create_directories(dir);
  if (id == "fig1") return reproduce_fig1(dir);
  if (id == "fig2") return reproduce_fig2(dir);
  if (id == "fig3") return reproduce_fig3(dir);
  if (id == "fig4") return reproduce_fig4(dir);
  if (id == "table") return reproduce_table(dir);
  throw eh::validation_error("unknown reproduce id '" + id +
                             "' (expected fig1, fig2, fig3, fig4, or table)");
}

}  // namespace ehtool
