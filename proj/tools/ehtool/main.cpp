#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "common.hpp"
#include "reproduce.hpp"

#include "eh/delaunay.hpp"
#include "eh/discrete_geometry.hpp"
#include "eh/elastica.hpp"
#include "eh/energy.hpp"
#include "eh/errors.hpp"
#include "eh/meshgen.hpp"
#include "eh/plateau.hpp"
#include "eh/sampled_curve.hpp"

namespace {

namespace fs = std::filesystem;
using namespace ehtool;
using namespace eh;

constexpr double kPi = 3.14159265358979323846;

void print_json(const json& j) { std::printf("%s\n", j.dump(2).c_str()); }

json provenance(const json& resolved) {
  return json{{"tool", "ehtool"}, {"version", EHTOOL_VERSION}, {"spec_hash", spec_hash(resolved)}};
}

// Energy coefficients shared by most subcommands. The stored c0 is the raw
// flag value; resolve() applies the convention.
struct ParamFlags {
  double a = 1.0, c0 = 0.0, b = 0.0, alpha = 1.0, beta = 1.0;
  std::string c0_convention = "additive";

  void add(CLI::App* cmd) {
    cmd->add_option("--a", a, "surface bending modulus a > 0");
    cmd->add_option("--c0", c0, "spontaneous curvature, interpreted per --c0-convention");
    cmd->add_option("--b", b, "total-Gaussian-curvature modulus");
    cmd->add_option("--alpha", alpha, "boundary bending modulus alpha > 0");
    cmd->add_option("--beta", beta, "boundary length weight beta >= 0");
    cmd->add_option("--c0-convention", c0_convention,
                    "additive: energy density a (H + c0)^2, c0 used verbatim; "
                    "common: c0 is the common spontaneous curvature, mapped to -c0/2")
        ->check(CLI::IsMember({"additive", "common"}));
  }
  void overlay_from(const json& spec) {
    overlay(spec, "a", a);
    overlay(spec, "c0", c0);
    overlay(spec, "b", b);
    overlay(spec, "alpha", alpha);
    overlay(spec, "beta", beta);
    overlay(spec, "c0_convention", c0_convention);
  }
  EnergyParams resolve() const {
    EnergyParams p;
    p.a = a;
    p.b = b;
    p.alpha = alpha;
    p.beta = beta;
    p.c0 = apply_c0_convention(c0, c0_convention);
    return p;
  }
  json resolved_json() const {
    const EnergyParams p = resolve();
    return json{{"a", p.a}, {"c0", p.c0}, {"b", p.b}, {"alpha", p.alpha}, {"beta", p.beta}};
  }
};

// "annulus (iii): ... - witness" -> case "(iii)" (tag before the first colon
// only; parentheses later in the label belong to formulas, not the tag).
json case_tag(const std::string& label) {
  const size_t colon = label.find(':');
  const std::string head = label.substr(0, colon);
  const size_t open = head.find('('), close = head.find(')');
  if (open == std::string::npos || close == std::string::npos) return nullptr;
  return head.substr(open, close - open + 1);
}

json witness_phrase(const std::string& label) {
  const size_t dash = label.rfind(" - ");
  if (dash == std::string::npos) return nullptr;
  return label.substr(dash + 3);
}

json classification_json(const BoundClassification& c) {
  json out{{"topology", to_string(c.topology)},
           {"e_underline", c.e_underline},
           {"bounded_below", c.bounded_below},
           {"bound", c.bound ? json(*c.bound) : json(nullptr)},
           {"case", case_tag(c.case_label)},
           {"attained", to_string(c.attained)},
           {"witness", witness_phrase(c.case_label)},
           {"label", c.case_label}};
  return out;
}

// ---------------------------------------------------------------- find-curve

struct FindCurveCmd {
  double mu = 0.0, lambda = 1.0;
  int q = 3, p = 1;
  SearchBox box;
  int samples = 80;
  std::string out_dir, out_prefix = "curve", spec_path;
};

int run_find_curve(FindCurveCmd& c) {
  const json spec = load_spec_file(c.spec_path);
  overlay(spec, "mu", c.mu);
  overlay(spec, "lambda", c.lambda);
  overlay(spec, "q", c.q);
  overlay(spec, "p", c.p);
  overlay(spec, "e_min", c.box.e_min);
  overlay(spec, "e_max", c.box.e_max);
  overlay(spec, "d_max", c.box.d_max);
  overlay(spec, "grid", c.box.grid);
  overlay(spec, "samples", c.samples);
  overlay(spec, "out_prefix", c.out_prefix);

  const json resolved{{"command", "find-curve"}, {"mu", c.mu},
                      {"lambda", c.lambda},      {"q", c.q},
                      {"p", c.p},                {"e_min", c.box.e_min},
                      {"e_max", c.box.e_max},    {"d_max", c.box.d_max},
                      {"grid", c.box.grid},      {"samples", c.samples}};

  if (c.q >= 1 && c.p >= 1 && std::gcd(c.q, c.p) == 1 && c.q <= 2 * c.p)
    std::fprintf(stderr,
                 "warning: q = %d <= 2p = %d, the (%d,%d) boundary curve cannot bound an "
                 "embedded disc (Seifert genus >= %d); searching anyway\n",
                 c.q, 2 * c.p, c.q, c.p, genus_bound(c.q, c.p));

  const CurveParams prm(c.mu, c.lambda);
  const FirstIntegrals fi = find_closed_curve(prm, c.q, c.p, c.box);
  const CurvatureProfile prof = curvature_profile(prm, fi, c.samples);
  const SampledCurve curve = reconstruct_curve(prof, c.q);
  const ClosureDefects defects = closure_defects(prof);

  const fs::path dir = resolve_out_dir(c.out_dir);
  const fs::path csv = dir / (c.out_prefix + ".csv");
  const fs::path rep = dir / (c.out_prefix + ".json");
  write_curve_csv(curve, csv.string());

  json report{{"spec", resolved},
              {"provenance", provenance(resolved)},
              {"first_integrals", {{"d", fi.d}, {"e", fi.e}}},
              {"kappa_min", prof.kappa_min},
              {"kappa_max", prof.kappa_max},
              {"period_arclength", prof.period},
              {"curve_length", curve.length()},
              {"delta_z_per_period", defects.delta_z},
              {"delta_theta_per_period", defects.delta_theta},
              {"delta_theta_target", 2 * kPi * c.p / c.q},
              {"closure_gap", curve.closure_gap()},
              {"el_residual", el_residual_curve(curve, prm)},
              {"genus_bound", genus_bound(c.q, c.p)},
              {"files", {csv.string(), rep.string()}}};
  write_json(rep, report);
  print_json(report);
  return 0;
}

// -------------------------------------------------------------- gen-delaunay

struct GenDelaunayCmd {
  ParamFlags params;
  double epsilon = 0.0;
  int samples = 512, profile_rows = 192, azimuth = 192;
  bool classify = false;
  double H = 0.0, flux = 0.0;
  bool u_constant = false;
  std::string out_dir, out_prefix = "sigma", spec_path;
};

int run_gen_delaunay(GenDelaunayCmd& c) {
  const json spec = load_spec_file(c.spec_path);
  c.params.overlay_from(spec);
  overlay(spec, "epsilon", c.epsilon);
  overlay(spec, "samples", c.samples);
  overlay(spec, "profile_rows", c.profile_rows);
  overlay(spec, "azimuth", c.azimuth);
  overlay(spec, "classify", c.classify);
  overlay(spec, "H", c.H);
  overlay(spec, "flux", c.flux);
  overlay(spec, "u_constant", c.u_constant);
  overlay(spec, "out_prefix", c.out_prefix);

  if (c.classify) {
    const json resolved{{"command", "gen-delaunay"},
                        {"mode", "classify"},
                        {"H", c.H},
                        {"flux", c.flux},
                        {"u_constant", c.u_constant}};
    print_json(json{{"spec", resolved},
                    {"provenance", provenance(resolved)},
                    {"kind", to_string(classify_delaunay(c.H, c.flux, c.u_constant))}});
    return 0;
  }

  json resolved{{"command", "gen-delaunay"}, {"mode", "generate"},
                {"params", c.params.resolved_json()}, {"epsilon", c.epsilon},
                {"samples", c.samples},       {"profile_rows", c.profile_rows},
                {"azimuth", c.azimuth},       {"out_prefix", c.out_prefix}};

  const EnergyParams p = c.params.resolve();
  const NodoidDomain dom = sigma_epsilon(p, c.epsilon, c.samples);
  const TriMesh mesh = revolve_domain(dom, c.profile_rows, c.azimuth);

  const fs::path dir = resolve_out_dir(c.out_dir);
  const fs::path obj = dir / (c.out_prefix + ".obj");
  const fs::path csv = dir / (c.out_prefix + "_profile.csv");
  write_obj(mesh, obj.string());
  write_profile_csv(csv.string(), dom.profile);

  json report{{"spec", resolved},
              {"provenance", provenance(resolved)},
              {"kind", to_string(dom.profile.kind)},
              {"H", dom.profile.H},
              {"flux", dom.profile.flux},
              {"flux_residual", dom.profile.flux_residual()},
              {"epsilon", dom.epsilon},
              {"rim_radius", dom.rim_radius},
              {"rim_u", dom.rim_u},
              {"total_curvature_analytic", analytic_total_curvature(dom)},
              {"total_curvature_discrete", compute_surface_moments(mesh).int_k},
              {"energy_analytic", analytic_energy(dom, p)},
              {"energy_discrete", evaluate_energy(mesh, p).total},
              {"gauss_bonnet_residual", gauss_bonnet_residual(mesh)},
              {"vertices", mesh.vertex_count()},
              {"faces", mesh.face_count()},
              {"files", {obj.string(), csv.string()}}};
  write_json(dir / (c.out_prefix + ".json"), report);
  print_json(report);
  return 0;
}

// ------------------------------------------------------------------- domains

struct DomainsCmd {
  ParamFlags params;
  int samples = 513, profile_rows = 256, azimuth = 256;
  std::string out_dir, spec_path;
};

int run_domains(DomainsCmd& c) {
  const json spec = load_spec_file(c.spec_path);
  c.params.overlay_from(spec);
  overlay(spec, "samples", c.samples);
  overlay(spec, "profile_rows", c.profile_rows);
  overlay(spec, "azimuth", c.azimuth);

  const json resolved{{"command", "domains"},
                      {"params", c.params.resolved_json()},
                      {"samples", c.samples},
                      {"profile_rows", c.profile_rows},
                      {"azimuth", c.azimuth}};

  const EnergyParams p = c.params.resolve();
  const fs::path dir = resolve_out_dir(c.out_dir);
  json rows = json::array();
  for (const NodoidDomain& dom : enumerate_domains(p, c.samples)) {
    const std::string label = to_string(dom.label);
    const TriMesh mesh = revolve_domain(dom, c.profile_rows, c.azimuth);
    const fs::path obj = dir / (label + ".obj");
    write_obj(mesh, obj.string());
    write_profile_csv((dir / (label + "_profile.csv")).string(), dom.profile);
    rows.push_back(json{{"label", label},
                        {"path", dom.u_path.description},
                        {"rim_radius", dom.rim_radius},
                        {"flux_residual", dom.profile.flux_residual()},
                        {"total_curvature_analytic", analytic_total_curvature(dom)},
                        {"total_curvature_discrete", compute_surface_moments(mesh).int_k},
                        {"energy_analytic", analytic_energy(dom, p)},
                        {"energy_discrete", evaluate_energy(mesh, p).total},
                        {"gauss_bonnet_residual", gauss_bonnet_residual(mesh)},
                        {"file", obj.string()}});
  }
  json report{{"spec", resolved}, {"provenance", provenance(resolved)}, {"domains", rows}};
  write_json(dir / "domains.json", report);
  print_json(report);
  return 0;
}

// -------------------------------------------------------------------- energy

struct EnergyCmd {
  ParamFlags params;
  std::string mesh_path, out_path, spec_path;
  double known_h = 0.0;
  bool has_known_h = false;
};

int run_energy(EnergyCmd& c) {
  const json spec = load_spec_file(c.spec_path);
  c.params.overlay_from(spec);
  overlay(spec, "mesh", c.mesh_path);
  if (spec.contains("known_h")) {
    c.known_h = spec.at("known_h").get<double>();
    c.has_known_h = true;
  }

  const json resolved{{"command", "energy"},
                      {"params", c.params.resolved_json()},
                      {"mesh", c.mesh_path}};

  const EnergyParams p = c.params.resolve();
  const TriMesh mesh = read_obj(c.mesh_path);
  mesh.validate();

  const EnergyReport er = evaluate_energy(mesh, p);
  const ElBoundaryResiduals br = el_boundary_residuals(mesh, p);
  const std::optional<double> kh =
      c.has_known_h ? std::optional<double>(c.known_h) : std::nullopt;

  const int chi = mesh.euler_characteristic();
  const size_t nloops = mesh.boundary_loops().size();
  std::optional<Topology> topo;
  if (chi == 1 && nloops == 1) topo = Topology::Disc;
  if (chi == 0 && nloops == 2) topo = Topology::Annulus;

  json loops = json::array();
  for (const auto& l : er.loops)
    loops.push_back(json{{"bending", l.bending}, {"length", l.length}});

  json bound = nullptr;
  if (topo && p.c0 >= 0 && p.beta > 0) {
    bound = classification_json(lower_bound(p, *topo));
    if (er.bound_gap) bound["gap"] = *er.bound_gap;
  }

  json report{{"spec", resolved},
              {"provenance", provenance(resolved)},
              {"mesh",
               {{"path", c.mesh_path},
                {"vertices", mesh.vertex_count()},
                {"faces", mesh.face_count()},
                {"euler_characteristic", chi},
                {"boundary_loops", nloops},
                {"topology", topo ? json(to_string(*topo)) : json(nullptr)}}},
              {"terms",
               {{"helfrich", er.helfrich_term},
                {"gauss", er.gauss_term},
                {"boundary_bending", er.boundary_bending},
                {"boundary_length", er.boundary_length_term}}},
              {"loops", loops},
              {"total", er.total},
              {"bound", bound},
              {"residuals",
               {{"el2", br.r2},
                {"el3", br.r3},
                {"el4", br.r4},
                {"rescaling", rescaling_identity_residual(mesh, p, kh)},
                {"gauss_bonnet", gauss_bonnet_residual(mesh)}}}};
  if (!c.out_path.empty()) write_json(c.out_path, report);
  print_json(report);
  return 0;
}

// -------------------------------------------------------------------- bounds

struct BoundsCmd {
  ParamFlags params;
  std::string topology = "disc", spec_path;
};

int run_bounds(BoundsCmd& c) {
  const json spec = load_spec_file(c.spec_path);
  c.params.overlay_from(spec);
  overlay(spec, "topology", c.topology);

  const json resolved{{"command", "bounds"},
                      {"params", c.params.resolved_json()},
                      {"topology", c.topology}};

  Topology topo;
  if (c.topology == "disc")
    topo = Topology::Disc;
  else if (c.topology == "annulus")
    topo = Topology::Annulus;
  else
    throw validation_error("unknown topology '" + c.topology + "' (disc or annulus)");

  json report = classification_json(lower_bound(c.params.resolve(), topo));
  report["spec"] = resolved;
  report["provenance"] = provenance(resolved);
  report["params"] = c.params.resolved_json();
  print_json(report);
  return 0;
}

// ---------------------------------------------------------------------- flow

struct FlowCmd {
  ParamFlags params;
  std::string curve_path, mesh_path;
  double coaxial_radius = 0.0, separation = 1.0;
  int rings = 24, circle_samples = 160, annulus_rows = 20;
  double target_h = 0.0, dt = 1e-3, tol = 1e-3;
  int max_iters = 2000, smooth_every = 0, snapshot_every = 0;
  std::string mode = "semi-implicit";
  bool track_energy = false;
  std::string out_dir, spec_path;
};

TriMesh flow_seed(const FlowCmd& c, json& resolved) {
  int sources = 0;
  sources += !c.curve_path.empty();
  sources += !c.mesh_path.empty();
  sources += c.coaxial_radius > 0;
  if (sources != 1)
    throw validation_error("flow needs exactly one seed: --curve, --mesh, or --coaxial");

  if (!c.curve_path.empty()) {
    resolved["seed"] = {{"curve", c.curve_path}, {"rings", c.rings}};
    return make_disc_from_curve(read_curve_csv(c.curve_path), c.rings);
  }
  if (!c.mesh_path.empty()) {
    resolved["seed"] = {{"mesh", c.mesh_path}};
    TriMesh m = read_obj(c.mesh_path);
    m.fixed_mask = m.boundary_vertex_mask();
    return m;
  }
  resolved["seed"] = {{"coaxial", c.coaxial_radius},
                      {"separation", c.separation},
                      {"circle_samples", c.circle_samples},
                      {"annulus_rows", c.annulus_rows}};
  SampledCurve lo = make_circle(c.coaxial_radius, c.circle_samples);
  SampledCurve hi = lo;
  for (int i = 0; i < lo.sample_count(); ++i) {
    lo.points(2, i) = -0.5 * c.separation;
    hi.points(2, i) = 0.5 * c.separation;
  }
  return make_annulus_between(lo, hi, c.annulus_rows);
}

int run_flow_cmd(FlowCmd& c) {
  const json spec = load_spec_file(c.spec_path);
  c.params.overlay_from(spec);
  overlay(spec, "curve", c.curve_path);
  overlay(spec, "mesh", c.mesh_path);
  overlay(spec, "coaxial", c.coaxial_radius);
  overlay(spec, "separation", c.separation);
  overlay(spec, "rings", c.rings);
  overlay(spec, "circle_samples", c.circle_samples);
  overlay(spec, "annulus_rows", c.annulus_rows);
  overlay(spec, "target_h", c.target_h);
  overlay(spec, "dt", c.dt);
  overlay(spec, "tol", c.tol);
  overlay(spec, "max_iters", c.max_iters);
  overlay(spec, "smooth_every", c.smooth_every);
  overlay(spec, "snapshot_every", c.snapshot_every);
  overlay(spec, "mode", c.mode);
  overlay(spec, "track_energy", c.track_energy);

  json resolved{{"command", "flow"},       {"params", c.params.resolved_json()},
                {"target_h", c.target_h},  {"dt", c.dt},
                {"tol", c.tol},            {"max_iters", c.max_iters},
                {"smooth_every", c.smooth_every}, {"snapshot_every", c.snapshot_every},
                {"mode", c.mode},          {"track_energy", c.track_energy}};

  const EnergyParams p = c.params.resolve();
  TriMesh current = flow_seed(c, resolved);

  FlowConfig cfg;
  cfg.time_step = c.dt;
  cfg.h_tolerance = c.tol;
  cfg.target_H = c.target_h;
  cfg.remesh_interval = c.smooth_every;
  if (c.mode == "explicit")
    cfg.step_mode = StepMode::Explicit;
  else if (c.mode == "semi-implicit")
    cfg.step_mode = StepMode::SemiImplicit;
  else
    throw validation_error("unknown step mode '" + c.mode + "' (explicit or semi-implicit)");
  if (c.track_energy) cfg.energy_params = p;

  const fs::path dir = resolve_out_dir(c.out_dir);
  FlowTrace trace;
  FlowStatus status = FlowStatus::MaxIters;
  int done = 0;
  const int chunk = c.snapshot_every > 0 ? c.snapshot_every : c.max_iters;
  while (done < c.max_iters) {
    FlowConfig step_cfg = cfg;
    step_cfg.max_iters = std::min(chunk, c.max_iters - done);
    FlowResult res = run_flow(current, step_cfg);
    for (FlowTrace::Row row : res.trace.rows) {
      row.iter += done;
      trace.rows.push_back(row);
    }
    done += res.iterations;
    current = std::move(res.mesh);
    status = res.status;
    if (c.snapshot_every > 0) {
      char name[32];
      std::snprintf(name, sizeof name, "iter_%06d.obj", done);
      write_obj(current, (dir / name).string());
    }
    if (status != FlowStatus::MaxIters || res.iterations == 0) break;
  }

  write_obj(current, (dir / "final.obj").string());
  write_flow_trace_csv(trace, (dir / "trace.csv").string());
  const EquilibriumReport eq = verify_equilibrium(current, p);

  json report{{"spec", resolved},
              {"provenance", provenance(resolved)},
              {"status", to_string(status)},
              {"iterations", done},
              {"converged", status == FlowStatus::Converged},
              {"final",
               {{"max_h_error", trace.rows.empty() ? 0.0 : trace.rows.back().max_h_error},
                {"area", trace.rows.empty() ? total_area(current) : trace.rows.back().area},
                {"energy", evaluate_energy(current, p).total}}},
              {"equilibrium",
               {{"r1", eq.r1},
                {"r1_max_abs", eq.r1_max_abs},
                {"r2", eq.boundary.r2},
                {"r3", eq.boundary.r3},
                {"r4", eq.boundary.r4}}},
              {"files", {(dir / "final.obj").string(), (dir / "trace.csv").string()}}};
  write_json(dir / "report.json", report);
  print_json(report);
  return status == FlowStatus::Converged ? 0 : 1;
}

// --------------------------------------------------------------- instability

struct InstabilityCmd {
  ParamFlags params;
  double fd_step = 1e-4;
  bool discrete = false;
  int samples = 513, profile_rows = 128, azimuth = 128;
  double mesh_step = 0.0;  // 0 picks rim_radius / 16
  std::string spec_path;
};

int run_instability(InstabilityCmd& c) {
  const json spec = load_spec_file(c.spec_path);
  c.params.overlay_from(spec);
  overlay(spec, "fd_step", c.fd_step);
  overlay(spec, "discrete", c.discrete);
  overlay(spec, "samples", c.samples);
  overlay(spec, "profile_rows", c.profile_rows);
  overlay(spec, "azimuth", c.azimuth);
  overlay(spec, "mesh_step", c.mesh_step);

  const json resolved{{"command", "instability"}, {"params", c.params.resolved_json()},
                      {"fd_step", c.fd_step},     {"discrete", c.discrete},
                      {"samples", c.samples},     {"profile_rows", c.profile_rows},
                      {"azimuth", c.azimuth},     {"mesh_step", c.mesh_step}};

  const EnergyParams p = c.params.resolve();
  const SecondVariation sv = instability_second_derivative(p, c.fd_step);
  const double r0 = std::sqrt(p.alpha / p.beta);

  json report{{"spec", resolved},
              {"provenance", provenance(resolved)},
              {"rim_radius", r0},
              {"analytic", sv.analytic},
              {"finite_difference", sv.finite_difference},
              {"unstable", sv.analytic < 0}};
  if (sv.analytic != 0)
    report["relative_gap"] = std::abs(sv.finite_difference - sv.analytic) / std::abs(sv.analytic);

  if (c.discrete) {
    // One-sided stencil truncation is ~1.75 (h/r0)^2 relative; rim/16 keeps
    // it under 1%, well clear of the mesh-resolution error floor.
    const double h = c.mesh_step > 0 ? c.mesh_step : r0 / 16;
    double e[3];
    for (int k = 0; k < 3; ++k) {
      const NodoidDomain dom = sigma_epsilon(p, k * h, c.samples);
      e[k] = evaluate_energy(revolve_domain(dom, c.profile_rows, c.azimuth), p).total;
    }
    const double second = (e[0] - 2 * e[1] + e[2]) / (h * h);
    json d{{"step", h}, {"energies", {e[0], e[1], e[2]}}, {"second_difference", second}};
    if (sv.analytic != 0)
      d["relative_gap"] = std::abs(second - sv.analytic) / std::abs(sv.analytic);
    report["discrete"] = d;
  }
  print_json(report);
  return 0;
}

// ----------------------------------------------------------------- reproduce

struct ReproduceCmd {
  std::string id, out_dir, spec_path;
};

int run_reproduce_cmd(ReproduceCmd& c) {
  const json spec = load_spec_file(c.spec_path);
  overlay(spec, "id", c.id);
  const json summary = run_reproduce(c.id, resolve_out_dir(c.out_dir));
  print_json(summary);
  return summary.at("all_pass").get<bool>() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ehtool: equilibrium shapes of elastic membranes with elastic boundary"};
  app.require_subcommand(1);
  int rc = 0;

  FindCurveCmd fc;
  CLI::App* cmd = app.add_subcommand("find-curve",
                                     "closed boundary elastica with (q,p) winding, CSV + report");
  cmd->add_option("--mu", fc.mu, "rest-curvature offset of the rod energy");
  cmd->add_option("--lambda", fc.lambda, "length weight of the rod energy");
  cmd->add_option("--q", fc.q, "curvature periods per closure")->required();
  cmd->add_option("--p", fc.p, "axial winding count");
  cmd->add_option("--e-min", fc.box.e_min, "search box: lower torsional integral");
  cmd->add_option("--e-max", fc.box.e_max, "search box: upper torsional integral");
  cmd->add_option("--d-max", fc.box.d_max, "search box: largest field-strength integral");
  cmd->add_option("--grid", fc.box.grid, "search box: scan resolution");
  cmd->add_option("--samples", fc.samples, "curvature samples per period");
  cmd->add_option("--out-dir", fc.out_dir, "output directory");
  cmd->add_option("--out-prefix", fc.out_prefix, "basename for the CSV/JSON pair");
  cmd->add_option("--spec", fc.spec_path, "JSON spec file; keys override flags");
  cmd->callback([&] { rc = run_find_curve(fc); });

  GenDelaunayCmd gd;
  cmd = app.add_subcommand("gen-delaunay",
                           "rotational CMC annulus with critical rims, or --classify a (H, flux) pair");
  gd.params.add(cmd);
  cmd->add_option("--epsilon", gd.epsilon, "flux deformation away from the critical member");
  cmd->add_option("--samples", gd.samples, "profile samples");
  cmd->add_option("--profile-rows", gd.profile_rows, "mesh rows along the profile");
  cmd->add_option("--azimuth", gd.azimuth, "mesh segments around the axis");
  cmd->add_flag("--classify", gd.classify, "classify (H, flux) instead of generating");
  cmd->add_option("--H", gd.H, "mean curvature for --classify");
  cmd->add_option("--flux", gd.flux, "flux constant for --classify");
  cmd->add_flag("--u-constant", gd.u_constant,
                "flux = 0 degenerate case: pick the cylinder branch");
  cmd->add_option("--out-dir", gd.out_dir, "output directory");
  cmd->add_option("--out-prefix", gd.out_prefix, "basename for OBJ/CSV/JSON");
  cmd->add_option("--spec", gd.spec_path, "JSON spec file; keys override flags");
  cmd->callback([&] { rc = run_gen_delaunay(gd); });

  DomainsCmd dm;
  cmd = app.add_subcommand("domains",
                           "the four critical nodoid domains: meshes, profiles, energies");
  dm.params.add(cmd);
  cmd->add_option("--samples", dm.samples, "profile samples");
  cmd->add_option("--profile-rows", dm.profile_rows, "mesh rows along the profile");
  cmd->add_option("--azimuth", dm.azimuth, "mesh segments around the axis");
  cmd->add_option("--out-dir", dm.out_dir, "output directory");
  cmd->add_option("--spec", dm.spec_path, "JSON spec file; keys override flags");
  cmd->callback([&] { rc = run_domains(dm); });

  EnergyCmd en;
  cmd = app.add_subcommand("energy", "energy report, lower bound, and residuals for an OBJ mesh");
  en.params.add(cmd);
  cmd->add_option("--mesh", en.mesh_path, "input OBJ mesh")
      ->required()
      ->check(CLI::ExistingFile);
  CLI::Option* kh = cmd->add_option("--known-h", en.known_h,
                                    "exact mean curvature, spares the rescaling check the "
                                    "discrete-H bias on CMC meshes");
  cmd->add_option("--out", en.out_path, "also write the report JSON here");
  cmd->add_option("--spec", en.spec_path, "JSON spec file; keys override flags");
  cmd->callback([&] {
    en.has_known_h = kh->count() > 0;
    rc = run_energy(en);
  });

  BoundsCmd bd;
  cmd = app.add_subcommand("bounds", "closed-form energy infimum classification");
  bd.params.add(cmd);
  cmd->add_option("--topology", bd.topology, "disc or annulus")
      ->required()
      ->check(CLI::IsMember({"disc", "annulus"}));
  cmd->add_option("--spec", bd.spec_path, "JSON spec file; keys override flags");
  cmd->callback([&] { rc = run_bounds(bd); });

  FlowCmd fl;
  cmd = app.add_subcommand("flow", "fixed-boundary mean curvature flow toward H = target");
  fl.params.add(cmd);
  cmd->add_option("--curve", fl.curve_path, "seed: boundary curve CSV, spanned by a disc");
  cmd->add_option("--rings", fl.rings, "disc seed rings");
  cmd->add_option("--mesh", fl.mesh_path, "seed: OBJ mesh, boundary held fixed");
  cmd->add_option("--coaxial", fl.coaxial_radius, "seed: two coaxial circles of this radius");
  cmd->add_option("--separation", fl.separation, "axial distance of the coaxial circles");
  cmd->add_option("--circle-samples", fl.circle_samples, "samples per coaxial circle");
  cmd->add_option("--annulus-rows", fl.annulus_rows, "rows of the coaxial seed strip");
  cmd->add_option("--target-h", fl.target_h, "target mean curvature (<= 0 is outward-stable)");
  cmd->add_option("--dt", fl.dt, "time step");
  cmd->add_option("--tol", fl.tol, "stop when max interior |H - target| drops below");
  cmd->add_option("--max-iters", fl.max_iters, "iteration cap");
  cmd->add_option("--mode", fl.mode, "explicit or semi-implicit")
      ->check(CLI::IsMember({"explicit", "semi-implicit"}));
  cmd->add_option("--smooth-every", fl.smooth_every, "tangential smoothing interval; 0 disables");
  cmd->add_option("--snapshot-every", fl.snapshot_every, "write iter_*.obj every k iterations");
  cmd->add_flag("--track-energy", fl.track_energy, "record the energy in every trace row");
  cmd->add_option("--out-dir", fl.out_dir, "output directory");
  cmd->add_option("--spec", fl.spec_path, "JSON spec file; keys override flags");
  cmd->callback([&] { rc = run_flow_cmd(fl); });

  InstabilityCmd in;
  cmd = app.add_subcommand("instability",
                           "second variation of the critical-rim deformation family");
  in.params.add(cmd);
  cmd->add_option("--fd-step", in.fd_step, "step of the closed-form second difference");
  cmd->add_flag("--discrete", in.discrete, "also second-difference discrete mesh energies");
  cmd->add_option("--samples", in.samples, "profile samples for --discrete");
  cmd->add_option("--profile-rows", in.profile_rows, "mesh rows for --discrete");
  cmd->add_option("--azimuth", in.azimuth, "azimuth segments for --discrete");
  cmd->add_option("--mesh-step", in.mesh_step, "deformation step for --discrete; 0 = rim/16");
  cmd->add_option("--spec", in.spec_path, "JSON spec file; keys override flags");
  cmd->callback([&] { rc = run_instability(in); });

  ReproduceCmd rp;
  cmd = app.add_subcommand("reproduce", "scripted pipelines with pass/fail summaries");
  cmd->add_option("id", rp.id, "fig1, fig2, fig3, fig4, or table")->required();
  cmd->add_option("--out-dir", rp.out_dir, "output root; artifacts land in <root>/<id>/");
  cmd->add_option("--spec", rp.spec_path, "JSON spec file; keys override flags");
  cmd->callback([&] { rc = run_reproduce_cmd(rp); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const eh::validation_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const eh::numerical_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return rc;
}
