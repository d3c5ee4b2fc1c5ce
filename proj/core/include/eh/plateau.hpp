#pragma once

#include <optional>
#include <string>
#include <vector>

#include "eh/energy.hpp"
#include "eh/params.hpp"
#include "eh/trimesh.hpp"

namespace eh {

enum class StepMode { Explicit, SemiImplicit };

// Fixed-boundary mean curvature flow toward H = target_H. Explicit mode steps
// x += dt (Hvec - target_H n); SemiImplicit treats the Laplacian part of Hvec
// implicitly and is stable for much larger steps.
struct FlowConfig {
  double time_step = 1e-3;
  int max_iters = 2000;
  double h_tolerance = 1e-3;  // stop when max interior |H - target_H| drops below
  double target_H = 0.0;      // <= 0 with the outward-normal sign convention
  int remesh_interval = 0;    // tangential smoothing every k steps; 0 disables
  StepMode step_mode = StepMode::SemiImplicit;
  // When set, each trace row also records the full energy of the current mesh.
  std::optional<EnergyParams> energy_params;

  void validate() const;  // throws validation_error
};

struct FlowTrace {
  struct Row {
    int iter = 0;
    double max_h_error = 0;      // max interior |H - target_H| before the step
    double max_displacement = 0; // max vertex move of the step
    double area = 0;
    double energy = 0;  // NaN unless FlowConfig::energy_params was set
  };
  std::vector<Row> rows;
};

enum class FlowStatus { Converged, MaxIters, Diverged };
const char* to_string(FlowStatus s);

struct FlowResult {
  TriMesh mesh;
  FlowTrace trace;
  FlowStatus status = FlowStatus::MaxIters;
  int iterations = 0;
};

// Largest admissible explicit step for this mesh: 0.4 * (min edge length)^2.
// Explicit configs with a larger time_step are rejected by run_flow.
double explicit_stability_bound(const TriMesh& mesh);

// Relaxes the interior of `mesh` toward constant mean curvature target_H while
// the boundary vertices stay bit-identical. Requires fixed_mask to mark
// exactly the boundary. Stops on h_tolerance, max_iters, or divergence
// (max displacement growing over 20 consecutive steps); the partial trace is
// returned in every case.
FlowResult run_flow(const TriMesh& mesh, const FlowConfig& config);

// Residuals of the full equilibrium system on a converged mesh: the interior
// condition
//   r1:  lap H + 2 (H + c0) (H (H - c0) - K) = 0
// in max norm over vertices at graph distance >= 2 from the boundary (closer
// rows lack a two-sided H stencil), normalized like the boundary residuals,
// plus the three boundary conditions from el_boundary_residuals.
struct EquilibriumReport {
  double r1 = 0;
  double r1_max_abs = 0;  // unnormalized interior max
  ElBoundaryResiduals boundary;
};

EquilibriumReport verify_equilibrium(const TriMesh& mesh, const EnergyParams& params);

// CSV rows: iter,maxH,maxdisp,area[,energy].
void write_flow_trace_csv(const FlowTrace& trace, const std::string& path);

}  // namespace eh
