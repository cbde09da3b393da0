#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "emw/geometry.hpp"
#include "emw/harness/config.hpp"

namespace emw::harness {

// Measurements behind each validation suite. They return numbers, never verdicts; thresholds live with the
// callers (validate and the acceptance binary).

struct IdentityCheck {
  double max_error;
  double seconds;
  std::size_t points;
};

// u.u = 1, |grad p|^2 - |grad q|^2 = 1, grad p . grad q = 0 and the closed-form gradient norms, each scaled by
// |grad p|^2 + |grad q|^2.
IdentityCheck check_frame_identities(const SourceConfig& cfg, std::size_t count, std::uint64_t seed);
// |sigma^2 - (r.r - a.a - 2 i a.r)| / |r.r - a.a - 2 i a.r|
IdentityCheck check_sigma_algebra(const SourceConfig& cfg, std::size_t count, std::uint64_t seed);

struct StraddleCheck {
  std::string cut;
  std::size_t pairs;
  std::size_t failures;  // pairs where sigma did not flip sign
  double worst;          // max |sigma+ + sigma-| / |sigma+ - sigma-|
};

// Flat, upper, lower, smooth and a custom cut; offsets of 1e-7 |a| along the cut normal.
std::vector<StraddleCheck> check_branch_flips(const SourceConfig& cfg, std::size_t pairs_per_cut,
                                              std::uint64_t seed);

struct ConvergenceCheck {
  std::string quantity;      // box_psi, div_F, maxwell_F, lorenz
  int n;                     // Cauchy order of the drive
  std::vector<double> rms;   // aggregate RMS residual per step
  double min_order;          // smallest log2 ratio between successive steps
};

inline const std::vector<double> kConvergenceSteps{1e-2, 5e-3, 2.5e-3};

// Second-order residuals at points at least 0.1 |a| from the cut. With break_branch the field is built with
// the signal on -sigma and the geometry on +sigma, which is not a Maxwell solution.
std::vector<ConvergenceCheck> check_residual_convergence(const SourceConfig& cfg, const BranchCut& cut,
                                                         const std::vector<int>& drives, std::size_t points,
                                                         std::uint64_t seed, bool break_branch = false);

struct OracleCheck {
  double max_deviation;  // |field - curl oracle| / |field|
  ConvergenceCheck lorenz;
};

OracleCheck check_oracle(const SourceConfig& cfg, const BranchCut& cut, int n, std::size_t points, double h,
                         std::uint64_t seed);

// Max relative gap between the closed-form impulse coefficients and the generic C_1 path.
double check_impulse_equivalence(std::size_t count, std::uint64_t seed);

struct CoulombCheck {
  double j0_center;                      // disk charge density at rho = 0, a = 1
  std::size_t samples;
  std::size_t monotone_violations;       // magnetic parts over alpha = a/4, a/8, a/16
  std::vector<double> charge_integrals;  // midpoint disk charge on finer rim meshes
  bool charge_diverges;
};

CoulombCheck check_coulomb();

struct BeamCheck {
  double worst_duration_gap;
  double worst_angle_gap;
  double worst_center_gap;
  double worst_width_gap;
  double helicity_ratio;  // residual at 100 a over residual at 10 a, worst direction
};

// n in {1, 4, 16}, b in {1.01 a, 1.5 a}, beta = 1, far-zone radius 1000 a.
BeamCheck check_beam(unsigned threads);

struct ContinuityCheck {
  double joint_jump;     // across the disk inside an upper spheroid
  double interior_jump;  // interior wavelet across the disk
};

ContinuityCheck check_interior_continuity(const SourceConfig& cfg, std::size_t count, std::uint64_t seed);

// Max relative gap of approximate to exact sources, alpha = 0.01 a, |q| >= 0.2 a, Cauchy(4), random pi and t.
double check_approx_sources(const SourceConfig& cfg, std::size_t count, std::uint64_t seed);

// |d_t j0 + surface div j| on S_alpha at step h, from central differences in (q, phi, t).
double surface_continuity_residual(const ScalarWavelet& w, const Polarization& pol, double alpha, double q,
                                   double phi, double t, double h);

struct SuiteResult {
  std::string name;
  bool passed;
  double measured;
  double threshold;
  std::string relation;  // "<=" or ">="
  std::string detail;
};

struct ValidationOptions {
  std::uint64_t seed = 20240601;
  double tol_scale = 1.0;  // multiplies every upper-bound tolerance
  unsigned threads = 1;
  bool break_branch = false;
};

std::vector<SuiteResult> run_validation(const RunConfig& cfg, const ValidationOptions& opts = {});

// One line per suite: PASS/FAIL name measured relation threshold detail.
std::string format_report(const std::vector<SuiteResult>& results);

}  // namespace emw::harness
