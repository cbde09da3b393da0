// One line per acceptance criterion; exit status is nonzero if any fails.
#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "emw/harness/beam_profile.hpp"
#include "emw/harness/config.hpp"
#include "emw/harness/output.hpp"
#include "emw/harness/sampling.hpp"
#include "emw/harness/validation.hpp"

using namespace emw;
using namespace emw::harness;

namespace {

int failures = 0;

void line(int id, bool ok, const std::string& what) {
  if (!ok) ++failures;
  std::printf("criterion %2d %s  %s\n", id, ok ? "PASS" : "FAIL", what.c_str());
  std::fflush(stdout);
}

std::string f(const char* fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

double since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main() {
  const RunConfig run = default_config();
  const SourceConfig cfg = run.source();
  const std::uint64_t seed = 7;

  {
    const IdentityCheck c = check_frame_identities(cfg, 1'000'000, seed);
    line(1, c.max_error <= 1e-10 && c.seconds < 10.0,
         "frame identities max " + f("%.3e", c.max_error) + " <= 1e-10, " + f("%.2f", c.seconds) + " s < 10 s");
  }
  {
    const IdentityCheck s = check_sigma_algebra(cfg, 1'000'000, seed);
    std::size_t bad = 0, pairs = 0;
    double worst = 0.0;
    for (const StraddleCheck& c : check_branch_flips(cfg, 1000, seed)) {
      bad += c.failures;
      pairs += c.pairs;
      worst = std::max(worst, c.worst);
    }
    line(2, s.max_error <= 1e-12 && bad == 0,
         "sigma^2 max " + f("%.3e", s.max_error) + " <= 1e-12; straddle flips failed " + std::to_string(bad) + "/" +
             std::to_string(pairs) + " over 5 cut kinds (worst " + f("%.2e", worst) + ")");
  }
  {
    double worst = 1e300;
    for (const BranchCut& cut : {BranchCut::flat_disk(), BranchCut::upper_spheroid(0.1)}) {
      for (const ConvergenceCheck& c : check_residual_convergence(cfg, cut, {1, 4}, 100, seed, false)) {
        worst = std::min(worst, c.min_order);
      }
    }
    line(3, worst >= 1.9, "min order of box Psi, div F, Maxwell curl over h = {1e-2, 5e-3, 2.5e-3}: " +
                              f("%.4f", worst) + " >= 1.9");
  }
  {
    double dev = 0.0, order = 1e300;
    for (int n : {1, 4}) {
      const OracleCheck c = check_oracle(cfg, run.cut(), n, 100, 1e-4, seed);
      dev = std::max(dev, c.max_deviation);
      order = std::min(order, c.lorenz.min_order);
    }
    line(4, dev <= 1e-5 && order >= 1.9,
         "curl-curl oracle deviation " + f("%.3e", dev) + " <= 1e-5; Lorenz order " + f("%.4f", order) + " >= 1.9");
  }
  {
    const double e = check_impulse_equivalence(10000, seed);
    line(5, e <= 1e-11, "closed-form tilde L/M/N vs generic " + f("%.3e", e) + " <= 1e-11");
  }
  {
    const CoulombCheck c = check_coulomb();
    const bool exact = c.j0_center == -1.0 / (2.0 * 3.14159265358979323846);
    line(6, exact && c.monotone_violations == 0 && c.charge_diverges,
         "j0(0) = " + f("%.17g", c.j0_center) + (exact ? " exact" : " inexact") + "; monotone violations " +
             std::to_string(c.monotone_violations) + "/" + std::to_string(c.samples) + "; rim charge " +
             (c.charge_diverges ? "grows" : "does not grow") + " (" + f("%.4g", c.charge_integrals.back()) + ")");
  }
  {
    const BeamCheck b = check_beam(1);
    const bool ok = b.worst_duration_gap <= 0.05 && b.worst_angle_gap <= 0.10 && b.worst_center_gap <= 0.02 &&
                    b.worst_width_gap <= 0.02 && b.helicity_ratio <= 0.15;
    line(7, ok, "T gap " + f("%.2e", b.worst_duration_gap) + " <= 0.05; theta_beta gap " +
                    f("%.2e", b.worst_angle_gap) + " <= 0.1; center " + f("%.2e", b.worst_center_gap) +
                    ", width " + f("%.2e", b.worst_width_gap) + " <= 0.02; helicity ratio " +
                    f("%.4f", b.helicity_ratio) + " <= 0.15");
  }
  {
    const ContinuityCheck c = check_interior_continuity(cfg, 1000, seed);
    line(8, c.joint_jump <= 1e-8 && c.interior_jump <= 1e-8,
         "joint field jump " + f("%.3e", c.joint_jump) + ", interior Psi jump " + f("%.3e", c.interior_jump) +
             " <= 1e-8");
  }
  {
    const double g = check_approx_sources(cfg, 1000, seed);
    line(9, g <= 0.10, "approximate vs exact sources worst " + f("%.4f", g) + " <= 0.10");
  }
  {
    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<SuiteResult> results = run_validation(run, ValidationOptions{});
    const double secs = since(t0);
    std::size_t failed = 0;
    for (const SuiteResult& r : results) failed += r.passed ? 0 : 1;

    RunConfig grid = run;
    grid.x = {-2.0, 2.0, 21};
    grid.y = {-1.0, 1.0, 5};
    grid.z = {-1.0, 4.0, 26};
    grid.t = {-0.5, 1.5, 5};
    RunConfig surf = run;
    surf.surface.alpha = 0.05;
    surf.surface.q = {-0.9, 0.9, 19};
    surf.surface.t = {-1.0, 1.0, 9};
    bool same = to_csv(sample_field(grid, {1, kernels::Isa::Scalar})) ==
                to_csv(sample_field(grid, {4, kernels::default_isa()}));
    same = same && to_csv(sample_sources(surf, {1})) == to_csv(sample_sources(surf, {4}));
    same = same && to_csv(sample_field(grid, {3})) == to_csv(sample_field(grid, {3}));
    line(10, secs < 60.0 && failed == 0 && same,
         "validate " + std::to_string(results.size()) + " suites, " + std::to_string(failed) + " failed, " +
             f("%.2f", secs) + " s < 60 s; serial vs parallel output " + (same ? "byte-identical" : "DIFFERS"));
  }
  std::printf("%d failed\n", failures);
  return failures == 0 ? 0 : 1;
}
