#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "emw/em_fields.hpp"
#include "emw/geometry.hpp"
#include "emw/scalar_wavelet.hpp"
#include "emw/signals.hpp"

namespace emw::harness {

// lo, hi, count; a single point needs lo == hi.
struct GridAxis {
  double lo = 0.0;
  double hi = 0.0;
  int count = 1;

  std::vector<double> values() const;
};

enum class Quantity { Psi, Field };
enum class SourceMode { Exact, Approx };

struct SignalSpec {
  std::string kind = "cauchy";  // cauchy | csv
  int n = 1;
  std::filesystem::path csv;
};

struct SurfaceSpec {
  double alpha = 0.05;
  GridAxis q{0.2, 1.0, 9};
  GridAxis phi{0.0, 0.0, 1};
  GridAxis t{0.0, 0.0, 1};
  SourceMode mode = SourceMode::Exact;
  // Empty: per-mode default. "auto" in the file picks 1/k at the drive's center frequency.
  std::optional<double> q_min;
  bool q_min_auto = false;
  double mu = 1.0;
  double nu = 1.0;
  int bandpass_order = 1;  // impulse-response: j^(n) from the impulse response
};

struct BeamSpec {
  std::vector<int> orders{1, 2, 4, 8};
  double beta = 1.0;
  double radius = 1000.0;  // in units of a
  GridAxis theta{0.0, 1.2, 13};
};

struct Tolerances {
  double h = 1e-3;        // stencil step in units of a
  double tol_cut = 1e-9;  // on-cut tolerance in units of a
};

struct RunConfig {
  Vec3 a{0.0, 0.0, 1.0};
  double b = 1.5;
  double c = 1.0;

  std::string cut_kind = "flat";  // flat | upper | lower | smooth
  double alpha = 0.1;
  double epsilon = 0.01;

  std::optional<SignalSpec> signal;
  CVec3 pi{cplx(1.0), cplx(0.0), cplx(0.0)};
  bool keep_parallel = false;

  GridAxis x{-2.0, 2.0, 21};
  GridAxis y{0.0, 0.0, 1};
  GridAxis z{-1.0, 4.0, 26};
  GridAxis t{0.0, 0.0, 1};
  Quantity quantity = Quantity::Field;

  SurfaceSpec surface;
  BeamSpec beam;
  Tolerances tol;

  SourceConfig source() const;
  BranchCut cut() const;
  DrivingSignal driving_signal() const;
  ScalarWavelet wavelet() const;
  Polarization polarization() const;
  // Resolved rim band for the surface sweep.
  double surface_q_min() const;
};

// Built-in configuration used when no file is given: Cauchy(4), flat disk.
RunConfig default_config();

// INI text; relative csv paths resolve against base_dir. Throws ConfigError.
RunConfig parse_config(std::string_view text, const std::filesystem::path& base_dir = {});
RunConfig load_config(const std::filesystem::path& path);

// Cross-field checks (|b| > |a|, positive tolerances, grid shapes, signal present).
void validate_config(const RunConfig& cfg);

}  // namespace emw::harness
