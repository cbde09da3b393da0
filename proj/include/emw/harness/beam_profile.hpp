#pragma once

#include <functional>
#include <vector>

#include "emw/geometry.hpp"
#include "emw/harness/config.hpp"
#include "emw/harness/output.hpp"

namespace emw::harness {

struct PulseMeasurement {
  double peak_time;
  double peak;
  double duration;  // half-width at the 2^(-n/2) level
};

// Peak and half-width of a single-humped amplitude; the peak is searched in [lo, hi].
PulseMeasurement measure_pulse(const std::function<double(double)>& amplitude, int n, double lo, double hi);

// |g(tau - sigma)| over time at the far-zone point of polar angle theta.
struct FarZoneProbe {
  SourceConfig cfg;
  int n;
  double radius;  // in units of |a|

  Vec3 point(double theta) const;
  double amplitude(double theta, double t) const;
  PulseMeasurement measure(double theta) const;
};

// Angle where the measured peak falls to exp(-beta) of its on-axis value; NaN if it never does.
double measured_diffraction_angle(const FarZoneProbe& probe, double beta);

struct BeamProfile {
  Table angles{{"n", "theta", "T_pred", "T_meas", "T_gap", "M_pred", "M_meas", "M_gap"}};
  Table orders{{"n", "theta_beta_pred", "theta_beta_meas", "theta_beta_gap", "center_pred", "center_meas",
                "center_gap", "width_pred", "width_meas", "width_gap"}};
};

// Predicted and measured beam quantities for every order in the spec; spectral moments are measured from
// the numeric Fourier transform of the drive t -> C_n(t - i b).
BeamProfile beam_profile(const SourceConfig& cfg, const BeamSpec& spec, unsigned threads = 1);

}  // namespace emw::harness
