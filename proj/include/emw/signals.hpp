#pragma once

#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "emw/vec.hpp"

namespace emw {

// tau = t - i b
struct ComplexTime {
  double t = 0.0;
  double b = 0.0;

  cplx tau() const { return {t, -b}; }
};

// g and its first two derivatives in tau.
struct SignalDerivs {
  cplx g;
  cplx dg;
  cplx ddg;
};

// Real samples g0(t_k) on a uniform grid.
class SampledSignal {
 public:
  SampledSignal(double t0, double dt, std::vector<double> samples);

  static SampledSignal from_function(const std::function<double(double)>& g0, double t_lo, double t_hi,
                                     std::size_t count);
  // Two columns (t, g0), optional header line; the grid must be uniform.
  static SampledSignal from_csv(const std::filesystem::path& path);

  double t0() const { return t0_; }
  double dt() const { return dt_; }
  const std::vector<double>& samples() const { return samples_; }
  double time(std::size_t k) const { return t0_ + dt_ * static_cast<double>(k); }

 private:
  double t0_;
  double dt_;
  std::vector<double> samples_;
};

class DrivingSignal;

struct SignalTerm {
  cplx coefficient;
  std::shared_ptr<const DrivingSignal> signal;
};

class DrivingSignal {
 public:
  static DrivingSignal cauchy(int n);
  static DrivingSignal sampled(SampledSignal samples);
  static DrivingSignal combination(std::vector<SignalTerm> terms);

  SignalDerivs eval(cplx tau) const;
  SignalDerivs eval(const ComplexTime& ct) const { return eval(ct.tau()); }
  cplx value(cplx tau) const { return eval(tau).g; }

  // Cauchy order when the signal is a pure C_n.
  std::optional<int> cauchy_order() const;
  // Smallest |Im tau| at which eval is trustworthy (zero for closed forms).
  double min_imaginary_time() const;
  std::string describe() const;

  struct Impl;

 private:
  explicit DrivingSignal(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

// C_n(tau) = (n-1)! / (2 pi (i tau)^n) with derivatives.
SignalDerivs cauchy_kernel(int n, cplx tau);

struct SpectralProfile {
  double center_frequency;
  double bandwidth;
};

// Fourier transform of t -> C_n(t - i b); Theta(0) = 1/2.
double spectrum_cauchy(int n, double omega, double b);
SpectralProfile spectral_profile(int n, double b);
double pulse_duration(double theta, double a, double b);
double peak_strength(double theta, int n, double a, double b);
double diffraction_angle(double beta, int n, double a, double b);

// g(tau - sigma) +- g(tau + sigma) and their tau-derivatives.
struct MixedSignals {
  cplx gp, gm;
  cplx dgp, dgm;
  cplx ddgp, ddgm;
};

MixedSignals mixed_signals(const DrivingSignal& sig, cplx sigma, cplx tau);

// g(t - i b) - g(t + i b) for a sampled signal; tends to g0(t) as b -> 0+.
double boundary_value(const DrivingSignal& sig, double t, double b);

struct RecoveryStep {
  double b;
  double value;
  double error;  // value - g0(t)
};

std::vector<RecoveryStep> boundary_recovery(const DrivingSignal& sig, double t, double g0_at_t,
                                            const std::vector<double>& b_values);

}  // namespace emw
