#pragma once

#include <functional>

#include "emw/vec.hpp"

namespace emw::harness {

using TimeSignal = std::function<cplx(double)>;

// Integral of exp(i omega t) f(t) over the real line. The even and odd parts go to Ooura's cosine and sine
// rules; omega = 0 integrates the even part with exp-sinh.
cplx fourier_transform(const TimeSignal& f, double omega);

struct SpectrumMoments {
  double center;
  double width;
};

// Mean and standard deviation of omega in (0, omega_max) weighted by |f^(omega)|; 8 panels of 20-point Gauss.
SpectrumMoments amplitude_moments(const TimeSignal& f, double omega_max);

// Share of the energy |f^|^2 at omega < 0 on a symmetric grid of 2 count + 1 frequencies.
double negative_frequency_fraction(const TimeSignal& f, double omega_max, int count);

}  // namespace emw::harness
