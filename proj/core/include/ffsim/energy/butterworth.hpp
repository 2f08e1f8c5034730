#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

#include "ffsim/energy/trace.hpp"

namespace ffsim::energy {

/// Direct-form IIR coefficients, a[0] == 1.
struct IirCoeffs {
  std::vector<double> b;  // feedforward, length order+1
  std::vector<double> a;  // feedback, length order+1

  std::size_t order() const { return a.size() - 1; }
};

class FilterDomainError : public std::invalid_argument {
public:
  explicit FilterDomainError(const std::string& what)
      : std::invalid_argument(what) {}
};

/// Butterworth low-pass via bilinear transform of the analog prototype with
/// prewarped cutoff. DC gain is exactly sum(b)/sum(a) == 1 up to rounding;
/// all poles lie strictly inside the unit circle for 0 < fc < fs/2.
IirCoeffs butterworth_lowpass(int order, double fc_hz, double fs_hz);

/// Magnitude of the frequency response at f_hz, evaluated directly from the
/// difference-equation coefficients (independent of any filtering code).
double magnitude_response(const IirCoeffs& c, double f_hz, double fs_hz);

/// Largest pole magnitude of the denominator polynomial (stability check).
double max_pole_radius(const IirCoeffs& c);

/// Direct-form difference equation with zero initial state; output length
/// equals input length.
std::vector<double> filter_signal(const IirCoeffs& c,
                                  const std::vector<double>& x);

CurrentTrace apply_filter(const IirCoeffs& c, const CurrentTrace& x);

}  // namespace ffsim::energy
