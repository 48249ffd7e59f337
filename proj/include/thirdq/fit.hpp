#pragma once

#include <cstddef>
#include <vector>

namespace thirdq {

// y ≈ prefactor · x^exponent; residual is the RMS misfit in log space.
struct PowerLawFit {
  double exponent = 0.0;
  double prefactor = 0.0;
  double residual = 0.0;
};

// y ≈ prefactor · e^{−rate·x}.
struct ExponentialFit {
  double rate = 0.0;
  double prefactor = 0.0;
  double residual = 0.0;
};

// Q ≈ a λ² / (b + λ⁴); residual is the RMS absolute misfit.
struct KarevskiFit {
  double a = 0.0;
  double b = 0.0;
  double residual = 0.0;
  int iterations = 0;
};

PowerLawFit fit_power_law(const std::vector<double>& xs, const std::vector<double>& ys);
ExponentialFit fit_exponential(const std::vector<double>& xs, const std::vector<double>& ys);
KarevskiFit fit_karevski(const std::vector<double>& lambdas, const std::vector<double>& currents);

struct FitWindow {
  std::size_t begin = 0;
  std::size_t end = 0;  // one past the last point used
};

// Keeps the leading run of points with |y| ≥ noise_floor, then drops the first
// drop_front and last drop_back fractions of that run.
FitWindow decay_fit_window(const std::vector<double>& ys, double noise_floor = 1e-20, double drop_front = 0.2,
                           double drop_back = 0.1);

}  // namespace thirdq
