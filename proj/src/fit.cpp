#include "thirdq/fit.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Dense>

#include "thirdq/errors.hpp"

namespace thirdq {

namespace {

struct LineFit {
  double slope;
  double intercept;
  double rms;
};

LineFit least_squares_line(const std::vector<double>& xs, const std::vector<double>& ys) {
  const auto n = static_cast<Eigen::Index>(xs.size());
  Eigen::MatrixXd X(n, 2);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    X(i, 0) = xs[i];
    X(i, 1) = 1.0;
    y(i) = ys[i];
  }
  const Eigen::Vector2d c = X.colPivHouseholderQr().solve(y);
  const double rms = std::sqrt((X * c - y).squaredNorm() / static_cast<double>(n));
  return {c(0), c(1), rms};
}

void check_positive(const std::vector<double>& xs, const std::vector<double>& ys, std::size_t min_points) {
  if (xs.size() != ys.size()) throw InvalidArgument("fit inputs differ in length");
  if (xs.size() < min_points) throw InvalidArgument("fit needs at least " + std::to_string(min_points) + " points");
  for (double y : ys)
    if (!(y > 0.0)) throw InvalidArgument("fit requires positive data");
}

}  // namespace

PowerLawFit fit_power_law(const std::vector<double>& xs, const std::vector<double>& ys) {
  check_positive(xs, ys, 4);
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(xs[i] > 0.0)) throw InvalidArgument("power-law fit requires positive abscissae");
    lx.push_back(std::log(xs[i]));
    ly.push_back(std::log(ys[i]));
  }
  const LineFit f = least_squares_line(lx, ly);
  return {f.slope, std::exp(f.intercept), f.rms};
}

ExponentialFit fit_exponential(const std::vector<double>& xs, const std::vector<double>& ys) {
  check_positive(xs, ys, 4);
  std::vector<double> ly;
  for (double y : ys) ly.push_back(std::log(y));
  const LineFit f = least_squares_line(xs, ly);
  return {-f.slope, std::exp(f.intercept), f.rms};
}

KarevskiFit fit_karevski(const std::vector<double>& lambdas, const std::vector<double>& currents) {
  if (lambdas.size() != currents.size() || lambdas.size() < 5) throw InvalidArgument("Karevski fit needs >= 5 points");
  const auto n = static_cast<Eigen::Index>(lambdas.size());
  auto shape = [&](Eigen::Index i, double b) {
    const double l2 = lambdas[i] * lambdas[i];
    return l2 / (b + l2 * l2);
  };
  auto sse = [&](double a, double b) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double r = a * shape(i, b) - currents[i];
      s += r * r;
    }
    return s;
  };
  // For fixed b the optimal a is linear; scan b on a logarithmic grid.
  auto best_a = [&](double b) {
    double num = 0.0, den = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      num += shape(i, b) * currents[i];
      den += shape(i, b) * shape(i, b);
    }
    return num / den;
  };
  double b = 0.0, a = 0.0, best = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= 800; ++k) {
    const double trial_b = std::pow(10.0, -8.0 + 10.0 * k / 800.0);
    const double trial_a = best_a(trial_b);
    const double s = sse(trial_a, trial_b);
    if (s < best) {
      best = s;
      a = trial_a;
      b = trial_b;
    }
  }
  // Gauss–Newton refinement.
  int it = 0;
  for (; it < 200; ++it) {
    Eigen::MatrixXd J(n, 2);
    Eigen::VectorXd r(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double l2 = lambdas[i] * lambdas[i];
      const double den = b + l2 * l2;
      J(i, 0) = l2 / den;
      J(i, 1) = -a * l2 / (den * den);
      r(i) = currents[i] - a * l2 / den;
    }
    Eigen::Vector2d step = J.colPivHouseholderQr().solve(r);
    double scale = 1.0;
    while (scale > 1e-6 && (b + scale * step(1) <= 0.0 || sse(a + scale * step(0), b + scale * step(1)) > sse(a, b)))
      scale *= 0.5;
    if (scale <= 1e-6) break;
    a += scale * step(0);
    b += scale * step(1);
    if (std::abs(scale * step(0)) <= 1e-14 * std::abs(a) && std::abs(scale * step(1)) <= 1e-14 * std::abs(b)) break;
  }
  if (it >= 200) throw NoConvergence("Gauss-Newton did not converge");
  return {a, b, std::sqrt(sse(a, b) / static_cast<double>(n)), it};
}

FitWindow decay_fit_window(const std::vector<double>& ys, double noise_floor, double drop_front, double drop_back) {
  std::size_t usable = 0;
  while (usable < ys.size() && std::abs(ys[usable]) >= noise_floor) ++usable;
  const auto front = static_cast<std::size_t>(std::floor(drop_front * static_cast<double>(usable)));
  const auto back = static_cast<std::size_t>(std::floor(drop_back * static_cast<double>(usable)));
  return {front, usable - back};
}

}  // namespace thirdq
