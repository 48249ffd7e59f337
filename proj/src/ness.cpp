#include "thirdq/ness.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <string>

#include <Eigen/Eigenvalues>

#include "thirdq/errors.hpp"
#include "thirdq/linalg.hpp"

namespace thirdq {

namespace {

void add_pair(CMatrix& P, int a, int b, cplx c) {
  P(a, b) += c / 2.0;
  P(b, a) -= c / 2.0;
}

// Ĥ_m on its four Majoranas w_{2m}..w_{2m+3} (0-based), field split evenly between the two sites.
CMatrix bond_density(const ChainParams& params) {
  const double g = params.gamma;
  const double h = params.h;
  CMatrix P = CMatrix::Zero(4, 4);
  add_pair(P, 1, 2, -kI * (1.0 + g) / 2.0);
  add_pair(P, 0, 3, kI * (1.0 - g) / 2.0);
  add_pair(P, 0, 1, -kI * h / 2.0);
  add_pair(P, 2, 3, -kI * h / 2.0);
  return P;
}

// i·commutator(Ĥ_m, Ĥ_{m+1}) on the six Majoranas w_{2m}..w_{2m+5}.
CMatrix bond_current(const ChainParams& params) {
  const CMatrix local = bond_density(params);
  CMatrix a = CMatrix::Zero(6, 6), b = CMatrix::Zero(6, 6);
  a.topLeftCorner(4, 4) = local;
  b.bottomRightCorner(4, 4) = local;
  return kI * commutator_quadratic(a, b);
}

// Σ_ab P_ab T_{o+a, o+b}.
cplx bilinear_block(const CMatrix& P, const CMatrix& T, Eigen::Index offset) {
  return (P.array() * T.block(offset, offset, P.rows(), P.cols()).array()).sum();
}

// Gauss–Kronrod 7/15 abscissae and weights on [−1, 1].
constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                            0.207784955007898467600689403773245, 0.0};
constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a;
  double b;
  CMatrix value;
  double error;
  bool operator<(const Panel& other) const { return error < other.error; }
};

}  // namespace

TwoPointMatrix TwoPointMatrix::from_T(CMatrix T) {
  const Eigen::Index N = T.rows();
  RMatrix B = (-kI * (T - CMatrix::Identity(N, N))).real();
  return {std::move(T), std::move(B)};
}

TwoPointMatrix ness_two_point(const NormalModes& modes) {
  const Eigen::Index rapidity_count = modes.rapidities.size();
  const double min_re = modes.rapidities.real().minCoeff();
  if (min_re <= 1e-10) throw NonUniqueNESS("min Re beta = " + std::to_string(min_re));
  const CMatrix& V = modes.V;
  // T_jk = 2 Σ_m V(2m+1, 2j) V(2m, 2k), 0-based.
  CMatrix plus_rows(rapidity_count, rapidity_count), minus_rows(rapidity_count, rapidity_count);
  for (Eigen::Index m = 0; m < rapidity_count; ++m)
    for (Eigen::Index j = 0; j < rapidity_count; ++j) {
      plus_rows(m, j) = V(2 * m, 2 * j);
      minus_rows(m, j) = V(2 * m + 1, 2 * j);
    }
  return TwoPointMatrix::from_T(2.0 * minus_rows.transpose() * plus_rows);
}

GreenResult ness_two_point_green(const StructureMatrix& structure, const GreenQuadrature& quadrature) {
  const CMatrix& A = structure.A;
  const Eigen::Index N = A.rows();
  const Eigen::Index half = N / 2;
  const double radius = linalg::spectral_norm(A);
  const double omega_max = quadrature.omega_max > 0.0 ? quadrature.omega_max : 1e3 * radius;
  if (!(omega_max > radius)) throw InvalidArgument("quadrature cutoff must exceed the spectral radius bound");

  // G(ω) + G(−ω) = 2A (A² + ω²)⁻¹; only odd rows and columns are needed.
  const CMatrix A2 = A * A;
  CMatrix rhs(N, half);
  for (Eigen::Index k = 0; k < half; ++k) rhs.col(k) = 2.0 * A.col(2 * k);
  int evaluations = 0;
  auto integrand = [&](double w) {
    CMatrix shifted = A2;
    shifted.diagonal().array() += w * w;
    const CMatrix X = shifted.partialPivLu().solve(rhs);
    CMatrix out(half, half);
    for (Eigen::Index j = 0; j < half; ++j) out.row(j) = X.row(2 * j);
    ++evaluations;
    return out;
  };
  auto integrate_panel = [&](double a, double b) {
    const double c = 0.5 * (a + b), r = 0.5 * (b - a);
    const CMatrix fc = integrand(c);
    CMatrix kron = kWgk[7] * fc;
    CMatrix gauss = kWg[3] * fc;
    for (int i = 0; i < 7; ++i) {
      const CMatrix f = integrand(c - r * kXgk[i]) + integrand(c + r * kXgk[i]);
      kron += kWgk[i] * f;
      if (i % 2 == 1) gauss += kWg[i / 2] * f;
    }
    kron *= r;
    gauss *= r;
    return Panel{a, b, kron, linalg::max_abs(kron - gauss)};
  };

  std::vector<double> breaks;
  const double inner = 2.0 * radius;
  for (int i = 0; i <= 64; ++i) breaks.push_back(inner * i / 64.0);
  for (double x = 4.0 * inner; x < omega_max; x *= 4.0) breaks.push_back(x);
  breaks.push_back(omega_max);

  std::priority_queue<Panel> panels;
  double total_error = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    Panel p = integrate_panel(breaks[i], breaks[i + 1]);
    total_error += p.error;
    panels.push(std::move(p));
  }
  const double target = quadrature.tolerance * std::numbers::pi;
  while (total_error > target && evaluations < quadrature.max_evaluations) {
    Panel worst = panels.top();
    panels.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    Panel left = integrate_panel(worst.a, mid);
    Panel right = integrate_panel(mid, worst.b);
    total_error += left.error + right.error - worst.error;
    panels.push(std::move(left));
    panels.push(std::move(right));
  }
  CMatrix integral = CMatrix::Zero(half, half);
  total_error = 0.0;
  while (!panels.empty()) {
    integral += panels.top().value;
    total_error += panels.top().error;
    panels.pop();
  }
  // ∫_Ω^∞ 2A(A² + ω²)⁻¹ dω = Σ_k (−1)^k 2A^{2k+1} / ((2k+1) Ω^{2k+1}).
  CMatrix power = A;
  CMatrix tail_full = CMatrix::Zero(N, N);
  for (int k = 0; k < 4; ++k) {
    const double sign = k % 2 == 0 ? 1.0 : -1.0;
    tail_full += sign * 2.0 * power / ((2 * k + 1) * std::pow(omega_max, 2 * k + 1));
    power = power * A2;
  }
  for (Eigen::Index j = 0; j < half; ++j)
    for (Eigen::Index k = 0; k < half; ++k) integral(j, k) += tail_full(2 * j, 2 * k);

  const double error = total_error / std::numbers::pi;
  if (error > quadrature.tolerance)
    throw QuadratureError("estimated error " + std::to_string(error) + " exceeds tolerance after " +
                          std::to_string(evaluations) + " evaluations");
  // The subtracted asymptote −1/(iω) integrates to the identity.
  CMatrix T = -integral / std::numbers::pi;
  T.diagonal().array() += 1.0;
  return {TwoPointMatrix::from_T(std::move(T)), error, evaluations};
}

cplx quadratic_expectation(const TwoPointMatrix& two_point, const CMatrix& P) {
  if (P.rows() != two_point.T.rows() || P.cols() != two_point.T.cols())
    throw DimensionMismatch("coefficient matrix must be 2n×2n");
  if (linalg::max_abs(P + P.transpose()) > 1e-12 * std::max(1.0, linalg::max_abs(P)))
    throw InvalidArgument("coefficient matrix must be antisymmetric");
  return (P.array() * two_point.T.array()).sum();
}

CMatrix commutator_quadratic(const CMatrix& P, const CMatrix& R) { return 4.0 * (P * R - R * P); }

CMatrix sigma_z_matrix(int site, int n) {
  CMatrix P = CMatrix::Zero(2 * n, 2 * n);
  add_pair(P, 2 * site, 2 * site + 1, -kI);
  return P;
}

std::vector<CMatrix> energy_density_matrices(const ChainParams& params) {
  const int n = params.n;
  const CMatrix local = bond_density(params);
  std::vector<CMatrix> out;
  for (int m = 0; m + 1 < n; ++m) {
    CMatrix P = CMatrix::Zero(2 * n, 2 * n);
    P.block(2 * m, 2 * m, 4, 4) = local;
    out.push_back(std::move(P));
  }
  return out;
}

std::vector<CMatrix> heat_current_matrices(const ChainParams& params) {
  const int n = params.n;
  const CMatrix local = bond_current(params);
  std::vector<CMatrix> out;
  for (int m = 0; m + 2 < n; ++m) {
    CMatrix P = CMatrix::Zero(2 * n, 2 * n);
    P.block(2 * m, 2 * m, 6, 6) = local;
    out.push_back(std::move(P));
  }
  return out;
}

std::vector<double> heat_current_profile(const TwoPointMatrix& two_point, const ChainParams& params) {
  const CMatrix local = bond_current(params);
  std::vector<double> out;
  for (int m = 0; m + 2 < params.n; ++m) out.push_back(bilinear_block(local, two_point.T, 2 * m).real());
  return out;
}

std::vector<double> energy_profile(const TwoPointMatrix& two_point, const ChainParams& params) {
  const CMatrix local = bond_density(params);
  std::vector<double> out;
  for (int m = 0; m + 1 < params.n; ++m) out.push_back(bilinear_block(local, two_point.T, 2 * m).real());
  return out;
}

std::vector<double> magnetization_profile(const TwoPointMatrix& two_point) {
  std::vector<double> out;
  for (int m = 0; m < two_point.modes(); ++m) out.push_back(two_point.B(2 * m, 2 * m + 1));
  return out;
}

double spin_spin_correlator(const TwoPointMatrix& two_point, int l, int m) {
  const CMatrix& T = two_point.T;
  const cplx c = T(2 * l, 2 * m) * T(2 * l + 1, 2 * m + 1) - T(2 * l, 2 * m + 1) * T(2 * l + 1, 2 * m);
  return c.real();
}

RMatrix spin_correlation_matrix(const TwoPointMatrix& two_point) {
  const int n = two_point.modes();
  RMatrix C(n, n);
  for (int l = 0; l < n; ++l)
    for (int m = 0; m < n; ++m) C(l, m) = spin_spin_correlator(two_point, l, m);
  return C;
}

double residual_correlator(const RMatrix& C) {
  const auto n = C.rows();
  double sum = 0.0;
  long count = 0;
  for (Eigen::Index l = 0; l < n; ++l)
    for (Eigen::Index m = 0; m < n; ++m)
      if (2 * std::abs(l - m) > n) {
        sum += std::abs(C(l, m));
        ++count;
      }
  if (count == 0) throw InvalidArgument("residual correlator needs pairs farther than n/2 apart");
  return sum / static_cast<double>(count);
}

std::vector<double> correlation_decay(const RMatrix& C) {
  const auto n = C.rows();
  std::vector<double> out;
  for (Eigen::Index r = 0; r < n; ++r) {
    double sum = 0.0;
    for (Eigen::Index i = 0; i + r < n; ++i) sum += C(i, i + r);
    out.push_back(sum / static_cast<double>(n - r));
  }
  return out;
}

double binary_entropy(double x) {
  auto term = [](double p) { return p > 0.0 ? -p * std::log2(p) : 0.0; };
  return term(x) + term(1.0 - x);
}

BlockEntropy block_entropy(const TwoPointMatrix& two_point, const std::vector<int>& sites) {
  const int n = two_point.modes();
  const auto k = static_cast<Eigen::Index>(sites.size());
  std::vector<int> idx;
  for (int s : sites) {
    if (s < 0 || s >= n) throw InvalidArgument("block site out of range");
    idx.push_back(2 * s);
    idx.push_back(2 * s + 1);
  }
  CMatrix sub(2 * k, 2 * k);
  for (Eigen::Index a = 0; a < 2 * k; ++a)
    for (Eigen::Index b = 0; b < 2 * k; ++b) sub(a, b) = kI * two_point.B(idx[a], idx[b]);
  // i·B is Hermitian with eigenvalues ±ν_j.
  Eigen::SelfAdjointEigenSolver<CMatrix> es(sub, Eigen::EigenvaluesOnly);
  const RVector nu = es.eigenvalues().cwiseAbs();
  std::vector<double> sorted(nu.data(), nu.data() + nu.size());
  std::sort(sorted.begin(), sorted.end());
  BlockEntropy out;
  // Each ν appears twice; take every other value.
  for (std::size_t i = 0; i < sorted.size(); i += 2) {
    const double v = 0.5 * (sorted[i] + sorted[i + 1]);
    out.positivity_excess = std::max(out.positivity_excess, v - 1.0);
    out.entropy += binary_entropy((1.0 + std::min(v, 1.0)) / 2.0);
  }
  return out;
}

MutualInformation quantum_mutual_information(const TwoPointMatrix& two_point) {
  const int n = two_point.modes();
  if (n % 2 != 0) throw InvalidArgument("mutual information needs an even number of sites");
  std::vector<int> left, right, all;
  for (int s = 0; s < n; ++s) {
    (s < n / 2 ? left : right).push_back(s);
    all.push_back(s);
  }
  const BlockEntropy l = block_entropy(two_point, left);
  const BlockEntropy r = block_entropy(two_point, right);
  const BlockEntropy t = block_entropy(two_point, all);
  return {l.entropy + r.entropy - t.entropy, l.entropy, r.entropy, t.entropy,
          std::max({l.positivity_excess, r.positivity_excess, t.positivity_excess})};
}

std::vector<double> energy_fluctuation_profile(const TwoPointMatrix& two_point, const ChainParams& params) {
  if (params.n < 6) throw InvalidArgument("energy fluctuation profile needs n >= 6");
  const std::vector<double> e = energy_profile(two_point, params);
  double mean = 0.0;
  int count = 0;
  for (int m = 1; m <= params.n - 3; ++m) {
    mean += e[m];
    ++count;
  }
  mean /= count;
  if (mean == 0.0) throw DivisionByZero("bulk mean energy density vanishes");
  std::vector<double> f;
  for (double v : e) f.push_back(std::abs(v - mean) / std::abs(mean));
  return f;
}

ObservableReport observable_report(const TwoPointMatrix& two_point, const ChainParams& params) {
  ObservableReport r;
  r.n = params.n;
  r.magnetization = magnetization_profile(two_point);
  r.correlations = spin_correlation_matrix(two_point);
  if (params.n >= 4) r.residual_correlation = residual_correlator(r.correlations);
  r.correlation_decay = correlation_decay(r.correlations);
  r.heat_current = heat_current_profile(two_point, params);
  r.energy_density = energy_profile(two_point, params);
  if (params.n >= 6) {
    try {
      r.energy_fluctuation = energy_fluctuation_profile(two_point, params);
    } catch (const DivisionByZero&) {
      r.energy_fluctuation.clear();
    }
  }
  if (params.n % 2 == 0) {
    const MutualInformation qmi = quantum_mutual_information(two_point);
    r.entropy_left = qmi.left;
    r.entropy_right = qmi.right;
    r.entropy_total = qmi.total;
    r.mutual_information = qmi.qmi;
    r.positivity_excess = qmi.positivity_excess;
  } else {
    std::vector<int> all(params.n);
    for (int s = 0; s < params.n; ++s) all[s] = s;
    const BlockEntropy t = block_entropy(two_point, all);
    r.entropy_total = t.entropy;
    r.positivity_excess = t.positivity_excess;
  }
  return r;
}

CurrentStatistics bulk_current(const std::vector<double>& profile) {
  const int count = static_cast<int>(profile.size()) - 2;
  if (count < 2) throw InvalidArgument("bulk current statistics need n >= 5");
  double mean = 0.0;
  for (int m = 1; m <= count; ++m) mean += profile[m];
  mean /= count;
  double var = 0.0;
  for (int m = 1; m <= count; ++m) var += (profile[m] - mean) * (profile[m] - mean);
  const double sd = std::sqrt(var / count);
  return {mean, mean != 0.0 ? sd / std::abs(mean) : 0.0};
}

}  // namespace thirdq
