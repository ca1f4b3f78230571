#include "mll/norms.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace mll {

void NormParams::validate() const {
  if (!(tau0 > 0.0)) throw std::invalid_argument("tau0 must be positive");
  if (!(decay_rate >= 1.0)) throw std::invalid_argument("radius decay rate K must be >= 1");
  if (!(sigma >= 1.0)) throw std::invalid_argument("Gevrey exponent sigma must be >= 1");
  if (max_order < 4) throw std::invalid_argument("max_order must be >= 4");
  if (!(horizon >= 0.0)) throw std::invalid_argument("time horizon must be non-negative");
  // Relative slack for horizons computed as tau0 / (2K) in floating point.
  if (horizon > tau0 / (2.0 * decay_rate) * (1.0 + 1e-12)) {
    throw std::invalid_argument("time horizon " + std::to_string(horizon) + " exceeds tau0/(2K) = " +
                                std::to_string(tau0 / (2.0 * decay_rate)));
  }
}

double radius(double t, const NormParams& params) {
  params.validate();
  if (!(t >= 0.0) || t > params.horizon) {
    throw std::out_of_range("time " + std::to_string(t) + " outside [0, " + std::to_string(params.horizon) + "]");
  }
  return params.tau0 - params.decay_rate * t;
}

namespace {

struct ModeEnergy {
  int dim;
  int n;
  std::vector<double> energy;  // sum over fields of |c(k)|^2, FFT layout
};

ModeEnergy stacked_energy(std::span<const SpectralField> fields) {
  if (fields.empty()) throw std::invalid_argument("norm of an empty field list");
  const auto& grid = fields.front().grid();
  ModeEnergy e{grid.dim(), grid.n(), std::vector<double>(grid.size(), 0.0)};
  for (const auto& f : fields) {
    if (!(f.grid() == grid)) throw std::invalid_argument("fields live on different grids");
    const auto c = f.coefficients();
    for (std::size_t i = 0; i < c.size(); ++i) e.energy[i] += std::norm(c[i]);
  }
  return e;
}

// powers[a][j] = k(j)^(2a)
std::vector<std::vector<double>> even_powers(int n, int max_order) {
  std::vector<std::vector<double>> powers(max_order + 1, std::vector<double>(n, 1.0));
  for (int j = 0; j < n; ++j) {
    const double k = j <= n / 2 ? j : j - n;
    for (int a = 1; a <= max_order; ++a) powers[a][j] = powers[a - 1][j] * k * k;
  }
  return powers;
}

// Per-alpha moments (2 pi)^d sum_k k^{2 alpha} E(k), contracted one axis at a
// time. Returned as S_m = sum_{|alpha|=m} sqrt(moment).
std::vector<double> sums_of_norms(const ModeEnergy& e, int max_order) {
  const int n = e.n;
  const auto P = even_powers(n, max_order);
  const double vol = std::pow(2.0 * std::numbers::pi, e.dim);
  std::vector<double> sums(max_order + 1, 0.0);
  const auto un = static_cast<std::size_t>(n);

  if (e.dim == 2) {
    // T[a2][j1] = sum_j2 k2^{2 a2} E(j1, j2)
    std::vector<std::vector<double>> T(max_order + 1, std::vector<double>(n, 0.0));
    for (int a2 = 0; a2 <= max_order; ++a2) {
      for (std::size_t j1 = 0; j1 < un; ++j1) {
        double s = 0.0;
        for (std::size_t j2 = 0; j2 < un; ++j2) s += P[a2][j2] * e.energy[j1 * un + j2];
        T[a2][j1] = s;
      }
    }
    for (int m = 0; m <= max_order; ++m) {
      for (int a1 = 0; a1 <= m; ++a1) {
        double moment = 0.0;
        for (std::size_t j1 = 0; j1 < un; ++j1) moment += P[a1][j1] * T[m - a1][j1];
        sums[m] += std::sqrt(vol * moment);
      }
    }
    return sums;
  }

  // d == 3: T2[a3][j1 n + j2], then T1[a2][a3][j1].
  std::vector<std::vector<double>> T2(max_order + 1, std::vector<double>(un * un, 0.0));
  for (int a3 = 0; a3 <= max_order; ++a3) {
    for (std::size_t j12 = 0; j12 < un * un; ++j12) {
      double s = 0.0;
      const double* row = &e.energy[j12 * un];
      for (std::size_t j3 = 0; j3 < un; ++j3) s += P[a3][j3] * row[j3];
      T2[a3][j12] = s;
    }
  }
  for (int m = 0; m <= max_order; ++m) {
    for (int a2 = 0; a2 <= m; ++a2) {
      for (int a3 = 0; a2 + a3 <= m; ++a3) {
        const int a1 = m - a2 - a3;
        double moment = 0.0;
        for (std::size_t j1 = 0; j1 < un; ++j1) {
          double inner = 0.0;
          for (std::size_t j2 = 0; j2 < un; ++j2) inner += P[a2][j2] * T2[a3][j1 * un + j2];
          moment += P[a1][j1] * inner;
        }
        sums[m] += std::sqrt(vol * moment);
      }
    }
  }
  return sums;
}

// 1 / ((m-3)!)^sigma with n! = 1 for n < 0.
double factorial_weight(int m, double sigma) {
  if (m <= 3) return 1.0;
  return std::exp(-sigma * std::lgamma(static_cast<double>(m - 2)));
}

double geometric_tail(const std::vector<double>& per_m) {
  const std::size_t last = per_m.size() - 1;
  const double a = per_m[last];
  if (a == 0.0) return 0.0;
  const double b = per_m[last - 1];
  if (b == 0.0) return std::numeric_limits<double>::infinity();
  const double q = a / b;
  if (q >= 1.0) return std::numeric_limits<double>::infinity();
  return a * q / (1.0 - q);
}

NormReport assemble(const std::vector<double>& sums, double tau, double sigma, bool dissipative) {
  if (!(tau > 0.0)) throw std::invalid_argument("norm radius tau must be positive");
  NormReport report;
  report.per_m.assign(sums.size(), 0.0);
  for (std::size_t idx = 0; idx < sums.size(); ++idx) {
    const int m = static_cast<int>(idx);
    if (sums[idx] == 0.0) continue;
    double w = 0.0;
    if (!dissipative) {
      w = std::pow(tau, m) * factorial_weight(m, sigma);
    } else if (m >= 1) {
      w = m * std::pow(tau, m - 1) * factorial_weight(m, sigma);
    }
    report.per_m[idx] = w * sums[idx];
  }
  for (double term : report.per_m) report.value += term;
  report.tail_bound = geometric_tail(report.per_m);
  return report;
}

}  // namespace

std::vector<double> derivative_norm_sums(std::span<const SpectralField> fields, int max_order) {
  if (max_order < 1) throw std::invalid_argument("max_order must be >= 1");
  return sums_of_norms(stacked_energy(fields), max_order);
}

NormReport analytic_norm(std::span<const SpectralField> fields, double tau, double sigma, int max_order) {
  if (max_order < 4) throw std::invalid_argument("max_order must be >= 4");
  return assemble(derivative_norm_sums(fields, max_order), tau, sigma, false);
}

NormReport analytic_norm(const StateU& u, double tau, double sigma, int max_order) {
  const auto fields = u.stacked();
  return analytic_norm(std::span<const SpectralField>(fields), tau, sigma, max_order);
}

NormReport dissipative_norm(std::span<const SpectralField> fields, double tau, double sigma, int max_order) {
  if (max_order < 4) throw std::invalid_argument("max_order must be >= 4");
  return assemble(derivative_norm_sums(fields, max_order), tau, sigma, true);
}

NormReport dissipative_norm(const StateU& u, double tau, double sigma, int max_order) {
  const auto fields = u.stacked();
  return dissipative_norm(std::span<const SpectralField>(fields), tau, sigma, max_order);
}

InitialDataCheck initial_data_check(const StateU& u0, double tau0, double m0, int max_order) {
  InitialDataCheck check;
  check.report = analytic_norm(u0, tau0, 1.0, max_order);
  check.passed = check.report.value <= m0;
  return check;
}

std::vector<double> derivative_energy_by_moment(std::span<const SpectralField> fields, int max_order) {
  const auto e = stacked_energy(fields);
  const auto& grid = fields.front().grid();
  const double vol = std::pow(2.0 * std::numbers::pi, grid.dim());
  std::vector<double> totals(max_order + 1, 0.0);
  std::vector<double> h(max_order + 1);
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    if (e.energy[idx] == 0.0) continue;
    const auto k = grid.wavevector(idx);
    // h_m over the first variable, then fold in the rest.
    std::fill(h.begin(), h.end(), 0.0);
    h[0] = 1.0;
    for (int axis = 0; axis < grid.dim(); ++axis) {
      const double x = static_cast<double>(k[axis]) * k[axis];
      for (int m = 1; m <= max_order; ++m) h[m] += x * h[m - 1];
    }
    for (int m = 0; m <= max_order; ++m) totals[m] += h[m] * e.energy[idx];
  }
  for (auto& t : totals) t *= vol;
  return totals;
}

std::vector<double> derivative_energy_by_alpha(std::span<const SpectralField> fields, int max_order) {
  if (fields.empty()) throw std::invalid_argument("norm of an empty field list");
  const auto dim = static_cast<std::size_t>(fields.front().grid().dim());
  std::vector<double> totals(max_order + 1, 0.0);
  for (int m = 0; m <= max_order; ++m) {
    for (const auto& alpha : indices_of_order(dim, static_cast<unsigned>(m))) {
      for (const auto& f : fields) {
        const double n = l2_norm(derivative(f, alpha));
        totals[m] += n * n;
      }
    }
  }
  return totals;
}

double sobolev_h3_norm(std::span<const SpectralField> fields) {
  double sum = 0.0;
  for (double e : derivative_energy_by_moment(fields, 3)) sum += e;
  return std::sqrt(sum);
}

}  // namespace mll
