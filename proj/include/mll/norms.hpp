#pragma once

#include <span>
#include <vector>

#include "mll/spectral.hpp"

namespace mll {

// Radius schedule tau(t) = tau0 - K t on [0, horizon] with horizon <= tau0 / (2K),
// which keeps tau in [tau0/2, tau0].
struct NormParams {
  double tau0 = 0.5;
  double decay_rate = 1.0;  // K >= 1
  double sigma = 1.0;       // Gevrey exponent, 1 = analytic
  int max_order = 30;       // M_max >= 4
  double horizon = 0.25;    // T

  // Throws std::invalid_argument naming the violated constraint.
  void validate() const;
};

double radius(double t, const NormParams& params);

struct NormReport {
  double value = 0.0;
  // Geometric-ratio estimate of the truncated remainder sum_{m > M_max}.
  double tail_bound = 0.0;
  std::vector<double> per_m;
};

// sum_{m=0}^{M} tau^m / ((m-3)!)^sigma sum_{|alpha|=m} ||d^alpha u||_{L2}, with
// n! = 1 for negative n. The fields are stacked into one L2 norm per alpha.
NormReport analytic_norm(std::span<const SpectralField> fields, double tau, double sigma, int max_order);
NormReport analytic_norm(const StateU& u, double tau, double sigma, int max_order);

// sum_{m=1}^{M} m tau^{m-1} / ((m-3)!)^sigma sum_{|alpha|=m} ||d^alpha u||_{L2}
NormReport dissipative_norm(std::span<const SpectralField> fields, double tau, double sigma, int max_order);
NormReport dissipative_norm(const StateU& u, double tau, double sigma, int max_order);

struct InitialDataCheck {
  bool passed = false;
  NormReport report;
};

// Analytic (sigma = 1) norm at tau0 compared against the bound m0.
InitialDataCheck initial_data_check(const StateU& u0, double tau0, double m0, int max_order);

// S_m = sum_{|alpha|=m} ||d^alpha u||_{L2} for m = 0..max_order, one entry
// per order, computed from per-alpha spectral moments.
std::vector<double> derivative_norm_sums(std::span<const SpectralField> fields, int max_order);

// sum_{|alpha|=m} ||d^alpha u||^2 for m = 0..max_order, accumulated per
// wavevector with the complete homogeneous symmetric polynomial
// h_m(k_1^2, ..., k_d^2) = sum_{|alpha|=m} k^{2 alpha}.
std::vector<double> derivative_energy_by_moment(std::span<const SpectralField> fields, int max_order);

// Same quantity by looping over alpha and differentiating explicitly.
std::vector<double> derivative_energy_by_alpha(std::span<const SpectralField> fields, int max_order);

// sqrt(sum_{|alpha| <= 3} ||d^alpha u||^2)
double sobolev_h3_norm(std::span<const SpectralField> fields);

}  // namespace mll
