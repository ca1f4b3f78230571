#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "mll/norms.hpp"
#include "oracles.hpp"

using mll::Complex;
using mll::SpectralField;
using mll::TorusGrid;

namespace {

constexpr double kPi = std::numbers::pi;

// sqrt(2) cos(x1): L2 norm (2 pi)^{d/2}, one nonzero derivative per order.
SpectralField cosine_mode(const TorusGrid& g) {
  std::vector<int> k(g.dim(), 0);
  k[0] = 1;
  const auto plus = SpectralField::mode(g, k, Complex(std::sqrt(0.5), 0));
  k[0] = -1;
  return plus + SpectralField::mode(g, k, Complex(std::sqrt(0.5), 0));
}

double closed_form(int dim, double tau) {
  return std::pow(2 * kPi, dim / 2.0) * (1 + tau + tau * tau + tau * tau * tau * std::exp(tau));
}

double norm_of(const SpectralField& f, double tau, double sigma = 1.0, int mmax = 30) {
  const SpectralField fields[] = {f};
  return mll::analytic_norm(fields, tau, sigma, mmax).value;
}

}  // namespace

TEST_CASE("parameter validation and the radius schedule") {
  mll::NormParams p{0.5, 1.25, 1.0, 30, 0.2};
  CHECK_NOTHROW(p.validate());
  CHECK(mll::radius(0.0, p) == 0.5);
  CHECK(mll::radius(0.2, p) == doctest::Approx(0.25));
  CHECK_THROWS_AS(mll::radius(0.3, p), std::out_of_range);
  CHECK_THROWS_AS(mll::radius(-0.1, p), std::out_of_range);
  p.horizon = 0.21;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = mll::NormParams{0.5, 0.5, 1.0, 30, 0.1};
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = mll::NormParams{0.5, 1.0, 0.5, 30, 0.1};
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("single mode closed form") {
  for (int dim : {2, 3}) {
    const TorusGrid g(dim, 16);
    const auto f = cosine_mode(g);
    for (double tau : {0.25, 0.5, 1.0}) {
      const double expected = closed_form(dim, tau);
      CHECK(std::abs(norm_of(f, tau) - expected) <= 1e-10 * expected);
    }
  }
}

TEST_CASE("zero field has zero norm and passes any bound") {
  const TorusGrid g(2, 16);
  mll::StateU u{SpectralField(g), {SpectralField(g), SpectralField(g)}, 1.0, 0.0};
  const auto check = mll::initial_data_check(u, 0.5, 1e-9, 30);
  CHECK(check.passed);
  CHECK(check.report.value == 0.0);
  CHECK(check.report.tail_bound == 0.0);
}

TEST_CASE("initial data check on a single mode") {
  const TorusGrid g(2, 16);
  const double tau0 = 0.5;
  const double unit = closed_form(2, tau0);
  for (double amplitude : {0.5, 1.0, 2.0}) {
    mll::StateU u{cosine_mode(g) * amplitude, {SpectralField(g), SpectralField(g)}, 1.0, 0.0};
    CHECK(mll::initial_data_check(u, tau0, amplitude * unit * 1.0001, 30).passed);
    CHECK_FALSE(mll::initial_data_check(u, tau0, amplitude * unit * 0.9999, 30).passed);
  }
}

TEST_CASE("dissipative norm is the tau-derivative of the analytic norm") {
  std::mt19937_64 rng(8);
  const TorusGrid g(2, 32);
  const SpectralField fields[] = {cosine_mode(g), gen::field(rng, g, 1.0)};
  for (const auto& f : fields) {
    const SpectralField one[] = {f};
    for (double tau : {0.25, 0.5, 0.75}) {
      const double h = 2e-5;
      const double fd = (mll::analytic_norm(one, tau + h, 1.0, 30).value - mll::analytic_norm(one, tau - h, 1.0, 30).value) / (2 * h);
      const double d = mll::dissipative_norm(one, tau, 1.0, 30).value;
      CHECK(std::abs(fd - d) <= 1e-6 * d);
    }
  }
}

TEST_CASE("monotone in tau and sigma") {
  std::mt19937_64 rng(9);
  const TorusGrid g(2, 32);
  for (int trial = 0; trial < 10; ++trial) {
    const SpectralField f[] = {gen::field(rng, g, 1.0)};
    const auto small = mll::analytic_norm(f, 0.3, 1.0, 30);
    const auto large = mll::analytic_norm(f, 0.5, 1.0, 30);
    CHECK(small.value <= large.value);
    const auto gevrey = mll::analytic_norm(f, 0.5, 1.5, 30);
    for (std::size_t m = 0; m < large.per_m.size(); ++m) {
      if (m <= 3) {
        CHECK(gevrey.per_m[m] == large.per_m[m]);
      } else {
        CHECK(gevrey.per_m[m] <= large.per_m[m]);
      }
    }
  }
}

TEST_CASE("triangle inequality") {
  std::mt19937_64 rng(10);
  const TorusGrid g(2, 32);
  for (int trial = 0; trial < 20; ++trial) {
    const auto u = gen::field(rng, g, 1.0);
    const auto w = gen::field(rng, g, 1.5);
    const double lhs = norm_of(u + w, 0.4);
    const double rhs = norm_of(u, 0.4) + norm_of(w, 0.4);
    CHECK(lhs <= rhs * (1 + 1e-10));
  }
}

TEST_CASE("per-alpha sums match per-wavevector moments") {
  std::mt19937_64 rng(12);
  for (int dim : {2, 3}) {
    const TorusGrid g(dim, dim == 2 ? 16 : 8);
    const SpectralField f[] = {gen::field(rng, g, 0.5), gen::field(rng, g, 0.5)};
    const auto by_alpha = mll::derivative_energy_by_alpha(f, 8);
    const auto by_moment = mll::derivative_energy_by_moment(f, 8);
    for (std::size_t m = 0; m < by_alpha.size(); ++m) {
      CHECK(std::abs(by_alpha[m] - by_moment[m]) <= 1e-10 * by_alpha[m]);
    }
    // Sum of norms against explicit differentiation.
    const auto sums = mll::derivative_norm_sums(f, 6);
    for (unsigned m = 0; m <= 6; ++m) {
      double s = 0.0;
      for (const auto& alpha : mll::indices_of_order(dim, m)) {
        const mll::SpectralField d[] = {mll::derivative(f[0], alpha), mll::derivative(f[1], alpha)};
        s += mll::l2_norm(d);
      }
      CHECK(std::abs(s - sums[m]) <= 1e-10 * s);
    }
  }
}

TEST_CASE("H3 norm") {
  const TorusGrid g(2, 16);
  const SpectralField f[] = {cosine_mode(g)};
  // Orders 0..3 each contribute (2 pi)^2 exactly once.
  CHECK(mll::sobolev_h3_norm(f) == doctest::Approx(std::sqrt(4.0) * 2 * kPi));
}

TEST_CASE("tail bound brackets the truncation error") {
  std::mt19937_64 rng(13);
  const TorusGrid g(2, 32);
  for (double decay : {1.0, 1.5}) {
    const SpectralField f[] = {gen::field(rng, g, 2 * decay)};
    const double tau = decay;
    const auto at30 = mll::analytic_norm(f, tau, 1.0, 30);
    const auto at35 = mll::analytic_norm(f, tau, 1.0, 35);
    CHECK(std::isfinite(at30.tail_bound));
    CHECK(at35.value - at30.value <= at30.tail_bound);
  }
}

TEST_CASE("Gaussian spectrum with e^{-2 tau0 |k|} decay has a negligible tail") {
  std::mt19937_64 rng(1);
  const TorusGrid g(2, 32);
  const double tau0 = 0.5;
  mll::StateU u = gen::state(rng, g, 2 * tau0);
  for (auto* f : {&u.p, &u.v[0], &u.v[1]}) *f = mll::dealias(*f);
  const auto check = mll::initial_data_check(u, tau0, 1e9, 30);
  CHECK(std::isfinite(check.report.value));
  CHECK(check.report.value > 0.0);
  CHECK(check.report.tail_bound < 1e-8);
}
