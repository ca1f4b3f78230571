#include "mll/euler.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace mll {

namespace {

std::vector<double> to_doubles(const PowerSeries1& s) {
  std::vector<double> out;
  for (const auto& c : s.coefficients()) out.push_back(c.get_d());
  return out;
}

PowerSeries1 exact_series(const std::vector<double>& values) {
  std::vector<Rational> coefficients;
  for (double v : values) {
    if (!std::isfinite(v)) throw std::invalid_argument("pressure law coefficients must be finite");
    coefficients.emplace_back(v);
  }
  return PowerSeries1(std::move(coefficients));
}

// Grid samples of a spectral field (real part).
std::vector<double> samples(const SpectralField& f) { return f.to_physical(); }

SpectralField from_samples(const TorusGrid& grid, const std::vector<double>& values, bool dealias_output) {
  auto f = enforce_hermitian(SpectralField::from_physical(grid, values));
  return dealias_output ? dealias(f) : f;
}

void check_range(const std::vector<double>& eps_p, const PressureLaw& law) {
  double sup = 0.0;
  for (double x : eps_p) {
    if (!std::isfinite(x)) throw NumericalError("non-finite pressure sample");
    sup = std::max(sup, std::abs(x));
  }
  if (sup > law.radius()) {
    std::ostringstream msg;
    msg << "||eps p||_Linf = " << sup << " exceeds the pressure law radius " << law.radius() << " ("
        << law.descriptor() << ")";
    throw AdmissibilityError(msg.str(), sup, law.radius());
  }
}

struct PointwiseCoefficients {
  std::vector<double> a, r;
};

PointwiseCoefficients pointwise(const PressureLaw& law, const std::vector<double>& p, double eps) {
  std::vector<double> eps_p(p.size());
  for (std::size_t j = 0; j < p.size(); ++j) eps_p[j] = eps * p[j];
  check_range(eps_p, law);
  PointwiseCoefficients c{std::vector<double>(p.size()), std::vector<double>(p.size())};
  for (std::size_t j = 0; j < p.size(); ++j) {
    c.a[j] = law.a(eps_p[j]);
    c.r[j] = law.r(eps_p[j]);
  }
  return c;
}

StateU axpy(const StateU& u, double h, const StateU& k) {
  return StateU{u.p + k.p * h, u.v + h * k.v, u.eps, u.t};
}

StateU hermitian(const StateU& u) {
  StateU out{enforce_hermitian(u.p), {}, u.eps, u.t};
  for (const auto& c : u.v) out.v.push_back(enforce_hermitian(c));
  return out;
}

bool finite(const SpectralField& f) {
  for (const auto& c : f.coefficients()) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
  }
  return true;
}

bool finite(const StateU& u) {
  if (!finite(u.p)) return false;
  return std::all_of(u.v.begin(), u.v.end(), [](const SpectralField& f) { return finite(f); });
}

double sup_speed(const VectorField& v) {
  std::vector<double> speed2(v.front().grid().size(), 0.0);
  for (const auto& c : v) {
    const auto s = samples(c);
    for (std::size_t j = 0; j < s.size(); ++j) speed2[j] += s[j] * s[j];
  }
  return std::sqrt(*std::max_element(speed2.begin(), speed2.end()));
}

}  // namespace

PressureLaw::PressureLaw(PowerSeries1 a_series, PowerSeries1 r_series, double radius, std::string descriptor)
    : a_series_(std::move(a_series)),
      r_series_(std::move(r_series)),
      a_values_(to_doubles(a_series_)),
      r_values_(to_doubles(r_series_)),
      radius_(radius),
      descriptor_(std::move(descriptor)) {
  if (!(radius_ > 0.0)) throw std::invalid_argument("pressure law radius must be positive");
  if (!(a_values_.front() > 0.0) || !(r_values_.front() > 0.0)) {
    throw std::invalid_argument("pressure law needs a(0) > 0 and r(0) > 0");
  }
}

PressureLaw PressureLaw::linear_acoustics() {
  return PressureLaw(PowerSeries1({Rational(1)}), PowerSeries1({Rational(1)}),
                     std::numeric_limits<double>::infinity(), "linear_acoustics");
}

PressureLaw PressureLaw::ideal_gas(double gamma, double k, double pbar, double radius, unsigned order) {
  if (!(gamma > 1.0)) throw std::invalid_argument("ideal gas needs gamma > 1");
  if (!(k > 0.0) || !(pbar > 0.0)) throw std::invalid_argument("ideal gas needs K > 0 and pbar > 0");
  const double exponent = 1.0 / gamma - 1.0;
  // r(x) = K pbar^exponent e^{exponent x}
  std::vector<double> r(order + 1);
  double term = k * std::pow(pbar, exponent);
  for (unsigned n = 0; n <= order; ++n) {
    r[n] = term;
    term *= exponent / static_cast<double>(n + 1);
  }
  std::ostringstream name;
  name << "ideal_gas(gamma=" << gamma << ",K=" << k << ",pbar=" << pbar << ")";
  return PressureLaw(exact_series({1.0 / gamma}), exact_series(r), radius, name.str());
}

PressureLaw PressureLaw::from_series(const std::vector<double>& a, const std::vector<double>& r, double radius,
                                     std::string descriptor) {
  if (a.empty() || r.empty()) throw std::invalid_argument("pressure law series must be non-empty");
  return PressureLaw(exact_series(a), exact_series(r), radius, std::move(descriptor));
}

double PressureLaw::evaluate(const std::vector<double>& coefficients, double x, const char* name) const {
  if (std::abs(x) > radius_) {
    std::ostringstream msg;
    msg << "|x| = " << std::abs(x) << " exceeds the pressure law radius " << radius_ << " (" << descriptor_ << ")";
    throw AdmissibilityError(msg.str(), std::abs(x), radius_);
  }
  double value = 0.0;
  for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) value = value * x + *it;
  if (!(value > 0.0)) {
    std::ostringstream msg;
    msg << name << "(" << x << ") = " << value << " is not positive (" << descriptor_ << ")";
    throw AdmissibilityError(msg.str(), std::abs(x), radius_);
  }
  return value;
}

double PressureLaw::a(double x) const { return evaluate(a_values_, x, "a"); }
double PressureLaw::r(double x) const { return evaluate(r_values_, x, "r"); }

CoefficientFields eval_coefficients(const PressureLaw& law, const SpectralField& eps_p) {
  const auto x = samples(eps_p);
  check_range(x, law);
  const auto& grid = eps_p.grid();
  std::vector<double> a(x.size()), r(x.size()), inv_a(x.size()), inv_r(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) {
    a[j] = law.a(x[j]);
    r[j] = law.r(x[j]);
    inv_a[j] = 1.0 / a[j];
    inv_r[j] = 1.0 / r[j];
  }
  return {from_samples(grid, a, false), from_samples(grid, r, false), from_samples(grid, inv_a, false),
          from_samples(grid, inv_r, false)};
}

StateU rhs_compressible(const StateU& u, const PressureLaw& law, const RhsOptions& options) {
  const auto& grid = u.grid();
  const int d = grid.dim();
  if (static_cast<int>(u.v.size()) != d) throw std::invalid_argument("state velocity has wrong dimension");
  if (!(u.eps > 0.0)) throw std::invalid_argument("Mach number eps must be positive");
  const std::size_t size = grid.size();

  const auto p = samples(u.p);
  const auto coeff = pointwise(law, p, u.eps);
  const auto div_v = samples(divergence(u.v));
  std::vector<std::vector<double>> grad_p;
  for (int i = 0; i < d; ++i) grad_p.push_back(samples(derivative(u.p, MultiIndex::unit(d, i))));

  const double inv_eps = 1.0 / u.eps;
  std::vector<double> dp(size);
  std::vector<std::vector<double>> dv(d, std::vector<double>(size));
  for (std::size_t j = 0; j < size; ++j) {
    dp[j] = -inv_eps * div_v[j] / coeff.a[j];
    for (int i = 0; i < d; ++i) dv[i][j] = -inv_eps * grad_p[i][j] / coeff.r[j];
  }

  if (options.advection) {
    std::vector<std::vector<double>> v;
    for (const auto& c : u.v) v.push_back(samples(c));
    for (std::size_t j = 0; j < size; ++j) {
      double adv = 0.0;
      for (int l = 0; l < d; ++l) adv += v[l][j] * grad_p[l][j];
      dp[j] -= adv;
    }
    for (int i = 0; i < d; ++i) {
      for (int l = 0; l < d; ++l) {
        const auto dl_vi = samples(derivative(u.v[i], MultiIndex::unit(d, l)));
        for (std::size_t j = 0; j < size; ++j) dv[i][j] -= v[l][j] * dl_vi[j];
      }
    }
  }

  StateU out{from_samples(grid, dp, options.dealias), {}, u.eps, u.t};
  for (int i = 0; i < d; ++i) out.v.push_back(from_samples(grid, dv[i], options.dealias));
  return out;
}

void SolverConfig::validate() const {
  if (!(c_adv > 0.0) || !(c_ac > 0.0)) throw std::invalid_argument("CFL constants must be positive");
  if (fixed_dt && !(*fixed_dt > 0.0)) throw std::invalid_argument("fixed dt must be positive");
  if (!(end_time >= 0.0)) throw std::invalid_argument("end time must be non-negative");
  if (!(diag_interval >= 0.0)) throw std::invalid_argument("diagnostic interval must be non-negative");
}

double cfl_dt(const StateU& u, const PressureLaw& law, const SolverConfig& config) {
  const double dx = u.grid().spacing();
  const auto p = samples(u.p);
  const auto coeff = pointwise(law, p, u.eps);
  const double a_min = *std::min_element(coeff.a.begin(), coeff.a.end());
  const double r_min = *std::min_element(coeff.r.begin(), coeff.r.end());
  double dt = config.c_ac * u.eps * dx * std::sqrt(a_min * r_min);
  const double speed = sup_speed(u.v);
  if (speed > 0.0) dt = std::min(dt, config.c_adv * dx / speed);
  return dt;
}

StateU step(const StateU& u, const PressureLaw& law, const SolverConfig& config, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
  const auto options = config.rhs_options();
  const StateU k1 = rhs_compressible(u, law, options);
  const StateU u2 = hermitian(axpy(u, 0.5 * dt, k1));
  const StateU k2 = rhs_compressible(u2, law, options);
  const StateU u3 = hermitian(axpy(u, 0.5 * dt, k2));
  const StateU k3 = rhs_compressible(u3, law, options);
  const StateU u4 = hermitian(axpy(u, dt, k3));
  const StateU k4 = rhs_compressible(u4, law, options);

  StateU out = axpy(u, dt / 6.0, k1);
  out = axpy(out, dt / 3.0, k2);
  out = axpy(out, dt / 3.0, k3);
  out = hermitian(axpy(out, dt / 6.0, k4));
  out.t = u.t + dt;
  if (!finite(out)) {
    std::ostringstream msg;
    msg << "non-finite state at t = " << out.t << " (dt = " << dt << ", eps = " << u.eps
        << ", ||u(t - dt)||_L2 = " << l2_norm(u) << ")";
    throw NumericalError(msg.str());
  }
  return out;
}

StateU step(const StateU& u, const PressureLaw& law, const SolverConfig& config) {
  return step(u, law, config, config.fixed_dt ? *config.fixed_dt : cfl_dt(u, law, config));
}

VectorField init_w0(const VectorField& v0, const PressureLaw& law) {
  // r0 > 0 is a constant, so curl(r0 w0) = curl(r0 v0) is curl w0 = curl v0.
  (void)law;
  return leray_project(v0);
}

VectorField rhs_incompressible(const VectorField& v, const PressureLaw& law, bool dealias_output) {
  (void)law;
  const auto& grid = v.front().grid();
  const int d = grid.dim();
  if (static_cast<int>(v.size()) != d) throw std::invalid_argument("velocity has wrong dimension");
  const double div = l2_norm(divergence(v));
  if (div > 1e-10) {
    std::ostringstream msg;
    msg << "incompressible right side needs div v = 0, got ||div v||_L2 = " << div;
    throw std::invalid_argument(msg.str());
  }
  std::vector<std::vector<double>> vs;
  for (const auto& c : v) vs.push_back(samples(c));
  VectorField advection;
  for (int i = 0; i < d; ++i) {
    std::vector<double> acc(grid.size(), 0.0);
    for (int l = 0; l < d; ++l) {
      const auto dl_vi = samples(derivative(v[i], MultiIndex::unit(d, l)));
      for (std::size_t j = 0; j < acc.size(); ++j) acc[j] -= vs[l][j] * dl_vi[j];
    }
    advection.push_back(from_samples(grid, acc, dealias_output));
  }
  return leray_project(advection);
}

VectorField step_incompressible(const VectorField& v, const PressureLaw& law, double dt, bool dealias_output) {
  const auto k1 = rhs_incompressible(v, law, dealias_output);
  const auto k2 = rhs_incompressible(v + (0.5 * dt) * k1, law, dealias_output);
  const auto k3 = rhs_incompressible(v + (0.5 * dt) * k2, law, dealias_output);
  const auto k4 = rhs_incompressible(v + dt * k3, law, dealias_output);
  VectorField out = v + (dt / 6.0) * k1;
  out = out + (dt / 3.0) * k2;
  out = out + (dt / 3.0) * k3;
  out = out + (dt / 6.0) * k4;
  for (auto& c : out) c = enforce_hermitian(c);
  return out;
}

double symmetrizer_energy(const StateU& u, const PressureLaw& law) {
  const auto p = samples(u.p);
  const auto coeff = pointwise(law, p, u.eps);
  std::vector<double> speed2(p.size(), 0.0);
  for (const auto& c : u.v) {
    const auto s = samples(c);
    for (std::size_t j = 0; j < s.size(); ++j) speed2[j] += s[j] * s[j];
  }
  double sum = 0.0;
  for (std::size_t j = 0; j < p.size(); ++j) sum += coeff.a[j] * p[j] * p[j] + coeff.r[j] * speed2[j];
  return sum * std::pow(u.grid().spacing(), u.grid().dim());
}

namespace {

struct PairMetrics {
  double a_tau, a_delta_vel_err, a_delta_p, a_delta_err, l2_p;
};

PairMetrics measure(const StateU& u, const VectorField& vinc, double tau, const NormParams& params, double delta) {
  const VectorField err = u.v - vinc;
  std::vector<SpectralField> with_p{u.p};
  with_p.insert(with_p.end(), err.begin(), err.end());
  const SpectralField p_only[] = {u.p};
  return {analytic_norm(u, tau, params.sigma, params.max_order).value,
          analytic_norm(std::span<const SpectralField>(err), delta, params.sigma, params.max_order).value,
          analytic_norm(std::span<const SpectralField>(p_only), delta, params.sigma, params.max_order).value,
          analytic_norm(std::span<const SpectralField>(with_p), delta, params.sigma, params.max_order).value,
          l2_norm(u.p)};
}

}  // namespace

RunRecord run_pair(const StateU& u0, const PressureLaw& law, const SolverConfig& config, const NormParams& params,
                   double delta, const DiagnosticObserver& observer) {
  params.validate();
  config.validate();
  if (config.end_time > params.horizon * (1.0 + 1e-12)) {
    throw std::invalid_argument("end time exceeds the norm horizon tau0/(2K)");
  }
  if (!(delta > 0.0) || delta > params.tau0) throw std::invalid_argument("delta must lie in (0, tau0]");

  const double end_time = std::min(config.end_time, params.horizon);
  StateU u = u0;
  u.t = 0.0;
  VectorField vinc = init_w0(u0.v, law);

  // Diagnostic times: multiples of the interval below end_time, then end_time.
  std::vector<double> diag_times{0.0};
  if (config.diag_interval > 0.0) {
    for (long j = 1;; ++j) {
      const double t = static_cast<double>(j) * config.diag_interval;
      if (t >= end_time * (1.0 - 1e-12)) break;
      diag_times.push_back(t);
    }
  }
  if (end_time > 0.0) diag_times.push_back(end_time);

  RunRecord record{{}, {}, u, vinc};
  RunSummary& summary = record.summary;
  summary.eps = u0.eps;

  auto m = measure(u, vinc, radius(0.0, params), params, delta);
  double sup_m = m.a_tau;
  double sup_l2_p = m.l2_p;
  double int_vel = 0.0;
  double int_full = 0.0;
  long steps = 0;

  auto emit = [&]() {
    DiagnosticRow row;
    row.t = u.t;
    row.tau = radius(std::min(u.t, params.horizon), params);
    row.a_tau = m.a_tau;
    row.m_eps = sup_m;
    row.a_delta_vel_err = m.a_delta_vel_err;
    row.a_delta_p = m.a_delta_p;
    row.a_delta_err = m.a_delta_err;
    row.l2_p = m.l2_p;
    row.l2_v = l2_norm(std::span<const SpectralField>(u.v));
    const VectorField err = u.v - vinc;
    row.l2_vel_err = l2_norm(std::span<const SpectralField>(err));
    const VectorField proj_err = leray_project(u.v) - vinc;
    row.l2_proj_vel_err = l2_norm(std::span<const SpectralField>(proj_err));
    row.energy = symmetrizer_energy(u, law);
    const double inc = l2_norm(std::span<const SpectralField>(vinc));
    row.inc_energy = inc * inc;
    row.l2time_a_delta_vel_err = std::sqrt(int_vel);
    row.l2time_a_delta_err = std::sqrt(int_full);
    row.steps = steps;
    record.rows.push_back(row);
    if (observer) observer(row, u, vinc);
  };

  emit();
  for (std::size_t next = 1; next < diag_times.size(); ++next) {
    const double target = diag_times[next];
    while (u.t < target) {
      double dt = config.fixed_dt ? *config.fixed_dt : cfl_dt(u, law, config);
      const double remaining = target - u.t;
      // Avoid a sliver step right before a diagnostic time.
      if (dt >= remaining || remaining - dt < 1e-12 * std::max(1.0, target)) dt = remaining;
      const auto before = m;
      u = step(u, law, config, dt);
      vinc = step_incompressible(vinc, law, dt, config.dealias);
      if (dt == remaining) u.t = target;
      ++steps;
      m = measure(u, vinc, radius(std::min(u.t, params.horizon), params), params, delta);
      sup_m = std::max(sup_m, m.a_tau);
      sup_l2_p = std::max(sup_l2_p, m.l2_p);
      int_vel += 0.5 * dt * (before.a_delta_vel_err * before.a_delta_vel_err + m.a_delta_vel_err * m.a_delta_vel_err);
      int_full += 0.5 * dt * (before.a_delta_err * before.a_delta_err + m.a_delta_err * m.a_delta_err);
    }
    emit();
  }

  summary.steps = steps;
  summary.sup_m_eps = sup_m;
  summary.sup_l2_p = sup_l2_p;
  summary.initial = record.rows.front();
  summary.final = record.rows.back();
  const double e0 = summary.initial.energy;
  summary.energy_drift = e0 != 0.0 ? (summary.final.energy - e0) / e0 : summary.final.energy;
  record.final_state = u;
  record.final_incompressible = vinc;
  return record;
}

}  // namespace mll
