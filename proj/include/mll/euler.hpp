#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mll/faadibruno.hpp"
#include "mll/norms.hpp"
#include "mll/spectral.hpp"

namespace mll {

// ||eps p||_{L^inf} left the disc where the pressure law's series is valid, or
// the symmetrizer lost positivity.
class AdmissibilityError : public std::range_error {
 public:
  AdmissibilityError(const std::string& what, double measured, double radius)
      : std::range_error(what), measured_(measured), radius_(radius) {}
  double measured() const { return measured_; }
  double radius() const { return radius_; }

 private:
  double measured_;
  double radius_;
};

// Non-finite state detected during time stepping.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Symmetrizer coefficients a(x), r(x) as truncated series valid for |x| <= radius.
class PressureLaw {
 public:
  PressureLaw(PowerSeries1 a_series, PowerSeries1 r_series, double radius, std::string descriptor);

  // a = r = 1, valid everywhere.
  static PressureLaw linear_acoustics();
  // rho = K P^{1/gamma}: a = 1/gamma, r(x) = K (pbar e^x)^{1/gamma - 1}.
  static PressureLaw ideal_gas(double gamma, double k, double pbar, double radius = 1.0, unsigned order = 40);
  static PressureLaw from_series(const std::vector<double>& a, const std::vector<double>& r, double radius,
                                 std::string descriptor = "series");

  // Throw AdmissibilityError for |x| > radius() or a non-positive value.
  double a(double x) const;
  double r(double x) const;

  double a0() const { return a_values_.front(); }
  double r0() const { return r_values_.front(); }
  double radius() const { return radius_; }
  const std::string& descriptor() const { return descriptor_; }
  const PowerSeries1& a_series() const { return a_series_; }
  const PowerSeries1& r_series() const { return r_series_; }

 private:
  double evaluate(const std::vector<double>& coefficients, double x, const char* name) const;

  PowerSeries1 a_series_;
  PowerSeries1 r_series_;
  std::vector<double> a_values_;
  std::vector<double> r_values_;
  double radius_;
  std::string descriptor_;
};

struct CoefficientFields {
  SpectralField a;
  SpectralField r;
  SpectralField inv_a;
  SpectralField inv_r;
};

// Pointwise a(eps p), r(eps p) and their reciprocals (the nontrivial entries
// of E^{-1}). Throws AdmissibilityError naming the measured sup-norm when
// ||eps p||_{L^inf} exceeds the law's radius.
CoefficientFields eval_coefficients(const PressureLaw& law, const SpectralField& eps_p);

struct RhsOptions {
  bool advection = true;  // false drops v . grad u (the linearized acoustic system)
  bool dealias = true;
};

// du/dt = -v . grad u - (1/eps) E^{-1} L u
StateU rhs_compressible(const StateU& u, const PressureLaw& law, const RhsOptions& options = {});

struct SolverConfig {
  double c_adv = 0.5;
  double c_ac = 0.5;
  std::optional<double> fixed_dt;
  double end_time = 0.0;
  bool dealias = true;
  bool advection = true;
  // Diagnostics at multiples of this interval and at end_time; 0 means only
  // at the start and the end.
  double diag_interval = 0.0;

  void validate() const;
  RhsOptions rhs_options() const { return {advection, dealias}; }
};

// min(c_adv dx / ||v||_inf, c_ac eps dx sqrt(a_min r_min))
double cfl_dt(const StateU& u, const PressureLaw& law, const SolverConfig& config);

// One classical RK4 step; Hermitian symmetry is re-imposed after each stage.
// Throws NumericalError if the state becomes non-finite.
StateU step(const StateU& u, const PressureLaw& law, const SolverConfig& config, double dt);
StateU step(const StateU& u, const PressureLaw& law, const SolverConfig& config);

// div w0 = 0, curl(r0 w0) = curl(r0 v0) with constant r0 = r(0): the Leray
// projection of v0 with its mean kept.
VectorField init_w0(const VectorField& v0, const PressureLaw& law);

// dv/dt = -P(v . grad v); the constant r0 cancels after projection. Throws
// std::invalid_argument when ||div v||_{L2} > 1e-10.
VectorField rhs_incompressible(const VectorField& v, const PressureLaw& law, bool dealias = true);
VectorField step_incompressible(const VectorField& v, const PressureLaw& law, double dt, bool dealias = true);

// int (a(eps p) p^2 + r(eps p) |v|^2) dx by grid quadrature.
double symmetrizer_energy(const StateU& u, const PressureLaw& law);

struct DiagnosticRow {
  double t = 0.0;
  double tau = 0.0;
  double a_tau = 0.0;                 // A(tau(t)) norm of u^eps
  double m_eps = 0.0;                 // running sup of a_tau over all steps
  double a_delta_vel_err = 0.0;       // A(delta) norm of v^eps - v^inc
  double a_delta_p = 0.0;             // A(delta) norm of p^eps
  double a_delta_err = 0.0;           // A(delta) norm of (p^eps, v^eps - v^inc)
  double l2_p = 0.0;
  double l2_v = 0.0;
  double l2_vel_err = 0.0;            // ||v^eps - v^inc||
  double l2_proj_vel_err = 0.0;       // ||P v^eps - v^inc||
  double energy = 0.0;                // symmetrizer energy of u^eps
  double inc_energy = 0.0;            // int |v^inc|^2
  double l2time_a_delta_vel_err = 0.0;  // (int_0^t a_delta_vel_err^2)^{1/2}, trapezoid per step
  double l2time_a_delta_err = 0.0;
  long steps = 0;
};

struct RunSummary {
  double eps = 0.0;
  long steps = 0;
  double sup_m_eps = 0.0;
  double sup_l2_p = 0.0;  // over every step
  DiagnosticRow initial;
  DiagnosticRow final;
  double energy_drift = 0.0;  // (E(T) - E(0)) / E(0), or E(T) when E(0) = 0
};

struct RunRecord {
  std::vector<DiagnosticRow> rows;
  RunSummary summary;
  StateU final_state;
  VectorField final_incompressible;
};

using DiagnosticObserver = std::function<void(const DiagnosticRow&, const StateU&, const VectorField&)>;

// Advances u^eps and the incompressible reference (started from init_w0) with
// a shared step sequence. The caller is expected to have run
// initial_data_check on u0. delta must lie in (0, tau0].
RunRecord run_pair(const StateU& u0, const PressureLaw& law, const SolverConfig& config, const NormParams& params,
                   double delta, const DiagnosticObserver& observer = {});

}  // namespace mll
