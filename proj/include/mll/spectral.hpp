#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "mll/multiindex.hpp"

namespace mll {

using Complex = std::complex<double>;

// Periodic grid on [0, 2pi)^d with n points per axis. Coefficients are stored
// in FFT order: axis index j maps to wavenumber j for j <= n/2 and j - n
// otherwise, so the resolved set is {-n/2+1, ..., n/2}^d. Linear indices are
// row-major with the last axis fastest.
class TorusGrid {
 public:
  // Throws std::invalid_argument unless dim is 2 or 3 and n is a power of two
  // with n >= 8.
  TorusGrid(int dim, int n);

  int dim() const { return dim_; }
  int n() const { return n_; }
  std::size_t size() const { return size_; }
  double spacing() const;

  int wavenumber(int j) const { return j <= n_ / 2 ? j : j - n_; }
  int axis_index(int k) const { return k >= 0 ? k : k + n_; }
  // Largest |k_i| kept by the 2/3 rule.
  int dealias_cutoff() const { return n_ / 3; }

  // Wavevector of a linear index; unused trailing entries are zero.
  std::array<int, 3> wavevector(std::size_t index) const;
  // Linear index of a wavevector (each component reduced modulo n).
  std::size_t index_of(std::span<const int> k) const;
  // Linear index of -k for the mode at `index`.
  std::size_t mirror(std::size_t index) const;
  bool retained(std::size_t index) const;

  bool operator==(const TorusGrid&) const = default;

 private:
  int dim_;
  int n_;
  std::size_t size_;
};

// A field on the torus as u(x) = sum_k c(k) e^{i k.x}. Real fields carry
// Hermitian spectra c(-k) = conj(c(k)). Values are immutable once built.
class SpectralField {
 public:
  explicit SpectralField(const TorusGrid& grid);
  SpectralField(const TorusGrid& grid, std::vector<Complex> coefficients);

  // Samples at x_j = 2 pi j / n, same linear layout as the coefficients.
  static SpectralField from_physical(const TorusGrid& grid, std::span<const double> values);
  static SpectralField from_physical(const TorusGrid& grid, std::span<const Complex> values);
  // Single mode amplitude * e^{i k.x}.
  static SpectralField mode(const TorusGrid& grid, std::span<const int> k, Complex amplitude);

  const TorusGrid& grid() const { return grid_; }
  std::span<const Complex> coefficients() const { return coefficients_; }
  Complex coefficient(std::span<const int> k) const;
  Complex mean() const { return coefficients_[0]; }

  // Real part of the grid samples.
  std::vector<double> to_physical() const;
  std::vector<Complex> to_physical_complex() const;

  SpectralField operator+(const SpectralField& other) const;
  SpectralField operator-(const SpectralField& other) const;
  SpectralField operator-() const;
  SpectralField operator*(double scale) const;
  friend SpectralField operator*(double scale, const SpectralField& f) { return f * scale; }

 private:
  TorusGrid grid_;
  std::vector<Complex> coefficients_;
};

using VectorField = std::vector<SpectralField>;

VectorField operator+(const VectorField& a, const VectorField& b);
VectorField operator-(const VectorField& a, const VectorField& b);
VectorField operator*(double scale, const VectorField& a);

// The unknown u = (p, v): pressure variation and d velocity components.
struct StateU {
  SpectralField p;
  VectorField v;
  double eps = 1.0;
  double t = 0.0;

  const TorusGrid& grid() const { return p.grid(); }
  // (p, v_1, ..., v_d)
  std::vector<SpectralField> stacked() const;
};

// Coefficients (i k)^alpha c(k).
SpectralField derivative(const SpectralField& f, const MultiIndex& alpha);
VectorField gradient(const SpectralField& f);
SpectralField divergence(const VectorField& v);
// 2D: one component (d1 v2 - d2 v1); 3D: the usual three components.
VectorField curl(const VectorField& v);

// Zeroes every mode with some |k_i| > n/3.
SpectralField dealias(const SpectralField& f);
// Truncates both factors to the 2/3 band, multiplies pointwise on the grid and
// truncates the product. Throws std::invalid_argument on grid mismatch.
SpectralField multiply_dealiased(const SpectralField& f, const SpectralField& g);

// (c(k) + conj(c(-k))) / 2, the nearest real field.
SpectralField enforce_hermitian(const SpectralField& f);
// max_k |c(k) - conj(c(-k))|
double hermitian_defect(const SpectralField& f);

// v(k) - k (k.v(k)) / |k|^2 for k != 0; the mean mode is unchanged.
VectorField leray_project(const VectorField& v);

// (div v, grad p)
StateU apply_L(const StateU& u);

// L2 over [0, 2pi)^d via Parseval: (2 pi)^d sum |c(k)|^2.
double l2_norm(const SpectralField& f);
double l2_norm(std::span<const SpectralField> fields);
double l2_norm(const StateU& u);
// Grid quadrature (2 pi / n)^d sum |u(x_j)|^2, independent of Parseval.
double physical_l2_norm(const SpectralField& f);
// Re <f, g>_{L2}
double inner_product(const SpectralField& f, const SpectralField& g);
double inner_product(const StateU& a, const StateU& b);
// max_j |u(x_j)|
double sup_norm(const SpectralField& f);

}  // namespace mll
