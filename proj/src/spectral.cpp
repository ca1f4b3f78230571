#include "mll/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "fft.hpp"

namespace mll {

namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

void require_same_grid(const SpectralField& a, const SpectralField& b) {
  if (!(a.grid() == b.grid())) throw std::invalid_argument("fields live on different grids");
}

void require_dim(const VectorField& v) {
  if (v.empty() || static_cast<int>(v.size()) != v.front().grid().dim()) {
    throw std::invalid_argument("vector field needs one component per dimension");
  }
  for (const auto& c : v) require_same_grid(c, v.front());
}

Complex i_power(unsigned m) {
  switch (m % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

double volume(const TorusGrid& grid) { return std::pow(2.0 * std::numbers::pi, grid.dim()); }

}  // namespace

TorusGrid::TorusGrid(int dim, int n) : dim_(dim), n_(n), size_(1) {
  if (dim != 2 && dim != 3) throw std::invalid_argument("torus dimension must be 2 or 3");
  if (!is_power_of_two(n) || n < 8) throw std::invalid_argument("grid size must be a power of two >= 8");
  for (int i = 0; i < dim; ++i) size_ *= static_cast<std::size_t>(n);
}

double TorusGrid::spacing() const { return 2.0 * std::numbers::pi / n_; }

std::array<int, 3> TorusGrid::wavevector(std::size_t index) const {
  std::array<int, 3> k{0, 0, 0};
  for (int axis = dim_ - 1; axis >= 0; --axis) {
    k[axis] = wavenumber(static_cast<int>(index % static_cast<std::size_t>(n_)));
    index /= static_cast<std::size_t>(n_);
  }
  return k;
}

std::size_t TorusGrid::index_of(std::span<const int> k) const {
  if (static_cast<int>(k.size()) < dim_) throw std::invalid_argument("wavevector has too few components");
  std::size_t index = 0;
  for (int axis = 0; axis < dim_; ++axis) {
    const int j = ((k[axis] % n_) + n_) % n_;
    index = index * static_cast<std::size_t>(n_) + static_cast<std::size_t>(j);
  }
  return index;
}

std::size_t TorusGrid::mirror(std::size_t index) const {
  auto k = wavevector(index);
  for (auto& c : k) c = -c;
  return index_of(k);
}

bool TorusGrid::retained(std::size_t index) const {
  const auto k = wavevector(index);
  const int cutoff = dealias_cutoff();
  for (int axis = 0; axis < dim_; ++axis) {
    if (std::abs(k[axis]) > cutoff) return false;
  }
  return true;
}

SpectralField::SpectralField(const TorusGrid& grid) : grid_(grid), coefficients_(grid.size()) {}

SpectralField::SpectralField(const TorusGrid& grid, std::vector<Complex> coefficients)
    : grid_(grid), coefficients_(std::move(coefficients)) {
  if (coefficients_.size() != grid_.size()) throw std::invalid_argument("coefficient count does not match grid");
}

SpectralField SpectralField::from_physical(const TorusGrid& grid, std::span<const double> values) {
  std::vector<Complex> samples(values.begin(), values.end());
  return from_physical(grid, std::span<const Complex>(samples));
}

SpectralField SpectralField::from_physical(const TorusGrid& grid, std::span<const Complex> values) {
  std::vector<Complex> coefficients(grid.size());
  detail::forward_transform(grid, values, coefficients);
  return SpectralField(grid, std::move(coefficients));
}

SpectralField SpectralField::mode(const TorusGrid& grid, std::span<const int> k, Complex amplitude) {
  std::vector<Complex> coefficients(grid.size());
  coefficients[grid.index_of(k)] = amplitude;
  return SpectralField(grid, std::move(coefficients));
}

Complex SpectralField::coefficient(std::span<const int> k) const { return coefficients_[grid_.index_of(k)]; }

std::vector<Complex> SpectralField::to_physical_complex() const {
  std::vector<Complex> samples(grid_.size());
  detail::inverse_transform(grid_, coefficients_, samples);
  return samples;
}

std::vector<double> SpectralField::to_physical() const {
  const auto samples = to_physical_complex();
  std::vector<double> values(samples.size());
  std::transform(samples.begin(), samples.end(), values.begin(), [](Complex c) { return c.real(); });
  return values;
}

SpectralField SpectralField::operator+(const SpectralField& other) const {
  require_same_grid(*this, other);
  std::vector<Complex> out(coefficients_);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += other.coefficients_[i];
  return SpectralField(grid_, std::move(out));
}

SpectralField SpectralField::operator-(const SpectralField& other) const {
  require_same_grid(*this, other);
  std::vector<Complex> out(coefficients_);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= other.coefficients_[i];
  return SpectralField(grid_, std::move(out));
}

SpectralField SpectralField::operator-() const { return *this * -1.0; }

SpectralField SpectralField::operator*(double scale) const {
  std::vector<Complex> out(coefficients_);
  for (auto& c : out) c *= scale;
  return SpectralField(grid_, std::move(out));
}

VectorField operator+(const VectorField& a, const VectorField& b) {
  if (a.size() != b.size()) throw std::invalid_argument("vector fields differ in length");
  VectorField out;
  out.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(a[i] + b[i]);
  return out;
}

VectorField operator-(const VectorField& a, const VectorField& b) {
  if (a.size() != b.size()) throw std::invalid_argument("vector fields differ in length");
  VectorField out;
  out.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(a[i] - b[i]);
  return out;
}

VectorField operator*(double scale, const VectorField& a) {
  VectorField out;
  out.reserve(a.size());
  for (const auto& c : a) out.push_back(c * scale);
  return out;
}

std::vector<SpectralField> StateU::stacked() const {
  std::vector<SpectralField> fields;
  fields.reserve(v.size() + 1);
  fields.push_back(p);
  fields.insert(fields.end(), v.begin(), v.end());
  return fields;
}

SpectralField derivative(const SpectralField& f, const MultiIndex& alpha) {
  const auto& grid = f.grid();
  if (static_cast<int>(alpha.dim()) != grid.dim()) throw std::invalid_argument("derivative order dimension mismatch");
  const Complex unit = i_power(alpha.order());
  const auto in = f.coefficients();
  std::vector<Complex> out(in.size());
  for (std::size_t idx = 0; idx < in.size(); ++idx) {
    if (in[idx] == Complex{}) continue;
    const auto k = grid.wavevector(idx);
    double factor = 1.0;
    for (int axis = 0; axis < grid.dim(); ++axis) {
      for (std::uint32_t e = 0; e < alpha[axis]; ++e) factor *= k[axis];
    }
    out[idx] = in[idx] * unit * factor;
  }
  return SpectralField(grid, std::move(out));
}

VectorField gradient(const SpectralField& f) {
  VectorField out;
  const int d = f.grid().dim();
  for (int axis = 0; axis < d; ++axis) out.push_back(derivative(f, MultiIndex::unit(d, axis)));
  return out;
}

SpectralField divergence(const VectorField& v) {
  require_dim(v);
  const int d = static_cast<int>(v.size());
  SpectralField out = derivative(v[0], MultiIndex::unit(d, 0));
  for (int axis = 1; axis < d; ++axis) out = out + derivative(v[axis], MultiIndex::unit(d, axis));
  return out;
}

VectorField curl(const VectorField& v) {
  require_dim(v);
  const int d = static_cast<int>(v.size());
  auto D = [d](const SpectralField& f, int axis) { return derivative(f, MultiIndex::unit(d, axis)); };
  if (d == 2) return {D(v[1], 0) - D(v[0], 1)};
  return {D(v[2], 1) - D(v[1], 2), D(v[0], 2) - D(v[2], 0), D(v[1], 0) - D(v[0], 1)};
}

SpectralField dealias(const SpectralField& f) {
  const auto& grid = f.grid();
  std::vector<Complex> out(f.coefficients().begin(), f.coefficients().end());
  for (std::size_t idx = 0; idx < out.size(); ++idx) {
    if (!grid.retained(idx)) out[idx] = 0.0;
  }
  return SpectralField(grid, std::move(out));
}

SpectralField multiply_dealiased(const SpectralField& f, const SpectralField& g) {
  require_same_grid(f, g);
  auto a = dealias(f).to_physical_complex();
  const auto b = dealias(g).to_physical_complex();
  for (std::size_t i = 0; i < a.size(); ++i) a[i] *= b[i];
  return dealias(SpectralField::from_physical(f.grid(), std::span<const Complex>(a)));
}

SpectralField enforce_hermitian(const SpectralField& f) {
  const auto& grid = f.grid();
  const auto in = f.coefficients();
  std::vector<Complex> out(in.size());
  for (std::size_t idx = 0; idx < in.size(); ++idx) out[idx] = 0.5 * (in[idx] + std::conj(in[grid.mirror(idx)]));
  return SpectralField(grid, std::move(out));
}

double hermitian_defect(const SpectralField& f) {
  const auto& grid = f.grid();
  const auto c = f.coefficients();
  double worst = 0.0;
  for (std::size_t idx = 0; idx < c.size(); ++idx) worst = std::max(worst, std::abs(c[idx] - std::conj(c[grid.mirror(idx)])));
  return worst;
}

VectorField leray_project(const VectorField& v) {
  require_dim(v);
  const auto& grid = v.front().grid();
  const int d = grid.dim();
  std::vector<std::vector<Complex>> out;
  for (const auto& c : v) out.emplace_back(c.coefficients().begin(), c.coefficients().end());
  for (std::size_t idx = 1; idx < grid.size(); ++idx) {
    const auto k = grid.wavevector(idx);
    double k2 = 0.0;
    Complex k_dot_v = 0.0;
    for (int axis = 0; axis < d; ++axis) {
      k2 += static_cast<double>(k[axis]) * k[axis];
      k_dot_v += static_cast<double>(k[axis]) * out[axis][idx];
    }
    for (int axis = 0; axis < d; ++axis) out[axis][idx] -= static_cast<double>(k[axis]) * k_dot_v / k2;
  }
  VectorField projected;
  for (auto& c : out) projected.emplace_back(grid, std::move(c));
  return projected;
}

StateU apply_L(const StateU& u) {
  return StateU{divergence(u.v), gradient(u.p), u.eps, u.t};
}

double l2_norm(const SpectralField& f) {
  double sum = 0.0;
  for (const auto& c : f.coefficients()) sum += std::norm(c);
  return std::sqrt(volume(f.grid()) * sum);
}

double l2_norm(std::span<const SpectralField> fields) {
  double sum = 0.0;
  for (const auto& f : fields) {
    const double n = l2_norm(f);
    sum += n * n;
  }
  return std::sqrt(sum);
}

double l2_norm(const StateU& u) {
  const auto fields = u.stacked();
  return l2_norm(std::span<const SpectralField>(fields));
}

double physical_l2_norm(const SpectralField& f) {
  const auto samples = f.to_physical_complex();
  double sum = 0.0;
  for (const auto& s : samples) sum += std::norm(s);
  return std::sqrt(sum * std::pow(f.grid().spacing(), f.grid().dim()));
}

double inner_product(const SpectralField& f, const SpectralField& g) {
  require_same_grid(f, g);
  const auto a = f.coefficients();
  const auto b = g.coefficients();
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += (a[i] * std::conj(b[i])).real();
  return volume(f.grid()) * sum;
}

double inner_product(const StateU& a, const StateU& b) {
  if (a.v.size() != b.v.size()) throw std::invalid_argument("states differ in dimension");
  double sum = inner_product(a.p, b.p);
  for (std::size_t i = 0; i < a.v.size(); ++i) sum += inner_product(a.v[i], b.v[i]);
  return sum;
}

double sup_norm(const SpectralField& f) {
  double worst = 0.0;
  for (const auto& s : f.to_physical_complex()) worst = std::max(worst, std::abs(s));
  return worst;
}

}  // namespace mll
