#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "mll/multiindex.hpp"

namespace mll {

// Raised when a truncated series is asked for data beyond its order.
class TruncationError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Sparse multivariate polynomial with exact rational coefficients. No zero
// coefficient is ever stored.
class Poly {
 public:
  using Terms = std::map<MultiIndex, Rational, PrecedesOrder>;

  explicit Poly(std::size_t dim) : dim_(dim) {}

  static Poly constant(std::size_t dim, const Rational& c);
  static Poly variable(std::size_t dim, std::size_t axis);
  static Poly monomial(const MultiIndex& alpha, const Rational& c);

  std::size_t dim() const { return dim_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  unsigned degree() const;

  Rational coefficient(const MultiIndex& alpha) const;
  void add_term(const MultiIndex& alpha, const Rational& c);

  Rational evaluate(std::span<const Rational> x) const;
  Poly derivative(const MultiIndex& alpha) const;
  // Drops every term of total degree > max_degree.
  Poly truncated(unsigned max_degree) const;

  Poly& operator+=(const Poly& other);
  Poly& operator-=(const Poly& other);
  Poly& operator*=(const Rational& c);
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(Poly a, const Rational& c) { return a *= c; }
  friend Poly operator*(const Poly& a, const Poly& b);

  bool operator==(const Poly& other) const { return dim_ == other.dim_ && terms_ == other.terms_; }

  std::string to_string() const;

 private:
  std::size_t dim_;
  Terms terms_;
};

// phi(x) = sum_{n=0}^{N} a_n x^n, truncated at order N.
class PowerSeries1 {
 public:
  explicit PowerSeries1(std::vector<Rational> coefficients);

  unsigned order() const { return static_cast<unsigned>(coefficients_.size() - 1); }
  // Throws TruncationError for n > order().
  const Rational& coefficient(unsigned n) const;
  std::span<const Rational> coefficients() const { return coefficients_; }

  // The truncated series as a univariate polynomial.
  Poly as_poly() const;

 private:
  std::vector<Rational> coefficients_;
};

// psi(x) = sum_{|beta| <= N} b_beta x^beta in d variables, truncated at order N.
class PowerSeries3 {
 public:
  PowerSeries3(std::size_t dim, unsigned order) : dim_(dim), order_(order) {}

  std::size_t dim() const { return dim_; }
  unsigned order() const { return order_; }

  // Both throw TruncationError when |beta| > order().
  Rational coefficient(const MultiIndex& beta) const;
  void set(const MultiIndex& beta, const Rational& c);

  bool has_zero_constant() const;
  const std::map<MultiIndex, Rational, PrecedesOrder>& coefficients() const { return coefficients_; }
  Poly as_poly() const;

 private:
  std::size_t dim_;
  unsigned order_;
  std::map<MultiIndex, Rational, PrecedesOrder> coefficients_;
};

// Multivariate Faa di Bruno: d^beta (h o g)(x0) from the jet of h at
// y0 = g(x0) (outer_jet[i] = h^{(i)}(y0), i = 0..|beta|) and the partial
// derivatives of g at x0, summed over the partition sets P_s(i, beta).
Rational fdb_from_jets(std::span<const Rational> outer_jet, const Poly& g,
                       std::span<const Rational> x0, const MultiIndex& beta);

// h is a univariate polynomial (dim 1).
Rational fdb_derivative(const Poly& h, const Poly& g, std::span<const Rational> x0,
                        const MultiIndex& beta);

// h is a truncated series expanded about 0, so g(x0) must vanish. Throws
// TruncationError when h.order() < |beta|.
Rational fdb_derivative(const PowerSeries1& h, const Poly& g, std::span<const Rational> x0,
                        const MultiIndex& beta);

// Independent verifier: forms h(g) explicitly and differentiates term by term.
Rational oracle_derivative(const Poly& h, const Poly& g, std::span<const Rational> x0,
                           const MultiIndex& beta);

// Coefficients c_beta of phi(psi(x)) for all |beta| <= order, via
//   c_0 = a_0,
//   c_beta = sum_i sum_s sum_{P_s(i,beta)} (i; k_1..k_s) a_i prod b_{lambda_l}^{k_l}.
// Throws std::invalid_argument if psi has a nonzero constant term and
// TruncationError if phi or psi is truncated below `order`.
PowerSeries3 series_compose(const PowerSeries1& phi, const PowerSeries3& psi, unsigned order);

}  // namespace mll
