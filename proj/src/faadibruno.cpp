#include "mll/faadibruno.hpp"

#include <algorithm>

namespace mll {

namespace {

Rational power(const Rational& base, unsigned exponent) {
  Rational result = 1;
  Rational b = base;
  while (exponent) {
    if (exponent & 1u) result *= b;
    exponent >>= 1;
    if (exponent) b *= b;
  }
  return result;
}

// gamma! / (gamma - alpha)!
Integer falling_factorial(const MultiIndex& gamma, const MultiIndex& alpha) {
  Integer result = 1;
  for (std::size_t i = 0; i < gamma.dim(); ++i) {
    for (std::uint32_t j = 0; j < alpha[i]; ++j) result *= gamma[i] - j;
  }
  return result;
}

}  // namespace

Poly Poly::constant(std::size_t dim, const Rational& c) {
  Poly p(dim);
  p.add_term(MultiIndex(dim), c);
  return p;
}

Poly Poly::variable(std::size_t dim, std::size_t axis) {
  return monomial(MultiIndex::unit(dim, axis), 1);
}

Poly Poly::monomial(const MultiIndex& alpha, const Rational& c) {
  Poly p(alpha.dim());
  p.add_term(alpha, c);
  return p;
}

unsigned Poly::degree() const {
  unsigned deg = 0;
  for (const auto& [alpha, c] : terms_) deg = std::max(deg, alpha.order());
  return deg;
}

Rational Poly::coefficient(const MultiIndex& alpha) const {
  auto it = terms_.find(alpha);
  return it == terms_.end() ? Rational(0) : it->second;
}

void Poly::add_term(const MultiIndex& alpha, const Rational& c) {
  if (alpha.dim() != dim_) throw std::invalid_argument("polynomial term dimension mismatch");
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(alpha, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Rational Poly::evaluate(std::span<const Rational> x) const {
  if (x.size() != dim_) throw std::invalid_argument("evaluation point dimension mismatch");
  Rational sum = 0;
  for (const auto& [alpha, c] : terms_) {
    Rational term = c;
    for (std::size_t i = 0; i < dim_; ++i) term *= power(x[i], alpha[i]);
    sum += term;
  }
  return sum;
}

Poly Poly::derivative(const MultiIndex& alpha) const {
  if (alpha.dim() != dim_) throw std::invalid_argument("derivative dimension mismatch");
  Poly out(dim_);
  for (const auto& [gamma, c] : terms_) {
    if (!alpha.leq(gamma)) continue;
    out.add_term(gamma - alpha, c * Rational(falling_factorial(gamma, alpha)));
  }
  return out;
}

Poly Poly::truncated(unsigned max_degree) const {
  Poly out(dim_);
  for (const auto& [alpha, c] : terms_) {
    if (alpha.order() <= max_degree) out.terms_.emplace(alpha, c);
  }
  return out;
}

Poly& Poly::operator+=(const Poly& other) {
  if (other.dim_ != dim_) throw std::invalid_argument("polynomial dimension mismatch");
  for (const auto& [alpha, c] : other.terms_) add_term(alpha, c);
  return *this;
}

Poly& Poly::operator-=(const Poly& other) {
  if (other.dim_ != dim_) throw std::invalid_argument("polynomial dimension mismatch");
  for (const auto& [alpha, c] : other.terms_) add_term(alpha, -c);
  return *this;
}

Poly& Poly::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [alpha, coeff] : terms_) coeff *= c;
  return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
  if (a.dim_ != b.dim_) throw std::invalid_argument("polynomial dimension mismatch");
  Poly out(a.dim_);
  for (const auto& [alpha, ca] : a.terms_) {
    for (const auto& [beta, cb] : b.terms_) out.add_term(alpha + beta, ca * cb);
  }
  return out;
}

std::string Poly::to_string() const {
  if (terms_.empty()) return "0";
  std::string s;
  for (const auto& [alpha, c] : terms_) {
    if (!s.empty()) s += " + ";
    s += c.get_str() + "*x^" + alpha.to_string();
  }
  return s;
}

PowerSeries1::PowerSeries1(std::vector<Rational> coefficients) : coefficients_(std::move(coefficients)) {
  if (coefficients_.empty()) throw std::invalid_argument("power series needs at least a_0");
}

const Rational& PowerSeries1::coefficient(unsigned n) const {
  if (n > order()) {
    throw TruncationError("series coefficient a_" + std::to_string(n) + " requested beyond order " +
                          std::to_string(order()));
  }
  return coefficients_[n];
}

Poly PowerSeries1::as_poly() const {
  Poly p(1);
  for (unsigned n = 0; n < coefficients_.size(); ++n) p.add_term(MultiIndex({static_cast<int>(n)}), coefficients_[n]);
  return p;
}

Rational PowerSeries3::coefficient(const MultiIndex& beta) const {
  if (beta.dim() != dim_) throw std::invalid_argument("series coefficient dimension mismatch");
  if (beta.order() > order_) {
    throw TruncationError("series coefficient for " + beta.to_string() + " requested beyond order " +
                          std::to_string(order_));
  }
  auto it = coefficients_.find(beta);
  return it == coefficients_.end() ? Rational(0) : it->second;
}

void PowerSeries3::set(const MultiIndex& beta, const Rational& c) {
  if (beta.dim() != dim_) throw std::invalid_argument("series coefficient dimension mismatch");
  if (beta.order() > order_) {
    throw TruncationError("series coefficient for " + beta.to_string() + " lies beyond order " +
                          std::to_string(order_));
  }
  if (c == 0) {
    coefficients_.erase(beta);
  } else {
    coefficients_[beta] = c;
  }
}

bool PowerSeries3::has_zero_constant() const { return !coefficients_.contains(MultiIndex(dim_)); }

Poly PowerSeries3::as_poly() const {
  Poly p(dim_);
  for (const auto& [beta, c] : coefficients_) p.add_term(beta, c);
  return p;
}

Rational fdb_from_jets(std::span<const Rational> outer_jet, const Poly& g, std::span<const Rational> x0,
                       const MultiIndex& beta) {
  const unsigned n = beta.order();
  if (n == 0) throw std::invalid_argument("Faa di Bruno needs |beta| >= 1");
  if (beta.dim() != g.dim()) throw std::invalid_argument("beta and g have different dimensions");
  if (outer_jet.size() < n + 1) {
    throw TruncationError("outer function jet has order " + std::to_string(outer_jet.size() - 1) +
                          ", need " + std::to_string(n));
  }

  // d^lambda g(x0) for every lambda <= beta; the partition tuples reuse these.
  std::map<MultiIndex, Rational, PrecedesOrder> inner;
  for (const auto& lambda : lower_set(beta)) {
    if (!lambda.is_zero()) inner.emplace(lambda, g.derivative(lambda).evaluate(x0));
  }

  Rational total = 0;
  for (unsigned i = 1; i <= n; ++i) {
    if (outer_jet[i] == 0) continue;
    Rational sum_over_tuples = 0;
    for (const auto& group : enumerate_partitions(i, beta)) {
      for (const auto& tuple : group) {
        Rational term = 1;
        for (std::size_t l = 0; l < tuple.length(); ++l) {
          const unsigned k = tuple.multiplicities[l];
          const auto& lambda = tuple.parts[l];
          term *= power(inner.at(lambda), k);
          Integer lambda_fact_pow;
          mpz_pow_ui(lambda_fact_pow.get_mpz_t(), lambda.factorial().get_mpz_t(), k);
          term /= Rational(factorial(k) * lambda_fact_pow);
        }
        sum_over_tuples += term;
      }
    }
    total += outer_jet[i] * sum_over_tuples;
  }
  return total * Rational(beta.factorial());
}

Rational fdb_derivative(const Poly& h, const Poly& g, std::span<const Rational> x0, const MultiIndex& beta) {
  if (h.dim() != 1) throw std::invalid_argument("outer function must be univariate");
  const Rational y0 = g.evaluate(x0);
  const Rational y[] = {y0};
  std::vector<Rational> jet(beta.order() + 1);
  for (unsigned i = 0; i < jet.size(); ++i) jet[i] = h.derivative(MultiIndex({static_cast<int>(i)})).evaluate(y);
  return fdb_from_jets(jet, g, x0, beta);
}

Rational fdb_derivative(const PowerSeries1& h, const Poly& g, std::span<const Rational> x0,
                        const MultiIndex& beta) {
  if (g.evaluate(x0) != 0) {
    throw std::invalid_argument("series outer function is expanded about 0 but g(x0) != 0");
  }
  const unsigned n = beta.order();
  if (h.order() < n) {
    throw TruncationError("outer series has order " + std::to_string(h.order()) + ", need " + std::to_string(n));
  }
  std::vector<Rational> jet(n + 1);
  for (unsigned i = 0; i <= n; ++i) jet[i] = h.coefficient(i) * Rational(factorial(i));
  return fdb_from_jets(jet, g, x0, beta);
}

Rational oracle_derivative(const Poly& h, const Poly& g, std::span<const Rational> x0, const MultiIndex& beta) {
  if (h.dim() != 1) throw std::invalid_argument("outer function must be univariate");
  if (beta.dim() != g.dim()) throw std::invalid_argument("beta and g have different dimensions");
  const unsigned deg = h.degree();
  // Horner: h(g) = (...(c_deg g + c_{deg-1}) g + ...) + c_0.
  Poly composed(g.dim());
  for (unsigned n = deg + 1; n-- > 0;) {
    composed = composed * g + Poly::constant(g.dim(), h.coefficient(MultiIndex({static_cast<int>(n)})));
  }
  return composed.derivative(beta).evaluate(x0);
}

PowerSeries3 series_compose(const PowerSeries1& phi, const PowerSeries3& psi, unsigned order) {
  if (!psi.has_zero_constant()) throw std::invalid_argument("inner series must have zero constant term");
  if (phi.order() < order) {
    throw TruncationError("outer series has order " + std::to_string(phi.order()) + ", need " +
                          std::to_string(order));
  }
  if (psi.order() < order) {
    throw TruncationError("inner series has order " + std::to_string(psi.order()) + ", need " +
                          std::to_string(order));
  }

  PowerSeries3 out(psi.dim(), order);
  out.set(MultiIndex(psi.dim()), phi.coefficient(0));
  for (const auto& beta : indices_up_to(psi.dim(), order)) {
    const unsigned n = beta.order();
    if (n == 0) continue;
    Rational c = 0;
    for (unsigned i = 1; i <= n; ++i) {
      const Rational& a = phi.coefficient(i);
      if (a == 0) continue;
      for (const auto& group : enumerate_partitions(i, beta)) {
        for (const auto& tuple : group) {
          Rational term = Rational(multinomial(i, tuple.multiplicities)) * a;
          for (std::size_t l = 0; l < tuple.length(); ++l) {
            term *= power(psi.coefficient(tuple.parts[l]), tuple.multiplicities[l]);
          }
          c += term;
        }
      }
    }
    out.set(beta, c);
  }
  return out;
}

}  // namespace mll
