#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

namespace mll {

using Integer = mpz_class;
using Rational = mpq_class;

// Multi-index alpha in N_0^d. The solver uses d = 2 or 3; the combinatorics
// accept any d >= 1 (d = 1 is the univariate embedding used for h in h o g).
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::size_t dim) : components_(dim, 0) {}
  explicit MultiIndex(std::vector<std::uint32_t> components);
  // Throws std::invalid_argument on a negative component.
  MultiIndex(std::initializer_list<int> components);

  static MultiIndex unit(std::size_t dim, std::size_t axis);
  // Parses "2,1,0".
  static MultiIndex parse(std::string_view text);

  std::size_t dim() const { return components_.size(); }
  std::uint32_t operator[](std::size_t i) const { return components_[i]; }
  std::span<const std::uint32_t> components() const { return components_; }

  // |alpha|
  unsigned order() const;
  bool is_zero() const { return order() == 0; }

  // alpha! = prod alpha_i!
  Integer factorial() const;

  // Componentwise partial order alpha <= beta.
  bool leq(const MultiIndex& other) const;

  MultiIndex operator+(const MultiIndex& other) const;
  // Throws std::invalid_argument unless other <= *this componentwise.
  MultiIndex operator-(const MultiIndex& other) const;
  MultiIndex scaled(std::uint32_t k) const;

  bool operator==(const MultiIndex& other) const = default;

  std::string to_string() const;

 private:
  std::vector<std::uint32_t> components_;
};

// The linear order on multi-indices: lower total order first, then
// lexicographic on the components. Throws std::invalid_argument when the
// dimensions differ.
bool order_lt(const MultiIndex& alpha, const MultiIndex& beta);

struct PrecedesOrder {
  bool operator()(const MultiIndex& a, const MultiIndex& b) const { return order_lt(a, b); }
};

Integer factorial(unsigned n);
Integer binomial(unsigned n, unsigned k);
// n! / prod parts_i!, requires sum(parts) == n.
Integer multinomial(unsigned n, std::span<const unsigned> parts);

// alpha! / prod parts_i! (componentwise). Throws std::invalid_argument unless
// the parts sum to alpha.
Integer multinomial(const MultiIndex& alpha, std::span<const MultiIndex> parts);
// binom(alpha, beta) = alpha! / (beta! (alpha - beta)!), beta <= alpha.
Integer binomial(const MultiIndex& alpha, const MultiIndex& beta);

// All alpha with |alpha| == m, ascending in the linear order.
std::vector<MultiIndex> indices_of_order(std::size_t dim, unsigned m);
// All alpha with |alpha| <= m, ascending in the linear order.
std::vector<MultiIndex> indices_up_to(std::size_t dim, unsigned m);
// All lambda <= beta componentwise (including zero and beta itself),
// ascending in the linear order.
std::vector<MultiIndex> lower_set(const MultiIndex& beta);

// One element (k_1..k_s; lambda_1..lambda_s) of the Faa di Bruno partition set
// P_s(i, beta).
struct PartitionTuple {
  std::vector<unsigned> multiplicities;
  std::vector<MultiIndex> parts;

  std::size_t length() const { return parts.size(); }
  bool operator==(const PartitionTuple&) const = default;
  std::string to_string() const;
};

// Tuples grouped by length: result[s - 1] holds P_s(i, beta) for s = 1..|beta|.
using PartitionsByLength = std::vector<std::vector<PartitionTuple>>;

// Enumerates P_s(i, beta) for every s in 1..|beta|. Within each group the
// tuples are ordered lexicographically in (lambda_1, k_1, lambda_2, k_2, ...)
// under the linear order. i > |beta| yields empty groups. Throws
// std::invalid_argument when |beta| == 0 or i == 0.
PartitionsByLength enumerate_partitions(unsigned i, const MultiIndex& beta);

// Checks the defining constraints of P_s(i, beta) without reference to how the
// tuple was produced: positive multiplicities, nonzero strictly increasing
// parts, sum k_l == i and sum k_l lambda_l == beta.
bool is_valid_partition(const PartitionTuple& tuple, unsigned i, const MultiIndex& beta);

}  // namespace mll
