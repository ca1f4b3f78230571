#include "mll/multiindex.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <stdexcept>

namespace mll {

MultiIndex::MultiIndex(std::vector<std::uint32_t> components) : components_(std::move(components)) {}

MultiIndex::MultiIndex(std::initializer_list<int> components) {
  components_.reserve(components.size());
  for (int c : components) {
    if (c < 0) throw std::invalid_argument("multi-index components must be non-negative");
    components_.push_back(static_cast<std::uint32_t>(c));
  }
}

MultiIndex MultiIndex::unit(std::size_t dim, std::size_t axis) {
  if (axis >= dim) throw std::invalid_argument("unit multi-index axis out of range");
  MultiIndex e(dim);
  e.components_[axis] = 1;
  return e;
}

MultiIndex MultiIndex::parse(std::string_view text) {
  std::vector<std::uint32_t> parts;
  while (!text.empty()) {
    const auto comma = text.find(',');
    std::string_view token = text.substr(0, comma);
    while (!token.empty() && token.front() == ' ') token.remove_prefix(1);
    while (!token.empty() && token.back() == ' ') token.remove_suffix(1);
    std::uint32_t value = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (token.empty() || ec != std::errc{} || ptr != token.data() + token.size()) {
      throw std::invalid_argument("malformed multi-index component '" + std::string(token) + "'");
    }
    parts.push_back(value);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  if (parts.empty()) throw std::invalid_argument("empty multi-index");
  return MultiIndex(std::move(parts));
}

unsigned MultiIndex::order() const {
  return std::accumulate(components_.begin(), components_.end(), 0u);
}

Integer MultiIndex::factorial() const {
  Integer result = 1;
  for (auto c : components_) result *= mll::factorial(c);
  return result;
}

bool MultiIndex::leq(const MultiIndex& other) const {
  if (dim() != other.dim()) throw std::invalid_argument("multi-index dimension mismatch");
  for (std::size_t i = 0; i < dim(); ++i) {
    if (components_[i] > other.components_[i]) return false;
  }
  return true;
}

MultiIndex MultiIndex::operator+(const MultiIndex& other) const {
  if (dim() != other.dim()) throw std::invalid_argument("multi-index dimension mismatch");
  MultiIndex sum(*this);
  for (std::size_t i = 0; i < dim(); ++i) sum.components_[i] += other.components_[i];
  return sum;
}

MultiIndex MultiIndex::operator-(const MultiIndex& other) const {
  if (!other.leq(*this)) throw std::invalid_argument("multi-index difference would be negative");
  MultiIndex diff(*this);
  for (std::size_t i = 0; i < dim(); ++i) diff.components_[i] -= other.components_[i];
  return diff;
}

MultiIndex MultiIndex::scaled(std::uint32_t k) const {
  MultiIndex out(*this);
  for (auto& c : out.components_) c *= k;
  return out;
}

std::string MultiIndex::to_string() const {
  std::string s = "(";
  for (std::size_t i = 0; i < dim(); ++i) {
    if (i) s += ',';
    s += std::to_string(components_[i]);
  }
  return s + ")";
}

bool order_lt(const MultiIndex& alpha, const MultiIndex& beta) {
  if (alpha.dim() != beta.dim()) throw std::invalid_argument("multi-index dimension mismatch");
  const unsigned a = alpha.order();
  const unsigned b = beta.order();
  if (a != b) return a < b;
  return std::lexicographical_compare(alpha.components().begin(), alpha.components().end(),
                                      beta.components().begin(), beta.components().end());
}

Integer factorial(unsigned n) {
  Integer result;
  mpz_fac_ui(result.get_mpz_t(), n);
  return result;
}

Integer binomial(unsigned n, unsigned k) {
  if (k > n) return 0;
  Integer result;
  mpz_bin_uiui(result.get_mpz_t(), n, k);
  return result;
}

Integer multinomial(unsigned n, std::span<const unsigned> parts) {
  if (std::accumulate(parts.begin(), parts.end(), 0u) != n) {
    throw std::invalid_argument("multinomial parts do not sum to the total");
  }
  Integer result = factorial(n);
  for (unsigned p : parts) result /= factorial(p);
  return result;
}

Integer multinomial(const MultiIndex& alpha, std::span<const MultiIndex> parts) {
  MultiIndex total(alpha.dim());
  for (const auto& p : parts) total = total + p;
  if (!(total == alpha)) throw std::invalid_argument("multinomial parts do not sum to alpha");
  Integer result = alpha.factorial();
  for (const auto& p : parts) result /= p.factorial();
  return result;
}

Integer binomial(const MultiIndex& alpha, const MultiIndex& beta) {
  const MultiIndex parts[] = {beta, alpha - beta};
  return multinomial(alpha, parts);
}

namespace {

void fill_order(std::size_t axis, unsigned remaining, std::vector<std::uint32_t>& current,
                std::vector<MultiIndex>& out) {
  if (axis + 1 == current.size()) {
    current[axis] = remaining;
    out.emplace_back(current);
    return;
  }
  for (unsigned c = 0; c <= remaining; ++c) {
    current[axis] = c;
    fill_order(axis + 1, remaining - c, current, out);
  }
}

void fill_box(const MultiIndex& bound, std::size_t axis, std::vector<std::uint32_t>& current,
              std::vector<MultiIndex>& out) {
  if (axis == current.size()) {
    out.emplace_back(current);
    return;
  }
  for (std::uint32_t c = 0; c <= bound[axis]; ++c) {
    current[axis] = c;
    fill_box(bound, axis + 1, current, out);
  }
}

}  // namespace

std::vector<MultiIndex> indices_of_order(std::size_t dim, unsigned m) {
  if (dim == 0) throw std::invalid_argument("multi-index dimension must be positive");
  std::vector<MultiIndex> out;
  std::vector<std::uint32_t> current(dim, 0);
  fill_order(0, m, current, out);
  return out;
}

std::vector<MultiIndex> indices_up_to(std::size_t dim, unsigned m) {
  std::vector<MultiIndex> out;
  for (unsigned k = 0; k <= m; ++k) {
    auto level = indices_of_order(dim, k);
    out.insert(out.end(), level.begin(), level.end());
  }
  return out;
}

std::vector<MultiIndex> lower_set(const MultiIndex& beta) {
  std::vector<MultiIndex> out;
  std::vector<std::uint32_t> current(beta.dim(), 0);
  fill_box(beta, 0, current, out);
  std::sort(out.begin(), out.end(), PrecedesOrder{});
  return out;
}

std::string PartitionTuple::to_string() const {
  std::string s = "s=" + std::to_string(length()) + "; k=";
  for (std::size_t l = 0; l < length(); ++l) {
    if (l) s += ',';
    s += std::to_string(multiplicities[l]);
  }
  s += "; lambda=";
  for (std::size_t l = 0; l < length(); ++l) {
    if (l) s += ',';
    s += parts[l].to_string();
  }
  return s;
}

namespace {

// Depth-first over candidate parts in increasing linear order. Each level picks
// the next part strictly after the previous one and a multiplicity for it.
void descend(const std::vector<MultiIndex>& candidates, std::size_t start, unsigned units_left,
             const MultiIndex& rest, PartitionTuple& current, PartitionsByLength& out) {
  if (units_left == 0) {
    if (rest.is_zero()) out[current.length() - 1].push_back(current);
    return;
  }
  const unsigned rest_order = rest.order();
  if (rest_order < units_left) return;
  for (std::size_t c = start; c < candidates.size(); ++c) {
    const MultiIndex& lambda = candidates[c];
    // Every later part has order >= |lambda|.
    if (lambda.order() * units_left > rest_order) break;
    if (!lambda.leq(rest)) continue;
    MultiIndex used = lambda;
    for (unsigned k = 1; k <= units_left && used.leq(rest); ++k, used = used + lambda) {
      current.multiplicities.push_back(k);
      current.parts.push_back(lambda);
      descend(candidates, c + 1, units_left - k, rest - used, current, out);
      current.multiplicities.pop_back();
      current.parts.pop_back();
    }
  }
}

}  // namespace

PartitionsByLength enumerate_partitions(unsigned i, const MultiIndex& beta) {
  const unsigned n = beta.order();
  if (n == 0) throw std::invalid_argument("partition sets require |beta| >= 1");
  if (i == 0) throw std::invalid_argument("partition sets require i >= 1");
  PartitionsByLength out(n);
  if (i > n) return out;

  auto candidates = lower_set(beta);
  candidates.erase(candidates.begin());  // the zero index sorts first
  PartitionTuple current;
  descend(candidates, 0, i, beta, current, out);
  return out;
}

bool is_valid_partition(const PartitionTuple& tuple, unsigned i, const MultiIndex& beta) {
  if (tuple.parts.empty() || tuple.parts.size() != tuple.multiplicities.size()) return false;
  unsigned units = 0;
  MultiIndex total(beta.dim());
  for (std::size_t l = 0; l < tuple.length(); ++l) {
    const auto& lambda = tuple.parts[l];
    if (lambda.dim() != beta.dim()) return false;
    if (tuple.multiplicities[l] == 0) return false;
    if (lambda.is_zero()) return false;
    if (l > 0 && !order_lt(tuple.parts[l - 1], lambda)) return false;
    units += tuple.multiplicities[l];
    total = total + lambda.scaled(tuple.multiplicities[l]);
  }
  return units == i && total == beta;
}

}  // namespace mll
