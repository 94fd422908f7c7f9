#pragma once

#include <gmpxx.h>

#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace tb {

using Rational = mpq_class;

std::string rational_to_string(const Rational& q);

class FieldTower;
using TowerPtr = std::shared_ptr<const FieldTower>;

// Iterated univariate extension Q = K_0 < K_1 < ... < K_m, with
// K_k = K_{k-1}[s_k] / (p_k(s_k)). Elements of K_k are stored as flat
// rational vectors of length dim(k): block u (of length dim(k-1)) holds the
// coefficient of s_k^u.
class FieldTower {
 public:
  struct Level {
    std::string symbol;
    int degree = 0;
    // Non-leading coefficients c_0..c_{d-1} of the monic defining polynomial,
    // each a flat element of the previous level.
    std::vector<std::vector<Rational>> coeffs;
  };

  static TowerPtr rationals();
  // Each entry is (symbol, defining polynomial in the indeterminate t whose
  // coefficients are scalar expressions over the lower levels).
  static TowerPtr build(const std::vector<std::pair<std::string, std::string>>& spec);

  size_t num_levels() const { return levels_.size(); }
  const Level& level(size_t k) const { return levels_[k - 1]; }  // 1-based
  size_t dim(size_t k) const { return dims_[k]; }                 // dim(0) = 1
  size_t dim() const { return dims_.back(); }
  std::optional<size_t> level_of(const std::string& symbol) const;
  const std::vector<std::pair<std::string, std::string>>& spec() const { return spec_; }
  std::string describe() const;
  bool same_as(const FieldTower& o) const { return spec_ == o.spec_; }

  // Exponent multi-index (one exponent per level) of each flat basis slot.
  std::vector<int> exponents_of(size_t slot) const;

  // Low-level arithmetic on flat vectors of level k.
  void mul(size_t k, const Rational* a, const Rational* b, Rational* out) const;
  std::vector<Rational> inv(size_t k, const Rational* a) const;
  static bool is_zero(size_t n, const Rational* a);

 private:
  FieldTower() = default;
  std::vector<Level> levels_;
  std::vector<size_t> dims_{1};
  std::vector<std::pair<std::string, std::string>> spec_;
};

class FieldElement {
 public:
  FieldElement();                      // zero of Q
  FieldElement(long v);                // NOLINT: rational integer constants
  FieldElement(const Rational& q);     // NOLINT
  FieldElement(TowerPtr t, const Rational& q);
  FieldElement(TowerPtr t, std::vector<Rational> coeffs);

  static FieldElement symbol(TowerPtr t, const std::string& name);
  static FieldElement random(TowerPtr t, std::mt19937_64& rng, int bound = 5);
  // Reduce an arbitrary exponent map (exponents may exceed the level degrees)
  // to canonical form.
  static FieldElement canonicalize(TowerPtr t, const std::map<std::vector<int>, Rational>& raw);
  std::map<std::vector<int>, Rational> to_raw() const;

  const TowerPtr& tower() const { return tower_; }
  const std::vector<Rational>& coeffs() const { return c_; }
  bool is_zero() const;
  bool is_one() const;
  bool is_rational() const;  // lies in the base field
  Rational rational_value() const;  // requires is_rational()

  FieldElement operator+(const FieldElement& o) const;
  FieldElement operator-(const FieldElement& o) const;
  FieldElement operator*(const FieldElement& o) const;
  FieldElement operator/(const FieldElement& o) const;
  FieldElement operator-() const;
  FieldElement& operator+=(const FieldElement& o);
  FieldElement& operator-=(const FieldElement& o);
  FieldElement& operator*=(const FieldElement& o);
  FieldElement inverse() const;
  FieldElement pow(long e) const;

  bool operator==(const FieldElement& o) const;
  bool operator!=(const FieldElement& o) const { return !(*this == o); }

  // Literal form in the scalar grammar, e.g. "3/2*i*r3 - 1/2".
  std::string to_string() const;
  // Same, wrapped in parentheses when it is a sum or starts with a sign.
  std::string to_factor_string() const;
  // Embed into a (structurally larger or equal) tower; Q elements embed anywhere.
  FieldElement in(const TowerPtr& t) const;

 private:
  static TowerPtr common(const FieldElement& a, const FieldElement& b);
  TowerPtr tower_;
  std::vector<Rational> c_;
};

using Scalar = FieldElement;

// The larger of two towers when one extends the other (error otherwise).
TowerPtr join_towers(const TowerPtr& a, const TowerPtr& b);

FieldElement parse_scalar(const std::string& text, const TowerPtr& tower);

// Q for n <= 2, Q(i) for n = 4, otherwise Q(z) with z a root of the n-th
// cyclotomic polynomial.
TowerPtr cyclotomic_tower(int n);

// Primitive n-th root of unity in the tower, or an unsupported-root error
// naming the cyclotomic extension that would be needed.
FieldElement root_of_unity(int n, const TowerPtr& tower);
// Square root of a rational number inside a tower whose quadratic levels
// are of the form t^2 - r with r rational: sqrt(q) = m * prod_{s in S} s
// whenever q / prod_{s in S} r_s = m^2 for a subset S of those levels.
std::optional<FieldElement> rational_sqrt(const Rational& q, const TowerPtr& tower);
// Extend base by t^2 - q for each (symbol, q) whose square root is not
// already available; levels are added in the given order.
TowerPtr adjoin_square_roots(const TowerPtr& base, const std::vector<std::pair<std::string, Rational>>& radicands);
// The element i with i^2 = -1: the tower symbol i when present, otherwise a
// primitive 4th root of unity (error when the tower has none).
FieldElement imaginary_unit(const TowerPtr& tower);
// Multiplicative order of x if x^m = 1 for some 1 <= m <= limit.
std::optional<int> multiplicative_order(const FieldElement& x, int limit);

}  // namespace tb
