#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "twistbench/scalars.hpp"

namespace tb {

// Finite abelian group C_{n_1} x ... x C_{n_k}. Elements are indices in the
// mixed radix with the first factor least significant, so (C2)^2 lists its
// elements as e, g1, g2, g1*g2.
class FinAbGroup {
 public:
  using Elem = size_t;

  FinAbGroup() = default;
  explicit FinAbGroup(std::vector<int> orders);
  // "C2 x C2", "C4", "1" (trivial group).
  static FinAbGroup parse(const std::string& text);

  const std::vector<int>& orders() const { return orders_; }
  size_t rank() const { return orders_.size(); }
  size_t size() const { return size_; }
  Elem identity() const { return 0; }
  Elem generator(size_t k) const;
  std::vector<int> exponents(Elem g) const;
  Elem from_exponents(const std::vector<int>& e) const;
  Elem mul(Elem a, Elem b) const;
  Elem inv(Elem a) const;
  Elem pow(Elem a, long e) const;
  int order_of(Elem a) const;

  std::string name(Elem g) const;  // "e", "g1", "g1*g2^3"
  Elem parse_element(const std::string& text) const;
  std::string describe() const;
  bool operator==(const FinAbGroup& o) const { return orders_ == o.orders_; }

 private:
  std::vector<int> orders_;
  size_t size_ = 1;
};

// Identification G -> G^dual. chi_a(b) = prod_i zeta_{n_i}^{a_{perm[i]} b_i};
// the identity permutation is the canonical pairing.
struct Duality {
  std::vector<size_t> perm;
  static Duality canonical(const FinAbGroup& g);
  static Duality factor_swap();  // for (C2)^2: chi_{g1^a g2^b}(g1^c g2^d) = (-1)^{ad+bc}
};

// Character value chi_a(b) under the given duality.
Scalar character(const FinAbGroup& g, const Duality& d, FinAbGroup::Elem a, FinAbGroup::Elem b,
                 const TowerPtr& tower);

// Normalised 2-cocycle with root-of-unity values, stored as a full table.
class Cocycle {
 public:
  Cocycle() = default;
  // Validates normalisation and the cocycle identity on all triples.
  static Cocycle verify(const FinAbGroup& g, std::vector<Scalar> table);
  static Cocycle trivial(const FinAbGroup& g, const TowerPtr& tower);

  const FinAbGroup& group() const { return g_; }
  const Scalar& operator()(FinAbGroup::Elem a, FinAbGroup::Elem b) const { return t_[a * g_.size() + b]; }
  const std::vector<Scalar>& table() const { return t_; }
  TowerPtr tower() const;

  Cocycle operator*(const Cocycle& o) const;
  Cocycle inverse() const;
  bool operator==(const Cocycle& o) const { return g_ == o.g_ && t_ == o.t_; }

  // |G| x |G| grid of scalar literals, rows indexed by the first argument.
  std::string to_string() const;

 private:
  FinAbGroup g_;
  std::vector<Scalar> t_;
};

// All triples (g,h,l) where the cocycle identity fails, in lexicographic order.
std::vector<std::array<FinAbGroup::Elem, 3>> cocycle_violations(const FinAbGroup& g,
                                                                 const std::vector<Scalar>& table);

// "klein_mu" on (C2)^2: mu(g1^p g2^q, g1^r g2^s) = (-1)^{ps};
// "heisenberg(n)" on (Cn)^2: mu(g1^p g2^q, g1^r g2^s) = lambda^{qr};
// "trivial:<group>" the constant cocycle.
Cocycle builtin_cocycle(const std::string& name, const TowerPtr& tower);

// Search rho: G -> mu_L with rho(e) = 1 and mu1(g,h) = mu2(g,h) rho(g) rho(h) / rho(gh).
std::optional<std::vector<Scalar>> is_cohomologous(const Cocycle& mu1, const Cocycle& mu2, int L,
                                                   const TowerPtr& tower);
// Does rho witness mu1 ~ mu2 in the sense above?
bool is_coboundary_witness(const Cocycle& mu1, const Cocycle& mu2, const std::vector<Scalar>& rho);
// The coboundary of rho.
Cocycle coboundary(const FinAbGroup& g, const std::vector<Scalar>& rho);

// Invariant factors of H^2(G, k^x) = prod_{i<j} C_{gcd(n_i, n_j)} (trivial factors dropped).
std::vector<int> h2_structure(const FinAbGroup& g);

// An endomorphism of G given by the images of the cyclic generators.
struct GroupMorphism {
  std::vector<FinAbGroup::Elem> generator_images;
  FinAbGroup::Elem apply(const FinAbGroup& g, FinAbGroup::Elem x) const;
};
// Verifies sigma is a well-defined bijective endomorphism; invalid-automorphism otherwise.
void check_automorphism(const FinAbGroup& g, const GroupMorphism& sigma);
// mu^{(sigma^{-1})}(g,h) = mu(sigma^{-1}(g), sigma^{-1}(h)).
Cocycle transport_cocycle(const Cocycle& mu, const GroupMorphism& sigma);
// All automorphisms of G (brute force over generator images).
std::vector<GroupMorphism> automorphisms(const FinAbGroup& g);

}  // namespace tb
