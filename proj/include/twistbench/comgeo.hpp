#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "twistbench/groups.hpp"
#include "twistbench/ncalg.hpp"

namespace tb {

enum class MonoOrder { GRevLex, Lex };

using Mono = std::vector<int>;

struct PolyRing {
  std::vector<std::string> vars;
  TowerPtr tower = FieldTower::rationals();
  MonoOrder order = MonoOrder::GRevLex;

  size_t nvars() const { return vars.size(); }
  // Strict "a < b" in the ring's monomial order.
  bool less(const Mono& a, const Mono& b) const;
  std::optional<size_t> index_of(const std::string& name) const;
};
using RingPtr = std::shared_ptr<const PolyRing>;

RingPtr make_ring(std::vector<std::string> vars, TowerPtr tower = FieldTower::rationals(),
                  MonoOrder order = MonoOrder::GRevLex);

// Commutative polynomial; terms sorted strictly descending in the ring order.
class CPoly {
 public:
  using Term = std::pair<Mono, Scalar>;

  CPoly() = default;
  explicit CPoly(RingPtr ring) : ring_(std::move(ring)) {}
  static CPoly constant(RingPtr ring, const Scalar& c);
  static CPoly var(RingPtr ring, size_t k);
  static CPoly monomial(RingPtr ring, Mono m, const Scalar& c);
  // Scalar literals and named constants are read in the ring's tower.
  static CPoly parse(RingPtr ring, const std::string& text,
                     const std::vector<std::pair<std::string, Scalar>>& constants = {});

  const RingPtr& ring() const { return ring_; }
  const std::vector<Term>& terms() const { return t_; }
  bool is_zero() const { return t_.empty(); }
  const Mono& lead_mono() const { return t_.front().first; }
  const Scalar& lead_coeff() const { return t_.front().second; }
  int total_degree() const;
  bool is_constant() const;

  CPoly operator+(const CPoly& o) const;
  CPoly operator-(const CPoly& o) const;
  CPoly operator-() const;
  CPoly operator*(const CPoly& o) const;
  CPoly operator*(const Scalar& s) const;
  CPoly mul_term(const Mono& m, const Scalar& c) const;
  bool operator==(const CPoly& o) const { return t_ == o.t_; }
  bool operator!=(const CPoly& o) const { return !(*this == o); }

  Scalar evaluate(const std::vector<Scalar>& point) const;
  // Substitute variable k by images[k] (polynomials over a possibly different ring).
  CPoly substitute(const std::vector<CPoly>& images, const RingPtr& target) const;
  CPoly in_ring(const RingPtr& r) const;  // same variables, other order
  CPoly monic() const;

  std::string to_string() const;

 private:
  friend class CPolyBuilder;
  RingPtr ring_;
  std::vector<Term> t_;
};

struct CIdeal {
  RingPtr ring;
  std::vector<CPoly> gens;
};

// Reduced, monic Groebner basis (Buchberger with the product and chain criteria).
std::vector<CPoly> groebner_basis(const CIdeal& ideal);
// Remainder of f on division by a Groebner basis.
CPoly reduce(const CPoly& f, const std::vector<CPoly>& basis);
// Every S-pair of the basis reduces to zero.
bool is_groebner_basis(const std::vector<CPoly>& basis);

struct IdealInvariants {
  std::optional<int> dim;    // Krull dimension of R/I; nullopt for the empty variety (-infinity)
  std::optional<int> codim;  // nullopt for the unit ideal
  std::optional<size_t> quotient_dim;  // dim_k R/I when dim = 0
  std::string dim_text() const;
};
IdealInvariants ideal_invariants(const RingPtr& ring, const std::vector<CPoly>& groebner);
IdealInvariants ideal_invariants(const CIdeal& ideal);

// Multilinearisation: x_j x_k -> v_{j,1} v_{k,2}. Variables are ordered
// g0_1, g0_2, g1_1, g1_2, ... and named generator name + "1" / "2".
CIdeal multilinearize(const Presentation& p);

// M(t)_{jk} = sum_i t_i coeff(f_i, x_j x_k) in variables t1..tm.
struct LinearFormMatrix {
  RingPtr ring;
  std::vector<std::vector<CPoly>> entries;  // n x n
};
LinearFormMatrix relation_matrix_t(const Presentation& p);
// M(p)_{ik} = sum_j coeff(f_i, x_j x_k) p_j: rows relations, columns generators;
// the kernel is the phi-image of p.
Matrix relation_matrix_at(const Presentation& p, const std::vector<Scalar>& point);
// The same matrix with the point as symbolic coordinates (ring variables = generators).
std::vector<std::vector<CPoly>> relation_matrix_symbolic(const Presentation& p, const RingPtr& ring);

// k x k minors of a matrix of polynomials.
std::vector<CPoly> minors(const std::vector<std::vector<CPoly>>& m, size_t k);

// Codimension in A^m of the ideal of 3x3 minors of M(t).
int line_scheme_codim(const Presentation& p);

// Projective points, scaled so that the first nonzero coordinate is 1.
struct ProjPoint {
  std::vector<Scalar> coords;
  static ProjPoint make(std::vector<Scalar> coords);  // error when all zero
  bool operator==(const ProjPoint& o) const { return coords == o.coords; }
  std::string to_string() const;
};

struct PointCheck {
  ProjPoint point;
  ProjPoint image;  // p^phi
  size_t rank = 0;  // rank of M(p), n - 1 for a scheme point
  bool fixed = false;
};
// Member of the point scheme when M(p) has a one-dimensional kernel;
// not-a-scheme-point error otherwise.
PointCheck check_point(const Presentation& p, const ProjPoint& point);

// f(p, q) = sum a_{jk} p_j q_k for a quadratic element f.
Scalar bilinear_eval(const NcPoly& f, const std::vector<Scalar>& p, const std::vector<Scalar>& q);

// p^g_i = chi_{h_i}(g)^{-1} p_i for the grades h_i; orbit with duplicates merged.
ProjPoint act_on_point(const ProjPoint& p, const GGrading& grading, FinAbGroup::Elem g);
std::vector<ProjPoint> point_orbit(const ProjPoint& p, const GGrading& grading);

// Chart of P^{n-1} x P^{n-1}: listed multilinear variables set to 1 or 0, and
// optionally the product of some variables set to 1.
struct ChartPlan {
  std::string name;
  std::vector<std::string> ones;
  std::vector<std::string> zeros;
  std::vector<std::string> product_one;
};
struct ChartResult {
  std::string name;
  IdealInvariants invariants;
};
ChartResult run_chart(const Presentation& p, const ChartPlan& plan);

// Zero set of an ideal contains / is contained in a finite point set.
bool vanishes_at(const std::vector<CPoly>& polys, const std::vector<Scalar>& point);
// Is f in the radical of the ideal with the given Groebner basis (f^e reduces to 0 for some e <= max_power)?
bool in_radical(const CPoly& f, const std::vector<CPoly>& groebner, int max_power = 8);

}  // namespace tb
