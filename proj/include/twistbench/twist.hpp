#pragma once

#include <optional>
#include <string>
#include <vector>

#include "twistbench/groups.hpp"
#include "twistbench/linalg.hpp"
#include "twistbench/ncalg.hpp"

namespace tb {

// c_w = prod_{k=1}^{m-1} mu(g_{i1} ... g_{ik}, g_{i(k+1)}), accumulated left to right.
Scalar accumulation_factor(const Word& w, const GGrading& grading, const Cocycle& mu);
// The same product taken with an arbitrary binary bracketing given by split
// points (used to confirm bracketing independence).
Scalar bracketed_factor(const Word& w, const GGrading& grading, const Cocycle& mu, const std::vector<int>& splits);

struct TwistRow {
  NcPoly before, after;
  std::vector<std::pair<Word, Scalar>> factors;  // c_w per word of the source relation
};

// The cocycle named by a presentation's [cocycle] section.
Cocycle presentation_cocycle(const Presentation& p);

// Rewrites each relation sum a_w w(x) as sum a_w c_w^{-1} w(v). Generators
// named x<k>, w<k> or z<k> are renamed v<k> unless names are given.
Presentation cocycle_twist(const Presentation& p, const Cocycle& mu, std::vector<TwistRow>* rows = nullptr,
                           const std::vector<std::string>& new_names = {});

// kG_mu with basis G and g.h = mu(g,h) gh.
struct TwistedGroupAlgebra {
  FinAbGroup group;
  Cocycle mu;
  // Product of basis elements: (coefficient, element).
  std::pair<Scalar, FinAbGroup::Elem> product(FinAbGroup::Elem g, FinAbGroup::Elem h) const;
  Vec multiply(const Vec& a, const Vec& b) const;
  bool associative() const;
  std::string table() const;  // rows "g | ..." in group order
};
TwistedGroupAlgebra twisted_group_algebra(const FinAbGroup& g, const Cocycle& mu);

struct MatrixModelReport {
  bool multiplicative = true;
  bool independent = true;
  bool equivariant = true;  // only meaningful when conjugators were supplied
  std::string witness;
  bool ok() const { return multiplicative && independent && equivariant; }
};
// images[g] is the candidate image of basis element g. When conjugators are
// supplied (one per cyclic generator h_k of G), also checks
// C_k^{-1} images[g] C_k = chi_g(h_k) images[g].
MatrixModelReport matrix_model_check(const TwistedGroupAlgebra& T, const std::vector<Matrix>& images,
                                     const std::vector<Matrix>& conjugators = {},
                                     const std::optional<Duality>& duality = std::nullopt);

struct ZhangBridgeReport {
  InducedGrading graded;           // source in the phi-eigenbasis, graded by (C_n)^2
  Presentation cocycle_twisted;    // cocycle twist by heisenberg(n)
  Presentation zhang_twisted;      // Zhang twist by phi in the same basis
  size_t pairs_checked = 0;
  bool agree = true;
  bool presentations_match = true;
  std::string witness;
};
// Zhang twist of the N-grading by a graded automorphism phi (matrix on the
// degree-1 space): relation sum a_w w becomes sum a_w prod_k phi^{-k}(x_{i_k}).
Presentation zhang_twist(const Presentation& p, const Matrix& phi);
ZhangBridgeReport zhang_as_cocycle(const Presentation& p, const Matrix& phi, int n, int D);

struct SpanCertificate {
  bool equal = true;
  int degree = -1;         // first degree where the spans differ
  std::string separating;  // a relation of one side outside the other's ideal piece
};
SpanCertificate relation_span_equal(const Presentation& a, const Presentation& b, int d);

}  // namespace tb
