#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "twistbench/groups.hpp"
#include "twistbench/linalg.hpp"
#include "twistbench/scalars.hpp"

namespace tb {

// A word in the free algebra: one byte per letter holding the generator index.
using Word = std::string;

Word make_word(std::initializer_list<int> letters);
inline int letter(const Word& w, size_t k) { return static_cast<unsigned char>(w[k]); }

// Degree-then-lexicographic comparison on generator indices.
struct WordLess {
  bool operator()(const Word& a, const Word& b) const {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  }
};

// Element of the free algebra over a field tower.
class NcPoly {
 public:
  using Terms = std::map<Word, Scalar, WordLess>;

  NcPoly() = default;
  static NcPoly constant(const Scalar& c);
  static NcPoly gen(int index);
  static NcPoly word(const Word& w, const Scalar& c = Scalar(1));

  const Terms& terms() const { return t_; }
  bool is_zero() const { return t_.empty(); }
  size_t size() const { return t_.size(); }
  Scalar coeff(const Word& w) const;
  void add_term(const Word& w, const Scalar& c);
  // Largest word in the order, and its coefficient.
  const Word& leading_word() const { return t_.rbegin()->first; }
  const Scalar& leading_coeff() const { return t_.rbegin()->second; }
  // Length of the longest word (all letters degree 1).
  int degree() const;
  bool is_homogeneous() const;

  NcPoly operator+(const NcPoly& o) const;
  NcPoly operator-(const NcPoly& o) const;
  NcPoly operator-() const;
  NcPoly operator*(const NcPoly& o) const;
  NcPoly operator*(const Scalar& s) const;
  NcPoly& operator+=(const NcPoly& o);
  NcPoly& operator-=(const NcPoly& o);
  NcPoly pow(long e) const;
  bool operator==(const NcPoly& o) const;
  bool operator!=(const NcPoly& o) const { return !(*this == o); }

  // Substitute generator j by images[j].
  NcPoly substitute(const std::vector<NcPoly>& images) const;
  // Apply a linear change x_j -> sum_i M(i,j) x_i to every letter.
  NcPoly linear_substitute(const Matrix& m) const;

  // Printed in descending word order, e.g. "x0*x1 - x1*x0 - 2*x2*x3".
  std::string to_string(const std::vector<std::string>& names) const;

 private:
  Terms t_;
};

// Relation coefficient vectors in a fixed degree: words of that degree are
// indexed in lexicographic order.
std::vector<Word> all_words(int ngens, int degree);
Vec coefficient_vector(const NcPoly& f, const std::vector<Word>& basis, const TowerPtr& tower);
NcPoly from_coefficients(const Vec& v, const std::vector<Word>& basis);

struct Generator {
  std::string name;
  int degree = 1;
};

// Assignment generator -> group element, with the duality used to read it.
struct GGrading {
  FinAbGroup group;
  Duality duality;
  std::vector<FinAbGroup::Elem> grade;
  FinAbGroup::Elem degree_of(const Word& w) const;
};

// Action of G on the degree-1 space, one matrix per cyclic generator of G.
// Column j of a matrix holds the image of generator j.
struct GradedAction {
  FinAbGroup group;
  std::vector<Matrix> matrices;
  Matrix element_matrix(FinAbGroup::Elem g) const;
};

struct Presentation {
  TowerPtr tower = FieldTower::rationals();
  std::vector<Generator> gens;
  std::vector<NcPoly> relations;
  std::vector<std::pair<std::string, Scalar>> constants;  // named parameters
  std::optional<GGrading> grading;
  std::optional<GradedAction> action;
  std::string cocycle;  // "builtin:<name>" or "table" (see cocycle_table)
  std::vector<Scalar> cocycle_table;

  size_t ngens() const { return gens.size(); }
  std::vector<std::string> names() const;
  std::optional<int> index_of(const std::string& name) const;
  std::optional<Scalar> constant(const std::string& name) const;
  // Parse a relation expression against the generators, constants and tower.
  NcPoly parse(const std::string& text) const;
  std::string show(const NcPoly& f) const { return f.to_string(names()); }
  // Serialise in the presentation file format.
  std::string to_text() const;
  // Checks N-homogeneity and, when graded, G-homogeneity of every relation.
  void validate() const;
};

Presentation parse_presentation(const std::string& text);
Presentation load_presentation(const std::string& path);

// Parse a matrix literal: "diag(a,b,...)", "perm(p0,...)", "perm(...)*diag(...)",
// or "[[a,b],[c,d]]" (rows).
Matrix parse_matrix(const std::string& text, size_t n, const Presentation& ctx);

NcPoly parse_ncpoly(const std::string& text, const Presentation& ctx);

struct InducedGrading {
  Presentation presentation;  // relations in the diagonal basis
  GGrading grading;
  Matrix basis;  // column k = new generator k in terms of the old generators
};
InducedGrading induced_grading(const Presentation& p, const GradedAction& act, const Duality& d,
                               const std::vector<std::string>& new_names = {});

struct EquivarianceReport {
  bool invariant = true;
  std::string witness;  // relation and group generator that leave the span
  std::vector<std::pair<std::vector<Scalar>, NcPoly>> isotypic;  // (eigenvalues per generator, relation)
};
EquivarianceReport check_equivariance(const Presentation& p, const GradedAction& act);

// Substitute x_j -> sum_i M(i,j) x_i in every relation.
Presentation change_basis(const Presentation& p, const Matrix& m);

// Degree-d component of the two-sided ideal generated by the relations, as
// the nonzero rows of an RREF matrix over all_words(ngens, d).
Matrix ideal_piece(const Presentation& p, int degree);

}  // namespace tb
