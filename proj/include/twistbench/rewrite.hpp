#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "twistbench/ncalg.hpp"

namespace tb {

// Degree-then-lex order on words with a chosen generator precedence:
// rank[g] is the position of generator g, larger ranks are larger letters.
struct MonomialOrder {
  std::vector<int> rank;
  static MonomialOrder standard(size_t n);
  // "y<x<z", "z>x>y" or a comma list in ascending order; every generator once.
  static MonomialOrder parse(const std::string& spec, const Presentation& p);
  std::string describe(const Presentation& p) const;  // "x0 < x1 < x2 < x3"
};

struct RewriteRule {
  NcPoly lead;  // the leading word with coefficient 1
  NcPoly tail;  // lead -> tail, every word of tail smaller than lead
};

// Reduction system for a homogeneous presentation, complete on words of
// degree <= D (diamond lemma truncated at D).
class RewriteSystem {
 public:
  const Presentation& presentation() const { return p_; }
  int degree() const { return D_; }
  const MonomialOrder& order() const { return order_; }
  // Every overlap ambiguity of degree <= D was processed.
  bool closed() const { return closed_; }
  // No rule was produced in the top degree D (a hint only: answers are always
  // up to degree D).
  bool stabilised() const { return stabilised_; }

  size_t rule_count() const { return rules_.size(); }
  // Rules in the presentation's own generator indices, sorted by lead word.
  std::vector<RewriteRule> rules() const;

  NcPoly normal_form(const NcPoly& f) const;
  bool is_normal_word(const Word& w) const;
  std::vector<Word> normal_words(int d) const;  // in the presentation's indices, ascending
  size_t dimension(int d) const;

 private:
  friend RewriteSystem complete_to_degree(const Presentation& p, int D, const MonomialOrder& order);

  // Internal words use ranks as letters.
  Word to_internal(const Word& w) const;
  Word to_external(const Word& w) const;
  NcPoly internal(const NcPoly& f) const;
  NcPoly external(const NcPoly& f) const;
  const NcPoly& word_nf(const Word& w) const;
  NcPoly poly_nf(const NcPoly& f) const;
  std::optional<std::pair<size_t, size_t>> find_lead(const Word& w) const;  // (rule, position)
  void add_rule(NcPoly f);  // f monic with leading word normal

  Presentation p_;
  int D_ = 0;
  MonomialOrder order_;
  std::vector<int> letter_of_rank_;
  bool closed_ = false;
  bool stabilised_ = false;
  std::vector<std::pair<Word, NcPoly>> rules_;  // internal lead word -> tail
  std::unordered_map<Word, size_t> lead_index_;
  std::vector<int> rule_lengths_;
  mutable std::unordered_map<Word, NcPoly> cache_;
};

RewriteSystem complete_to_degree(const Presentation& p, int D, const MonomialOrder& order = {});

// dim A_0 ... dim A_D, counted as normal words under completion to D + 1.
std::vector<size_t> hilbert_function(const Presentation& p, int D, const MonomialOrder& order = {});
std::vector<size_t> hilbert_function(const RewriteSystem& r, int D);

struct ConfluenceAudit {
  size_t overlaps = 0;
  size_t failures = 0;
  std::string witness;
};
// Recomputes every overlap ambiguity of total degree <= D and checks that it
// reduces to zero.
ConfluenceAudit audit_confluence(const RewriteSystem& r);

// Basis of the degree-d central elements, as combinations of normal words.
std::vector<NcPoly> centre_basis(const RewriteSystem& r, int d);

// For each generator x_i, some r_i in the degree-1 span with x_i z = z r_i
// modulo the ideal (up to the completion degree); nullopt if none exists.
std::optional<std::vector<NcPoly>> is_normal_element(const NcPoly& z, const RewriteSystem& r);
bool is_central(const NcPoly& z, const RewriteSystem& r);

// Smallest k <= max_power with z^k = 0, if any.
std::optional<int> nilpotency_index(const NcPoly& z, const RewriteSystem& r, int max_power);

// Hilbert proxy for a regular sequence of homogeneous elements: compares
// dim (A/(z_1..z_m))_n with the coefficients of prod_j (1 - t^{deg z_j}) H_A(t).
struct RegularSequenceProxy {
  std::vector<size_t> quotient;
  std::vector<long> expected;
  bool holds = true;
};
RegularSequenceProxy regular_sequence_proxy(const Presentation& p, const std::vector<NcPoly>& elements, int D);

}  // namespace tb
