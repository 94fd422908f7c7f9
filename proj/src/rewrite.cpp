#include "twistbench/rewrite.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "twistbench/errors.hpp"

namespace tb {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(trim(cur));
  return out;
}

// Coefficient vectors of several polynomials over the union of their words.
std::vector<Vec> to_vectors(const std::vector<NcPoly>& fs, const TowerPtr& tower) {
  std::set<Word, WordLess> words;
  for (auto& f : fs)
    for (auto& [w, c] : f.terms()) words.insert(w);
  std::vector<Word> basis(words.begin(), words.end());
  std::vector<Vec> out;
  for (auto& f : fs) out.push_back(coefficient_vector(f, basis, tower));
  return out;
}

}  // namespace

MonomialOrder MonomialOrder::standard(size_t n) {
  MonomialOrder o;
  for (size_t i = 0; i < n; ++i) o.rank.push_back(static_cast<int>(i));
  return o;
}

MonomialOrder MonomialOrder::parse(const std::string& spec, const Presentation& p) {
  std::vector<std::string> names;
  bool descending = false;
  if (spec.find('<') != std::string::npos) {
    names = split(spec, '<');
  } else if (spec.find('>') != std::string::npos) {
    names = split(spec, '>');
    descending = true;
  } else {
    names = split(spec, ',');
  }
  if (descending) std::reverse(names.begin(), names.end());
  if (names.size() != p.ngens()) fail_parse("order '" + spec + "' must list every generator exactly once");
  MonomialOrder o;
  o.rank.assign(p.ngens(), -1);
  for (size_t k = 0; k < names.size(); ++k) {
    auto idx = p.index_of(names[k]);
    if (!idx) fail_parse("order '" + spec + "': unknown generator '" + names[k] + "'");
    if (o.rank[*idx] != -1) fail_parse("order '" + spec + "': generator '" + names[k] + "' repeated");
    o.rank[*idx] = static_cast<int>(k);
  }
  return o;
}

std::string MonomialOrder::describe(const Presentation& p) const {
  std::vector<std::string> by_rank(rank.size());
  for (size_t g = 0; g < rank.size(); ++g) by_rank[rank[g]] = p.gens[g].name;
  std::string out;
  for (size_t k = 0; k < by_rank.size(); ++k) out += (k ? " < " : "") + by_rank[k];
  return out;
}

Word RewriteSystem::to_internal(const Word& w) const {
  Word r = w;
  for (auto& ch : r) ch = static_cast<char>(order_.rank[static_cast<unsigned char>(ch)]);
  return r;
}

Word RewriteSystem::to_external(const Word& w) const {
  Word r = w;
  for (auto& ch : r) ch = static_cast<char>(letter_of_rank_[static_cast<unsigned char>(ch)]);
  return r;
}

NcPoly RewriteSystem::internal(const NcPoly& f) const {
  NcPoly r;
  for (auto& [w, c] : f.terms()) r.add_term(to_internal(w), c);
  return r;
}

NcPoly RewriteSystem::external(const NcPoly& f) const {
  NcPoly r;
  for (auto& [w, c] : f.terms()) r.add_term(to_external(w), c);
  return r;
}

std::optional<std::pair<size_t, size_t>> RewriteSystem::find_lead(const Word& w) const {
  for (int len : rule_lengths_) {
    if (static_cast<size_t>(len) > w.size()) break;
    for (size_t pos = 0; pos + len <= w.size(); ++pos) {
      auto it = lead_index_.find(w.substr(pos, len));
      if (it != lead_index_.end()) return std::make_pair(it->second, pos);
    }
  }
  return std::nullopt;
}

const NcPoly& RewriteSystem::word_nf(const Word& w) const {
  auto it = cache_.find(w);
  if (it != cache_.end()) return it->second;
  NcPoly r;
  if (auto hit = find_lead(w)) {
    auto& [lead, tail] = rules_[hit->first];
    Word pre = w.substr(0, hit->second), post = w.substr(hit->second + lead.size());
    for (auto& [t, c] : tail.terms()) {
      const NcPoly& sub = word_nf(pre + t + post);
      for (auto& [u, cu] : sub.terms()) r.add_term(u, cu * c);
    }
  } else {
    r = NcPoly::word(w);
  }
  return cache_.emplace(w, std::move(r)).first->second;
}

NcPoly RewriteSystem::poly_nf(const NcPoly& f) const {
  NcPoly r;
  for (auto& [w, c] : f.terms()) {
    const NcPoly& sub = word_nf(w);
    for (auto& [u, cu] : sub.terms()) r.add_term(u, cu * c);
  }
  return r;
}

void RewriteSystem::add_rule(NcPoly f) {
  Word lead = f.leading_word();
  NcPoly tail = -f;
  tail.add_term(lead, Scalar(1));
  lead_index_[lead] = rules_.size();
  rules_.emplace_back(lead, std::move(tail));
  int len = static_cast<int>(lead.size());
  if (std::find(rule_lengths_.begin(), rule_lengths_.end(), len) == rule_lengths_.end()) {
    rule_lengths_.push_back(len);
    std::sort(rule_lengths_.begin(), rule_lengths_.end());
  }
}

std::vector<RewriteRule> RewriteSystem::rules() const {
  std::vector<RewriteRule> out;
  for (auto& [lead, tail] : rules_) out.push_back({NcPoly::word(to_external(lead)), external(tail)});
  std::sort(out.begin(), out.end(), [](const RewriteRule& a, const RewriteRule& b) {
    return WordLess()(a.lead.leading_word(), b.lead.leading_word());
  });
  return out;
}

NcPoly RewriteSystem::normal_form(const NcPoly& f) const {
  if (!f.is_zero() && f.degree() > D_)
    fail_pre("degree-exceeds-bound", "degree " + std::to_string(f.degree()) + " exceeds the completion degree " +
                                         std::to_string(D_));
  return external(poly_nf(internal(f)));
}

bool RewriteSystem::is_normal_word(const Word& w) const {
  if (static_cast<int>(w.size()) > D_)
    fail_pre("degree-exceeds-bound", "word length " + std::to_string(w.size()) + " exceeds the completion degree " +
                                         std::to_string(D_));
  return !find_lead(to_internal(w));
}

namespace {

// Depth-first enumeration of words avoiding every lead word; only suffixes
// ending at the new letter need checking.
template <class Visit>
void enumerate_normal(const std::unordered_map<Word, size_t>& leads, const std::vector<int>& lengths, int n,
                      int d, Word& cur, Visit& visit) {
  if (static_cast<int>(cur.size()) == d) {
    visit(cur);
    return;
  }
  for (int a = 0; a < n; ++a) {
    cur.push_back(static_cast<char>(a));
    bool ok = true;
    for (int len : lengths) {
      if (static_cast<size_t>(len) > cur.size()) break;
      if (leads.count(cur.substr(cur.size() - len))) {
        ok = false;
        break;
      }
    }
    if (ok) enumerate_normal(leads, lengths, n, d, cur, visit);
    cur.pop_back();
  }
}

}  // namespace

std::vector<Word> RewriteSystem::normal_words(int d) const {
  if (d > D_)
    fail_pre("degree-exceeds-bound", "degree " + std::to_string(d) + " exceeds the completion degree " +
                                         std::to_string(D_));
  std::vector<Word> out;
  Word cur;
  auto visit = [&](const Word& w) { out.push_back(to_external(w)); };
  enumerate_normal(lead_index_, rule_lengths_, static_cast<int>(p_.ngens()), d, cur, visit);
  std::sort(out.begin(), out.end(), WordLess());
  return out;
}

size_t RewriteSystem::dimension(int d) const {
  if (d > D_)
    fail_pre("degree-exceeds-bound", "degree " + std::to_string(d) + " exceeds the completion degree " +
                                         std::to_string(D_));
  size_t count = 0;
  Word cur;
  auto visit = [&](const Word&) { ++count; };
  enumerate_normal(lead_index_, rule_lengths_, static_cast<int>(p_.ngens()), d, cur, visit);
  return count;
}

RewriteSystem complete_to_degree(const Presentation& p, int D, const MonomialOrder& order) {
  p.validate();
  RewriteSystem r;
  r.p_ = p;
  r.D_ = D;
  r.order_ = order.rank.empty() ? MonomialOrder::standard(p.ngens()) : order;
  if (r.order_.rank.size() != p.ngens()) fail_pre("shape", "monomial order does not match the generators");
  r.letter_of_rank_.assign(p.ngens(), 0);
  for (size_t g = 0; g < p.ngens(); ++g) r.letter_of_rank_[r.order_.rank[g]] = static_cast<int>(g);

  std::map<int, std::vector<NcPoly>> by_degree;
  for (auto& rel : p.relations) {
    if (rel.degree() > D)
      fail_pre("degree-bound", "relation degree " + std::to_string(rel.degree()) + " exceeds D = " + std::to_string(D));
    by_degree[rel.degree()].push_back(r.internal(rel));
  }

  for (int d = 1; d <= D; ++d) {
    std::vector<NcPoly> candidates;
    for (auto& rel : by_degree[d]) candidates.push_back(r.poly_nf(rel));
    // Overlap ambiguities u = a b, v = b c with |a b c| = d.
    size_t nrules = r.rules_.size();
    for (size_t i = 0; i < nrules; ++i) {
      const Word& u = r.rules_[i].first;
      for (size_t j = 0; j < nrules; ++j) {
        const Word& v = r.rules_[j].first;
        int k = static_cast<int>(u.size() + v.size()) - d;
        if (k < 1 || k >= static_cast<int>(std::min(u.size(), v.size()))) continue;
        if (u.compare(u.size() - k, k, v, 0, k) != 0) continue;
        Word a = u.substr(0, u.size() - k), c = v.substr(k);
        NcPoly s = r.rules_[i].second * NcPoly::word(c) - NcPoly::word(a) * r.rules_[j].second;
        candidates.push_back(r.poly_nf(s));
      }
    }

    // Echelon basis keyed by leading word, then back substitution.
    std::map<Word, NcPoly, WordLess> basis;
    for (auto& f : candidates) {
      while (!f.is_zero()) {
        auto it = basis.find(f.leading_word());
        if (it == basis.end()) break;
        f -= it->second * f.leading_coeff();
      }
      if (f.is_zero()) continue;
      f = f * f.leading_coeff().inverse();
      basis.emplace(f.leading_word(), std::move(f));
    }
    for (auto it = basis.begin(); it != basis.end(); ++it) {
      NcPoly& f = it->second;
      std::vector<std::pair<Word, Scalar>> hits;
      for (auto& [w, c] : f.terms())
        if (w != it->first && basis.count(w)) hits.emplace_back(w, c);
      for (auto& [w, c] : hits) f -= basis.at(w) * c;
    }

    for (auto it = r.cache_.begin(); it != r.cache_.end();) {
      if (static_cast<int>(it->first.size()) == d)
        it = r.cache_.erase(it);
      else
        ++it;
    }
    for (auto& [lead, f] : basis) r.add_rule(f);
    if (d == D) r.stabilised_ = basis.empty();
  }
  r.closed_ = true;
  return r;
}

std::vector<size_t> hilbert_function(const RewriteSystem& r, int D) {
  std::vector<size_t> out;
  for (int d = 0; d <= D; ++d) out.push_back(r.dimension(d));
  return out;
}

std::vector<size_t> hilbert_function(const Presentation& p, int D, const MonomialOrder& order) {
  int maxdeg = 1;
  for (auto& rel : p.relations) maxdeg = std::max(maxdeg, rel.degree());
  return hilbert_function(complete_to_degree(p, std::max(D + 1, maxdeg), order), D);
}

ConfluenceAudit audit_confluence(const RewriteSystem& r) {
  ConfluenceAudit audit;
  auto rules = r.rules();
  const auto& names = r.presentation().names();
  for (size_t i = 0; i < rules.size(); ++i) {
    const Word& u = rules[i].lead.leading_word();
    for (size_t j = 0; j < rules.size(); ++j) {
      const Word& v = rules[j].lead.leading_word();
      if (i != j && u.find(v) != std::string::npos) {
        ++audit.failures;
        if (audit.witness.empty()) audit.witness = "inclusion " + rules[j].lead.to_string(names) + " in " +
                                                   rules[i].lead.to_string(names);
      }
      for (size_t k = 1; k < std::min(u.size(), v.size()); ++k) {
        if (static_cast<int>(u.size() + v.size() - k) > r.degree()) continue;
        if (u.compare(u.size() - k, k, v, 0, k) != 0) continue;
        ++audit.overlaps;
        Word a = u.substr(0, u.size() - k), c = v.substr(k);
        NcPoly s = rules[i].tail * NcPoly::word(c) - NcPoly::word(a) * rules[j].tail;
        NcPoly nf = r.normal_form(s);
        if (!nf.is_zero()) {
          ++audit.failures;
          if (audit.witness.empty())
            audit.witness = "overlap " + (NcPoly::word(a) * rules[j].lead).to_string(names) + " leaves " +
                            nf.to_string(names);
        }
      }
    }
  }
  return audit;
}

std::vector<NcPoly> centre_basis(const RewriteSystem& r, int d) {
  if (d + 1 > r.degree())
    fail_pre("degree-exceeds-bound", "centre in degree " + std::to_string(d) + " needs completion to degree " +
                                         std::to_string(d + 1));
  const TowerPtr& tower = r.presentation().tower;
  auto words = r.normal_words(d);
  auto upper = r.normal_words(d + 1);
  std::map<Word, size_t, WordLess> index;
  for (auto& w : upper) index.emplace(w, index.size());
  size_t n = r.presentation().ngens();
  Matrix m(n * upper.size(), words.size(), tower);
  for (size_t k = 0; k < words.size(); ++k) {
    for (size_t i = 0; i < n; ++i) {
      NcPoly x = NcPoly::gen(static_cast<int>(i));
      NcPoly w = NcPoly::word(words[k]);
      NcPoly c = r.normal_form(w * x - x * w);
      for (auto& [u, cu] : c.terms()) m(i * upper.size() + index.at(u), k) = cu.in(tower);
    }
  }
  std::vector<NcPoly> out;
  for (auto& v : m.kernel()) out.push_back(from_coefficients(v, words));
  return out;
}

std::optional<std::vector<NcPoly>> is_normal_element(const NcPoly& z, const RewriteSystem& r) {
  if (z.is_zero()) return std::vector<NcPoly>(r.presentation().ngens());
  if (z.degree() + 1 > r.degree())
    fail_pre("degree-exceeds-bound", "normality of a degree " + std::to_string(z.degree()) +
                                         " element needs completion to degree " + std::to_string(z.degree() + 1));
  size_t n = r.presentation().ngens();
  const TowerPtr& tower = r.presentation().tower;
  std::vector<NcPoly> right;
  for (size_t j = 0; j < n; ++j) right.push_back(r.normal_form(z * NcPoly::gen(static_cast<int>(j))));
  std::vector<NcPoly> out;
  for (size_t i = 0; i < n; ++i) {
    std::vector<NcPoly> all = right;
    all.push_back(r.normal_form(NcPoly::gen(static_cast<int>(i)) * z));
    auto vecs = to_vectors(all, tower);
    Vec target = vecs.back();
    vecs.pop_back();
    auto sol = solve_combination(vecs, target, tower);
    if (!sol) return std::nullopt;
    NcPoly ri;
    for (size_t j = 0; j < n; ++j) ri.add_term(Word(1, static_cast<char>(j)), (*sol)[j]);
    out.push_back(ri);
  }
  return out;
}

bool is_central(const NcPoly& z, const RewriteSystem& r) {
  for (size_t i = 0; i < r.presentation().ngens(); ++i) {
    NcPoly x = NcPoly::gen(static_cast<int>(i));
    if (!r.normal_form(x * z - z * x).is_zero()) return false;
  }
  return true;
}

std::optional<int> nilpotency_index(const NcPoly& z, const RewriteSystem& r, int max_power) {
  NcPoly power = z;
  for (int k = 1; k <= max_power; ++k) {
    if (power.degree() > r.degree()) break;
    power = r.normal_form(power);
    if (power.is_zero()) return k;
    power = power * z;
  }
  return std::nullopt;
}

RegularSequenceProxy regular_sequence_proxy(const Presentation& p, const std::vector<NcPoly>& elements, int D) {
  RegularSequenceProxy out;
  auto base = hilbert_function(p, D);
  Presentation q = p;
  q.grading.reset();
  q.action.reset();
  q.cocycle.clear();
  q.cocycle_table.clear();
  for (auto& z : elements) q.relations.push_back(z);
  out.quotient = hilbert_function(q, D);
  std::vector<long> series(base.begin(), base.end());
  for (auto& z : elements) {
    int e = z.degree();
    for (int n = D; n >= e; --n) series[n] -= series[n - e];
  }
  out.expected = series;
  for (int n = 0; n <= D; ++n)
    if (static_cast<long>(out.quotient[n]) != series[n]) out.holds = false;
  return out;
}

}  // namespace tb
