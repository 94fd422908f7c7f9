#include "twistbench/twist.hpp"

#include <functional>

#include "twistbench/errors.hpp"

namespace tb {

Scalar accumulation_factor(const Word& w, const GGrading& grading, const Cocycle& mu) {
  const FinAbGroup& G = grading.group;
  Scalar c(1);
  if (w.empty()) return c;
  FinAbGroup::Elem acc = grading.grade.at(letter(w, 0));
  for (size_t k = 1; k < w.size(); ++k) {
    FinAbGroup::Elem next = grading.grade.at(letter(w, k));
    c *= mu(acc, next);
    acc = G.mul(acc, next);
  }
  return c;
}

Scalar bracketed_factor(const Word& w, const GGrading& grading, const Cocycle& mu, const std::vector<int>& splits) {
  // splits lists, in pre-order, the split position of each internal node.
  size_t pos = 0;
  const FinAbGroup& G = grading.group;
  std::function<std::pair<Scalar, FinAbGroup::Elem>(size_t, size_t)> rec = [&](size_t lo, size_t hi) {
    if (hi - lo == 1) return std::make_pair(Scalar(1), grading.grade.at(letter(w, lo)));
    size_t mid = lo + 1 + static_cast<size_t>(splits.at(pos++)) % (hi - lo - 1);
    auto [cl, gl] = rec(lo, mid);
    auto [cr, gr] = rec(mid, hi);
    return std::make_pair(cl * cr * mu(gl, gr), G.mul(gl, gr));
  };
  if (w.empty()) return Scalar(1);
  return rec(0, w.size()).first;
}

namespace {

std::string default_twist_name(const std::string& name) {
  if (name.size() >= 2 && (name[0] == 'x' || name[0] == 'w' || name[0] == 'z')) {
    bool digits = true;
    for (size_t k = 1; k < name.size(); ++k) digits &= std::isdigit(static_cast<unsigned char>(name[k])) != 0;
    if (digits) return "v" + name.substr(1);
  }
  return name;
}

}  // namespace

Cocycle presentation_cocycle(const Presentation& p) {
  if (p.cocycle.empty()) fail_pre("missing-cocycle", "presentation has no [cocycle] section");
  if (p.cocycle == "table") {
    const FinAbGroup* g = p.grading ? &p.grading->group : p.action ? &p.action->group : nullptr;
    if (!g) fail_pre("missing-grading", "a cocycle table needs a [group] section");
    return Cocycle::verify(*g, p.cocycle_table);
  }
  return builtin_cocycle(p.cocycle.substr(p.cocycle.find(':') + 1), p.tower);
}

Presentation cocycle_twist(const Presentation& p, const Cocycle& mu, std::vector<TwistRow>* rows,
                           const std::vector<std::string>& new_names) {
  if (!p.grading) fail_pre("missing-grading", "cocycle twist needs a G-grading on the generators");
  if (!(p.grading->group == mu.group()))
    fail_pre("group-mismatch", "cocycle is on " + mu.group().describe() + " but the grading uses " +
                                   p.grading->group.describe());
  p.validate();
  Presentation q = p;
  q.tower = join_towers(p.tower, mu.tower());
  for (size_t k = 0; k < q.gens.size(); ++k)
    q.gens[k].name = k < new_names.size() ? new_names[k] : default_twist_name(p.gens[k].name);
  q.relations.clear();
  q.action.reset();
  q.cocycle.clear();
  q.cocycle_table.clear();
  for (auto& r : p.relations) {
    TwistRow row;
    row.before = r;
    NcPoly out;
    for (auto& [w, a] : r.terms()) {
      Scalar c = accumulation_factor(w, *p.grading, mu);
      row.factors.emplace_back(w, c);
      out.add_term(w, a / c);
    }
    row.after = out;
    q.relations.push_back(out);
    if (rows) rows->push_back(row);
  }
  return q;
}

std::pair<Scalar, FinAbGroup::Elem> TwistedGroupAlgebra::product(FinAbGroup::Elem g, FinAbGroup::Elem h) const {
  return {mu(g, h), group.mul(g, h)};
}

Vec TwistedGroupAlgebra::multiply(const Vec& a, const Vec& b) const {
  Vec out(group.size(), Scalar(0));
  for (size_t g = 0; g < group.size(); ++g) {
    if (a[g].is_zero()) continue;
    for (size_t h = 0; h < group.size(); ++h) {
      if (b[h].is_zero()) continue;
      auto [c, gh] = product(g, h);
      out[gh] += a[g] * b[h] * c;
    }
  }
  return out;
}

bool TwistedGroupAlgebra::associative() const {
  for (size_t a = 0; a < group.size(); ++a)
    for (size_t b = 0; b < group.size(); ++b)
      for (size_t c = 0; c < group.size(); ++c) {
        auto [c1, ab] = product(a, b);
        auto [c2, ab_c] = product(ab, c);
        auto [c3, bc] = product(b, c);
        auto [c4, a_bc] = product(a, bc);
        if (ab_c != a_bc || c1 * c2 != c3 * c4) return false;
      }
  return true;
}

std::string TwistedGroupAlgebra::table() const {
  std::string s;
  for (size_t g = 0; g < group.size(); ++g) {
    s += group.name(g) + " |";
    for (size_t h = 0; h < group.size(); ++h) {
      auto [c, gh] = product(g, h);
      std::string name = group.name(gh);
      if (c.is_one())
        s += " " + name;
      else if (c == Scalar(-1))
        s += " -" + name;
      else
        s += " " + c.to_factor_string() + "*" + name;
    }
    s += "\n";
  }
  return s;
}

TwistedGroupAlgebra twisted_group_algebra(const FinAbGroup& g, const Cocycle& mu) {
  if (!(g == mu.group())) fail_pre("group-mismatch", "cocycle lives on a different group");
  TwistedGroupAlgebra t{g, mu};
  if (!t.associative()) fail_internal("non-associative", "twisted group algebra failed associativity");
  return t;
}

MatrixModelReport matrix_model_check(const TwistedGroupAlgebra& T, const std::vector<Matrix>& images,
                                     const std::vector<Matrix>& conjugators, const std::optional<Duality>& duality) {
  MatrixModelReport rep;
  const FinAbGroup& G = T.group;
  if (images.size() != G.size()) fail_pre("shape", "need one image per group element");
  size_t n = images[0].rows();
  for (auto& m : images)
    if (m.rows() != n || m.cols() != n) fail_pre("shape", "images must be square matrices of equal size");
  for (size_t g = 0; g < G.size() && rep.multiplicative; ++g)
    for (size_t h = 0; h < G.size(); ++h) {
      auto [c, gh] = T.product(g, h);
      if (images[g] * images[h] != images[gh].scaled(c)) {
        rep.multiplicative = false;
        rep.witness = "(" + G.name(g) + "," + G.name(h) + ")";
        break;
      }
    }
  std::vector<Vec> flat;
  TowerPtr t = T.mu.tower();
  for (auto& m : images) {
    Vec v;
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j) v.push_back(m(i, j));
    flat.push_back(v);
  }
  if (vector_rank(flat, t) != G.size()) {
    rep.independent = false;
    if (rep.witness.empty()) rep.witness = "images are linearly dependent";
  }
  if (!conjugators.empty()) {
    Duality d = duality ? *duality : Duality::canonical(G);
    for (size_t k = 0; k < conjugators.size() && rep.equivariant; ++k) {
      auto inv = conjugators[k].inverse();
      if (!inv) fail_pre("singular-matrix", "conjugating matrix is singular");
      for (size_t g = 0; g < G.size(); ++g) {
        Scalar chi = character(G, d, g, G.generator(k), t);
        if (*inv * images[g] * conjugators[k] != images[g].scaled(chi)) {
          rep.equivariant = false;
          if (rep.witness.empty()) rep.witness = "image of " + G.name(g) + " is not in the isotypic component";
          break;
        }
      }
    }
  }
  return rep;
}

Presentation zhang_twist(const Presentation& p, const Matrix& phi) {
  auto inv = phi.inverse();
  if (!inv) fail_pre("singular-matrix", "Zhang twist needs an invertible automorphism");
  Presentation q = p;
  q.tower = join_towers(p.tower, phi.tower());
  q.relations.clear();
  q.grading.reset();
  q.action.reset();
  int maxdeg = 0;
  for (auto& r : p.relations) maxdeg = std::max(maxdeg, r.degree());
  std::vector<Matrix> powers{Matrix::identity(p.ngens(), q.tower)};
  for (int k = 1; k < maxdeg; ++k) powers.push_back(powers.back() * *inv);
  for (auto& r : p.relations) {
    NcPoly out;
    for (auto& [w, a] : r.terms()) {
      NcPoly term = NcPoly::constant(a);
      for (size_t k = 0; k < w.size(); ++k)
        term = term * NcPoly::gen(letter(w, k)).linear_substitute(powers[k]);
      out += term;
    }
    q.relations.push_back(out);
  }
  return q;
}

ZhangBridgeReport zhang_as_cocycle(const Presentation& p, const Matrix& phi, int n, int D) {
  ZhangBridgeReport rep;
  TowerPtr t = join_towers(p.tower, phi.tower());
  if (phi.pow(n) != Matrix::identity(p.ngens(), t))
    fail_pre("order-mismatch", "phi^" + std::to_string(n) + " is not the identity on generators");
  Scalar zeta = root_of_unity(n, t);
  GradedAction act;
  act.group = FinAbGroup({n, n});
  act.matrices = {phi, Matrix::identity(p.ngens(), t).scaled(zeta)};
  Duality d = Duality::canonical(act.group);
  rep.graded = induced_grading(p, act, d);
  const Presentation& src = rep.graded.presentation;
  Cocycle mu = builtin_cocycle("heisenberg(" + std::to_string(n) + ")", t);
  // phi in the eigenbasis: B^{-1} phi B.
  Matrix phi_diag = *rep.graded.basis.inverse() * phi * rep.graded.basis;
  const GGrading& gr = rep.graded.grading;
  int ng = static_cast<int>(p.ngens());
  for (int total = 2; total <= D && rep.agree; ++total)
    for (int da = 1; da < total && rep.agree; ++da) {
      auto as = all_words(ng, da), bs = all_words(ng, total - da);
      Matrix phik = phi_diag.pow(da);
      for (auto& a : as) {
        for (auto& b : bs) {
          NcPoly zhang = NcPoly::word(a) * NcPoly::word(b).linear_substitute(phik);
          NcPoly cocyc = NcPoly::word(a + b, mu(gr.degree_of(a), gr.degree_of(b)));
          ++rep.pairs_checked;
          if (zhang != cocyc) {
            rep.agree = false;
            rep.witness = "pair (" + src.show(NcPoly::word(a)) + ", " + src.show(NcPoly::word(b)) + ")";
            break;
          }
        }
        if (!rep.agree) break;
      }
    }
  rep.cocycle_twisted = cocycle_twist(src, mu, nullptr, src.names());
  rep.zhang_twisted = zhang_twist(src, phi_diag);
  int maxdeg = 0;
  for (auto& r : src.relations) maxdeg = std::max(maxdeg, r.degree());
  auto cert = relation_span_equal(rep.cocycle_twisted, rep.zhang_twisted, maxdeg);
  rep.presentations_match = cert.equal;
  if (!cert.equal && rep.witness.empty()) rep.witness = cert.separating;
  return rep;
}

SpanCertificate relation_span_equal(const Presentation& a, const Presentation& b, int d) {
  SpanCertificate cert;
  if (a.ngens() != b.ngens()) fail_pre("shape", "presentations have different generator counts");
  TowerPtr t = join_towers(a.tower, b.tower);
  for (int deg = 1; deg <= d; ++deg) {
    Matrix pa = ideal_piece(a, deg), pb = ideal_piece(b, deg);
    if (pa.rows() != pb.rows()) {
      cert.equal = false;
      cert.degree = deg;
    }
    std::vector<Vec> ra, rb;
    for (size_t i = 0; i < pa.rows(); ++i) ra.push_back(pa.row(i));
    for (size_t i = 0; i < pb.rows(); ++i) rb.push_back(pb.row(i));
    auto words = all_words(static_cast<int>(a.ngens()), deg);
    auto check = [&](const std::vector<Vec>& from, const std::vector<Vec>& into, const Presentation& side) {
      for (auto& v : from)
        if (!in_span(into, v, t)) {
          cert.equal = false;
          cert.degree = deg;
          cert.separating = side.show(from_coefficients(v, words));
          return false;
        }
      return true;
    };
    if (!check(ra, rb, a) || !check(rb, ra, b)) return cert;
  }
  return cert;
}

}  // namespace tb
