#include "doctest.h"

#include <algorithm>
#include <set>

#include "twistbench/catalog.hpp"
#include "twistbench/comgeo.hpp"
#include "twistbench/errors.hpp"

using namespace tb;

namespace {

const std::vector<std::string> kParams = {"2", "3", "-5/7"};

std::set<std::string> as_strings(const std::vector<CPoly>& ps) {
  std::set<std::string> out;
  for (auto& p : ps) out.insert(p.to_string());
  return out;
}

// Independent check of the Groebner property: every pair of leading
// monomials has an S-polynomial that reduces to zero by naive division.
bool naive_s_pairs_vanish(const std::vector<CPoly>& g) {
  for (size_t a = 0; a < g.size(); ++a)
    for (size_t b = a + 1; b < g.size(); ++b) {
      const Mono &ma = g[a].lead_mono(), &mb = g[b].lead_mono();
      Mono l(ma.size()), ua(ma.size()), ub(ma.size());
      for (size_t k = 0; k < ma.size(); ++k) {
        l[k] = std::max(ma[k], mb[k]);
        ua[k] = l[k] - ma[k];
        ub[k] = l[k] - mb[k];
      }
      CPoly s = g[a].mul_term(ua, g[a].lead_coeff().inverse()) - g[b].mul_term(ub, g[b].lead_coeff().inverse());
      // Division: repeatedly cancel the largest term divisible by some lead.
      CPoly rem = s;
      bool progress = true;
      while (!rem.is_zero() && progress) {
        progress = false;
        for (auto& [m, c] : rem.terms()) {
          for (auto& h : g) {
            bool divides = true;
            Mono q(m.size());
            for (size_t k = 0; k < m.size(); ++k) {
              q[k] = m[k] - h.lead_mono()[k];
              if (q[k] < 0) divides = false;
            }
            if (!divides) continue;
            rem = rem - h.mul_term(q, c / h.lead_coeff());
            progress = true;
            break;
          }
          if (progress) break;
        }
      }
      if (!rem.is_zero()) return false;
    }
  return true;
}

Scalar param(int k) { return parse_scalar(kParams[k], FieldTower::rationals()); }

std::vector<std::pair<std::string, Scalar>> abc() { return {{"a", param(0)}, {"b", param(1)}, {"c", param(2)}}; }

void check_matrix(const LinearFormMatrix& m, const std::vector<std::vector<std::string>>& printed) {
  REQUIRE(m.entries.size() == printed.size());
  for (size_t r = 0; r < printed.size(); ++r)
    for (size_t c = 0; c < printed[r].size(); ++c) {
      CAPTURE(r);
      CAPTURE(c);
      CHECK(m.entries[r][c] == CPoly::parse(m.ring, printed[r][c], abc()));
    }
}

}  // namespace

TEST_CASE("Groebner bases of small ideals") {
  auto ring = make_ring({"x", "y"});
  CIdeal id{ring, {CPoly::parse(ring, "x^2"), CPoly::parse(ring, "x*y")}};
  auto gb = groebner_basis(id);
  CHECK(as_strings(gb) == as_strings(id.gens));
  CHECK(is_groebner_basis(gb));

  // Twisted cubic in lex x > y > z: the textbook reduced basis.
  auto lex = make_ring({"x", "y", "z"}, FieldTower::rationals(), MonoOrder::Lex);
  CIdeal cubic{lex, {CPoly::parse(lex, "y - x^2"), CPoly::parse(lex, "z - x^3")}};
  auto g = groebner_basis(cubic);
  std::vector<CPoly> expected = {CPoly::parse(lex, "x^2 - y"), CPoly::parse(lex, "x*y - z"),
                                 CPoly::parse(lex, "x*z - y^2"), CPoly::parse(lex, "y^3 - z^2")};
  CHECK(as_strings(g) == as_strings(expected));
  CHECK(naive_s_pairs_vanish(g));
  for (auto& f : cubic.gens) CHECK(reduce(f, g).is_zero());
}

TEST_CASE("dimension, codimension and quotient dimension") {
  auto ring = make_ring({"x", "y"});
  auto inv = ideal_invariants(CIdeal{ring, {CPoly::parse(ring, "x")}});
  CHECK(inv.dim == 1);
  CHECK(inv.codim == 1);
  CHECK(!inv.quotient_dim);

  inv = ideal_invariants(CIdeal{ring, {CPoly::parse(ring, "x^2"), CPoly::parse(ring, "y^2")}});
  CHECK(inv.dim == 0);
  CHECK(inv.quotient_dim == 4u);

  inv = ideal_invariants(CIdeal{ring, {CPoly::parse(ring, "x*y - 1"), CPoly::parse(ring, "x")}});
  CHECK(!inv.dim);
  CHECK(inv.dim_text() == "-infinity");

  // The quotient dimension of a zero-dimensional ideal does not depend on the order.
  for (auto order : {MonoOrder::GRevLex, MonoOrder::Lex}) {
    auto r = make_ring({"x", "y"}, FieldTower::rationals(), order);
    auto i2 = ideal_invariants(CIdeal{r, {CPoly::parse(r, "x^2 - y"), CPoly::parse(r, "y^2 - x")}});
    CHECK(i2.dim == 0);
    CHECK(i2.quotient_dim == 4u);
  }
}

TEST_CASE("M(t) of the Sklyanin and Stafford twists matches the listed matrices") {
  auto skl = catalog_get("sklyanin_twist", kParams);
  check_matrix(relation_matrix_t(skl.presentation), {{"0", "t1+t2", "t3+t4", "t5+t6"},
                                                     {"t2-t1", "0", "c*t5+t6", "b*t3-t4"},
                                                     {"t4-t3", "t6-c*t5", "0", "-a*t1-t2"},
                                                     {"t6-t5", "-b*t3-t4", "a*t1-t2", "0"}});
  auto st = catalog_get("stafford_inf_twist", kParams);
  check_matrix(relation_matrix_t(st.presentation), {{"-t5", "t1+t2", "t3+t4", "0"},
                                                    {"t2-t1", "t5+t6", "0", "b*t3-t4"},
                                                    {"t4-t3", "0", "t5+t6*((1+a)/(1-b))", "-a*t1-t2"},
                                                    {"0", "-b*t3-t4", "a*t1-t2", "-t5-t6*((1-a)/(1+c))"}});
}

TEST_CASE("line schemes of the Sklyanin and Stafford twists have codimension 4") {
  CHECK(line_scheme_codim(catalog_get("sklyanin_twist", kParams).presentation) == 4);
  CHECK(line_scheme_codim(catalog_get("stafford_inf_twist", kParams).presentation) == 4);
}

TEST_CASE("multilinearisations") {
  auto st = catalog_get("stafford_inf_twist", kParams);
  auto ml = multilinearize(st.presentation);
  REQUIRE(ml.ring->vars == std::vector<std::string>{"v01", "v02", "v11", "v12", "v21", "v22", "v31", "v32"});
  auto m5 = CPoly::parse(ml.ring, "-v01*v02 + v11*v12 + v21*v22 - v31*v32");
  bool found = false;
  for (auto& f : ml.gens)
    if (f.monic() == m5.monic()) found = true;
  CHECK(found);
  CHECK(ml.gens.size() == 6);
}

TEST_CASE("the 20 points of the Sklyanin twist") {
  auto pts = sklyanin_twist_points(kParams);
  const Presentation& p = pts.entry.presentation;
  REQUIRE(pts.points.size() == 20);
  size_t fixed = 0, order2 = 0;
  std::vector<ProjPoint> all;
  for (auto& [a, b] : pts.points) {
    ProjPoint pp = ProjPoint::make(a), qq = ProjPoint::make(b);
    auto c = check_point(p, pp);
    CAPTURE(pp.to_string());
    CHECK(c.image == qq);
    CHECK(check_point(p, c.image).image == pp);
    (c.fixed ? fixed : order2)++;
    for (auto& f : p.relations) CHECK(bilinear_eval(f, a, b).is_zero());
    CHECK(!bilinear_eval(pts.entry.elements.at("Theta1"), pp.coords, c.image.coords).is_zero());
    all.push_back(pp);
  }
  CHECK(fixed == 8);
  CHECK(order2 == 12);
  // All 20 are distinct and split into G-orbits of sizes 1, 1, 1, 1, 4, 4, 4, 4.
  std::vector<std::string> keys;
  for (auto& q : all) keys.push_back(q.to_string());
  CHECK(std::set<std::string>(keys.begin(), keys.end()).size() == 20);
  std::multiset<size_t> sizes;
  std::set<std::string> seen;
  for (auto& q : all) {
    if (seen.count(q.to_string())) continue;
    auto orbit = point_orbit(q, *p.grading);
    for (auto& o : orbit) {
      CHECK(std::find(all.begin(), all.end(), o) != all.end());
      seen.insert(o.to_string());
    }
    sizes.insert(orbit.size());
  }
  CHECK(sizes == std::multiset<size_t>{1, 1, 1, 1, 4, 4, 4, 4});
}

TEST_CASE("a point off the scheme is rejected") {
  auto skl = catalog_get("sklyanin_twist", kParams);
  auto p = ProjPoint::make({Scalar(1), Scalar(2), Scalar(3), Scalar(5)});
  CHECK_THROWS_AS(check_point(skl.presentation, p), TwistError);
}

TEST_CASE("Stafford twist charts and coordinate points") {
  auto st = catalog_get("stafford_inf_twist", kParams);
  auto open = run_chart(st.presentation, {"U1", {"v01", "v02"}, {}, {}});
  CHECK(open.invariants.dim == 0);
  CHECK(open.invariants.quotient_dim == 16u);
  auto closed = run_chart(st.presentation, {"U2", {"v01"}, {"v02"}, {"v11", "v12", "v21", "v22", "v31", "v32"}});
  CHECK(closed.invariants.dim_text() == "-infinity");

  auto e = [](size_t k) {
    Vec v(4, Scalar(0));
    v[k] = Scalar(1);
    return v;
  };
  size_t extra = 0;
  for (auto [a, b] : std::vector<std::pair<size_t, size_t>>{{0, 3}, {3, 0}, {2, 1}, {1, 2}}) {
    bool on = true;
    for (auto& f : st.presentation.relations) on = on && bilinear_eval(f, e(a), e(b)).is_zero();
    CHECK(on);
    extra += on;
  }
  CHECK(*open.invariants.quotient_dim + extra == 20);
}

TEST_CASE("Vancliff twist: matrix, minors, lines and phi") {
  auto vt = catalog_get("vancliff_twist", {"2", "3", "5"});
  const Presentation& p = vt.presentation;
  auto ring = make_ring({"v1", "v2", "v3", "v4"});
  auto m = relation_matrix_symbolic(p, ring);
  std::vector<std::pair<std::string, Scalar>> k = {{"a", Scalar(2)}, {"b", Scalar(3)}, {"l", Scalar(5)}};
  std::vector<std::vector<std::string>> printed = {{"v2", "-a*v1", "0", "0"},  {"v3", "0", "-l*v1", "0"},
                                                   {"v4", "0", "0", "-a*l*v1"}, {"0", "0", "v4", "a*v3"},
                                                   {"0", "v4", "0", "l*v2"},   {"0", "v3", "b*v2", "-(a*b-l)*v1"}};
  for (size_t r = 0; r < 6; ++r)
    for (size_t c = 0; c < 4; ++c) CHECK(m[r][c] == CPoly::parse(ring, printed[r][c], k));

  auto mins = minors(m, 4);
  CHECK(mins.size() == 14);
  // Each line: substitute its two vanishing coordinates.
  for (auto [i, j] : std::vector<std::pair<size_t, size_t>>{{0, 1}, {0, 2}, {0, 3}, {1, 3}, {2, 3}}) {
    std::vector<CPoly> sub;
    for (size_t v = 0; v < 4; ++v)
      sub.push_back(v == i || v == j ? CPoly(ring) : CPoly::var(ring, v));
    for (auto& f : mins) CHECK(f.substitute(sub, ring).is_zero());
  }
  // The minors cut out nothing more: off the lines some minor is nonzero.
  auto gb = groebner_basis(CIdeal{ring, mins});
  CHECK(in_radical(CPoly::parse(ring, "v1*v2*v3*v4"), gb));
  CHECK(in_radical(CPoly::parse(ring, "v1*v4"), gb));

  // phi on each line, at the point with coordinates (2, 7) along it.
  struct Case {
    size_t a, b;
    Scalar factor;
  };
  Scalar al(2), be(3), la(5);
  for (auto c : std::vector<Case>{{2, 3, -al}, {1, 3, -la}, {1, 2, -be}, {0, 2, la}, {0, 1, al}}) {
    Vec pt(4, Scalar(0));
    pt[c.a] = Scalar(2);
    pt[c.b] = Scalar(7);
    Vec img = pt;
    img[c.a] = img[c.a] * c.factor;
    auto chk = check_point(p, ProjPoint::make(pt));
    CHECK(chk.image == ProjPoint::make(img));
  }
}

TEST_CASE("U_h(sl2) twist: rank-3 locus is three lines and four points") {
  auto sl = catalog_get("sl2_hom_twist", {});
  const Presentation& p = sl.presentation;  // generators E, F, H, t
  auto ring = make_ring({"E", "F", "H", "t"});
  auto m = relation_matrix_symbolic(p, ring);
  auto m4 = minors(m, 4);

  // t = 1: the listed points (t, E, F, H) = (1, +-1, +-1, +-1) with EFH = 1, plus
  // e_t = (1, 0, 0, 0) from E = F = H = 0. The chart ideal is radical of length 5.
  auto with_t1 = m4;
  with_t1.push_back(CPoly::parse(ring, "t - 1"));
  auto inv1 = ideal_invariants(CIdeal{ring, with_t1});
  CHECK(inv1.dim == 0);
  CHECK(inv1.quotient_dim == 5u);
  for (auto pt : std::vector<std::vector<long>>{{1, 1, 1, 1}, {1, -1, -1, 1}, {-1, 1, -1, 1}, {-1, -1, 1, 1},
                                                {0, 0, 0, 1}}) {
    Vec v;
    for (long x : pt) v.push_back(Scalar(x));
    CHECK(vanishes_at(m4, v));
    CHECK_NOTHROW(check_point(p, ProjPoint::make(v)));
  }

  // t = 0: the locus lies on EFH = 0, and each of the three lines lies in it with rank 3.
  auto with_t0 = m4;
  with_t0.push_back(CPoly::parse(ring, "t"));
  auto g0 = groebner_basis(CIdeal{ring, with_t0});
  CHECK(in_radical(CPoly::parse(ring, "E*F*H"), g0));
  for (size_t zero : {0, 1, 2}) {
    std::vector<CPoly> sub;
    for (size_t v = 0; v < 4; ++v) sub.push_back(v == zero || v == 3 ? CPoly(ring) : CPoly::var(ring, v));
    for (auto& f : m4) CHECK(f.substitute(sub, ring).is_zero());
    Vec pt = {Scalar(2), Scalar(3), Scalar(5), Scalar(0)};
    pt[zero] = Scalar(0);
    CHECK_NOTHROW(check_point(p, ProjPoint::make(pt)));
  }
}
