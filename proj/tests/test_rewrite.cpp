#include "doctest.h"

#include <random>

#include "twistbench/catalog.hpp"
#include "twistbench/errors.hpp"
#include "twistbench/rewrite.hpp"
#include "twistbench/twist.hpp"

using namespace tb;

namespace {

const std::vector<std::string> kParams = {"2", "3", "-5/7"};

TowerPtr gaussian() { return FieldTower::build({{"i", "t^2 + 1"}}); }

Presentation commutative_xy() {
  return parse_presentation("[generators]\nx y\n[relations]\nx*y - y*x\n");
}

// Independent dimension count: dim A_d = n^d - dim I_d with I_d spanned by
// all products u*r*w, computed by dense linear algebra over every word.
size_t dense_dimension(const Presentation& p, int d) {
  size_t total = 1;
  for (int k = 0; k < d; ++k) total *= p.ngens();
  return total - ideal_piece(p, d).rows();
}

NcPoly random_poly(const RewriteSystem& r, int d, std::mt19937_64& rng) {
  NcPoly f;
  auto words = all_words(static_cast<int>(r.presentation().ngens()), d);
  std::uniform_int_distribution<int> coin(0, 3), val(-3, 3);
  for (auto& w : words)
    if (coin(rng) == 0) f.add_term(w, Scalar(val(rng)));
  return f;
}

std::vector<size_t> binomial_row(int D) {
  std::vector<size_t> out;
  for (int n = 0; n <= D; ++n) out.push_back(static_cast<size_t>((n + 1) * (n + 2) * (n + 3) / 6));
  return out;
}

}  // namespace

TEST_CASE("commutative polynomial ring completes to a single rule") {
  auto p = commutative_xy();
  auto r = complete_to_degree(p, 6);
  CHECK(r.rule_count() == 1);
  CHECK(r.closed());
  auto audit = audit_confluence(r);
  CHECK(audit.failures == 0);
  CHECK(hilbert_function(p, 6) == std::vector<size_t>{1, 2, 3, 4, 5, 6, 7});
}

TEST_CASE("generator precedence picks the leading word") {
  auto p = commutative_xy();
  auto order = MonomialOrder::parse("y<x", p);
  CHECK(order.describe(p) == "y < x");
  auto r = complete_to_degree(p, 6, order);
  NcPoly xy = p.parse("x*y");
  CHECK(r.normal_form(xy) == p.parse("y*x"));
  auto standard = complete_to_degree(p, 6);
  CHECK(standard.normal_form(p.parse("y*x")) == xy);
  CHECK(MonomialOrder::parse("x>y", p).rank == order.rank);
  CHECK(MonomialOrder::parse("y, x", p).rank == order.rank);
  CHECK_THROWS_AS(MonomialOrder::parse("x<z", p), TwistError);
  CHECK_THROWS_AS(MonomialOrder::parse("x<x", p), TwistError);
  CHECK_THROWS_AS(r.normal_form(p.parse("x^7")), TwistError);
}

TEST_CASE("Sklyanin twist: confluent completion and Hilbert function") {
  auto e = catalog_get("sklyanin_twist", kParams);
  auto r = complete_to_degree(e.presentation, 6);
  CHECK(audit_confluence(r).failures == 0);
  auto h = hilbert_function(r, 6);
  CHECK(h == binomial_row(6));
  for (int d = 0; d <= 4; ++d) CHECK(h[d] == dense_dimension(e.presentation, d));
}

TEST_CASE("skew polynomial ring S(mu') has six commutation rules") {
  auto e = catalog_get("skew_poly_mu_prime", {});
  const Presentation& p = e.presentation;
  auto r = complete_to_degree(p, 6);
  REQUIRE(r.rule_count() == 6);
  CHECK(audit_confluence(r).failures == 0);
  for (auto& rule : r.rules()) {
    const Word& w = rule.lead.leading_word();
    REQUIRE(w.size() == 2);
    int j = letter(w, 0), i = letter(w, 1);
    CHECK(j > i);
    // z_j z_i -> mu'_ij z_i z_j: the tail is the reversed word with the coefficient
    // read off the presentation relation.
    NcPoly expected;
    for (auto& rel : p.relations)
      if (!rel.coeff(w).is_zero()) expected = NcPoly::word(make_word({i, j}), -rel.coeff(make_word({i, j})));
    CHECK(rule.tail == expected);
  }
  CHECK(hilbert_function(r, 5) == binomial_row(5));
}

TEST_CASE("nilpotent degree-one element of B^{G,mu}") {
  auto e = catalog_get("sklyanin_b_twist", kParams, gaussian());
  const Presentation& p = e.presentation;
  auto r = complete_to_degree(p, 4);
  NcPoly v = p.parse("v0 - i*v1 - i*v2 - v3");
  CHECK(!r.normal_form(v).is_zero());
  CHECK(r.normal_form(v * v).is_zero());
  CHECK(nilpotency_index(v, r, 4) == 2);
  // The G-conjugates of v are sign changes of the generators.
  for (auto& act : p.action->matrices) {
    NcPoly w = v.linear_substitute(act);
    CHECK(r.normal_form(w * w).is_zero());
  }
}

TEST_CASE("S(mu)/(q1..q4) is finite dimensional") {
  auto e = catalog_get("skew_poly_mu_quadrics", {"3"});
  const Presentation& p = e.presentation;
  auto r = complete_to_degree(p, 6);
  for (int k = 0; k < 4; ++k) {
    NcPoly z = NcPoly::gen(k);
    CHECK(r.normal_form(z.pow(5)).is_zero());
  }
  auto h = hilbert_function(p, 16);
  // Regular sequence of four quadrics in a ring with series 1/(1-t)^4.
  std::vector<size_t> expected = {1, 4, 6, 4, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0};
  CHECK(h == expected);
  for (int d = 0; d <= 4; ++d) CHECK(h[d] == dense_dimension(p, d));
}

TEST_CASE("centre of the Sklyanin twist in degrees 2 and 4") {
  auto e = catalog_get("sklyanin_twist", kParams);
  auto r = complete_to_degree(e.presentation, 5);
  auto c2 = centre_basis(r, 2);
  CHECK(c2.size() == 2);
  // Theta1, Theta2 reduce into the span of the computed basis.
  const TowerPtr& t = e.presentation.tower;
  auto words = r.normal_words(2);
  std::vector<Vec> span;
  for (auto& z : c2) span.push_back(coefficient_vector(z, words, t));
  for (auto name : {"Theta1", "Theta2"})
    CHECK(in_span(span, coefficient_vector(r.normal_form(e.elements.at(name)), words, t), t));
  CHECK(centre_basis(r, 4).size() == 3);
  CHECK(centre_basis(r, 1).empty());
  CHECK(centre_basis(r, 3).size() == 0);
}

TEST_CASE("centre of k[x,y] in degree 3 is everything") {
  auto r = complete_to_degree(commutative_xy(), 4);
  CHECK(centre_basis(r, 3).size() == 4);
  auto x = NcPoly::gen(0);
  auto n = is_normal_element(x, r);
  REQUIRE(n);
  CHECK((*n)[0] == NcPoly::gen(0));
  CHECK((*n)[1] == NcPoly::gen(1));
  CHECK(is_central(x, r));
}

TEST_CASE("Theta and Omega are central through degree 6") {
  auto tw = catalog_get("sklyanin_twist", kParams);
  auto rt = complete_to_degree(tw.presentation, 6);
  NcPoly t1 = tw.elements.at("Theta1"), t2 = tw.elements.at("Theta2");
  CHECK(is_central(t1, rt));
  CHECK(is_central(t2, rt));
  CHECK(rt.normal_form(t1 * t2 - t2 * t1).is_zero());
  for (int k = 0; k < 4; ++k) {
    NcPoly x = NcPoly::gen(k);
    CHECK(rt.normal_form(x * x * t1 - t1 * x * x).is_zero());
    CHECK(rt.normal_form(t1 * t2 * x - x * t1 * t2).is_zero());
  }
  auto src = catalog_get("sklyanin", kParams);
  auto rs = complete_to_degree(src.presentation, 6);
  CHECK(is_central(src.elements.at("Omega1"), rs));
  CHECK(is_central(src.elements.at("Omega2"), rs));
}

TEST_CASE("regular sequence proxy for Theta1, Theta2") {
  auto tw = catalog_get("sklyanin_twist", kParams);
  auto proxy = regular_sequence_proxy(tw.presentation, {tw.elements.at("Theta1"), tw.elements.at("Theta2")}, 6);
  CHECK(proxy.holds);
  // (1 + t)^2 / (1 - t)^2 = 1 + 4t + 8t^2 + 12t^3 + ...
  std::vector<long> expected = {1, 4, 8, 12, 16, 20, 24};
  CHECK(proxy.expected == expected);
}

TEST_CASE("normal elements with nontrivial commutation data") {
  SUBCASE("q3 in S(mu') with signs (+,-,+,-)") {
    auto e = catalog_get("skew_poly_mu_prime_quadrics", {"3"});
    auto s = catalog_get("skew_poly_mu_prime", {});
    auto r = complete_to_degree(s.presentation, 4);
    auto n = is_normal_element(e.elements.at("q3"), r);
    REQUIRE(n);
    int signs[4] = {1, -1, 1, -1};
    for (int k = 0; k < 4; ++k) CHECK((*n)[k] == NcPoly::gen(k) * Scalar(signs[k]));
    auto n4 = is_normal_element(e.elements.at("q4"), r);
    REQUIRE(n4);
    int signs4[4] = {-1, 1, -1, 1};
    for (int k = 0; k < 4; ++k) CHECK((*n4)[k] == NcPoly::gen(k) * Scalar(signs4[k]));
    for (auto name : {"q1", "q2"}) CHECK(is_normal_element(e.elements.at(name), r));
  }
  SUBCASE("t3 = [v0b, v1b] in the Koszul dual of B^{G,mu}") {
    auto b = catalog_get("sklyanin_b_twist", kParams, gaussian());
    Presentation dual = koszul_dual(b.presentation);
    auto r = complete_to_degree(dual, 4);
    NcPoly t3 = dual.parse("v0b*v1b - v1b*v0b");
    CHECK(!r.normal_form(t3).is_zero());
    auto n = is_normal_element(t3, r);
    REQUIRE(n);
    for (int k = 0; k < 4; ++k) CHECK((*n)[k] == -NcPoly::gen(k));
  }
  SUBCASE("a generator of the free algebra is not normal") {
    auto p = parse_presentation("[generators]\nx y\n[relations]\nx*y*x - y*x*y\n");
    auto r = complete_to_degree(p, 4);
    CHECK(!is_normal_element(NcPoly::gen(0), r));
  }
}

TEST_CASE("annihilator factor rings have Hilbert function 1,2,2,2,...") {
  // beta = 4, gamma = 9 and alpha = -13/37 satisfy alpha + beta + gamma + alpha*beta*gamma = 0.
  for (auto kase : {"1", "2", "3"}) {
    for (auto sign : {"1", "-1"}) {
      auto e = catalog_get("sklyanin_twist_annihilator", {"-13/37", "4", "9", kase, sign});
      CAPTURE(kase);
      CAPTURE(sign);
      CHECK(hilbert_function(e.presentation, 5) == std::vector<size_t>{1, 2, 2, 2, 2, 2});
    }
  }
}

TEST_CASE("normal_form is linear and idempotent") {
  auto e = catalog_get("sklyanin_b_twist", kParams, gaussian());
  auto r = complete_to_degree(e.presentation, 4);
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    NcPoly f = random_poly(r, 3, rng), g = random_poly(r, 3, rng);
    NcPoly nf = r.normal_form(f);
    CHECK(r.normal_form(nf) == nf);
    CHECK(r.normal_form(f + g * Scalar(5)) == nf + r.normal_form(g) * Scalar(5));
    for (auto& [w, c] : nf.terms()) CHECK(r.is_normal_word(w));
  }
}

TEST_CASE("twisting preserves the Hilbert function for every catalog pair") {
  struct Pair {
    std::string name;
    std::vector<std::string> params;
  };
  std::vector<Pair> sources = {{"sklyanin", kParams},
                               {"sklyanin_b", kParams},
                               {"stafford_inf", kParams},
                               {"stafford_inf_12", kParams},
                               {"stafford_inf_34", kParams},
                               {"stafford_d", {"2", "3", "-5/7", "1", "5", "2"}},
                               {"vancliff", {"2", "3", "5"}},
                               {"skew_clifford", {"3"}},
                               {"sl2_hom", {}},
                               {"rz_a", {}},
                               {"rz_b", {}},
                               {"rz_c", {}},
                               {"rz_d", {}},
                               {"rz_e", {"i"}},
                               {"rz_g", {}},
                               {"rz_g_bar", {}}};
  for (auto& s : sources) {
    CAPTURE(s.name);
    auto e = catalog_get(s.name, s.params);
    const Presentation& p = e.presentation;
    Presentation tw = cocycle_twist(p, presentation_cocycle(p));
    CHECK(hilbert_function(p, 6) == hilbert_function(tw, 6));
  }
}
