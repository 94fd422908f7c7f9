#include "doctest.h"

#include <functional>
#include <random>

#include "twistbench/catalog.hpp"
#include "twistbench/errors.hpp"
#include "twistbench/twist.hpp"

using namespace tb;

namespace {

const std::vector<std::string> kParams = {"2", "3", "-5/7"};

// c with a = c*b, when it exists.
std::optional<Scalar> proportional(const NcPoly& a, const NcPoly& b) {
  if (a.is_zero() || b.is_zero()) return std::nullopt;
  Scalar c = a.leading_coeff() / b.leading_coeff();
  if (a != b * c) return std::nullopt;
  return c;
}

// Compare a computed relation list with a reference table relation by
// relation; returns the per-relation scalars (empty on mismatch).
std::vector<Scalar> table_scalars(const Presentation& computed, const Presentation& table) {
  std::vector<Scalar> out;
  if (computed.relations.size() != table.relations.size()) return {};
  for (size_t k = 0; k < computed.relations.size(); ++k) {
    auto c = proportional(computed.relations[k], table.relations[k]);
    if (!c) return {};
    out.push_back(*c);
  }
  return out;
}

bool all_signs(const std::vector<Scalar>& v) {
  if (v.empty()) return false;
  for (auto& c : v)
    if (c != Scalar(1) && c != Scalar(-1)) return false;
  return true;
}

Presentation twist_default(const Presentation& p) { return cocycle_twist(p, presentation_cocycle(p)); }

}  // namespace

TEST_CASE("Sklyanin twist reproduces the relation table exactly") {
  for (auto params : {kParams, std::vector<std::string>{"-2", "1/3", "5"}}) {
    auto src = catalog_get("sklyanin", params);
    auto table = catalog_get("sklyanin_twist", params);
    std::vector<TwistRow> rows;
    auto tw = cocycle_twist(src.presentation, presentation_cocycle(src.presentation), &rows);
    REQUIRE(tw.relations.size() == 6);
    for (size_t k = 0; k < 6; ++k) CHECK(tw.relations[k] == table.presentation.relations[k]);
    CHECK(tw.names() == table.presentation.names());
  }
  // f1 = x0x1 - x1x0 - alpha(x2x3 + x3x2): only x3x2 changes sign.
  auto src = catalog_get("sklyanin", kParams);
  std::vector<TwistRow> rows;
  cocycle_twist(src.presentation, presentation_cocycle(src.presentation), &rows);
  for (auto& [w, c] : rows[0].factors) CHECK(c == Scalar(w == make_word({3, 2}) ? -1 : 1));
}

TEST_CASE("Vancliff, skew Clifford, Stafford and sl2 twists match their tables up to sign") {
  struct Case {
    std::string src, table;
    std::vector<std::string> params;
  };
  std::vector<Case> cases = {
      {"vancliff", "vancliff_twist", {"2", "3", "5"}},
      {"skew_clifford", "skew_clifford_twist", {"3"}},
      {"stafford_inf", "stafford_inf_twist", kParams},
      {"stafford_d", "stafford_d_twist", {"2", "3", "-5/7", "1", "2", "1"}},
      {"stafford_d", "stafford_d_twist", {"2", "3", "-5/7", "3", "-1", "4"}},
      {"sl2_hom", "sl2_hom_twist", {}},
  };
  for (auto& c : cases) {
    CAPTURE(c.src);
    auto s = catalog_get(c.src, c.params);
    auto t = catalog_get(c.table, c.params);
    auto scal = table_scalars(twist_default(s.presentation), t.presentation);
    CHECK(all_signs(scal));
  }
  // The printed skew Clifford table negates v3v2 + i v2v3 only.
  auto s = catalog_get("skew_clifford", {"3"});
  auto scal = table_scalars(twist_default(s.presentation), catalog_get("skew_clifford_twist", {"3"}).presentation);
  REQUIRE(scal.size() == 6);
  for (size_t k = 0; k < 6; ++k) CHECK(scal[k] == Scalar(k == 3 ? -1 : 1));
  // sl2: only EF - FE + 2Ht changes sign.
  auto u = catalog_get("sl2_hom", {});
  scal = table_scalars(twist_default(u.presentation), catalog_get("sl2_hom_twist", {}).presentation);
  REQUIRE(scal.size() == 6);
  for (size_t k = 0; k < 6; ++k) CHECK(scal[k] == Scalar(k == 0 ? -1 : 1));
}

TEST_CASE("Rogalski-Zhang twists land in the partner families") {
  std::vector<std::pair<std::string, std::string>> pairs = {
      {"rz_a", "rz_d"}, {"rz_b", "rz_c"}, {"rz_g", "rz_g_bar"}};
  for (auto& [a, b] : pairs) {
    CAPTURE(a);
    auto scal = table_scalars(twist_default(catalog_get(a, {}).presentation), catalog_get(b, {}).presentation);
    REQUIRE(scal.size() == 4);
    for (size_t k = 0; k < 3; ++k) CHECK(scal[k] == Scalar(1));
    CHECK(scal[3] == Scalar(a == "rz_a" ? -1 : 1));
  }
  for (auto g : {"i", "-i"}) {
    std::string minus = std::string(g) == "i" ? "-i" : "i";
    auto scal = table_scalars(twist_default(catalog_get("rz_e", {g}).presentation),
                              catalog_get("rz_e", {minus}).presentation);
    REQUIRE(scal.size() == 4);
    CHECK(scal[3] == Scalar(-1));
  }
}

TEST_CASE("Rogalski-Zhang basis change sends x3(x1+x2) - (x1+x2)x3 to w3w1 - w1w3") {
  Presentation p = parse_presentation("[generators]\nx1 x2 x3\n[relations]\nx3*(x1+x2) - (x1+x2)*x3\n");
  // x1 = (w1 + w2)/2, x2 = (w1 - w2)/2, x3 = w3; column j is the image of x_j.
  Matrix m = parse_matrix("[[1/2,1/2,0],[1/2,-1/2,0],[0,0,1]]", 3, p);
  auto q = change_basis(p, m);
  CHECK(q.relations[0] == NcPoly::word(make_word({2, 0})) - NcPoly::word(make_word({0, 2})));
  CHECK_THROWS_AS(change_basis(p, parse_matrix("[[1,1,0],[1,1,0],[0,0,1]]", 3, p)), TwistError);
}

TEST_CASE("kG_mu multiplication table and the 2x2 matrix model") {
  auto t = FieldTower::build({{"i", "t^2+1"}});
  auto mu = builtin_cocycle("klein_mu", t);
  auto T = twisted_group_algebra(mu.group(), mu);
  // Rows g1, g2, g1g2 of the table; e is the identity.
  CHECK(T.table() ==
        "e | e g1 g2 g1*g2\n"
        "g1 | g1 e -g1*g2 -g2\n"
        "g2 | g2 g1*g2 e g1\n"
        "g1*g2 | g1*g2 g2 -g1 -e\n");
  Presentation ctx;
  ctx.tower = t;
  std::vector<Matrix> images = {parse_matrix("[[1,0],[0,1]]", 2, ctx), parse_matrix("[[1,0],[0,-1]]", 2, ctx),
                                parse_matrix("[[0,1],[1,0]]", 2, ctx), parse_matrix("[[0,-1],[1,0]]", 2, ctx)};
  std::vector<Matrix> conj = {parse_matrix("[[-1,0],[0,1]]", 2, ctx), parse_matrix("[[0,1],[1,0]]", 2, ctx)};
  auto rep = matrix_model_check(T, images, conj, Duality::factor_swap());
  CHECK(rep.ok());
  auto bad = images;
  bad[3] = parse_matrix("[[0,1],[-1,0]]", 2, ctx);
  auto r2 = matrix_model_check(T, bad);
  CHECK_FALSE(r2.multiplicative);
  CHECK(r2.witness == "(g1,g2)");
}

TEST_CASE("bracketing does not change the accumulated cocycle factor") {
  auto t = FieldTower::build({{"i", "t^2+1"}});
  auto mu = builtin_cocycle("heisenberg(4)", t);
  GGrading gr;
  gr.group = mu.group();
  gr.duality = Duality::canonical(gr.group);
  gr.grade = {1, 4, 5, 11, 14};
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    Word w;
    int len = 2 + static_cast<int>(rng() % 5);
    for (int k = 0; k < len; ++k) w.push_back(static_cast<char>(rng() % 5));
    std::vector<int> splits;
    for (int k = 0; k < len; ++k) splits.push_back(static_cast<int>(rng() % 7));
    CHECK(bracketed_factor(w, gr, mu, splits) == accumulation_factor(w, gr, mu));
  }
}

TEST_CASE("twisting by a coboundary is a rescaling of generators") {
  auto t = FieldTower::build({{"i", "t^2+1"}});
  auto src = catalog_get("sklyanin", kParams, t);
  const FinAbGroup& G = src.presentation.grading->group;
  std::vector<Scalar> rho = {Scalar(t, 1), FieldElement::symbol(t, "i"), Scalar(t, -1), Scalar(t, 2)};
  auto tw = cocycle_twist(src.presentation, coboundary(G, rho));
  Vec d;
  for (auto g : src.presentation.grading->grade) d.push_back(rho[g].inverse());
  auto rescaled = change_basis(src.presentation, Matrix::diag(d, t));
  CHECK(relation_span_equal(tw, rescaled, 3).equal);
  CHECK_FALSE(relation_span_equal(tw, src.presentation, 2).equal);
}

TEST_CASE("twisting by mu then mu^-1 restores every relation") {
  for (auto name : {"sklyanin", "vancliff", "skew_clifford", "sl2_hom", "rz_e"}) {
    CAPTURE(name);
    std::vector<std::string> params = std::string(name) == "sklyanin"        ? kParams
                                      : std::string(name) == "vancliff"      ? std::vector<std::string>{"2", "3", "5"}
                                      : std::string(name) == "skew_clifford" ? std::vector<std::string>{"3"}
                                      : std::string(name) == "rz_e"          ? std::vector<std::string>{"i"}
                                                                             : std::vector<std::string>{};
    auto src = catalog_get(name, params);
    auto mu = presentation_cocycle(src.presentation);
    auto once = cocycle_twist(src.presentation, mu);
    auto back = cocycle_twist(once, mu.inverse(), nullptr, src.presentation.names());
    CHECK(back.relations == src.presentation.relations);
  }
}

TEST_CASE("catalog presentations are equivariant under their default actions") {
  for (auto& info : catalog_list()) {
    std::vector<std::string> params;
    if (info.params == std::vector<std::string>{"alpha", "beta", "gamma"}) params = kParams;
    if (info.name == "vancliff" || info.name == "vancliff_twist") params = {"2", "3", "5"};
    if (info.name.rfind("stafford_d", 0) == 0) params = {"2", "3", "-5/7", "1", "5", "2"};
    if (info.name == "sklyanin_twist_annihilator") params = {"2", "3", "-5/7", "1", "1"};
    if (info.params == std::vector<std::string>{"gamma"}) params = {info.name == "rz_e" ? "i" : "3"};
    if (info.name == "quantum_plane") params = {"5"};
    if (info.name == "polynomial") params = {"3"};
    CAPTURE(info.name);
    auto e = catalog_get(info.name, params);
    if (!e.presentation.action) continue;
    if (info.name == "sklyanin_twist_annihilator") continue;
    CHECK(check_equivariance(e.presentation, *e.presentation.action).invariant);
  }
  auto s = catalog_get("sklyanin", kParams);
  GradedAction bad = *s.presentation.action;
  bad.matrices[0] = Matrix::diag({Scalar(1), Scalar(1), Scalar(1), Scalar(-1)});
  auto rep = check_equivariance(s.presentation, bad);
  CHECK_FALSE(rep.invariant);
  CHECK_FALSE(rep.witness.empty());
}

TEST_CASE("induced grading recovers the diagonal sl2 basis") {
  auto efh = catalog_get("sl2_hom_efh", {});
  auto ind = induced_grading(efh.presentation, *efh.presentation.action, Duality::factor_swap(), {"E", "F", "H", "t"});
  // Columns of the basis: independent oracle E = e + f, F = e - f, H = h, t = t up to scale.
  const char* expected[4] = {"g1", "g1*g2", "g2", "e"};
  std::vector<Vec> oracle = {{Scalar(1), Scalar(1), Scalar(0), Scalar(0)},
                             {Scalar(1), Scalar(-1), Scalar(0), Scalar(0)},
                             {Scalar(0), Scalar(0), Scalar(1), Scalar(0)},
                             {Scalar(0), Scalar(0), Scalar(0), Scalar(1)}};
  std::vector<int> matched(4, -1);
  for (size_t k = 0; k < 4; ++k) {
    Vec col = ind.basis.col(k);
    for (size_t o = 0; o < 4; ++o)
      if (vector_rank({col, oracle[o]}, ind.basis.tower()) == 1) matched[k] = static_cast<int>(o);
    REQUIRE(matched[k] >= 0);
    CHECK(ind.grading.group.name(ind.grading.grade[k]) == expected[matched[k]]);
  }
  // Reorder the catalog's E, F, H, t presentation to the induced order and compare spans.
  auto ef = catalog_get("sl2_hom", {});
  Matrix perm(4, 4);
  for (size_t k = 0; k < 4; ++k) perm(k, static_cast<size_t>(matched[k])) = Scalar(1);
  auto reordered = change_basis(ef.presentation, perm.transpose());
  CHECK(relation_span_equal(ind.presentation, reordered, 2).equal);
}

TEST_CASE("induced grading of the Sklyanin action") {
  auto s = catalog_get("sklyanin", kParams);
  auto ind = induced_grading(s.presentation, *s.presentation.action, Duality::factor_swap());
  CHECK(ind.basis == Matrix::identity(4));
  std::vector<std::string> names;
  for (auto g : ind.grading.grade) names.push_back(ind.grading.group.name(g));
  CHECK(names == std::vector<std::string>{"e", "g1", "g2", "g1*g2"});
}

TEST_CASE("Sklyanin rescalings realise the other gradings") {
  // The transposition (0j) swaps the grades of x0 and xj; the stated
  // rescaling of the twist lands in the (id) family at new parameters.
  auto t = adjoin_square_roots(FieldTower::build({{"i", "t^2+1"}}),
                               {{"ra", 2}, {"rb", 3}, {"rg", Rational(-5, 7)}});
  auto src = catalog_get("sklyanin", kParams, t);
  Scalar i = imaginary_unit(t), one(t, 1);
  Scalar ra = *rational_sqrt(2, t), rb = *rational_sqrt(3, t), rg = *rational_sqrt(Rational(-5, 7), t);
  struct Case {
    std::vector<std::string> grades;
    Vec scale;
    std::vector<std::string> target;
  };
  std::vector<Case> cases = {
      {{"g1", "e", "g2", "g1*g2"}, {one, i / (rb * rg), -rg.inverse(), -i / rb}, {"2", "1/3", "-7/5"}},
      {{"g2", "g1", "e", "g1*g2"}, {one, i / rg, i / (ra * rg), ra.inverse()}, {"1/2", "3", "-7/5"}},
      {{"g1*g2", "g1", "g2", "e"}, {one, i / rb, ra.inverse(), i / (ra * rb)}, {"1/2", "1/3", "-5/7"}},
  };
  for (auto& c : cases) {
    CAPTURE(c.grades[0]);
    Presentation p = src.presentation;
    FinAbGroup& G = p.grading->group;
    for (size_t k = 0; k < 4; ++k) p.grading->grade[k] = G.parse_element(c.grades[k]);
    auto tw = cocycle_twist(p, presentation_cocycle(p));
    auto scaled = change_basis(tw, Matrix::diag(c.scale, t));
    auto target = catalog_get("sklyanin_twist", c.target, t);
    CHECK(relation_span_equal(scaled, target.presentation, 2).equal);
    CHECK_FALSE(relation_span_equal(tw, target.presentation, 2).equal);
  }
}

TEST_CASE("Zhang bridge on the skew Clifford algebra and the quantum plane") {
  auto sc = catalog_get("skew_clifford", {"3"});
  Matrix phi = sc.presentation.action->matrices[0];
  auto rep = zhang_as_cocycle(sc.presentation, phi, 2, 4);
  CHECK(rep.agree);
  CHECK(rep.presentations_match);
  CHECK(rep.pairs_checked > 0);

  // Zhang twist by phi followed by x2 -> -x2, x3 -> -x3 is the cocycle twist.
  auto z = zhang_twist(sc.presentation, phi);
  auto rescaled = change_basis(z, Matrix::diag({Scalar(1), Scalar(-1), Scalar(-1), Scalar(1)}));
  auto cocycle = twist_default(sc.presentation);
  rescaled.gens = cocycle.gens;
  CHECK(relation_span_equal(rescaled, cocycle, 2).equal);

  auto qp = catalog_get("quantum_plane", {"5"});
  Matrix flip = Matrix::diag({Scalar(-1), Scalar(1)});
  auto rq = zhang_as_cocycle(qp.presentation, flip, 2, 4);
  CHECK(rq.agree);
  CHECK(rq.presentations_match);
}

TEST_CASE("Stafford cyclic isomorphisms") {
  // S_{inf,1,2}^{G,mu}(gamma,alpha,beta) from the maps equals f3..f6, Theta1, Theta2 at (gamma,alpha,beta).
  std::vector<std::string> cyc = {"-5/7", "2", "3"};
  auto from_map = catalog_get("stafford_inf_12_twist", cyc);
  auto direct = catalog_get("sklyanin_twist", cyc);
  Presentation d = direct.presentation;
  d.relations = {d.relations[2], d.relations[3], d.relations[4], d.relations[5], direct.elements["Theta1"],
                 direct.elements["Theta2"]};
  CHECK(relation_span_equal(from_map.presentation, d, 2).equal);

  std::vector<std::string> cyc2 = {"3", "-5/7", "2"};
  auto from_map2 = catalog_get("stafford_inf_34_twist", cyc2);
  auto direct2 = catalog_get("sklyanin_twist", cyc2);
  Presentation d2 = direct2.presentation;
  d2.relations = {d2.relations[0], d2.relations[1], d2.relations[4], d2.relations[5], direct2.elements["Theta1"],
                  direct2.elements["Theta2"]};
  CHECK(relation_span_equal(from_map2.presentation, d2, 2).equal);
}

TEST_CASE("catalog parameter constraints name the failed condition") {
  CHECK(catalog_get("sklyanin", kParams).presentation.relations.size() == 6);
  try {
    catalog_get("sklyanin", {"1", "2", "-1"});
    FAIL("expected a constraint error");
  } catch (const TwistError& e) {
    CHECK(e.error_class() == ErrorClass::Precondition);
    CHECK(std::string(e.what()).find("alpha not in {0, 1, -1}") != std::string::npos);
  }
  CHECK_THROWS_WITH_AS(catalog_get("sklyanin", {"2", "3", "4"}), doctest::Contains("alpha + beta + gamma"), TwistError);
  CHECK_THROWS_WITH_AS(catalog_get("vancliff", {"2", "3", "6"}), doctest::Contains("lambda != alpha*beta"), TwistError);
  auto v = catalog_get("vancliff", {"2", "3", "5"});
  CHECK(v.presentation.show(v.elements["Omega"]) == "x2*x3 + 2*x1*x4");
  CHECK_THROWS_WITH_AS(catalog_get("stafford_d", {"2", "3", "-5/7", "1", "0", "1"}), doctest::Contains("d != (1,0)"),
                       TwistError);
  // -1 - beta*gamma = 8/7.
  CHECK_THROWS_WITH_AS(catalog_get("stafford_d", {"2", "3", "-5/7", "7", "8", "1"}),
                       doctest::Contains("d != (1,-1-beta*gamma)"), TwistError);
  CHECK_THROWS_WITH_AS(catalog_get("stafford_d", {"2", "3", "-5/7", "1", "2", "2"}),
                       doctest::Contains("d != (1,beta-1)"), TwistError);
  CHECK_THROWS_AS(catalog_get("skew_clifford", {"3"}, FieldTower::rationals()), TwistError);
  CHECK_THROWS_AS(catalog_get("no_such_algebra", {}), TwistError);
}

TEST_CASE("Koszul duals") {
  auto kxy = catalog_get("polynomial", {"2"});
  auto d = koszul_dual(kxy.presentation);
  CHECK(d.names() == std::vector<std::string>{"xb", "yb"});
  Presentation expected = d;
  expected.relations = {d.parse("xb^2"), d.parse("yb^2"), d.parse("xb*yb + yb*xb")};
  CHECK(relation_span_equal(d, expected, 2).equal);
  CHECK(d.relations.size() == 3);

  auto s = catalog_get("sklyanin_b", kParams);
  auto dd = koszul_dual(koszul_dual(s.presentation));
  dd.gens = s.presentation.gens;
  CHECK(relation_span_equal(dd, s.presentation, 2).equal);

  // (A^!)^{G,mu^-1} and (A^{G,mu})^! agree.
  auto a = catalog_get("sklyanin", kParams);
  auto mu = presentation_cocycle(a.presentation);
  auto left = koszul_dual(cocycle_twist(a.presentation, mu));
  auto right = cocycle_twist(koszul_dual(a.presentation), mu.inverse(), nullptr, left.names());
  CHECK(relation_span_equal(left, right, 2).equal);
  CHECK_THROWS_AS(koszul_dual(catalog_get("rz_a", {}).presentation), TwistError);
}

TEST_CASE("presentation text round trip") {
  for (auto name : {"sklyanin_twist", "skew_clifford", "sl2_hom_efh"}) {
    auto e = catalog_get(name, std::string(name) == "skew_clifford" ? std::vector<std::string>{"3"}
                                  : std::string(name) == "sl2_hom_efh" ? std::vector<std::string>{}
                                                                      : kParams);
    auto text = e.presentation.to_text();
    auto back = parse_presentation(text);
    CHECK(back.relations == e.presentation.relations);
    CHECK(back.names() == e.presentation.names());
    CHECK(back.to_text() == text);
  }
  CHECK_THROWS_AS(parse_presentation("[generators]\nx y\n[relations]\nx*y - z\n"), TwistError);
}
