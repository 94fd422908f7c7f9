#include "twistbench/catalog.hpp"

#include <functional>

#include "twistbench/errors.hpp"

namespace tb {

namespace {

const char* kSklyaninF[6] = {"[x0,x1] - alpha*[x2,x3]+", "[x0,x1]+ - [x2,x3]", "[x0,x2] - beta*[x3,x1]+",
                             "[x0,x2]+ - [x3,x1]",       "[x0,x3] - gamma*[x1,x2]+", "[x0,x3]+ - [x1,x2]"};
const char* kSklyaninFmu[6] = {"[v0,v1] - alpha*[v2,v3]", "[v0,v1]+ - [v2,v3]+", "[v0,v2] - beta*[v3,v1]",
                               "[v0,v2]+ - [v3,v1]+",     "[v0,v3] + gamma*[v1,v2]", "[v0,v3]+ + [v1,v2]+"};
const char* kOmega1 = "-x0^2 + x1^2 + x2^2 + x3^2";
const char* kOmega2 = "x1^2 + (1 + alpha)/(1 - beta)*x2^2 + (1 - alpha)/(1 + gamma)*x3^2";
const char* kTheta1 = "-v0^2 + v1^2 + v2^2 - v3^2";
const char* kTheta2 = "v1^2 + (1 + alpha)/(1 - beta)*v2^2 - (1 - alpha)/(1 + gamma)*v3^2";

struct Args {
  std::string entry;
  std::vector<std::string> text;
  TowerPtr tower;
};

[[noreturn]] void constraint(const std::string& entry, const std::string& failed, const std::string& detail = "") {
  fail_pre("parameter-constraint",
           entry + ": constraint " + failed + " fails" + (detail.empty() ? "" : " (" + detail + ")"), failed);
}

Presentation base(const TowerPtr& t, const std::vector<std::string>& names,
                  const std::vector<std::pair<std::string, Scalar>>& constants) {
  Presentation p;
  p.tower = t;
  for (auto& n : names) p.gens.push_back({n, 1});
  for (auto& [n, v] : constants)
    if (!(n == "i" && t->level_of("i"))) p.constants.emplace_back(n, v.in(t));
  return p;
}

void add_relations(Presentation& p, const std::vector<std::string>& rels) {
  for (auto& r : rels) p.relations.push_back(p.parse(r));
}

Matrix diag_signs(const std::vector<int>& s, const TowerPtr& t) {
  Vec d;
  for (int x : s) d.emplace_back(t, x);
  return Matrix::diag(d, t);
}

// Klein-four defaults: diagonal action, grading read with the factor-swap
// duality, and the cocycle klein_mu.
void klein_defaults(Presentation& p, const std::vector<int>& g1, const std::vector<int>& g2,
                    const std::vector<std::string>& grades) {
  FinAbGroup G({2, 2});
  GradedAction act;
  act.group = G;
  act.matrices = {diag_signs(g1, p.tower), diag_signs(g2, p.tower)};
  p.action = act;
  GGrading gr;
  gr.group = G;
  gr.duality = Duality::factor_swap();
  for (auto& g : grades) gr.grade.push_back(G.parse_element(g));
  p.grading = gr;
  p.cocycle = "builtin:klein_mu";
}

Scalar param(const Args& a, size_t k) { return parse_scalar(a.text[k], a.tower); }

void expect_count(const Args& a, size_t n) {
  if (a.text.size() != n)
    fail_pre("parameter-count", a.entry + " takes " + std::to_string(n) + " parameter(s), got " +
                                    std::to_string(a.text.size()));
}

Rational rational_param(const Args& a, const Scalar& x, const std::string& what) {
  if (!x.is_rational())
    fail_pre("unsupported-parameter", a.entry + ": " + what + " must be rational to adjoin its square root");
  return x.rational_value();
}

// Tower used when the caller gives none: Q, or Q(i) when the entry needs i.
TowerPtr default_tower(bool needs_i) {
  static TowerPtr qi = FieldTower::build({{"i", "t^2 + 1"}});
  return needs_i ? qi : FieldTower::rationals();
}

struct Sklyanin {
  Scalar alpha, beta, gamma;
};

Sklyanin sklyanin_params(const Args& a) {
  expect_count(a, 3);
  Sklyanin s{param(a, 0), param(a, 1), param(a, 2)};
  const char* names[3] = {"alpha", "beta", "gamma"};
  const Scalar* vals[3] = {&s.alpha, &s.beta, &s.gamma};
  for (int k = 0; k < 3; ++k)
    for (int c : {0, 1, -1})
      if (*vals[k] == Scalar(c))
        constraint(a.entry, std::string(names[k]) + " not in {0, 1, -1}",
                   std::string(names[k]) + " = " + std::to_string(c));
  Scalar sum = s.alpha + s.beta + s.gamma + s.alpha * s.beta * s.gamma;
  if (!sum.is_zero())
    constraint(a.entry, "alpha + beta + gamma + alpha*beta*gamma = 0", "left side is " + sum.to_string());
  return s;
}

std::vector<std::pair<std::string, Scalar>> sklyanin_constants(const Sklyanin& s) {
  return {{"alpha", s.alpha}, {"beta", s.beta}, {"gamma", s.gamma}};
}

const std::vector<std::string> kX = {"x0", "x1", "x2", "x3"};
const std::vector<std::string> kV = {"v0", "v1", "v2", "v3"};
const std::vector<std::string> kKleinGrades = {"e", "g1", "g2", "g1*g2"};

void sklyanin_klein(Presentation& p) { klein_defaults(p, {1, 1, -1, -1}, {1, -1, 1, -1}, kKleinGrades); }

// Relations f_j (or f_j^mu) for the listed indices 1..6, then optionally Omega1, Omega2 (Theta1, Theta2).
CatalogEntry sklyanin_like(const Args& a, bool twisted, const std::vector<int>& fs, bool omegas) {
  auto s = sklyanin_params(a);
  CatalogEntry e;
  e.presentation = base(a.tower, twisted ? kV : kX, sklyanin_constants(s));
  Presentation& p = e.presentation;
  for (int j : fs) p.relations.push_back(p.parse(twisted ? kSklyaninFmu[j - 1] : kSklyaninF[j - 1]));
  NcPoly o1 = p.parse(twisted ? kTheta1 : kOmega1), o2 = p.parse(twisted ? kTheta2 : kOmega2);
  if (omegas) {
    p.relations.push_back(o1);
    p.relations.push_back(o2);
  }
  e.elements[twisted ? "Theta1" : "Omega1"] = o1;
  e.elements[twisted ? "Theta2" : "Omega2"] = o2;
  sklyanin_klein(p);
  return e;
}

bool projectively_equal(const Scalar& d1, const Scalar& d2, const Scalar& c) {
  return !d1.is_zero() && d2 == c * d1;
}

// Exclusions on d for S_{d,i}. Indices 3..6 are moved to 1 or 2 through the
// cyclic isomorphisms S_{d,i}(alpha,beta,gamma) = S_{d',i+2}(gamma,alpha,beta)
// = S_{d'',i+4}(beta,gamma,alpha).
void check_stafford_d(const Args& a, const Sklyanin& s, const Scalar& d1, const Scalar& d2, int i) {
  if (d1.is_zero() && d2.is_zero()) constraint(a.entry, "d != (0,0)");
  if (i < 1 || i > 6) constraint(a.entry, "1 <= i <= 6", "i = " + std::to_string(i));
  Scalar al = s.alpha, be = s.beta, ga = s.gamma, e1 = d1;
  std::string via;
  Scalar one(1);
  if (i == 3 || i == 4) {
    // (a,b,c) = (gamma,alpha,beta) of the source: source alpha = b, beta = c, gamma = a.
    al = s.beta, be = s.gamma, ga = s.alpha;
    e1 = d1 * (one - al) / (one + ga);
    via = " after the cyclic isomorphism onto S_{d," + std::to_string(i - 2) + "}";
    i -= 2;
  } else if (i == 5 || i == 6) {
    al = s.gamma, be = s.alpha, ga = s.beta;
    e1 = d1 * (one + al) / (one - be);
    via = " after the cyclic isomorphism onto S_{d," + std::to_string(i - 4) + "}";
    i -= 4;
  }
  if (i == 1) {
    if (projectively_equal(e1, d2, Scalar(0))) constraint(a.entry, "d != (1,0)" + via);
    if (projectively_equal(e1, d2, -one - be * ga)) constraint(a.entry, "d != (1,-1-beta*gamma)" + via);
  } else {
    if (projectively_equal(e1, d2, be - one)) constraint(a.entry, "d != (1,beta-1)" + via);
    if (projectively_equal(e1, d2, -one - ga)) constraint(a.entry, "d != (1,-1-gamma)" + via);
  }
}

CatalogEntry stafford_d(const Args& a0, bool twisted) {
  expect_count(a0, 6);
  Args a = a0;
  a.text.resize(3);
  auto s = sklyanin_params(a);
  Scalar d1 = param(a0, 3), d2 = param(a0, 4);
  Scalar iv = param(a0, 5);
  if (!iv.is_rational() || iv.rational_value().get_den() != 1)
    constraint(a0.entry, "i is an integer", "i = " + iv.to_string());
  int i = static_cast<int>(iv.rational_value().get_num().get_si());
  check_stafford_d(a0, s, d1, d2, i);
  std::vector<int> fs;
  for (int j = 1; j <= 6; ++j)
    if (j != i) fs.push_back(j);
  CatalogEntry e = sklyanin_like(a, twisted, fs, false);
  Presentation& p = e.presentation;
  p.constants.emplace_back("d1", d1.in(p.tower));
  p.constants.emplace_back("d2", d2.in(p.tower));
  NcPoly combo = (e.elements[twisted ? "Theta1" : "Omega1"] * d1.in(p.tower)) +
                 (e.elements[twisted ? "Theta2" : "Omega2"] * d2.in(p.tower));
  p.relations.insert(p.relations.begin(), combo);
  return e;
}

// S_{inf,1,2}^{G,mu} and S_{inf,3,4}^{G,mu} at parameters (a,b,c), produced
// from S_inf^{G,mu} at the source parameters by the explicit cyclic maps.
CatalogEntry stafford_cyclic(const Args& a, int which) {
  expect_count(a, 3);
  Args src = a;
  // S_{inf,1,2}(gamma,alpha,beta) comes from S_inf(alpha,beta,gamma);
  // S_{inf,3,4}(beta,gamma,alpha) likewise.
  if (which == 12)
    src.text = {a.text[1], a.text[2], a.text[0]};
  else
    src.text = {a.text[2], a.text[0], a.text[1]};
  CatalogEntry s = sklyanin_like(src, true, {1, 2, 3, 4}, true);
  const TowerPtr& t = s.presentation.tower;
  Scalar i = imaginary_unit(t);
  // Images of v0..v3: (123) then v1 -> -i v1, v3 -> i v3; (132) then v2 -> -i v2, v3 -> i v3.
  std::vector<NcPoly> img(4);
  img[0] = NcPoly::gen(0);
  if (which == 12) {
    img[1] = NcPoly::gen(2);
    img[2] = NcPoly::gen(3) * i;
    img[3] = NcPoly::gen(1) * (-i);
  } else {
    img[1] = NcPoly::gen(3) * i;
    img[2] = NcPoly::gen(1);
    img[3] = NcPoly::gen(2) * (-i);
  }
  auto target = sklyanin_params(a);
  CatalogEntry e;
  e.presentation = s.presentation;
  e.presentation.constants = {};
  for (auto& [n, v] : sklyanin_constants(target)) e.presentation.constants.emplace_back(n, v.in(t));
  for (auto& r : e.presentation.relations) r = r.substitute(img);
  Presentation& p = e.presentation;
  e.elements["Theta1"] = p.parse(kTheta1);
  e.elements["Theta2"] = p.parse(kTheta2);
  return e;
}

CatalogEntry stafford_inf_untwisted_cyclic(const Args& a, int which) {
  // Relations f_i, f_{i+1} of A replaced by Omega1, Omega2.
  return which == 12 ? sklyanin_like(a, false, {3, 4, 5, 6}, true) : sklyanin_like(a, false, {1, 2, 5, 6}, true);
}

CatalogEntry annihilator(const Args& a0) {
  expect_count(a0, 5);
  Args a = a0;
  a.text.resize(3);
  TowerPtr provisional = a0.tower ? a0.tower : default_tower(true);
  a.tower = provisional;
  auto s = sklyanin_params(a);
  Scalar cs = parse_scalar(a0.text[3], provisional), sg = parse_scalar(a0.text[4], provisional);
  int which = cs == Scalar(1) ? 1 : cs == Scalar(2) ? 2 : cs == Scalar(3) ? 3 : 0;
  if (!which) constraint(a0.entry, "case in {1, 2, 3}", "case = " + cs.to_string());
  if (sg != Scalar(1) && sg != Scalar(-1)) constraint(a0.entry, "sign in {1, -1}", "sign = " + sg.to_string());
  TowerPtr t = provisional;
  if (!a0.tower) {
    std::vector<std::pair<std::string, Rational>> roots;
    if (which != 3) roots.emplace_back("rg", rational_param(a0, s.gamma, "gamma"));
    if (which != 2) roots.emplace_back("rb", rational_param(a0, s.beta, "beta"));
    if (which != 1) roots.emplace_back("ra", rational_param(a0, s.alpha, "alpha"));
    t = adjoin_square_roots(provisional, roots);
  }
  auto root = [&](const Scalar& x, const std::string& name) {
    if (!x.is_rational()) fail_pre("unsupported-parameter", a0.entry + ": " + name + " must be rational");
    auto r = rational_sqrt(x.rational_value(), t);
    if (!r) fail_pre("unsupported-root", a0.entry + ": the tower has no square root of " + name, name);
    return *r;
  };
  Scalar i = imaginary_unit(t), sign = sg.in(t), r, sv;
  std::vector<std::string> gens;
  if (which == 1) {
    r = root(s.gamma, "gamma").inverse();
    sv = sign * root(s.beta, "beta").inverse();
    gens = {"r*s*v0 + v1", "r*v3 - s*v2"};
  } else if (which == 2) {
    r = i * root(s.gamma, "gamma").inverse();
    sv = sign * i * root(s.alpha, "alpha").inverse();
    gens = {"r*s*v0 + v2", "s*v1 - r*v3"};
  } else {
    r = -root(s.beta, "beta").inverse();
    sv = sign * i * root(s.alpha, "alpha").inverse();
    gens = {"r*s*v0 - v3", "r*v2 - s*v1"};
  }
  a.tower = t;
  Sklyanin st{s.alpha.in(t), s.beta.in(t), s.gamma.in(t)};
  CatalogEntry e;
  e.presentation = base(t, kV, sklyanin_constants(st));
  Presentation& p = e.presentation;
  p.constants.emplace_back("r", r);
  p.constants.emplace_back("s", sv);
  for (auto f : kSklyaninFmu) p.relations.push_back(p.parse(f));
  e.elements["ann1"] = p.parse(gens[0]);
  e.elements["ann2"] = p.parse(gens[1]);
  p.relations.push_back(e.elements["ann1"]);
  p.relations.push_back(e.elements["ann2"]);
  return e;
}

CatalogEntry vancliff(const Args& a, bool twisted) {
  expect_count(a, 3);
  Scalar al = param(a, 0), be = param(a, 1), la = param(a, 2);
  if (al.is_zero()) constraint(a.entry, "alpha != 0");
  if (be.is_zero()) constraint(a.entry, "beta != 0");
  if (la.is_zero()) constraint(a.entry, "lambda != 0");
  if (la == al * be) constraint(a.entry, "lambda != alpha*beta");
  CatalogEntry e;
  std::vector<std::string> names = twisted ? std::vector<std::string>{"v1", "v2", "v3", "v4"}
                                           : std::vector<std::string>{"x1", "x2", "x3", "x4"};
  e.presentation = base(a.tower, names, {{"alpha", al}, {"beta", be}, {"lambda", la}});
  Presentation& p = e.presentation;
  if (!twisted) {
    add_relations(p, {"x2*x1 - alpha*x1*x2", "x3*x1 - lambda*x1*x3", "x4*x1 - alpha*lambda*x1*x4",
                      "x4*x3 - alpha*x3*x4", "x4*x2 - lambda*x2*x4",
                      "x3*x2 - beta*x2*x3 - (alpha*beta - lambda)*x1*x4"});
    e.elements["Omega"] = p.parse("alpha*x1*x4 + x2*x3");
  } else {
    add_relations(p, {"v2*v1 - alpha*v1*v2", "v3*v1 - lambda*v1*v3", "v4*v1 - alpha*lambda*v1*v4",
                      "v4*v3 + alpha*v3*v4", "v4*v2 + lambda*v2*v4",
                      "v3*v2 + beta*v2*v3 - (alpha*beta - lambda)*v1*v4"});
  }
  klein_defaults(p, {1, 1, -1, -1}, {1, -1, 1, -1}, kKleinGrades);
  return e;
}

const char* kMuSkew[4][4] = {
    {"1", "i", "-1", "i"}, {"-i", "1", "i", "-1"}, {"-1", "-i", "1", "i"}, {"-i", "-1", "-i", "1"}};
const char* kMuSkewPrime[4][4] = {
    {"1", "-i", "-1", "i"}, {"i", "1", "-i", "-1"}, {"-1", "i", "1", "-i"}, {"-i", "-1", "i", "1"}};

Scalar gamma_nonzero(const Args& a) {
  Scalar g = param(a, 0);
  if (g.is_zero()) constraint(a.entry, "gamma != 0");
  return g;
}

void skew_clifford_klein(Presentation& p) {
  klein_defaults(p, {1, -1, 1, -1}, {-1, 1, -1, 1}, {"g1", "g2", "g1", "g2"});
}

CatalogEntry skew_clifford(const Args& a, bool twisted) {
  expect_count(a, 1);
  Scalar g = gamma_nonzero(a);
  Scalar i = imaginary_unit(a.tower);
  CatalogEntry e;
  e.presentation = base(a.tower, twisted ? std::vector<std::string>{"v1", "v2", "v3", "v4"}
                                         : std::vector<std::string>{"x1", "x2", "x3", "x4"},
                        {{"gamma", g}, {"i", i}});
  Presentation& p = e.presentation;
  if (!twisted)
    add_relations(p, {"x4*x1 - i*x1*x4", "x3^2 - x1^2", "x3*x1 - x1*x3 + x2^2", "x3*x2 - i*x2*x3", "x4^2 - x2^2",
                      "x4*x2 - x2*x4 + gamma*x1^2"});
  else
    add_relations(p, {"v4*v1 + i*v1*v4", "v3^2 - v1^2", "v3*v1 - v1*v3 + v2^2", "v3*v2 + i*v2*v3", "v4^2 - v2^2",
                      "v4*v2 - v2*v4 + gamma*v1^2"});
  skew_clifford_klein(p);
  return e;
}

// S(mu) = k<z1..z4>/(z_j z_i - mu_ij z_i z_j : i < j), with the quadrics
// q1..q4 attached; with_quadrics also factors them out.
CatalogEntry skew_polynomial(const Args& a, bool prime, bool with_quadrics) {
  expect_count(a, with_quadrics ? 1 : 0);
  Scalar i = imaginary_unit(a.tower);
  std::vector<std::pair<std::string, Scalar>> consts = {{"i", i}};
  if (with_quadrics) consts.emplace_back("gamma", gamma_nonzero(a));
  CatalogEntry e;
  e.presentation = base(a.tower, {"z1", "z2", "z3", "z4"}, consts);
  Presentation& p = e.presentation;
  auto& mu = prime ? kMuSkewPrime : kMuSkew;
  for (int r = 0; r < 4; ++r)
    for (int c = r + 1; c < 4; ++c) {
      std::string zi = "z" + std::to_string(r + 1), zj = "z" + std::to_string(c + 1);
      p.relations.push_back(p.parse(zj + "*" + zi + " - (" + mu[r][c] + ")*" + zi + "*" + zj));
    }
  if (with_quadrics) {
    const char* q[4] = {"z1*z2", "z3*z4", "z1^2 + z3^2 + gamma*z2*z4", "z2^2 + z4^2 + z1*z3"};
    for (int k = 0; k < 4; ++k) {
      e.elements["q" + std::to_string(k + 1)] = p.parse(q[k]);
      p.relations.push_back(p.parse(q[k]));
    }
  }
  return e;
}

CatalogEntry sl2_hom(const Args& a, bool twisted) {
  expect_count(a, 0);
  CatalogEntry e;
  e.presentation = base(a.tower, {"E", "F", "H", "t"}, {});
  Presentation& p = e.presentation;
  if (!twisted)
    add_relations(p, {"E*F - F*E + 2*H*t", "H*E - E*H - 2*F*t", "H*F - F*H - 2*E*t", "t*E - E*t", "t*F - F*t",
                      "t*H - H*t"});
  else
    add_relations(p, {"E*F + F*E - 2*H*t", "H*E + E*H - 2*F*t", "H*F + F*H - 2*E*t", "t*E - E*t", "t*F - F*t",
                      "t*H - H*t"});
  klein_defaults(p, {1, -1, -1, 1}, {-1, -1, 1, 1}, {"g1", "g1*g2", "g2", "e"});
  return e;
}

// Homogenized U(sl2) in the basis e, f, h where the Klein action is not diagonal.
CatalogEntry sl2_hom_efh(const Args& a) {
  expect_count(a, 0);
  CatalogEntry e;
  e.presentation = base(a.tower, {"e", "f", "h", "t"}, {});
  Presentation& p = e.presentation;
  add_relations(p, {"e*f - f*e - h*t", "h*e - e*h - 2*e*t", "h*f - f*h + 2*f*t", "t*e - e*t", "t*f - f*t",
                    "t*h - h*t"});
  GradedAction act;
  act.group = FinAbGroup({2, 2});
  Matrix g1 = parse_matrix("[[0,1,0,0],[1,0,0,0],[0,0,-1,0],[0,0,0,1]]", 4, p);
  act.matrices = {g1, diag_signs({-1, -1, 1, 1}, p.tower)};
  p.action = act;
  return e;
}

// Rogalski-Zhang algebras in the diagonal basis w1 = x1 + x2, w2 = x1 - x2, w3 = x3.
CatalogEntry rogalski_zhang(const Args& a, char family) {
  bool needs_gamma = family == 'E';
  expect_count(a, needs_gamma ? 1 : 0);
  std::vector<std::pair<std::string, Scalar>> consts;
  if (needs_gamma) {
    Scalar g = param(a, 0);
    if (!(g * g + Scalar(1)).is_zero()) constraint(a.entry, "gamma^2 = -1", "gamma = " + g.to_string());
    consts.emplace_back("gamma", g);
  }
  if (family == 'G' || family == 'H') consts.emplace_back("i", imaginary_unit(a.tower));
  CatalogEntry e;
  e.presentation = base(a.tower, {"w1", "w2", "w3"}, consts);
  Presentation& p = e.presentation;
  std::vector<std::string> rels = {"w1^2 - w2^2", "w3*w1 - w1*w3"};
  bool minus = family == 'A' || family == 'B' || family == 'C' || family == 'D';
  rels.push_back(minus ? "w3^2*w2 - w2*w3^2" : "w3^2*w2 + w2*w3^2");
  switch (family) {
    case 'A': rels.push_back("[w3,[w1,w2]+]"); break;
    case 'B': rels.push_back("[w3,[w2,w1]]+"); break;
    case 'C': rels.push_back("[w3,[w1,w2]]"); break;
    case 'D': rels.push_back("[w3,[w1,w2]+]+"); break;
    case 'E': rels.push_back("w3*w2*w1 - w1*w3*w2 + gamma*w1*w2*w3 - gamma*w2*w1*w3"); break;
    case 'G': rels.push_back("w3*w1*w2 + w3*w2*w1 + i*w1*w2*w3 + i*w2*w1*w3"); break;
    case 'H': rels.push_back("-w3*w1*w2 - w3*w2*w1 + i*w1*w2*w3 + i*w2*w1*w3"); break;
  }
  add_relations(p, rels);
  klein_defaults(p, {1, -1, 1}, {1, 1, -1}, {"e", "g2", "g1"});
  return e;
}

CatalogEntry quantum_plane(const Args& a) {
  expect_count(a, 1);
  Scalar q = param(a, 0);
  if (q.is_zero()) constraint(a.entry, "q != 0");
  CatalogEntry e;
  e.presentation = base(a.tower, {"x", "y"}, {{"q", q}});
  add_relations(e.presentation, {"x*y - q*y*x"});
  return e;
}

CatalogEntry polynomial(const Args& a) {
  expect_count(a, 1);
  Scalar nv = param(a, 0);
  if (!nv.is_rational() || nv.rational_value().get_den() != 1 || nv.rational_value() < 1 || nv.rational_value() > 26)
    constraint(a.entry, "1 <= n <= 26 integer", "n = " + nv.to_string());
  int n = static_cast<int>(nv.rational_value().get_num().get_si());
  std::vector<std::string> names;
  if (n <= 3) {
    const char* small[3] = {"x", "y", "z"};
    for (int k = 0; k < n; ++k) names.push_back(small[k]);
  } else {
    for (int k = 1; k <= n; ++k) names.push_back("x" + std::to_string(k));
  }
  CatalogEntry e;
  e.presentation = base(a.tower, names, {});
  for (int r = 0; r < n; ++r)
    for (int c = r + 1; c < n; ++c)
      e.presentation.relations.push_back(e.presentation.parse(names[r] + "*" + names[c] + " - " + names[c] + "*" +
                                                              names[r]));
  return e;
}

struct Builder {
  CatalogInfo info;
  bool needs_i;
  std::function<CatalogEntry(const Args&)> make;
};

const std::vector<Builder>& builders() {
  static const std::vector<Builder> b = {
      {{"sklyanin", {"alpha", "beta", "gamma"}, "4-dimensional Sklyanin algebra A(alpha,beta,gamma)"},
       false,
       [](const Args& a) { return sklyanin_like(a, false, {1, 2, 3, 4, 5, 6}, false); }},
      {{"sklyanin_twist", {"alpha", "beta", "gamma"}, "cocycle twist A(alpha,beta,gamma)^{G,mu}"},
       false,
       [](const Args& a) { return sklyanin_like(a, true, {1, 2, 3, 4, 5, 6}, false); }},
      {{"sklyanin_b", {"alpha", "beta", "gamma"}, "B = A/(Omega1, Omega2)"},
       false,
       [](const Args& a) { return sklyanin_like(a, false, {1, 2, 3, 4, 5, 6}, true); }},
      {{"sklyanin_b_twist", {"alpha", "beta", "gamma"}, "B^{G,mu} = A^{G,mu}/(Theta1, Theta2)"},
       false,
       [](const Args& a) { return sklyanin_like(a, true, {1, 2, 3, 4, 5, 6}, true); }},
      {{"sklyanin_twist_annihilator",
        {"alpha", "beta", "gamma", "case", "sign"},
        "A^{G,mu} modulo the two degree-1 generators of the annihilator of an order-2 point module pair"},
       true,
       annihilator},
      {{"stafford_inf", {"alpha", "beta", "gamma"}, "Stafford algebra S_inf: f1..f4, Omega1, Omega2"},
       false,
       [](const Args& a) { return sklyanin_like(a, false, {1, 2, 3, 4}, true); }},
      {{"stafford_inf_twist", {"alpha", "beta", "gamma"}, "S_inf^{G,mu}: f1^mu..f4^mu, Theta1, Theta2"},
       false,
       [](const Args& a) { return sklyanin_like(a, true, {1, 2, 3, 4}, true); }},
      {{"stafford_inf_12", {"alpha", "beta", "gamma"}, "S_inf,1,2: f3..f6, Omega1, Omega2"},
       false,
       [](const Args& a) { return stafford_inf_untwisted_cyclic(a, 12); }},
      {{"stafford_inf_34", {"alpha", "beta", "gamma"}, "S_inf,3,4: f1, f2, f5, f6, Omega1, Omega2"},
       false,
       [](const Args& a) { return stafford_inf_untwisted_cyclic(a, 34); }},
      {{"stafford_inf_12_twist", {"alpha", "beta", "gamma"},
        "S_inf,1,2^{G,mu}, obtained from S_inf^{G,mu} by permuting v1, v2, v3 cyclically and rescaling"},
       true,
       [](const Args& a) { return stafford_cyclic(a, 12); }},
      {{"stafford_inf_34_twist", {"alpha", "beta", "gamma"},
        "S_inf,3,4^{G,mu}, obtained from S_inf^{G,mu} by permuting v1, v2, v3 cyclically and rescaling"},
       true,
       [](const Args& a) { return stafford_cyclic(a, 34); }},
      {{"stafford_d", {"alpha", "beta", "gamma", "d1", "d2", "i"}, "Stafford algebra S_{d,i}"},
       false,
       [](const Args& a) { return stafford_d(a, false); }},
      {{"stafford_d_twist", {"alpha", "beta", "gamma", "d1", "d2", "i"}, "S_{d,i}^{G,mu}"},
       false,
       [](const Args& a) { return stafford_d(a, true); }},
      {{"vancliff", {"alpha", "beta", "lambda"}, "Vancliff algebra R(alpha,beta,lambda)"},
       false,
       [](const Args& a) { return vancliff(a, false); }},
      {{"vancliff_twist", {"alpha", "beta", "lambda"}, "R(alpha,beta,lambda)^{G,mu}"},
       false,
       [](const Args& a) { return vancliff(a, true); }},
      {{"skew_clifford", {"gamma"}, "graded skew Clifford algebra A(gamma)"},
       true,
       [](const Args& a) { return skew_clifford(a, false); }},
      {{"skew_clifford_twist", {"gamma"}, "A(gamma)^{G,tau}"},
       true,
       [](const Args& a) { return skew_clifford(a, true); }},
      {{"skew_poly_mu", {}, "skew polynomial ring S(mu)"},
       true,
       [](const Args& a) { return skew_polynomial(a, false, false); }},
      {{"skew_poly_mu_prime", {}, "skew polynomial ring S(mu')"},
       true,
       [](const Args& a) { return skew_polynomial(a, true, false); }},
      {{"skew_poly_mu_quadrics", {"gamma"}, "S(mu)/(q1, q2, q3, q4)"},
       true,
       [](const Args& a) { return skew_polynomial(a, false, true); }},
      {{"skew_poly_mu_prime_quadrics", {"gamma"}, "S(mu')/(q1, q2, q3, q4)"},
       true,
       [](const Args& a) { return skew_polynomial(a, true, true); }},
      {{"sl2_hom", {}, "homogenized enveloping algebra U_h(sl2) in the basis E, F, H, t"},
       false,
       [](const Args& a) { return sl2_hom(a, false); }},
      {{"sl2_hom_twist", {}, "U_h(sl2)^{G,mu}"}, false, [](const Args& a) { return sl2_hom(a, true); }},
      {{"sl2_hom_efh", {}, "U_h(sl2) in the basis e, f, h, t with the non-diagonal Klein action"},
       false,
       sl2_hom_efh},
      {{"rz_a", {}, "Rogalski-Zhang A(1,-1), w-basis"}, false, [](const Args& a) { return rogalski_zhang(a, 'A'); }},
      {{"rz_b", {}, "Rogalski-Zhang B(1), w-basis"}, false, [](const Args& a) { return rogalski_zhang(a, 'B'); }},
      {{"rz_c", {}, "Rogalski-Zhang C(1), w-basis"}, false, [](const Args& a) { return rogalski_zhang(a, 'C'); }},
      {{"rz_d", {}, "Rogalski-Zhang D(1,1), w-basis"}, false, [](const Args& a) { return rogalski_zhang(a, 'D'); }},
      {{"rz_e", {"gamma"}, "Rogalski-Zhang E(1,gamma), gamma = i or -i, w-basis"},
       true,
       [](const Args& a) { return rogalski_zhang(a, 'E'); }},
      {{"rz_g", {}, "Rogalski-Zhang G(1,(1+i)/2), w-basis"},
       true,
       [](const Args& a) { return rogalski_zhang(a, 'G'); }},
      {{"rz_g_bar", {}, "Rogalski-Zhang G(1,(1-i)/2), w-basis"},
       true,
       [](const Args& a) { return rogalski_zhang(a, 'H'); }},
      {{"quantum_plane", {"q"}, "quantum plane k<x,y>/(xy - q yx)"}, false, quantum_plane},
      {{"polynomial", {"n"}, "commutative polynomial ring in n variables"}, false, polynomial},
  };
  return b;
}

}  // namespace

const std::vector<CatalogInfo>& catalog_list() {
  static const std::vector<CatalogInfo> list = [] {
    std::vector<CatalogInfo> v;
    for (auto& b : builders()) v.push_back(b.info);
    return v;
  }();
  return list;
}

CatalogEntry catalog_get(const std::string& name, const std::vector<std::string>& params, const TowerPtr& tower) {
  for (auto& b : builders()) {
    if (b.info.name != name) continue;
    Args a{name, params, tower ? tower : default_tower(b.needs_i)};
    if (tower && b.needs_i && name != "sklyanin_twist_annihilator") imaginary_unit(tower);
    if (name == "sklyanin_twist_annihilator") a.tower = tower;
    CatalogEntry e = b.make(a);
    e.name = name;
    e.signature = b.info.params;
    e.presentation.validate();
    return e;
  }
  fail_pre("unknown-catalog-entry", "no catalog entry named '" + name + "'", name);
}

SklyaninTwistPoints sklyanin_twist_points(const std::vector<std::string>& params) {
  if (params.size() != 3) fail_pre("parameter-count", "sklyanin_twist_points takes alpha, beta, gamma");
  std::vector<Rational> r;
  for (auto& s : params) {
    Scalar x = parse_scalar(s, FieldTower::rationals());
    if (!x.is_rational()) fail_pre("parameter", "the 20 points need rational parameters");
    r.push_back(x.rational_value());
  }
  TowerPtr t = adjoin_square_roots(default_tower(true), {{"ra", r[0]}, {"rb", r[1]}, {"rg", r[2]}});
  SklyaninTwistPoints out;
  out.entry = catalog_get("sklyanin_twist", params, t);
  Scalar i = imaginary_unit(t), O(0), I(1);
  Scalar ia = rational_sqrt(r[0], t)->inverse(), ib = rational_sqrt(r[1], t)->inverse(),
         ig = rational_sqrt(r[2], t)->inverse();
  for (size_t k = 0; k < 4; ++k) {
    Vec e(4, O);
    e[k] = I;
    out.points.push_back({e, e});
  }
  for (long s : {1L, -1L}) {
    Scalar S(s);
    out.points.push_back({{I, S * i, S * i, I}, {I, S * i, S * i, I}});
    out.points.push_back({{I, S * i, -S * i, -I}, {I, S * i, -S * i, -I}});
    out.points.push_back({{I, -ib * ig, -S * ig, -S * ib}, {I, -ib * ig, S * ig, S * ib}});
    out.points.push_back({{I, ib * ig, -S * ig, S * ib}, {I, ib * ig, S * ig, -S * ib}});
    out.points.push_back({{I, S * i * ig, ia * ig, S * i * ia}, {I, -S * i * ig, ia * ig, -S * i * ia}});
    out.points.push_back({{I, -S * i * ig, -ia * ig, S * i * ia}, {I, S * i * ig, -ia * ig, -S * i * ia}});
    out.points.push_back({{I, S * ib, S * i * ia, i * ia * ib}, {I, -S * ib, -S * i * ia, i * ia * ib}});
    out.points.push_back({{I, S * ib, -S * i * ia, -i * ia * ib}, {I, -S * ib, S * i * ia, -i * ia * ib}});
  }
  return out;
}

Presentation koszul_dual(const Presentation& p, const std::vector<std::string>& new_names) {
  size_t n = p.ngens();
  for (auto& r : p.relations)
    if (r.degree() != 2 || !r.is_homogeneous()) fail_pre("not-quadratic", "relation " + p.show(r) + " is not quadratic");
  auto words = all_words(static_cast<int>(n), 2);
  std::vector<Vec> rows;
  for (auto& r : p.relations) rows.push_back(coefficient_vector(r, words, p.tower));
  Matrix R = rows.empty() ? Matrix(0, words.size(), p.tower) : Matrix::from_rows(rows, p.tower);
  auto perp = R.kernel();
  Presentation q;
  q.tower = p.tower;
  for (size_t k = 0; k < n; ++k)
    q.gens.push_back({k < new_names.size() ? new_names[k] : p.gens[k].name + "b", 1});
  q.constants = p.constants;
  if (!perp.empty()) {
    Matrix K = Matrix::from_rows(perp, p.tower);
    K.rref();
    for (size_t i = 0; i < K.rows(); ++i) {
      NcPoly f = from_coefficients(K.row(i), words);
      if (!f.is_zero()) q.relations.push_back(f);
    }
  }
  if (p.grading) {
    GGrading g = *p.grading;
    for (auto& x : g.grade) x = g.group.inv(x);
    q.grading = g;
  }
  if (p.action) {
    GradedAction act = *p.action;
    for (auto& m : act.matrices) m = m.inverse()->transpose();
    q.action = act;
  }
  q.cocycle = p.cocycle;
  q.cocycle_table = p.cocycle_table;
  return q;
}

}  // namespace tb
