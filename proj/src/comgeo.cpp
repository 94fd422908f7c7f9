#include "twistbench/comgeo.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "twistbench/errors.hpp"

namespace tb {

bool PolyRing::less(const Mono& a, const Mono& b) const {
  if (order == MonoOrder::Lex) return a < b;
  int da = 0, db = 0;
  for (int e : a) da += e;
  for (int e : b) db += e;
  if (da != db) return da < db;
  // Reverse lexicographic tie break: the smaller monomial has the larger
  // exponent in the last variable where they differ.
  for (size_t k = a.size(); k-- > 0;)
    if (a[k] != b[k]) return a[k] > b[k];
  return false;
}

std::optional<size_t> PolyRing::index_of(const std::string& name) const {
  for (size_t k = 0; k < vars.size(); ++k)
    if (vars[k] == name) return k;
  return std::nullopt;
}

RingPtr make_ring(std::vector<std::string> vars, TowerPtr tower, MonoOrder order) {
  auto r = std::make_shared<PolyRing>();
  r->vars = std::move(vars);
  r->tower = std::move(tower);
  r->order = order;
  return r;
}

namespace {

bool divides(const Mono& a, const Mono& b) {
  for (size_t k = 0; k < a.size(); ++k)
    if (a[k] > b[k]) return false;
  return true;
}

Mono mono_lcm(const Mono& a, const Mono& b) {
  Mono m(a.size());
  for (size_t k = 0; k < a.size(); ++k) m[k] = std::max(a[k], b[k]);
  return m;
}

Mono mono_div(const Mono& a, const Mono& b) {
  Mono m(a.size());
  for (size_t k = 0; k < a.size(); ++k) m[k] = a[k] - b[k];
  return m;
}

Mono mono_mul(const Mono& a, const Mono& b) {
  Mono m(a.size());
  for (size_t k = 0; k < a.size(); ++k) m[k] = a[k] + b[k];
  return m;
}

bool coprime(const Mono& a, const Mono& b) {
  for (size_t k = 0; k < a.size(); ++k)
    if (a[k] && b[k]) return false;
  return true;
}

}  // namespace

// Internal access for building term lists directly.
class CPolyBuilder {
 public:
  static std::vector<CPoly::Term>& terms(CPoly& p) { return p.t_; }
  static CPoly from_map(const RingPtr& ring, std::map<Mono, Scalar>& m) {
    CPoly p(ring);
    for (auto& [mono, c] : m)
      if (!c.is_zero()) p.t_.emplace_back(mono, c);
    std::sort(p.t_.begin(), p.t_.end(),
              [&](const CPoly::Term& a, const CPoly::Term& b) { return ring->less(b.first, a.first); });
    return p;
  }
};

CPoly CPoly::constant(RingPtr ring, const Scalar& c) {
  return monomial(ring, Mono(ring->nvars(), 0), c);
}

CPoly CPoly::var(RingPtr ring, size_t k) {
  Mono m(ring->nvars(), 0);
  m[k] = 1;
  return monomial(ring, m, Scalar(1));
}

CPoly CPoly::monomial(RingPtr ring, Mono m, const Scalar& c) {
  CPoly p(ring);
  if (!c.is_zero()) p.t_.emplace_back(std::move(m), c.in(p.ring_->tower));
  return p;
}

CPoly CPoly::parse(RingPtr ring, const std::string& text,
                   const std::vector<std::pair<std::string, Scalar>>& constants) {
  Presentation ctx;
  ctx.tower = ring->tower;
  for (auto& v : ring->vars) ctx.gens.push_back({v, 1});
  ctx.constants = constants;
  NcPoly f = parse_ncpoly(text, ctx);
  std::map<Mono, Scalar> m;
  for (auto& [w, c] : f.terms()) {
    Mono mono(ring->nvars(), 0);
    for (size_t k = 0; k < w.size(); ++k) ++mono[letter(w, k)];
    auto it = m.find(mono);
    if (it == m.end())
      m.emplace(mono, c.in(ring->tower));
    else
      it->second += c;
  }
  return CPolyBuilder::from_map(ring, m);
}

int CPoly::total_degree() const {
  int d = 0;
  for (auto& [m, c] : t_) {
    int s = 0;
    for (int e : m) s += e;
    d = std::max(d, s);
  }
  return d;
}

bool CPoly::is_constant() const {
  if (t_.empty()) return true;
  if (t_.size() > 1) return false;
  for (int e : t_[0].first)
    if (e) return false;
  return true;
}

CPoly CPoly::operator+(const CPoly& o) const {
  const RingPtr& r = ring_ ? ring_ : o.ring_;
  CPoly out(r);
  size_t i = 0, j = 0;
  while (i < t_.size() || j < o.t_.size()) {
    if (j == o.t_.size() || (i < t_.size() && r->less(o.t_[j].first, t_[i].first))) {
      out.t_.push_back(t_[i++]);
    } else if (i == t_.size() || r->less(t_[i].first, o.t_[j].first)) {
      out.t_.push_back(o.t_[j++]);
    } else {
      Scalar c = t_[i].second + o.t_[j].second;
      if (!c.is_zero()) out.t_.emplace_back(t_[i].first, c);
      ++i;
      ++j;
    }
  }
  return out;
}

CPoly CPoly::operator-() const {
  CPoly out = *this;
  for (auto& t : out.t_) t.second = -t.second;
  return out;
}

CPoly CPoly::operator-(const CPoly& o) const { return *this + (-o); }

CPoly CPoly::operator*(const Scalar& s) const {
  CPoly out(ring_);
  if (s.is_zero()) return out;
  for (auto& [m, c] : t_) out.t_.emplace_back(m, c * s);
  return out;
}

CPoly CPoly::mul_term(const Mono& m, const Scalar& s) const {
  CPoly out(ring_);
  if (s.is_zero()) return out;
  for (auto& [mm, c] : t_) out.t_.emplace_back(mono_mul(mm, m), c * s);
  return out;
}

CPoly CPoly::operator*(const CPoly& o) const {
  const RingPtr& r = ring_ ? ring_ : o.ring_;
  CPoly out(r);
  for (auto& [m, c] : o.t_) out = out + mul_term(m, c);
  return out;
}

Scalar CPoly::evaluate(const std::vector<Scalar>& point) const {
  Scalar total(0);
  for (auto& [m, c] : t_) {
    Scalar v = c;
    for (size_t k = 0; k < m.size(); ++k)
      if (m[k]) v *= point[k].pow(m[k]);
    total += v;
  }
  return total;
}

CPoly CPoly::substitute(const std::vector<CPoly>& images, const RingPtr& target) const {
  CPoly out(target);
  for (auto& [m, c] : t_) {
    CPoly term = CPoly::constant(target, c);
    for (size_t k = 0; k < m.size(); ++k)
      for (int e = 0; e < m[k]; ++e) term = term * images[k];
    out = out + term;
  }
  return out;
}

CPoly CPoly::in_ring(const RingPtr& r) const {
  std::map<Mono, Scalar> m;
  for (auto& [mono, c] : t_) m.emplace(mono, c);
  return CPolyBuilder::from_map(r, m);
}

CPoly CPoly::monic() const {
  if (t_.empty()) return *this;
  return *this * lead_coeff().inverse();
}

std::string CPoly::to_string() const {
  if (t_.empty()) return "0";
  std::string out;
  for (size_t i = 0; i < t_.size(); ++i) {
    auto& [m, c] = t_[i];
    std::string mono;
    for (size_t k = 0; k < m.size(); ++k) {
      if (!m[k]) continue;
      if (!mono.empty()) mono += "*";
      mono += ring_->vars[k];
      if (m[k] > 1) mono += "^" + std::to_string(m[k]);
    }
    std::string coeff;
    bool negative = false;
    if (c.is_rational()) {
      Rational q = c.rational_value();
      negative = q < 0;
      Rational a = negative ? Rational(-q) : q;
      if (mono.empty() || a != 1) coeff = rational_to_string(a);
    } else {
      coeff = c.to_factor_string();
    }
    std::string body = coeff.empty() ? mono : mono.empty() ? coeff : coeff + "*" + mono;
    if (i == 0)
      out = (negative ? "-" : "") + body;
    else
      out += (negative ? " - " : " + ") + body;
  }
  return out;
}

CPoly reduce(const CPoly& f, const std::vector<CPoly>& basis) {
  const RingPtr& r = f.ring();
  CPoly rem(r), p = f;
  auto& remt = CPolyBuilder::terms(rem);
  while (!p.is_zero()) {
    const Mono& lm = p.lead_mono();
    const CPoly* div = nullptr;
    for (auto& g : basis)
      if (!g.is_zero() && divides(g.lead_mono(), lm)) {
        div = &g;
        break;
      }
    if (div) {
      Scalar c = p.lead_coeff() / div->lead_coeff();
      p = p - div->mul_term(mono_div(lm, div->lead_mono()), c);
    } else {
      remt.push_back(p.terms().front());
      auto& pt = CPolyBuilder::terms(p);
      pt.erase(pt.begin());
    }
  }
  return rem;
}

namespace {

CPoly spoly(const CPoly& a, const CPoly& b) {
  Mono l = mono_lcm(a.lead_mono(), b.lead_mono());
  return a.mul_term(mono_div(l, a.lead_mono()), b.lead_coeff()) -
         b.mul_term(mono_div(l, b.lead_mono()), a.lead_coeff());
}

std::vector<CPoly> interreduce(std::vector<CPoly> g) {
  // Drop elements whose leading monomial is divisible by another's.
  std::vector<CPoly> kept;
  for (size_t i = 0; i < g.size(); ++i) {
    bool redundant = false;
    for (size_t j = 0; j < g.size() && !redundant; ++j) {
      if (i == j) continue;
      if (divides(g[j].lead_mono(), g[i].lead_mono()) && (g[j].lead_mono() != g[i].lead_mono() || j < i))
        redundant = true;
    }
    if (!redundant) kept.push_back(g[i]);
  }
  std::vector<CPoly> out;
  for (size_t i = 0; i < kept.size(); ++i) {
    std::vector<CPoly> others;
    for (size_t j = 0; j < kept.size(); ++j)
      if (j != i) others.push_back(kept[j]);
    CPoly lead = CPoly::monomial(kept[i].ring(), kept[i].lead_mono(), kept[i].lead_coeff());
    CPoly tail = reduce(kept[i] - lead, others);
    out.push_back((lead + tail).monic());
  }
  const RingPtr& r = out.empty() ? nullptr : out[0].ring();
  std::sort(out.begin(), out.end(),
            [&](const CPoly& a, const CPoly& b) { return r->less(a.lead_mono(), b.lead_mono()); });
  return out;
}

}  // namespace

std::vector<CPoly> groebner_basis(const CIdeal& ideal) {
  const RingPtr& r = ideal.ring;
  std::vector<CPoly> g;
  for (auto& f : ideal.gens) {
    CPoly h = reduce(f.in_ring(r), g);
    if (h.is_zero()) continue;
    if (h.is_constant()) return {CPoly::constant(r, Scalar(1))};
    g.push_back(h.monic());
  }
  struct Pair {
    size_t i, j;
    Mono lcm;
    int deg;
  };
  std::vector<Pair> pairs;
  auto pair_deg = [](const Mono& m) {
    int d = 0;
    for (int e : m) d += e;
    return d;
  };
  std::set<std::pair<size_t, size_t>> done;
  for (size_t j = 0; j < g.size(); ++j)
    for (size_t i = 0; i < j; ++i) {
      Mono l = mono_lcm(g[i].lead_mono(), g[j].lead_mono());
      pairs.push_back({i, j, l, pair_deg(l)});
    }
  while (!pairs.empty()) {
    // Normal strategy: smallest lcm first.
    size_t best = 0;
    for (size_t k = 1; k < pairs.size(); ++k)
      if (r->less(pairs[k].lcm, pairs[best].lcm)) best = k;
    Pair pr = pairs[best];
    pairs.erase(pairs.begin() + best);
    done.insert({pr.i, pr.j});
    const CPoly &a = g[pr.i], &b = g[pr.j];
    if (coprime(a.lead_mono(), b.lead_mono())) continue;
    // Chain criterion: some g_k with lead dividing the lcm whose pairs with
    // both i and j are already treated.
    bool chain = false;
    for (size_t k = 0; k < g.size() && !chain; ++k) {
      if (k == pr.i || k == pr.j) continue;
      if (!divides(g[k].lead_mono(), pr.lcm)) continue;
      auto key = [](size_t x, size_t y) { return std::make_pair(std::min(x, y), std::max(x, y)); };
      if (done.count(key(pr.i, k)) && done.count(key(pr.j, k))) chain = true;
    }
    if (chain) continue;
    CPoly h = reduce(spoly(a, b), g);
    if (h.is_zero()) continue;
    if (h.is_constant()) return {CPoly::constant(r, Scalar(1))};
    g.push_back(h.monic());
    size_t j = g.size() - 1;
    for (size_t i = 0; i < j; ++i) {
      Mono l = mono_lcm(g[i].lead_mono(), g[j].lead_mono());
      pairs.push_back({i, j, l, pair_deg(l)});
    }
  }
  if (g.empty()) return g;
  return interreduce(g);
}

bool is_groebner_basis(const std::vector<CPoly>& basis) {
  for (size_t i = 0; i < basis.size(); ++i)
    for (size_t j = i + 1; j < basis.size(); ++j)
      if (!reduce(spoly(basis[i], basis[j]), basis).is_zero()) return false;
  return true;
}

std::string IdealInvariants::dim_text() const { return dim ? std::to_string(*dim) : "-infinity"; }

IdealInvariants ideal_invariants(const RingPtr& ring, const std::vector<CPoly>& groebner) {
  IdealInvariants inv;
  size_t n = ring->nvars();
  for (auto& g : groebner)
    if (g.is_constant() && !g.is_zero()) return inv;  // unit ideal
  std::vector<Mono> leads;
  for (auto& g : groebner) leads.push_back(g.lead_mono());
  // Largest set S of variables with no leading monomial supported inside S.
  int best = 0;
  for (size_t mask = 0; mask < (size_t(1) << n); ++mask) {
    int size = __builtin_popcountll(mask);
    if (size <= best) continue;
    bool independent = true;
    for (auto& m : leads) {
      bool inside = true;
      for (size_t k = 0; k < n; ++k)
        if (m[k] && !(mask >> k & 1)) inside = false;
      if (inside) {
        independent = false;
        break;
      }
    }
    if (independent) best = size;
  }
  inv.dim = best;
  inv.codim = static_cast<int>(n) - best;
  if (best == 0) {
    // Staircase count: monomials divisible by no leading monomial.
    size_t count = 0;
    std::vector<Mono> frontier{Mono(n, 0)};
    std::set<Mono> seen{Mono(n, 0)};
    while (!frontier.empty()) {
      Mono m = frontier.back();
      frontier.pop_back();
      bool standard = true;
      for (auto& l : leads)
        if (divides(l, m)) {
          standard = false;
          break;
        }
      if (!standard) continue;
      ++count;
      for (size_t k = 0; k < n; ++k) {
        Mono nm = m;
        ++nm[k];
        if (seen.insert(nm).second) frontier.push_back(nm);
      }
    }
    inv.quotient_dim = count;
  }
  return inv;
}

IdealInvariants ideal_invariants(const CIdeal& ideal) { return ideal_invariants(ideal.ring, groebner_basis(ideal)); }

namespace {

void require_quadratic(const Presentation& p) {
  for (auto& f : p.relations)
    for (auto& [w, c] : f.terms())
      if (w.size() != 2) fail_pre("non-quadratic", "relation " + p.show(f) + " is not quadratic");
}

}  // namespace

CIdeal multilinearize(const Presentation& p) {
  require_quadratic(p);
  std::vector<std::string> vars;
  for (auto& g : p.gens) {
    vars.push_back(g.name + "1");
    vars.push_back(g.name + "2");
  }
  CIdeal out{make_ring(vars, p.tower), {}};
  size_t nv = vars.size();
  for (auto& f : p.relations) {
    std::map<Mono, Scalar> m;
    for (auto& [w, c] : f.terms()) {
      Mono mono(nv, 0);
      ++mono[2 * letter(w, 0)];
      ++mono[2 * letter(w, 1) + 1];
      auto it = m.find(mono);
      if (it == m.end())
        m.emplace(mono, c.in(p.tower));
      else
        it->second += c;
    }
    out.gens.push_back(CPolyBuilder::from_map(out.ring, m));
  }
  return out;
}

LinearFormMatrix relation_matrix_t(const Presentation& p) {
  require_quadratic(p);
  std::vector<std::string> vars;
  for (size_t i = 0; i < p.relations.size(); ++i) vars.push_back("t" + std::to_string(i + 1));
  LinearFormMatrix out{make_ring(vars, p.tower), {}};
  size_t n = p.ngens();
  out.entries.assign(n, std::vector<CPoly>(n, CPoly(out.ring)));
  for (size_t i = 0; i < p.relations.size(); ++i)
    for (auto& [w, c] : p.relations[i].terms())
      out.entries[letter(w, 0)][letter(w, 1)] =
          out.entries[letter(w, 0)][letter(w, 1)] + CPoly::var(out.ring, i) * c.in(p.tower);
  return out;
}

Matrix relation_matrix_at(const Presentation& p, const std::vector<Scalar>& point) {
  require_quadratic(p);
  if (point.size() != p.ngens()) fail_pre("shape", "point has the wrong number of coordinates");
  Matrix m(p.relations.size(), p.ngens(), p.tower);
  for (size_t i = 0; i < p.relations.size(); ++i)
    for (auto& [w, c] : p.relations[i].terms()) m(i, letter(w, 1)) += c * point[letter(w, 0)];
  return m;
}

std::vector<std::vector<CPoly>> relation_matrix_symbolic(const Presentation& p, const RingPtr& ring) {
  require_quadratic(p);
  std::vector<std::vector<CPoly>> m(p.relations.size(), std::vector<CPoly>(p.ngens(), CPoly(ring)));
  for (size_t i = 0; i < p.relations.size(); ++i)
    for (auto& [w, c] : p.relations[i].terms())
      m[i][letter(w, 1)] = m[i][letter(w, 1)] + CPoly::var(ring, letter(w, 0)) * c.in(ring->tower);
  return m;
}

namespace {

CPoly determinant(const std::vector<std::vector<CPoly>>& m, const RingPtr& ring) {
  size_t n = m.size();
  if (n == 1) return m[0][0];
  CPoly total(ring);
  for (size_t c = 0; c < n; ++c) {
    if (m[0][c].is_zero()) continue;
    std::vector<std::vector<CPoly>> sub;
    for (size_t r = 1; r < n; ++r) {
      std::vector<CPoly> row;
      for (size_t k = 0; k < n; ++k)
        if (k != c) row.push_back(m[r][k]);
      sub.push_back(row);
    }
    CPoly term = m[0][c] * determinant(sub, ring);
    total = (c % 2 == 0) ? total + term : total - term;
  }
  return total;
}

void subsets(size_t n, size_t k, size_t start, std::vector<size_t>& cur, std::vector<std::vector<size_t>>& out) {
  if (cur.size() == k) {
    out.push_back(cur);
    return;
  }
  for (size_t i = start; i < n; ++i) {
    cur.push_back(i);
    subsets(n, k, i + 1, cur, out);
    cur.pop_back();
  }
}

}  // namespace

std::vector<CPoly> minors(const std::vector<std::vector<CPoly>>& m, size_t k) {
  RingPtr ring;
  for (auto& row : m)
    for (auto& e : row)
      if (e.ring()) ring = e.ring();
  std::vector<std::vector<size_t>> rows, cols;
  std::vector<size_t> cur;
  subsets(m.size(), k, 0, cur, rows);
  subsets(m.empty() ? 0 : m[0].size(), k, 0, cur, cols);
  std::vector<CPoly> out;
  for (auto& rs : rows)
    for (auto& cs : cols) {
      std::vector<std::vector<CPoly>> sub;
      for (size_t r : rs) {
        std::vector<CPoly> row;
        for (size_t c : cs) row.push_back(m[r][c]);
        sub.push_back(row);
      }
      CPoly d = determinant(sub, ring);
      if (!d.is_zero()) out.push_back(d);
    }
  return out;
}

int line_scheme_codim(const Presentation& p) {
  auto m = relation_matrix_t(p);
  auto inv = ideal_invariants(CIdeal{m.ring, minors(m.entries, 3)});
  return inv.codim ? *inv.codim : static_cast<int>(m.ring->nvars()) + 1;
}

ProjPoint ProjPoint::make(std::vector<Scalar> coords) {
  size_t k = 0;
  while (k < coords.size() && coords[k].is_zero()) ++k;
  if (k == coords.size()) fail_pre("zero-point", "a projective point needs a nonzero coordinate");
  Scalar inv = coords[k].inverse();
  for (auto& c : coords) c = c * inv;
  return ProjPoint{std::move(coords)};
}

std::string ProjPoint::to_string() const {
  std::string out = "(";
  for (size_t k = 0; k < coords.size(); ++k) out += (k ? ", " : "") + coords[k].to_string();
  return out + ")";
}

PointCheck check_point(const Presentation& p, const ProjPoint& point) {
  Matrix m = relation_matrix_at(p, point.coords);
  auto ker = m.kernel();
  if (ker.size() != 1)
    fail_pre("not-a-scheme-point",
             "M(p) has a kernel of dimension " + std::to_string(ker.size()) + " at " + point.to_string());
  PointCheck out;
  out.point = point;
  out.image = ProjPoint::make(ker[0]);
  out.rank = p.ngens() - 1;
  out.fixed = out.image == out.point;
  return out;
}

Scalar bilinear_eval(const NcPoly& f, const std::vector<Scalar>& p, const std::vector<Scalar>& q) {
  Scalar total(0);
  for (auto& [w, c] : f.terms()) {
    if (w.size() != 2) fail_pre("non-quadratic", "bilinear evaluation needs a quadratic element");
    total += c * p[letter(w, 0)] * q[letter(w, 1)];
  }
  return total;
}

ProjPoint act_on_point(const ProjPoint& p, const GGrading& grading, FinAbGroup::Elem g) {
  std::vector<Scalar> c = p.coords;
  TowerPtr tower = FieldTower::rationals();
  for (auto& x : c) tower = join_towers(tower, x.tower());
  for (size_t k = 0; k < c.size(); ++k)
    c[k] = c[k] * character(grading.group, grading.duality, grading.grade[k], g, tower).inverse();
  return ProjPoint::make(c);
}

std::vector<ProjPoint> point_orbit(const ProjPoint& p, const GGrading& grading) {
  std::vector<ProjPoint> out;
  for (FinAbGroup::Elem g = 0; g < grading.group.size(); ++g) {
    ProjPoint q = act_on_point(p, grading, g);
    if (std::find(out.begin(), out.end(), q) == out.end()) out.push_back(q);
  }
  return out;
}

ChartResult run_chart(const Presentation& p, const ChartPlan& plan) {
  CIdeal ideal = multilinearize(p);
  auto var = [&](const std::string& name) {
    auto k = ideal.ring->index_of(name);
    if (!k) fail_parse("chart '" + plan.name + "': unknown variable '" + name + "'");
    return CPoly::var(ideal.ring, *k);
  };
  CPoly one = CPoly::constant(ideal.ring, Scalar(1));
  for (auto& v : plan.ones) ideal.gens.push_back(var(v) - one);
  for (auto& v : plan.zeros) ideal.gens.push_back(var(v));
  if (!plan.product_one.empty()) {
    CPoly prod = one;
    for (auto& v : plan.product_one) prod = prod * var(v);
    ideal.gens.push_back(prod - one);
  }
  return ChartResult{plan.name, ideal_invariants(ideal)};
}

bool vanishes_at(const std::vector<CPoly>& polys, const std::vector<Scalar>& point) {
  for (auto& f : polys)
    if (!f.evaluate(point).is_zero()) return false;
  return true;
}

bool in_radical(const CPoly& f, const std::vector<CPoly>& groebner, int max_power) {
  CPoly power = f;
  for (int e = 1; e <= max_power; ++e) {
    power = reduce(power, groebner);
    if (power.is_zero()) return true;
    power = power * f;
  }
  return false;
}

}  // namespace tb
