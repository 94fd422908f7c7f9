#include "twistbench/scalars.hpp"

#include <algorithm>
#include <sstream>

#include "twistbench/errors.hpp"
#include "twistbench/expr_parser.hpp"

namespace tb {

std::string rational_to_string(const Rational& q) { return q.get_str(); }

namespace {

using Flat = std::vector<Rational>;
using UPoly = std::vector<Flat>;  // coefficient blocks, lowest degree first

// Polynomial arithmetic over a fixed level k of a tower (used for inversion).
struct LevelRing {
  const FieldTower& t;
  size_t k;
  size_t n() const { return t.dim(k); }
  Flat zero() const { return Flat(n()); }
  Flat one() const {
    Flat f(n());
    f[0] = 1;
    return f;
  }
  bool is_zero(const Flat& a) const { return FieldTower::is_zero(n(), a.data()); }
  Flat mul(const Flat& a, const Flat& b) const {
    Flat out(n());
    t.mul(k, a.data(), b.data(), out.data());
    return out;
  }
  Flat sub(const Flat& a, const Flat& b) const {
    Flat out(n());
    for (size_t i = 0; i < n(); ++i) out[i] = a[i] - b[i];
    return out;
  }
  Flat inv(const Flat& a) const { return t.inv(k, a.data()); }

  void trim(UPoly& p) const {
    while (!p.empty() && is_zero(p.back())) p.pop_back();
  }
  UPoly sub(const UPoly& a, const UPoly& b) const {
    UPoly r(std::max(a.size(), b.size()), zero());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i];
    for (size_t i = 0; i < b.size(); ++i) r[i] = sub(r[i], b[i]);
    trim(r);
    return r;
  }
  UPoly mul(const UPoly& a, const UPoly& b) const {
    if (a.empty() || b.empty()) return {};
    UPoly r(a.size() + b.size() - 1, zero());
    for (size_t i = 0; i < a.size(); ++i) {
      if (is_zero(a[i])) continue;
      for (size_t j = 0; j < b.size(); ++j) {
        if (is_zero(b[j])) continue;
        Flat m = mul(a[i], b[j]);
        for (size_t s = 0; s < n(); ++s) r[i + j][s] += m[s];
      }
    }
    trim(r);
    return r;
  }
  // a = q*b + r with deg r < deg b; b nonzero.
  void divmod(UPoly a, const UPoly& b, UPoly& q, UPoly& r) const {
    trim(a);
    q.assign(a.size() >= b.size() ? a.size() - b.size() + 1 : 0, zero());
    Flat lead_inv = inv(b.back());
    while (a.size() >= b.size()) {
      size_t shift = a.size() - b.size();
      Flat c = mul(a.back(), lead_inv);
      q[shift] = c;
      for (size_t i = 0; i < b.size(); ++i) a[i + shift] = sub(a[i + shift], mul(c, b[i]));
      a.pop_back();
      trim(a);
    }
    trim(q);
    r = a;
  }
};

struct TowerPolyBuilder {
  using Value = std::vector<FieldElement>;  // univariate polynomial in t
  TowerPtr lower;
  const std::vector<std::pair<std::string, std::string>>* all_spec;
  size_t current;

  Value constant(const Rational& q) { return {FieldElement(lower, q)}; }
  Value symbol(const std::string& s) {
    if (s == "t") return {FieldElement(lower, 0), FieldElement(lower, 1)};
    if (lower->level_of(s)) return {FieldElement::symbol(lower, s)};
    for (size_t j = current; j < all_spec->size(); ++j)
      if ((*all_spec)[j].first == s)
        fail_pre("malformed-tower", "defining polynomial of level " + std::to_string(current + 1) +
                                        " uses symbol '" + s + "' from the same or a higher level");
    fail_parse("unknown symbol '" + s + "' in tower polynomial");
  }
  static void trim(Value& v) {
    while (v.size() > 1 && v.back().is_zero()) v.pop_back();
  }
  Value add(const Value& a, const Value& b) {
    Value r(std::max(a.size(), b.size()), FieldElement(lower, 0));
    for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (size_t i = 0; i < b.size(); ++i) r[i] += b[i];
    trim(r);
    return r;
  }
  Value neg(const Value& a) {
    Value r = a;
    for (auto& c : r) c = -c;
    return r;
  }
  Value sub(const Value& a, const Value& b) { return add(a, neg(b)); }
  Value mul(const Value& a, const Value& b) {
    Value r(a.size() + b.size() - 1, FieldElement(lower, 0));
    for (size_t i = 0; i < a.size(); ++i)
      for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    trim(r);
    return r;
  }
  Value div(const Value& a, const Value& b) {
    if (b.size() != 1) fail_parse("division by a non-constant polynomial");
    FieldElement inv = b[0].inverse();
    Value r = a;
    for (auto& c : r) c *= inv;
    return r;
  }
  Value pow(const Value& a, long e) {
    Value r{FieldElement(lower, 1)};
    for (long i = 0; i < e; ++i) r = mul(r, a);
    return r;
  }
  Value bracket(const Value&, const Value&, bool) { fail_parse("brackets are not allowed in tower polynomials"); }
};

struct ScalarBuilder {
  using Value = FieldElement;
  TowerPtr tower;
  Value constant(const Rational& q) { return FieldElement(tower, q); }
  Value symbol(const std::string& s) {
    if (!tower->level_of(s)) fail_parse("unknown scalar symbol '" + s + "'");
    return FieldElement::symbol(tower, s);
  }
  Value add(const Value& a, const Value& b) { return a + b; }
  Value sub(const Value& a, const Value& b) { return a - b; }
  Value mul(const Value& a, const Value& b) { return a * b; }
  Value neg(const Value& a) { return -a; }
  Value div(const Value& a, const Value& b) { return a / b; }
  Value pow(const Value& a, long e) { return a.pow(e); }
  Value bracket(const Value&, const Value&, bool) { fail_parse("brackets are not allowed in scalar literals"); }
};

}  // namespace

TowerPtr FieldTower::rationals() {
  static TowerPtr q(new FieldTower());
  return q;
}

TowerPtr FieldTower::build(const std::vector<std::pair<std::string, std::string>>& spec) {
  if (spec.empty()) return rationals();
  TowerPtr current = rationals();
  for (size_t idx = 0; idx < spec.size(); ++idx) {
    const auto& [sym, text] = spec[idx];
    if (sym.empty() || sym == "t" || !std::isalpha(static_cast<unsigned char>(sym[0])))
      fail_pre("malformed-tower", "invalid tower symbol '" + sym + "'");
    if (current->level_of(sym)) fail_pre("malformed-tower", "duplicate tower symbol '" + sym + "'");
    TowerPolyBuilder b{current, &spec, idx};
    ExprParser<TowerPolyBuilder> parser(text, b);
    auto poly = parser.parse();
    if (poly.size() < 3)
      fail_pre("malformed-tower", "defining polynomial of '" + sym + "' must have degree >= 2");
    if (!poly.back().is_one())
      fail_pre("malformed-tower", "defining polynomial of '" + sym + "' is not monic");
    auto* t = new FieldTower();
    t->levels_ = current->levels_;
    t->dims_ = current->dims_;
    t->spec_ = current->spec_;
    Level lvl;
    lvl.symbol = sym;
    lvl.degree = static_cast<int>(poly.size()) - 1;
    for (int i = 0; i < lvl.degree; ++i) lvl.coeffs.push_back(poly[i].in(current).coeffs());
    t->levels_.push_back(std::move(lvl));
    t->dims_.push_back(t->dims_.back() * (poly.size() - 1));
    t->spec_.push_back(spec[idx]);
    current = TowerPtr(t);
  }
  return current;
}

std::optional<size_t> FieldTower::level_of(const std::string& symbol) const {
  for (size_t k = 0; k < levels_.size(); ++k)
    if (levels_[k].symbol == symbol) return k + 1;
  return std::nullopt;
}

std::string FieldTower::describe() const {
  if (levels_.empty()) return "QQ";
  std::string s = "QQ";
  for (auto& [sym, poly] : spec_) s += "[" + sym + ": " + poly + "]";
  return s;
}

std::vector<int> FieldTower::exponents_of(size_t slot) const {
  std::vector<int> e(levels_.size());
  for (size_t k = 1; k <= levels_.size(); ++k)
    e[k - 1] = static_cast<int>((slot / dims_[k - 1]) % levels_[k - 1].degree);
  return e;
}

bool FieldTower::is_zero(size_t n, const Rational* a) {
  for (size_t i = 0; i < n; ++i)
    if (sgn(a[i]) != 0) return false;
  return true;
}

void FieldTower::mul(size_t k, const Rational* a, const Rational* b, Rational* out) const {
  if (k == 0) {
    out[0] = a[0] * b[0];
    return;
  }
  const Level& L = levels_[k - 1];
  const size_t m = dims_[k - 1];
  const size_t d = L.degree;
  std::vector<Rational> prod((2 * d - 1) * m);
  std::vector<Rational> tmp(m);
  std::vector<char> az(d), bz(d);
  for (size_t u = 0; u < d; ++u) {
    az[u] = is_zero(m, a + u * m);
    bz[u] = is_zero(m, b + u * m);
  }
  for (size_t u = 0; u < d; ++u) {
    if (az[u]) continue;
    for (size_t v = 0; v < d; ++v) {
      if (bz[v]) continue;
      mul(k - 1, a + u * m, b + v * m, tmp.data());
      Rational* dst = prod.data() + (u + v) * m;
      for (size_t s = 0; s < m; ++s) dst[s] += tmp[s];
    }
  }
  // s^e = -sum_j c_j s^{e-d+j} for e >= d, applied from the top down.
  for (size_t e = 2 * d - 2; e >= d; --e) {
    const Rational* ce = prod.data() + e * m;
    if (!is_zero(m, ce)) {
      std::vector<Rational> top(ce, ce + m);
      for (size_t j = 0; j < d; ++j) {
        if (is_zero(m, L.coeffs[j].data())) continue;
        mul(k - 1, top.data(), L.coeffs[j].data(), tmp.data());
        Rational* dst = prod.data() + (e - d + j) * m;
        for (size_t s = 0; s < m; ++s) dst[s] -= tmp[s];
      }
    }
    if (e == d) break;
  }
  for (size_t i = 0; i < d * m; ++i) out[i] = prod[i];
}

std::vector<Rational> FieldTower::inv(size_t k, const Rational* a) const {
  if (is_zero(dims_[k], a)) fail_pre("division-by-zero", "inverse of zero");
  if (k == 0) return {1 / a[0]};
  const Level& L = levels_[k - 1];
  const size_t m = dims_[k - 1];
  LevelRing R{*this, k - 1};
  UPoly p;
  for (int j = 0; j < L.degree; ++j) p.push_back(L.coeffs[j]);
  p.push_back(R.one());
  UPoly x;
  for (int j = 0; j < L.degree; ++j) x.emplace_back(a + j * m, a + (j + 1) * m);
  R.trim(x);
  UPoly r0 = p, r1 = x, t0, t1{R.one()};
  while (!r1.empty()) {
    UPoly q, r;
    R.divmod(r0, r1, q, r);
    UPoly t2 = R.sub(t0, R.mul(q, t1));
    r0 = std::move(r1);
    r1 = std::move(r);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  if (r0.size() > 1) {
    // gcd with the defining polynomial is nontrivial: the level is reducible.
    Flat li = R.inv(r0.back());
    std::ostringstream os;
    TowerPtr self(TowerPtr{}, this);
    for (size_t j = r0.size(); j-- > 0;) {
      std::vector<Rational> flat(dim(), 0);
      Flat cj = R.mul(r0[j], li);
      std::copy(cj.begin(), cj.end(), flat.begin());
      FieldElement ce(self, flat);
      if (ce.is_zero()) continue;
      std::string mono = j == 0 ? "" : (j == 1 ? "t" : "t^" + std::to_string(j));
      std::string coef;
      bool neg = false;
      if (ce.is_rational()) {
        Rational q = ce.rational_value();
        neg = sgn(q) < 0;
        if (neg) q = -q;
        coef = q == 1 && !mono.empty() ? "" : q.get_str();
      } else {
        coef = ce.to_factor_string();
      }
      std::string term = coef.empty() ? mono : (mono.empty() ? coef : coef + "*" + mono);
      if (os.tellp() == 0)
        os << (neg ? "-" : "") << term;
      else
        os << (neg ? " - " : " + ") << term;
    }
    fail_pre("zero-divisor",
             "element is a zero divisor: defining polynomial of '" + L.symbol + "' is reducible",
             os.str());
  }
  Flat ci = R.inv(r0[0]);
  std::vector<Rational> out(dims_[k], 0);
  for (size_t j = 0; j < t0.size() && j < static_cast<size_t>(L.degree); ++j) {
    Flat c = R.mul(t0[j], ci);
    std::copy(c.begin(), c.end(), out.begin() + j * m);
  }
  return out;
}

// ---------------------------------------------------------------------------

FieldElement::FieldElement() : tower_(FieldTower::rationals()), c_(1) {}
FieldElement::FieldElement(long v) : tower_(FieldTower::rationals()), c_{Rational(v)} {}
FieldElement::FieldElement(const Rational& q) : tower_(FieldTower::rationals()), c_{q} {}
FieldElement::FieldElement(TowerPtr t, const Rational& q) : tower_(std::move(t)), c_(tower_->dim()) {
  c_[0] = q;
}
FieldElement::FieldElement(TowerPtr t, std::vector<Rational> coeffs)
    : tower_(std::move(t)), c_(std::move(coeffs)) {
  if (c_.size() != tower_->dim()) fail_internal("shape", "coefficient vector does not match tower degree");
}

FieldElement FieldElement::symbol(TowerPtr t, const std::string& name) {
  auto k = t->level_of(name);
  if (!k) fail_parse("unknown scalar symbol '" + name + "'");
  std::vector<Rational> c(t->dim());
  c[t->dim(*k - 1)] = 1;  // s_k^1 with all lower exponents zero
  return FieldElement(t, c);
}

FieldElement FieldElement::random(TowerPtr t, std::mt19937_64& rng, int bound) {
  std::uniform_int_distribution<int> num(-bound, bound), den(1, bound);
  std::vector<Rational> c(t->dim());
  for (auto& x : c) {
    x = Rational(num(rng), den(rng));
    x.canonicalize();
  }
  return FieldElement(t, c);
}

FieldElement FieldElement::canonicalize(TowerPtr t, const std::map<std::vector<int>, Rational>& raw) {
  FieldElement acc(t, 0);
  for (auto& [e, q] : raw) {
    FieldElement term(t, q);
    for (size_t k = 1; k <= t->num_levels(); ++k)
      if (k - 1 < e.size() && e[k - 1] > 0) term *= symbol(t, t->level(k).symbol).pow(e[k - 1]);
    acc += term;
  }
  return acc;
}

std::map<std::vector<int>, Rational> FieldElement::to_raw() const {
  std::map<std::vector<int>, Rational> m;
  for (size_t s = 0; s < c_.size(); ++s)
    if (sgn(c_[s]) != 0) m[tower_->exponents_of(s)] = c_[s];
  return m;
}

bool FieldElement::is_zero() const { return FieldTower::is_zero(c_.size(), c_.data()); }
bool FieldElement::is_one() const { return c_[0] == 1 && FieldTower::is_zero(c_.size() - 1, c_.data() + 1); }
bool FieldElement::is_rational() const { return FieldTower::is_zero(c_.size() - 1, c_.data() + 1); }
Rational FieldElement::rational_value() const {
  if (!is_rational()) fail_internal("not-rational", "scalar " + to_string() + " is not rational");
  return c_[0];
}

TowerPtr join_towers(const TowerPtr& a, const TowerPtr& b) {
  if (a == b) return a;
  if (a->num_levels() == 0) return b;
  if (b->num_levels() == 0) return a;
  if (a->same_as(*b)) return a;
  const auto& sa = a->spec();
  const auto& sb = b->spec();
  if (sa.size() < sb.size() && std::equal(sa.begin(), sa.end(), sb.begin())) return b;
  if (sb.size() < sa.size() && std::equal(sb.begin(), sb.end(), sa.begin())) return a;
  fail_internal("tower-mismatch", "scalars from unrelated towers " + a->describe() + " and " + b->describe());
}

TowerPtr FieldElement::common(const FieldElement& a, const FieldElement& b) {
  return join_towers(a.tower_, b.tower_);
}

FieldElement FieldElement::in(const TowerPtr& t) const {
  if (tower_ == t) return *this;
  const auto& mine = tower_->spec();
  const auto& theirs = t->spec();
  if (mine.size() > theirs.size() || !std::equal(mine.begin(), mine.end(), theirs.begin()))
    fail_internal("tower-mismatch", "cannot embed " + tower_->describe() + " into " + t->describe());
  std::vector<Rational> c(t->dim());
  std::copy(c_.begin(), c_.end(), c.begin());
  return FieldElement(t, std::move(c));
}

FieldElement FieldElement::operator+(const FieldElement& o) const {
  FieldElement r = *this;
  r += o;
  return r;
}
FieldElement FieldElement::operator-(const FieldElement& o) const {
  FieldElement r = *this;
  r -= o;
  return r;
}
FieldElement& FieldElement::operator+=(const FieldElement& o) {
  if (tower_ != o.tower_) {
    TowerPtr t = common(*this, o);
    *this = in(t);
    FieldElement oo = o.in(t);
    for (size_t i = 0; i < c_.size(); ++i) c_[i] += oo.c_[i];
    return *this;
  }
  for (size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
  return *this;
}
FieldElement& FieldElement::operator-=(const FieldElement& o) {
  if (tower_ != o.tower_) {
    TowerPtr t = common(*this, o);
    *this = in(t);
    FieldElement oo = o.in(t);
    for (size_t i = 0; i < c_.size(); ++i) c_[i] -= oo.c_[i];
    return *this;
  }
  for (size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
  return *this;
}
FieldElement FieldElement::operator-() const {
  FieldElement r = *this;
  for (auto& x : r.c_) x = -x;
  return r;
}
FieldElement FieldElement::operator*(const FieldElement& o) const {
  if (tower_ == o.tower_) {
    if (c_.size() == 1) return FieldElement(tower_, c_[0] * o.c_[0]);
    std::vector<Rational> out(c_.size());
    tower_->mul(tower_->num_levels(), c_.data(), o.c_.data(), out.data());
    return FieldElement(tower_, std::move(out));
  }
  // Rational factor times tower element: scale coefficientwise.
  if (tower_->num_levels() == 0 || o.tower_->num_levels() == 0) {
    const FieldElement& q = tower_->num_levels() == 0 ? *this : o;
    const FieldElement& x = tower_->num_levels() == 0 ? o : *this;
    FieldElement r = x;
    for (auto& c : r.c_) c *= q.c_[0];
    return r;
  }
  TowerPtr t = common(*this, o);
  return in(t) * o.in(t);
}
FieldElement& FieldElement::operator*=(const FieldElement& o) {
  *this = *this * o;
  return *this;
}
FieldElement FieldElement::inverse() const {
  return FieldElement(tower_, tower_->inv(tower_->num_levels(), c_.data()));
}
FieldElement FieldElement::operator/(const FieldElement& o) const { return *this * o.inverse(); }
FieldElement FieldElement::pow(long e) const {
  if (e < 0) return inverse().pow(-e);
  FieldElement r(tower_, 1), b = *this;
  while (e > 0) {
    if (e & 1) r *= b;
    b *= b;
    e >>= 1;
  }
  return r;
}

bool FieldElement::operator==(const FieldElement& o) const {
  if (tower_ == o.tower_) return c_ == o.c_;
  TowerPtr t = common(*this, o);
  return in(t).c_ == o.in(t).c_;
}

std::string FieldElement::to_string() const {
  std::string out;
  bool first = true;
  for (size_t s = 0; s < c_.size(); ++s) {
    if (sgn(c_[s]) == 0) continue;
    std::vector<int> e = tower_->exponents_of(s);
    std::string mono;
    for (size_t k = 0; k < e.size(); ++k) {
      if (e[k] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += tower_->level(k + 1).symbol;
      if (e[k] > 1) mono += "^" + std::to_string(e[k]);
    }
    Rational q = c_[s];
    bool neg = sgn(q) < 0;
    if (neg) q = -q;
    std::string body;
    if (mono.empty())
      body = q.get_str();
    else if (q == 1)
      body = mono;
    else
      body = q.get_str() + "*" + mono;
    if (first)
      out = neg ? "-" + body : body;
    else
      out += (neg ? " - " : " + ") + body;
    first = false;
  }
  return first ? "0" : out;
}

std::string FieldElement::to_factor_string() const {
  std::string s = to_string();
  bool sum = s.find(" + ") != std::string::npos || s.find(" - ") != std::string::npos;
  if (sum || s[0] == '-') return "(" + s + ")";
  return s;
}

FieldElement parse_scalar(const std::string& text, const TowerPtr& tower) {
  ScalarBuilder b{tower};
  ExprParser<ScalarBuilder> p(text, b);
  return p.parse();
}

std::optional<int> multiplicative_order(const FieldElement& x, int limit) {
  if (x.is_zero()) return std::nullopt;
  FieldElement p = x;
  for (int m = 1; m <= limit; ++m) {
    if (p.is_one()) return m;
    p *= x;
  }
  return std::nullopt;
}

namespace {

std::vector<long> cyclotomic(int n) {
  // Phi_n = (t^n - 1) / prod_{d | n, d < n} Phi_d, integer coefficients, low first.
  std::vector<long> num(n + 1, 0);
  num[0] = -1;
  num[n] = 1;
  for (int d = 1; d < n; ++d) {
    if (n % d) continue;
    std::vector<long> den = cyclotomic(d);
    std::vector<long> q(num.size() - den.size() + 1, 0);
    for (size_t i = q.size(); i-- > 0;) {
      q[i] = num[i + den.size() - 1];
      for (size_t j = 0; j < den.size(); ++j) num[i + j] -= q[i] * den[j];
    }
    num = q;
  }
  return num;
}

std::string poly_string(const std::vector<long>& c) {
  std::string s;
  for (size_t i = c.size(); i-- > 0;) {
    if (c[i] == 0) continue;
    long a = c[i];
    std::string term = i == 0 ? std::to_string(std::labs(a))
                              : (std::labs(a) == 1 ? "" : std::to_string(std::labs(a)) + "*") +
                                    (i == 1 ? "t" : "t^" + std::to_string(i));
    if (s.empty())
      s = (a < 0 ? "-" : "") + term;
    else
      s += (a < 0 ? " - " : " + ") + term;
  }
  return s;
}

std::optional<FieldElement> prime_power_root(int q, int p, const TowerPtr& t) {
  FieldElement one(t, 1);
  auto primitive = [&](const FieldElement& x) {
    return x.pow(q).is_one() && !x.pow(q / p).is_one();
  };
  if (q == 2) return FieldElement(t, -1);
  // Signed products of tower symbols, then averages of two such products;
  // this reaches i, (1+i)/sqrt2, (-1+sqrt(-3))/2 and any adjoined root itself.
  size_t m = t->num_levels();
  std::vector<FieldElement> base;
  for (size_t mask = 0; mask < (size_t(1) << m); ++mask) {
    if (m > 6 && __builtin_popcountll(mask) > 2) continue;
    FieldElement x = one;
    for (size_t k = 0; k < m; ++k)
      if (mask >> k & 1) x *= FieldElement::symbol(t, t->level(k + 1).symbol);
    base.push_back(x);
    base.push_back(-x);
  }
  for (auto& x : base)
    if (primitive(x)) return x;
  Rational half(1, 2);
  for (size_t a = 0; a < base.size(); ++a)
    for (size_t b = a; b < base.size(); ++b) {
      FieldElement x = (base[a] + base[b]) * FieldElement(half);
      if (!x.is_zero() && primitive(x)) return x;
    }
  return std::nullopt;
}

}  // namespace

TowerPtr cyclotomic_tower(int n) {
  if (n <= 2) return FieldTower::rationals();
  if (n == 4) return FieldTower::build({{"i", "t^2 + 1"}});
  return FieldTower::build({{"z", poly_string(cyclotomic(n))}});
}

FieldElement root_of_unity(int n, const TowerPtr& tower) {
  if (n < 1) fail_pre("invalid-argument", "root_of_unity needs n >= 1");
  FieldElement result(tower, 1);
  int rest = n;
  for (int p = 2; rest > 1; ++p) {
    if (rest % p) continue;
    int q = 1;
    while (rest % p == 0) {
      rest /= p;
      q *= p;
    }
    auto r = prime_power_root(q, p, tower);
    if (!r)
      fail_pre("unsupported-root",
               "tower " + tower->describe() + " has no primitive " + std::to_string(n) +
                   "-th root of unity; minimal extension needed: adjoin a root of Phi_" +
                   std::to_string(n) + "(t) = " + poly_string(cyclotomic(n)),
               poly_string(cyclotomic(n)));
    result *= *r;
  }
  return result;
}

std::optional<FieldElement> rational_sqrt(const Rational& q, const TowerPtr& tower) {
  auto square_root = [](const Rational& x) -> std::optional<Rational> {
    if (sgn(x) < 0) return std::nullopt;
    if (!mpz_perfect_square_p(x.get_num_mpz_t()) || !mpz_perfect_square_p(x.get_den_mpz_t())) return std::nullopt;
    mpz_class n, d;
    mpz_sqrt(n.get_mpz_t(), x.get_num_mpz_t());
    mpz_sqrt(d.get_mpz_t(), x.get_den_mpz_t());
    return Rational(n, d);
  };
  if (sgn(q) == 0) return FieldElement(tower, 0);
  std::vector<std::pair<size_t, Rational>> quad;  // (level, r) for levels t^2 - r
  for (size_t k = 1; k <= tower->num_levels(); ++k) {
    const auto& lvl = tower->level(k);
    if (lvl.degree != 2 || !FieldTower::is_zero(lvl.coeffs[1].size(), lvl.coeffs[1].data())) continue;
    const auto& c0 = lvl.coeffs[0];
    if (!FieldTower::is_zero(c0.size() - 1, c0.data() + 1)) continue;
    quad.emplace_back(k, -c0[0]);
  }
  if (quad.size() > 20) return std::nullopt;
  for (size_t mask = 0; mask < (size_t(1) << quad.size()); ++mask) {
    Rational prod = 1;
    for (size_t j = 0; j < quad.size(); ++j)
      if (mask >> j & 1) prod *= quad[j].second;
    auto m = square_root(q / prod);
    if (!m) continue;
    FieldElement x(tower, *m);
    for (size_t j = 0; j < quad.size(); ++j)
      if (mask >> j & 1) x *= FieldElement::symbol(tower, tower->level(quad[j].first).symbol);
    return x;
  }
  return std::nullopt;
}

TowerPtr adjoin_square_roots(const TowerPtr& base, const std::vector<std::pair<std::string, Rational>>& radicands) {
  TowerPtr t = base;
  for (auto& [sym, q] : radicands) {
    if (rational_sqrt(q, t)) continue;
    auto spec = t->spec();
    Rational neg = -q;
    std::string c = rational_to_string(neg);
    spec.emplace_back(sym, sgn(neg) < 0 ? "t^2 - " + rational_to_string(q) : "t^2 + " + c);
    t = FieldTower::build(spec);
  }
  return t;
}

FieldElement imaginary_unit(const TowerPtr& tower) {
  if (tower->level_of("i")) {
    auto i = FieldElement::symbol(tower, "i");
    if ((i * i + FieldElement(tower, 1)).is_zero()) return i;
  }
  auto r = rational_sqrt(-1, tower);
  if (r) return *r;
  return root_of_unity(4, tower);
}

}  // namespace tb
