#include "twistbench/groups.hpp"

#include <algorithm>
#include <map>
#include <functional>
#include <numeric>
#include <sstream>

#include "twistbench/errors.hpp"

namespace tb {

FinAbGroup::FinAbGroup(std::vector<int> orders) : orders_(std::move(orders)) {
  for (int n : orders_) {
    if (n < 2) fail_pre("invalid-group", "cyclic factor orders must be >= 2");
    size_ *= n;
  }
}

FinAbGroup FinAbGroup::parse(const std::string& text) {
  std::vector<int> orders;
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s == "1" || s == "C1" || s.empty()) return FinAbGroup(std::vector<int>{});
  size_t pos = 0;
  while (pos < s.size()) {
    if (s[pos] != 'C') fail_parse("group literal expects factors like C4 joined by 'x': '" + text + "'");
    size_t end = pos + 1;
    while (end < s.size() && std::isdigit(static_cast<unsigned char>(s[end]))) ++end;
    if (end == pos + 1) fail_parse("missing cyclic order in group literal '" + text + "'");
    int n = std::stoi(s.substr(pos + 1, end - pos - 1));
    if (n >= 2) orders.push_back(n);
    pos = end;
    if (pos < s.size()) {
      if (s[pos] != 'x') fail_parse("expected 'x' in group literal '" + text + "'");
      ++pos;
    }
  }
  return FinAbGroup(orders);
}

FinAbGroup::Elem FinAbGroup::generator(size_t k) const {
  std::vector<int> e(orders_.size(), 0);
  e.at(k) = 1;
  return from_exponents(e);
}

std::vector<int> FinAbGroup::exponents(Elem g) const {
  std::vector<int> e(orders_.size());
  for (size_t i = 0; i < orders_.size(); ++i) {
    e[i] = static_cast<int>(g % orders_[i]);
    g /= orders_[i];
  }
  return e;
}

FinAbGroup::Elem FinAbGroup::from_exponents(const std::vector<int>& e) const {
  Elem g = 0;
  for (size_t i = orders_.size(); i-- > 0;) {
    int n = orders_[i];
    int v = i < e.size() ? ((e[i] % n) + n) % n : 0;
    g = g * n + v;
  }
  return g;
}

FinAbGroup::Elem FinAbGroup::mul(Elem a, Elem b) const {
  auto ea = exponents(a), eb = exponents(b);
  for (size_t i = 0; i < ea.size(); ++i) ea[i] += eb[i];
  return from_exponents(ea);
}

FinAbGroup::Elem FinAbGroup::inv(Elem a) const {
  auto e = exponents(a);
  for (auto& x : e) x = -x;
  return from_exponents(e);
}

FinAbGroup::Elem FinAbGroup::pow(Elem a, long k) const {
  auto e = exponents(a);
  for (size_t i = 0; i < e.size(); ++i) e[i] = static_cast<int>((e[i] * (k % orders_[i])) % orders_[i]);
  return from_exponents(e);
}

int FinAbGroup::order_of(Elem a) const {
  int o = 1;
  auto e = exponents(a);
  for (size_t i = 0; i < e.size(); ++i) {
    int n = orders_[i];
    int oi = n / std::gcd(n, e[i]);
    o = std::lcm(o, oi);
  }
  return o;
}

std::string FinAbGroup::name(Elem g) const {
  auto e = exponents(g);
  std::string s;
  for (size_t i = 0; i < e.size(); ++i) {
    if (e[i] == 0) continue;
    if (!s.empty()) s += "*";
    s += "g" + std::to_string(i + 1);
    if (e[i] > 1) s += "^" + std::to_string(e[i]);
  }
  return s.empty() ? "e" : s;
}

FinAbGroup::Elem FinAbGroup::parse_element(const std::string& text) const {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s == "e" || s == "1") return identity();
  std::vector<int> e(orders_.size(), 0);
  size_t pos = 0;
  while (pos < s.size()) {
    if (s[pos] != 'g') fail_parse("group element literal expects g<k>[^m] factors: '" + text + "'");
    size_t end = pos + 1;
    while (end < s.size() && std::isdigit(static_cast<unsigned char>(s[end]))) ++end;
    if (end == pos + 1) fail_parse("missing generator index in '" + text + "'");
    size_t k = std::stoul(s.substr(pos + 1, end - pos - 1));
    if (k < 1 || k > orders_.size()) fail_parse("group generator g" + std::to_string(k) + " out of range");
    int m = 1;
    pos = end;
    if (pos < s.size() && s[pos] == '^') {
      end = pos + 1;
      while (end < s.size() && std::isdigit(static_cast<unsigned char>(s[end]))) ++end;
      if (end == pos + 1) fail_parse("missing exponent in '" + text + "'");
      m = std::stoi(s.substr(pos + 1, end - pos - 1));
      pos = end;
    }
    e[k - 1] += m;
    if (pos < s.size()) {
      if (s[pos] != '*') fail_parse("expected '*' in group element literal '" + text + "'");
      ++pos;
    }
  }
  return from_exponents(e);
}

std::string FinAbGroup::describe() const {
  if (orders_.empty()) return "1";
  std::string s;
  for (size_t i = 0; i < orders_.size(); ++i) s += (i ? " x C" : "C") + std::to_string(orders_[i]);
  return s;
}

Duality Duality::canonical(const FinAbGroup& g) {
  Duality d;
  d.perm.resize(g.rank());
  std::iota(d.perm.begin(), d.perm.end(), 0);
  return d;
}

Duality Duality::factor_swap() { return Duality{{1, 0}}; }

Scalar character(const FinAbGroup& g, const Duality& d, FinAbGroup::Elem a, FinAbGroup::Elem b,
                 const TowerPtr& tower) {
  auto ea = g.exponents(a), eb = g.exponents(b);
  Scalar v(tower, 1);
  for (size_t i = 0; i < g.rank(); ++i) {
    size_t j = d.perm.at(i);
    if (g.orders()[j] != g.orders()[i]) fail_pre("invalid-duality", "duality permutes factors of different orders");
    long e = static_cast<long>(ea[j]) * eb[i] % g.orders()[i];
    if (e) v *= root_of_unity(g.orders()[i], tower).pow(e);
  }
  return v;
}

std::vector<std::array<FinAbGroup::Elem, 3>> cocycle_violations(const FinAbGroup& g,
                                                                 const std::vector<Scalar>& t) {
  std::vector<std::array<FinAbGroup::Elem, 3>> bad;
  size_t n = g.size();
  for (size_t a = 0; a < n; ++a)
    for (size_t b = 0; b < n; ++b)
      for (size_t c = 0; c < n; ++c) {
        Scalar lhs = t[a * n + b] * t[g.mul(a, b) * n + c];
        Scalar rhs = t[a * n + g.mul(b, c)] * t[b * n + c];
        if (lhs != rhs) bad.push_back({a, b, c});
      }
  return bad;
}

Cocycle Cocycle::verify(const FinAbGroup& g, std::vector<Scalar> table) {
  size_t n = g.size();
  if (table.size() != n * n)
    fail_pre("incomplete-table", "cocycle table has " + std::to_string(table.size()) + " entries, expected " +
                                     std::to_string(n * n));
  for (size_t a = 0; a < n; ++a)
    for (size_t b = 0; b < n; ++b)
      if (table[a * n + b].is_zero())
        fail_pre("cocycle-violation", "value at (" + g.name(a) + "," + g.name(b) + ") is not invertible");
  for (size_t a = 0; a < n; ++a)
    if (!table[a].is_one() || !table[a * n].is_one())
      fail_pre("cocycle-violation", "not normalised at " + g.name(a),
               "(e," + g.name(a) + ")");
  auto bad = cocycle_violations(g, table);
  if (!bad.empty()) {
    std::string payload;
    for (auto& [a, b, c] : bad) {
      if (!payload.empty()) payload += " ";
      payload += "(" + g.name(a) + "," + g.name(b) + "," + g.name(c) + ")";
    }
    auto& w = bad.front();
    fail_pre("cocycle-violation",
             "identity fails at (" + g.name(w[0]) + "," + g.name(w[1]) + "," + g.name(w[2]) + ") and " +
                 std::to_string(bad.size() - 1) + " other triples",
             payload);
  }
  Cocycle c;
  c.g_ = g;
  c.t_ = std::move(table);
  return c;
}

Cocycle Cocycle::trivial(const FinAbGroup& g, const TowerPtr& tower) {
  return verify(g, std::vector<Scalar>(g.size() * g.size(), Scalar(tower, 1)));
}

TowerPtr Cocycle::tower() const {
  TowerPtr t = FieldTower::rationals();
  for (auto& x : t_) t = join_towers(t, x.tower());
  return t;
}

Cocycle Cocycle::operator*(const Cocycle& o) const {
  if (!(g_ == o.g_)) fail_pre("group-mismatch", "cocycles on different groups");
  std::vector<Scalar> t(t_.size());
  for (size_t i = 0; i < t.size(); ++i) t[i] = t_[i] * o.t_[i];
  return verify(g_, t);
}

Cocycle Cocycle::inverse() const {
  std::vector<Scalar> t(t_.size());
  for (size_t i = 0; i < t.size(); ++i) t[i] = t_[i].inverse();
  return verify(g_, t);
}

std::string Cocycle::to_string() const {
  std::string s;
  size_t n = g_.size();
  for (size_t a = 0; a < n; ++a) {
    for (size_t b = 0; b < n; ++b) s += (b ? " " : "") + (*this)(a, b).to_string();
    s += "\n";
  }
  return s;
}

Cocycle builtin_cocycle(const std::string& name, const TowerPtr& tower) {
  if (name == "klein_mu") {
    FinAbGroup g({2, 2});
    std::vector<Scalar> t;
    for (size_t a = 0; a < 4; ++a)
      for (size_t b = 0; b < 4; ++b) {
        int p = g.exponents(a)[0], s = g.exponents(b)[1];
        t.push_back(Scalar(tower, (p * s) % 2 ? -1 : 1));
      }
    return Cocycle::verify(g, t);
  }
  if (name.rfind("heisenberg(", 0) == 0 && name.back() == ')') {
    int n = std::stoi(name.substr(11, name.size() - 12));
    if (n < 2) fail_pre("invalid-argument", "heisenberg(n) needs n >= 2");
    Scalar lambda = root_of_unity(n, tower);
    FinAbGroup g({n, n});
    std::vector<Scalar> t;
    for (size_t a = 0; a < g.size(); ++a)
      for (size_t b = 0; b < g.size(); ++b) {
        int q = g.exponents(a)[1], r = g.exponents(b)[0];
        t.push_back(lambda.pow((q * r) % n));
      }
    return Cocycle::verify(g, t);
  }
  if (name.rfind("trivial:", 0) == 0) return Cocycle::trivial(FinAbGroup::parse(name.substr(8)), tower);
  fail_pre("unknown-cocycle", "no builtin cocycle named '" + name + "'");
}

Cocycle coboundary(const FinAbGroup& g, const std::vector<Scalar>& rho) {
  size_t n = g.size();
  std::vector<Scalar> t(n * n);
  for (size_t a = 0; a < n; ++a)
    for (size_t b = 0; b < n; ++b) t[a * n + b] = rho[a] * rho[b] / rho[g.mul(a, b)];
  return Cocycle::verify(g, t);
}

bool is_coboundary_witness(const Cocycle& mu1, const Cocycle& mu2, const std::vector<Scalar>& rho) {
  const FinAbGroup& g = mu1.group();
  if (!(g == mu2.group()) || rho.size() != g.size()) return false;
  for (size_t a = 0; a < g.size(); ++a)
    for (size_t b = 0; b < g.size(); ++b)
      if (mu1(a, b) != mu2(a, b) * rho[a] * rho[b] / rho[g.mul(a, b)]) return false;
  return true;
}

std::optional<std::vector<Scalar>> is_cohomologous(const Cocycle& mu1, const Cocycle& mu2, int L,
                                                   const TowerPtr& tower) {
  if (!(mu1.group() == mu2.group())) fail_pre("group-mismatch", "cocycles on different groups");
  if (L < 1) fail_pre("invalid-argument", "search bound L must be >= 1");
  const FinAbGroup& g = mu1.group();
  Scalar zeta = root_of_unity(L, tower);
  std::vector<Scalar> powers;
  for (int k = 0; k < L; ++k) powers.push_back(zeta.pow(k));
  size_t n = g.size();
  // ratio(a,b) = mu1/mu2 must equal rho(a) rho(b) / rho(ab).
  std::vector<Scalar> ratio(n * n);
  for (size_t a = 0; a < n; ++a)
    for (size_t b = 0; b < n; ++b) ratio[a * n + b] = mu1(a, b) / mu2(a, b);
  std::vector<int> idx(n, 0);
  std::vector<Scalar> rho(n, Scalar(tower, 1));
  // Depth-first assignment in element order; a pair is checked as soon as
  // a, b and ab are all assigned.
  std::function<bool(size_t)> rec = [&](size_t k) -> bool {
    if (k == n) return true;
    for (int v = 0; v < L; ++v) {
      rho[k] = powers[v];
      bool ok = true;
      for (size_t a = 0; a <= k && ok; ++a)
        for (size_t b = 0; b <= k && ok; ++b) {
          size_t ab = g.mul(a, b);
          if (a != k && b != k && ab != k) continue;
          if (ab > k) continue;
          if (ratio[a * n + b] != rho[a] * rho[b] / rho[ab]) ok = false;
        }
      if (ok && rec(k + 1)) return true;
      if (k == 0) break;  // rho(e) = 1
    }
    return false;
  };
  if (rec(0)) return rho;
  return std::nullopt;
}

std::vector<int> h2_structure(const FinAbGroup& g) {
  std::vector<int> out;
  const auto& n = g.orders();
  for (size_t i = 0; i < n.size(); ++i)
    for (size_t j = i + 1; j < n.size(); ++j) {
      int d = std::gcd(n[i], n[j]);
      if (d > 1) out.push_back(d);
    }
  // Normalise a product of cyclic groups to invariant factors d_1 | d_2 | ...
  std::map<int, std::vector<int>> prime_parts;
  for (int d : out) {
    int x = d;
    for (int p = 2; x > 1; ++p) {
      int q = 1;
      while (x % p == 0) {
        x /= p;
        q *= p;
      }
      if (q > 1) prime_parts[p].push_back(q);
    }
  }
  size_t len = 0;
  for (auto& [p, v] : prime_parts) {
    std::sort(v.begin(), v.end(), std::greater<int>());
    len = std::max(len, v.size());
  }
  std::vector<int> inv(len, 1);
  for (auto& [p, v] : prime_parts)
    for (size_t k = 0; k < v.size(); ++k) inv[len - 1 - k] *= v[k];
  return inv;
}

FinAbGroup::Elem GroupMorphism::apply(const FinAbGroup& g, FinAbGroup::Elem x) const {
  auto e = g.exponents(x);
  FinAbGroup::Elem r = g.identity();
  for (size_t k = 0; k < e.size(); ++k) r = g.mul(r, g.pow(generator_images.at(k), e[k]));
  return r;
}

void check_automorphism(const FinAbGroup& g, const GroupMorphism& sigma) {
  if (sigma.generator_images.size() != g.rank())
    fail_pre("invalid-automorphism", "need one image per cyclic generator");
  for (size_t k = 0; k < g.rank(); ++k) {
    if (sigma.generator_images[k] >= g.size()) fail_pre("invalid-automorphism", "image outside the group");
    if (g.pow(sigma.generator_images[k], g.orders()[k]) != g.identity())
      fail_pre("invalid-automorphism", "image of g" + std::to_string(k + 1) + " has order not dividing " +
                                           std::to_string(g.orders()[k]));
  }
  std::vector<char> hit(g.size(), 0);
  for (size_t x = 0; x < g.size(); ++x) hit[sigma.apply(g, x)] = 1;
  if (std::count(hit.begin(), hit.end(), 1) != static_cast<long>(g.size()))
    fail_pre("invalid-automorphism", "endomorphism is not bijective");
}

Cocycle transport_cocycle(const Cocycle& mu, const GroupMorphism& sigma) {
  const FinAbGroup& g = mu.group();
  check_automorphism(g, sigma);
  std::vector<FinAbGroup::Elem> inv(g.size());
  for (size_t x = 0; x < g.size(); ++x) inv[sigma.apply(g, x)] = x;
  size_t n = g.size();
  std::vector<Scalar> t(n * n);
  for (size_t a = 0; a < n; ++a)
    for (size_t b = 0; b < n; ++b) t[a * n + b] = mu(inv[a], inv[b]);
  return Cocycle::verify(g, t);
}

std::vector<GroupMorphism> automorphisms(const FinAbGroup& g) {
  std::vector<GroupMorphism> out;
  GroupMorphism s;
  s.generator_images.assign(g.rank(), 0);
  std::function<void(size_t)> rec = [&](size_t k) {
    if (k == g.rank()) {
      try {
        check_automorphism(g, s);
        out.push_back(s);
      } catch (const TwistError&) {
      }
      return;
    }
    for (size_t x = 0; x < g.size(); ++x) {
      s.generator_images[k] = x;
      rec(k + 1);
    }
  };
  rec(0);
  return out;
}

}  // namespace tb
