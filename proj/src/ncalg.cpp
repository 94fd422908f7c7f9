#include "twistbench/ncalg.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "twistbench/errors.hpp"
#include "twistbench/expr_parser.hpp"

namespace tb {

Word make_word(std::initializer_list<int> letters) {
  Word w;
  for (int l : letters) w.push_back(static_cast<char>(l));
  return w;
}

NcPoly NcPoly::constant(const Scalar& c) { return word(Word(), c); }
NcPoly NcPoly::gen(int index) { return word(Word(1, static_cast<char>(index))); }
NcPoly NcPoly::word(const Word& w, const Scalar& c) {
  NcPoly p;
  p.add_term(w, c);
  return p;
}

Scalar NcPoly::coeff(const Word& w) const {
  auto it = t_.find(w);
  return it == t_.end() ? Scalar(0) : it->second;
}

void NcPoly::add_term(const Word& w, const Scalar& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = t_.emplace(w, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) t_.erase(it);
  }
}

int NcPoly::degree() const { return t_.empty() ? -1 : static_cast<int>(t_.rbegin()->first.size()); }

bool NcPoly::is_homogeneous() const {
  return t_.empty() || t_.begin()->first.size() == t_.rbegin()->first.size();
}

NcPoly NcPoly::operator+(const NcPoly& o) const {
  NcPoly r = *this;
  r += o;
  return r;
}
NcPoly NcPoly::operator-(const NcPoly& o) const {
  NcPoly r = *this;
  r -= o;
  return r;
}
NcPoly NcPoly::operator-() const {
  NcPoly r = *this;
  for (auto& [w, c] : r.t_) c = -c;
  return r;
}
NcPoly& NcPoly::operator+=(const NcPoly& o) {
  for (auto& [w, c] : o.t_) add_term(w, c);
  return *this;
}
NcPoly& NcPoly::operator-=(const NcPoly& o) {
  for (auto& [w, c] : o.t_) add_term(w, -c);
  return *this;
}
NcPoly NcPoly::operator*(const NcPoly& o) const {
  NcPoly r;
  for (auto& [a, ca] : t_)
    for (auto& [b, cb] : o.t_) r.add_term(a + b, ca * cb);
  return r;
}
NcPoly NcPoly::operator*(const Scalar& s) const {
  NcPoly r;
  if (s.is_zero()) return r;
  for (auto& [w, c] : t_) r.t_.emplace(w, c * s);
  return r;
}
NcPoly NcPoly::pow(long e) const {
  NcPoly r = constant(Scalar(1));
  for (long k = 0; k < e; ++k) r = r * *this;
  return r;
}
bool NcPoly::operator==(const NcPoly& o) const { return t_ == o.t_; }

NcPoly NcPoly::substitute(const std::vector<NcPoly>& images) const {
  NcPoly r;
  for (auto& [w, c] : t_) {
    NcPoly term = constant(c);
    for (size_t k = 0; k < w.size(); ++k) term = term * images.at(letter(w, k));
    r += term;
  }
  return r;
}

NcPoly NcPoly::linear_substitute(const Matrix& m) const {
  std::vector<NcPoly> images(m.cols());
  for (size_t j = 0; j < m.cols(); ++j)
    for (size_t i = 0; i < m.rows(); ++i)
      if (!m(i, j).is_zero()) images[j].add_term(Word(1, static_cast<char>(i)), m(i, j));
  return substitute(images);
}

std::string NcPoly::to_string(const std::vector<std::string>& names) const {
  if (t_.empty()) return "0";
  std::string out;
  bool first = true;
  for (auto it = t_.rbegin(); it != t_.rend(); ++it) {
    const Word& w = it->first;
    std::string mono;
    for (size_t k = 0; k < w.size();) {
      size_t run = 1;
      while (k + run < w.size() && w[k + run] == w[k]) ++run;
      if (!mono.empty()) mono += "*";
      mono += names.at(letter(w, k));
      if (run > 1) mono += "^" + std::to_string(run);
      k += run;
    }
    const Scalar& c = it->second;
    bool neg = false;
    std::string coef;
    if (c.is_rational()) {
      Rational q = c.rational_value();
      neg = sgn(q) < 0;
      if (neg) q = -q;
      if (q != 1 || mono.empty()) coef = q.get_str();
    } else {
      Scalar n = -c;
      std::string pos = c.to_string(), alt = n.to_string();
      // Pull a leading sign out when that leaves a single product.
      if (pos[0] == '-' && alt.find(' ') == std::string::npos) {
        neg = true;
        coef = alt;
      } else {
        coef = c.to_factor_string();
      }
    }
    std::string body = coef.empty() ? mono : (mono.empty() ? coef : coef + "*" + mono);
    if (first)
      out = (neg ? "-" : "") + body;
    else
      out += (neg ? " - " : " + ") + body;
    first = false;
  }
  return out;
}

std::vector<Word> all_words(int ngens, int degree) {
  std::vector<Word> out{Word()};
  for (int d = 0; d < degree; ++d) {
    std::vector<Word> next;
    next.reserve(out.size() * ngens);
    for (auto& w : out)
      for (int g = 0; g < ngens; ++g) next.push_back(w + static_cast<char>(g));
    out.swap(next);
  }
  return out;
}

Vec coefficient_vector(const NcPoly& f, const std::vector<Word>& basis, const TowerPtr& tower) {
  Vec v(basis.size(), Scalar(tower, 0));
  std::map<Word, size_t> pos;
  for (size_t k = 0; k < basis.size(); ++k) pos[basis[k]] = k;
  for (auto& [w, c] : f.terms()) {
    auto it = pos.find(w);
    if (it == pos.end()) fail_internal("shape", "word outside the coefficient basis");
    v[it->second] = c;
  }
  return v;
}

NcPoly from_coefficients(const Vec& v, const std::vector<Word>& basis) {
  NcPoly f;
  for (size_t k = 0; k < basis.size(); ++k) f.add_term(basis[k], v[k]);
  return f;
}

FinAbGroup::Elem GGrading::degree_of(const Word& w) const {
  FinAbGroup::Elem g = group.identity();
  for (size_t k = 0; k < w.size(); ++k) g = group.mul(g, grade.at(letter(w, k)));
  return g;
}

Matrix GradedAction::element_matrix(FinAbGroup::Elem g) const {
  size_t n = matrices.empty() ? 0 : matrices[0].rows();
  Matrix m = Matrix::identity(n, matrices.empty() ? FieldTower::rationals() : matrices[0].tower());
  auto e = group.exponents(g);
  for (size_t k = 0; k < e.size(); ++k) m = m * matrices.at(k).pow(e[k]);
  return m;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

struct NcBuilder {
  using Value = NcPoly;
  const Presentation& ctx;
  Value constant(const Rational& q) { return NcPoly::constant(Scalar(ctx.tower, q)); }
  Value symbol(const std::string& s) {
    if (auto k = ctx.index_of(s)) return NcPoly::gen(*k);
    if (auto c = ctx.constant(s)) return NcPoly::constant(*c);
    if (ctx.tower->level_of(s)) return NcPoly::constant(Scalar::symbol(ctx.tower, s));
    fail_parse("unknown symbol '" + s + "'");
  }
  Value add(const Value& a, const Value& b) { return a + b; }
  Value sub(const Value& a, const Value& b) { return a - b; }
  Value mul(const Value& a, const Value& b) { return a * b; }
  Value neg(const Value& a) { return -a; }
  Value div(const Value& a, const Value& b) {
    if (b.is_zero() || b.degree() != 0) fail_parse("division by a non-scalar expression");
    return a * b.coeff(Word()).inverse();
  }
  Value pow(const Value& a, long e) {
    if (e < 0) fail_parse("negative exponent");
    return a.pow(e);
  }
  Value bracket(const Value& a, const Value& b, bool anti) { return anti ? a * b + b * a : a * b - b * a; }
};

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_top(const std::string& s, char sep) {
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  for (char c : s) {
    if (c == '(' || c == '[') ++depth;
    if (c == ')' || c == ']') --depth;
    if (c == sep && depth == 0) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

Scalar parse_ctx_scalar(const std::string& text, const Presentation& ctx) {
  NcPoly f = parse_ncpoly(text, ctx);
  if (f.is_zero()) return Scalar(ctx.tower, 0);
  if (f.degree() != 0) fail_parse("expected a scalar, got '" + text + "'");
  return f.coeff(Word()).in(join_towers(ctx.tower, f.coeff(Word()).tower()));
}

std::string inner(const std::string& s, const std::string& head) {
  if (s.rfind(head + "(", 0) != 0 || s.back() != ')') fail_parse("malformed " + head + "(...) literal: '" + s + "'");
  return s.substr(head.size() + 1, s.size() - head.size() - 2);
}

}  // namespace

NcPoly parse_ncpoly(const std::string& text, const Presentation& ctx) {
  NcBuilder b{ctx};
  ExprParser<NcBuilder> p(text, b);
  return p.parse();
}

Matrix parse_matrix(const std::string& raw, size_t n, const Presentation& ctx) {
  std::string s;
  for (char c : raw)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.empty()) fail_parse("empty matrix literal");
  if (s[0] == '[') {
    if (s.size() < 4 || s[1] != '[') fail_parse("matrix rows must be written [[..],[..]]");
    auto rows = split_top(s.substr(1, s.size() - 2), ',');
    std::vector<Vec> r;
    for (auto& row : rows) {
      if (row.size() < 2 || row.front() != '[' || row.back() != ']') fail_parse("malformed matrix row '" + row + "'");
      Vec v;
      for (auto& e : split_top(row.substr(1, row.size() - 2), ',')) v.push_back(parse_ctx_scalar(e, ctx));
      if (v.size() != n) fail_parse("matrix row has wrong length");
      r.push_back(v);
    }
    if (r.size() != n) fail_parse("matrix has wrong number of rows");
    return Matrix::from_rows(r, ctx.tower);
  }
  Matrix result = Matrix::identity(n, ctx.tower);
  for (auto& factor : split_top(s, '*')) {
    Matrix f(n, n, ctx.tower);
    if (factor.rfind("diag(", 0) == 0) {
      auto es = split_top(inner(factor, "diag"), ',');
      if (es.size() != n) fail_parse("diag(...) needs " + std::to_string(n) + " entries");
      Vec d;
      for (auto& e : es) d.push_back(parse_ctx_scalar(e, ctx));
      f = Matrix::diag(d, ctx.tower);
    } else if (factor.rfind("perm(", 0) == 0) {
      auto es = split_top(inner(factor, "perm"), ',');
      if (es.size() != n) fail_parse("perm(...) needs " + std::to_string(n) + " entries");
      std::vector<char> seen(n, 0);
      for (size_t j = 0; j < n; ++j) {
        size_t i = std::stoul(es[j]);
        if (i >= n || seen[i]) fail_parse("perm(...) is not a permutation");
        seen[i] = 1;
        f(i, j) = Scalar(ctx.tower, 1);  // x_j -> x_{p(j)}
      }
    } else {
      fail_parse("unknown matrix form '" + factor + "'");
    }
    result = result * f;
  }
  return result;
}

std::vector<std::string> Presentation::names() const {
  std::vector<std::string> n;
  for (auto& g : gens) n.push_back(g.name);
  return n;
}

std::optional<int> Presentation::index_of(const std::string& name) const {
  for (size_t k = 0; k < gens.size(); ++k)
    if (gens[k].name == name) return static_cast<int>(k);
  return std::nullopt;
}

std::optional<Scalar> Presentation::constant(const std::string& name) const {
  for (auto& [n, v] : constants)
    if (n == name) return v;
  return std::nullopt;
}

NcPoly Presentation::parse(const std::string& text) const { return parse_ncpoly(text, *this); }

void Presentation::validate() const {
  for (auto& g : gens)
    if (g.degree != 1)
      fail_pre("unsupported-degree", "generator '" + g.name + "' has degree " + std::to_string(g.degree) +
                                         "; only degree-1 generators are supported");
  for (auto& r : relations) {
    if (!r.is_homogeneous()) fail_pre("inhomogeneous-relation", "relation " + show(r) + " is not N-homogeneous");
    if (r.degree() < 1) fail_pre("inhomogeneous-relation", "relation " + show(r) + " has degree 0");
    if (grading) {
      auto g0 = grading->degree_of(r.leading_word());
      for (auto& [w, c] : r.terms())
        if (grading->degree_of(w) != g0)
          fail_pre("inhomogeneous-relation", "relation " + show(r) + " is not G-homogeneous");
    }
  }
}

std::string Presentation::to_text() const {
  std::ostringstream os;
  os << "[field]\n";
  for (auto& [sym, poly] : tower->spec()) os << sym << ": " << poly << "\n";
  for (auto& [n, v] : constants) os << n << " = " << v.to_string() << "\n";
  os << "\n[generators]\n";
  for (size_t k = 0; k < gens.size(); ++k) os << (k ? " " : "") << gens[k].name << ":" << gens[k].degree;
  os << "\n\n[relations]\n";
  for (auto& r : relations) os << show(r) << "\n";
  const FinAbGroup* g = nullptr;
  if (action) g = &action->group;
  if (grading) g = &grading->group;
  if (g) os << "\n[group]\n" << g->describe() << "\n";
  if (action) {
    os << "\n[action]\n";
    for (size_t k = 0; k < action->matrices.size(); ++k) {
      const Matrix& m = action->matrices[k];
      os << "g" << k + 1 << ": [";
      for (size_t i = 0; i < m.rows(); ++i) {
        os << (i ? ",[" : "[");
        for (size_t j = 0; j < m.cols(); ++j) os << (j ? "," : "") << m(i, j).to_string();
        os << "]";
      }
      os << "]\n";
    }
  }
  if (grading) {
    os << "\n[grading]\n";
    for (size_t k = 0; k < gens.size(); ++k)
      os << (k ? " " : "") << gens[k].name << ":" << grading->group.name(grading->grade[k]);
    bool canonical = true;
    for (size_t i = 0; i < grading->duality.perm.size(); ++i) canonical &= grading->duality.perm[i] == i;
    os << "\nduality: ";
    if (canonical) {
      os << "canonical";
    } else {
      for (size_t i = 0; i < grading->duality.perm.size(); ++i) os << (i ? "," : "") << grading->duality.perm[i];
    }
    os << "\n";
  }
  if (!cocycle.empty()) {
    os << "\n[cocycle]\n";
    if (cocycle == "table") {
      size_t n = static_cast<size_t>(std::llround(std::sqrt(static_cast<double>(cocycle_table.size()))));
      for (size_t a = 0; a < n; ++a) {
        for (size_t b = 0; b < n; ++b) os << (b ? " " : "") << cocycle_table[a * n + b].to_string();
        os << "\n";
      }
    } else {
      os << cocycle << "\n";
    }
  }
  return os.str();
}

Presentation parse_presentation(const std::string& text) {
  Presentation p;
  std::vector<std::pair<std::string, std::string>> tower_spec;
  std::vector<std::pair<std::string, std::string>> const_text;
  std::vector<std::string> relation_lines, action_lines, grading_lines, cocycle_lines;
  std::string group_text, section;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[' && line.back() == ']' && line.find(',') == std::string::npos &&
        line.find(' ') == std::string::npos) {
      section = line.substr(1, line.size() - 2);
      continue;
    }
    auto err = [&](const std::string& m) { fail_parse("line " + std::to_string(lineno) + ": " + m); };
    if (section == "field") {
      auto eq = line.find('=');
      auto colon = line.find(':');
      if (eq != std::string::npos) {
        const_text.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
      } else if (colon != std::string::npos) {
        tower_spec.emplace_back(trim(line.substr(0, colon)), trim(line.substr(colon + 1)));
      } else if (line != "QQ") {
        err("field lines are 'symbol: polynomial in t' or 'name = value'");
      }
    } else if (section == "generators") {
      std::istringstream ls(line);
      std::string tok;
      while (ls >> tok) {
        auto colon = tok.find(':');
        Generator g;
        g.name = tok.substr(0, colon);
        if (colon != std::string::npos) g.degree = std::stoi(tok.substr(colon + 1));
        if (g.name.empty() || !std::isalpha(static_cast<unsigned char>(g.name[0]))) err("bad generator '" + tok + "'");
        p.gens.push_back(g);
      }
    } else if (section == "relations") {
      relation_lines.push_back(line);
    } else if (section == "group") {
      group_text = line;
    } else if (section == "action") {
      action_lines.push_back(line);
    } else if (section == "grading") {
      grading_lines.push_back(line);
    } else if (section == "cocycle") {
      cocycle_lines.push_back(line);
    } else {
      err("content outside a known section");
    }
  }
  p.tower = FieldTower::build(tower_spec);
  for (auto& [n, v] : const_text) p.constants.emplace_back(n, parse_ctx_scalar(v, p));
  for (auto& g : p.gens)
    if (p.tower->level_of(g.name) || p.constant(g.name)) fail_parse("generator name '" + g.name + "' is already a scalar");
  for (auto& r : relation_lines) p.relations.push_back(p.parse(r));
  std::optional<FinAbGroup> group;
  if (!group_text.empty()) group = FinAbGroup::parse(group_text);
  if (!action_lines.empty()) {
    if (!group) fail_parse("[action] requires a [group] section");
    GradedAction act;
    act.group = *group;
    act.matrices.resize(group->rank());
    std::vector<char> seen(group->rank(), 0);
    for (auto& l : action_lines) {
      auto colon = l.find(':');
      if (colon == std::string::npos) fail_parse("action lines are 'g<k>: matrix'");
      auto g = group->parse_element(trim(l.substr(0, colon)));
      auto e = group->exponents(g);
      size_t k = 0;
      while (k < e.size() && e[k] == 0) ++k;
      if (k == e.size() || e[k] != 1 || g != group->generator(k))
        fail_parse("action must be given on the cyclic generators g1, g2, ...");
      act.matrices[k] = parse_matrix(l.substr(colon + 1), p.ngens(), p);
      seen[k] = 1;
    }
    for (size_t k = 0; k < seen.size(); ++k)
      if (!seen[k]) act.matrices[k] = Matrix::identity(p.ngens(), p.tower);
    p.action = act;
  }
  if (!grading_lines.empty()) {
    if (!group) fail_parse("[grading] requires a [group] section");
    GGrading gr;
    gr.group = *group;
    gr.duality = Duality::canonical(*group);
    gr.grade.assign(p.ngens(), group->identity());
    std::vector<char> seen(p.ngens(), 0);
    for (auto& l : grading_lines) {
      if (l.rfind("duality:", 0) == 0) {
        std::string d = trim(l.substr(8));
        if (d == "canonical") {
          gr.duality = Duality::canonical(*group);
        } else if (d == "swap") {
          gr.duality = Duality::factor_swap();
        } else {
          gr.duality.perm.clear();
          for (auto& x : split_top(d, ',')) gr.duality.perm.push_back(std::stoul(x));
        }
        if (gr.duality.perm.size() != group->rank()) fail_parse("duality needs one entry per factor");
        continue;
      }
      std::istringstream ls(l);
      std::string tok;
      while (ls >> tok) {
        auto colon = tok.find(':');
        if (colon == std::string::npos) fail_parse("grading entries are 'generator:element'");
        auto k = p.index_of(tok.substr(0, colon));
        if (!k) fail_parse("unknown generator in grading: '" + tok + "'");
        gr.grade[*k] = group->parse_element(tok.substr(colon + 1));
        seen[*k] = 1;
      }
    }
    for (size_t k = 0; k < seen.size(); ++k)
      if (!seen[k]) fail_parse("generator '" + p.gens[k].name + "' has no grade");
    p.grading = gr;
  }
  if (!cocycle_lines.empty()) {
    if (cocycle_lines.size() == 1 && cocycle_lines[0].rfind("builtin:", 0) == 0) {
      p.cocycle = cocycle_lines[0];
    } else {
      p.cocycle = "table";
      for (auto& l : cocycle_lines) {
        std::istringstream ls(l);
        std::string tok;
        while (ls >> tok) p.cocycle_table.push_back(parse_ctx_scalar(tok, p));
      }
    }
  }
  return p;
}

Presentation load_presentation(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail_pre("io-error", "cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_presentation(ss.str());
}

// ---------------------------------------------------------------------------

Presentation change_basis(const Presentation& p, const Matrix& m) {
  if (m.rows() != p.ngens() || m.cols() != p.ngens()) fail_pre("shape", "basis change matrix has the wrong size");
  if (!m.inverse()) fail_pre("singular-matrix", "basis change matrix is singular");
  Presentation q = p;
  q.tower = join_towers(p.tower, m.tower());
  for (auto& r : q.relations) r = r.linear_substitute(m);
  q.grading.reset();
  q.action.reset();
  return q;
}

Matrix ideal_piece(const Presentation& p, int degree) {
  auto words = all_words(static_cast<int>(p.ngens()), degree);
  std::vector<Vec> rows;
  TowerPtr t = p.tower;
  for (auto& r : p.relations) {
    int d = r.degree();
    if (d > degree || r.is_zero()) continue;
    int gap = degree - d;
    for (int left = 0; left <= gap; ++left) {
      auto ls = all_words(static_cast<int>(p.ngens()), left);
      auto rs = all_words(static_cast<int>(p.ngens()), gap - left);
      for (auto& u : ls)
        for (auto& v : rs) {
          NcPoly f = NcPoly::word(u) * r * NcPoly::word(v);
          rows.push_back(coefficient_vector(f, words, t));
        }
    }
  }
  if (rows.empty()) return Matrix(0, words.size(), t);
  Matrix m = Matrix::from_rows(rows, t);
  auto piv = m.rref();
  Matrix out(piv.size(), words.size(), m.tower());
  for (size_t i = 0; i < piv.size(); ++i)
    for (size_t j = 0; j < words.size(); ++j) out(i, j) = m(i, j);
  return out;
}

EquivarianceReport check_equivariance(const Presentation& p, const GradedAction& act) {
  EquivarianceReport rep;
  TowerPtr t = p.tower;
  for (auto& m : act.matrices) t = join_towers(t, m.tower());
  std::map<int, std::vector<NcPoly>> by_degree;
  for (auto& r : p.relations) by_degree[r.degree()].push_back(r);
  for (auto& [d, rels] : by_degree) {
    auto words = all_words(static_cast<int>(p.ngens()), d);
    std::vector<Vec> span;
    for (auto& r : rels) span.push_back(coefficient_vector(r, words, t));
    for (size_t k = 0; k < act.matrices.size() && rep.invariant; ++k)
      for (auto& r : rels) {
        NcPoly img = r.linear_substitute(act.matrices[k]);
        if (!in_span(span, coefficient_vector(img, words, t), t)) {
          rep.invariant = false;
          rep.witness = "g" + std::to_string(k + 1) + " maps " + p.show(r) + " to " + p.show(img) +
                        ", outside the relation span";
          break;
        }
      }
    if (!rep.invariant) return rep;
    // Isotypic splitting: simultaneous eigenspaces of the action on the span.
    std::vector<std::vector<Vec>> pieces{span};
    std::vector<std::vector<Scalar>> labels{{}};
    for (size_t k = 0; k < act.matrices.size(); ++k) {
      int n = act.group.orders()[k];
      Scalar zeta = root_of_unity(n, t);
      std::vector<std::vector<Vec>> next;
      std::vector<std::vector<Scalar>> next_labels;
      for (size_t piece = 0; piece < pieces.size(); ++piece) {
        for (int e = 0; e < n; ++e) {
          Scalar lam = zeta.pow(e);
          // Projector (1/n) sum_m lam^{-m} g^m applied to the piece.
          std::vector<Vec> proj;
          for (auto& v : pieces[piece]) {
            NcPoly f = from_coefficients(v, words), acc;
            NcPoly cur = f;
            for (int m = 0; m < n; ++m) {
              acc += cur * lam.pow(-m);
              cur = cur.linear_substitute(act.matrices[k]);
            }
            proj.push_back(coefficient_vector(acc * Scalar(Rational(1, n)), words, t));
          }
          Matrix pm = Matrix::from_rows(proj, t);
          auto piv = pm.rref();
          if (piv.empty()) continue;
          std::vector<Vec> basis;
          for (size_t i = 0; i < piv.size(); ++i) basis.push_back(pm.row(i));
          next.push_back(basis);
          auto l = labels[piece];
          l.push_back(lam);
          next_labels.push_back(l);
        }
      }
      pieces.swap(next);
      labels.swap(next_labels);
    }
    for (size_t piece = 0; piece < pieces.size(); ++piece)
      for (auto& v : pieces[piece]) rep.isotypic.emplace_back(labels[piece], from_coefficients(v, words));
  }
  return rep;
}

InducedGrading induced_grading(const Presentation& p, const GradedAction& act, const Duality& d,
                               const std::vector<std::string>& new_names) {
  size_t n = p.ngens();
  TowerPtr t = p.tower;
  for (auto& m : act.matrices) t = join_towers(t, m.tower());
  for (size_t a = 0; a < act.matrices.size(); ++a)
    for (size_t b = a + 1; b < act.matrices.size(); ++b)
      if (act.matrices[a] * act.matrices[b] != act.matrices[b] * act.matrices[a])
        fail_pre("non-commuting-action", "action matrices of g" + std::to_string(a + 1) + " and g" +
                                             std::to_string(b + 1) + " do not commute");
  for (size_t k = 0; k < act.matrices.size(); ++k)
    if (act.matrices[k].pow(act.group.orders()[k]) != Matrix::identity(n, t))
      fail_pre("invalid-action", "g" + std::to_string(k + 1) + " does not act with order dividing " +
                                     std::to_string(act.group.orders()[k]));
  // Iterated eigenspace refinement; each space is kept as RREF row vectors.
  struct Space {
    std::vector<Vec> basis;
    std::vector<int> exps;  // eigenvalue zeta_{n_k}^{exps[k]}
  };
  std::vector<Space> spaces{{{}, {}}};
  for (size_t i = 0; i < n; ++i) {
    Vec e(n, Scalar(t, 0));
    e[i] = Scalar(t, 1);
    spaces[0].basis.push_back(e);
  }
  for (size_t k = 0; k < act.matrices.size(); ++k) {
    int order = act.group.orders()[k];
    Scalar zeta = root_of_unity(order, t);
    const Matrix& M = act.matrices[k];
    std::vector<Space> next;
    for (auto& sp : spaces) {
      size_t covered = 0;
      for (int e = 0; e < order; ++e) {
        // Vectors c in the space with M c = lam c: c = sum y_r b_r, solve (M - lam) B y = 0.
        Scalar lam = zeta.pow(e);
        Matrix B = Matrix::from_rows(sp.basis, t).transpose();
        Matrix K = (M - Matrix::identity(n, t).scaled(lam)) * B;
        auto ker = K.kernel();
        if (ker.empty()) continue;
        std::vector<Vec> vecs;
        for (auto& y : ker) vecs.push_back(B.apply(y));
        Matrix vm = Matrix::from_rows(vecs, t);
        auto piv = vm.rref();
        Space s;
        for (size_t r = 0; r < piv.size(); ++r) s.basis.push_back(vm.row(r));
        s.exps = sp.exps;
        s.exps.push_back(e);
        covered += s.basis.size();
        next.push_back(s);
      }
      if (covered != sp.basis.size())
        fail_pre("not-diagonalizable", "action of g" + std::to_string(k + 1) +
                                           " is not diagonalizable with roots of unity in the tower");
    }
    spaces.swap(next);
  }
  struct NewGen {
    Vec v;
    FinAbGroup::Elem grade;
    size_t pivot;
  };
  std::vector<NewGen> gens;
  const FinAbGroup& G = act.group;
  for (auto& sp : spaces) {
    // Find g with chi_{g^{-1}}(h_k) = zeta^{exps[k]} for every cyclic generator h_k.
    std::optional<FinAbGroup::Elem> found;
    for (FinAbGroup::Elem g = 0; g < G.size() && !found; ++g) {
      bool ok = true;
      for (size_t k = 0; k < G.rank() && ok; ++k) {
        Scalar want = root_of_unity(G.orders()[k], t).pow(sp.exps[k]);
        ok = character(G, d, G.inv(g), G.generator(k), t) == want;
      }
      if (ok) found = g;
    }
    if (!found) fail_internal("duality", "no group element carries the eigencharacter");
    for (auto& v : sp.basis) {
      size_t piv = 0;
      while (v[piv].is_zero()) ++piv;
      gens.push_back({v, *found, piv});
    }
  }
  std::stable_sort(gens.begin(), gens.end(), [](const NewGen& a, const NewGen& b) {
    if (a.pivot != b.pivot) return a.pivot < b.pivot;
    return a.grade < b.grade;
  });
  Matrix basis(n, n, t);
  for (size_t k = 0; k < n; ++k)
    for (size_t i = 0; i < n; ++i) basis(i, k) = gens[k].v[i];
  auto inv = basis.inverse();
  if (!inv) fail_internal("singular-matrix", "eigenbasis is not a basis");
  InducedGrading out;
  out.presentation = change_basis(p, *inv);
  out.presentation.tower = t;
  for (size_t k = 0; k < n; ++k)
    out.presentation.gens[k].name =
        k < new_names.size() ? new_names[k] : "w" + std::to_string(k + 1);
  out.grading.group = G;
  out.grading.duality = d;
  for (auto& g : gens) out.grading.grade.push_back(g.grade);
  out.basis = basis;
  out.presentation.grading = out.grading;
  // Split each relation into G-homogeneous parts; the isotypic parts of an
  // invariant span lie in the span, so the parts replace the originals.
  std::vector<NcPoly> split;
  for (auto& r : out.presentation.relations) {
    std::map<FinAbGroup::Elem, NcPoly> parts;
    for (auto& [w, c] : r.terms()) parts[out.grading.degree_of(w)].add_term(w, c);
    for (auto& [g, f] : parts) split.push_back(f);
  }
  auto span_ok = [&](int deg) {
    auto words = all_words(static_cast<int>(n), deg);
    std::vector<Vec> orig, parts;
    for (auto& r : out.presentation.relations)
      if (r.degree() == deg) orig.push_back(coefficient_vector(r, words, t));
    for (auto& r : split)
      if (r.degree() == deg) parts.push_back(coefficient_vector(r, words, t));
    return vector_rank(orig, t) == vector_rank(parts, t) &&
           vector_rank(orig, t) == [&] {
             auto both = orig;
             both.insert(both.end(), parts.begin(), parts.end());
             return vector_rank(both, t);
           }();
  };
  std::set<int> degs;
  for (auto& r : split) degs.insert(r.degree());
  for (int deg : degs)
    if (!span_ok(deg)) fail_pre("not-invariant", "the action does not preserve the relation span");
  // Keep a basis of the homogeneous parts, preserving order.
  std::vector<NcPoly> kept;
  for (int deg : degs) {
    auto words = all_words(static_cast<int>(n), deg);
    std::vector<Vec> acc;
    for (auto& r : split) {
      if (r.degree() != deg) continue;
      auto v = coefficient_vector(r, words, t);
      auto trial = acc;
      trial.push_back(v);
      if (vector_rank(trial, t) > acc.size()) {
        acc = trial;
        kept.push_back(r);
      }
    }
  }
  out.presentation.relations = kept;
  return out;
}

}  // namespace tb
