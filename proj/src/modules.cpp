#include "twistbench/modules.hpp"

#include "twistbench/errors.hpp"

namespace tb {

namespace {

TowerPtr tower_of_points(TowerPtr t, const std::vector<ProjPoint>& pts) {
  for (auto& p : pts)
    for (auto& c : p.coords) t = join_towers(t, c.tower());
  return t;
}

void check_pair(const Presentation& algebra, const ProjPoint& p, const ProjPoint& q, size_t j) {
  for (size_t r = 0; r < algebra.relations.size(); ++r) {
    if (!bilinear_eval(algebra.relations[r], p.coords, q.coords).is_zero())
      fail_pre("gamma2-violation",
               "step " + std::to_string(j) + ": (" + p.to_string() + ", " + q.to_string() +
                   ") does not satisfy relation " + algebra.show(algebra.relations[r]),
               std::to_string(j));
  }
}

// Row vectors: v * A.
Vec row_times(const Vec& v, const Matrix& a) {
  Vec out(a.cols(), Scalar(0));
  for (size_t r = 0; r < a.rows(); ++r) {
    if (v[r].is_zero()) continue;
    for (size_t c = 0; c < a.cols(); ++c)
      if (!a(r, c).is_zero()) out[c] += v[r] * a(r, c);
  }
  return out;
}

bool is_zero_vec(const Vec& v) {
  for (auto& x : v)
    if (!x.is_zero()) return false;
  return true;
}

// Basis of the span of the images of the given degree-j vectors under every generator.
std::vector<Vec> step_span(const TruncatedModule& m, int j, const std::vector<Vec>& vs, const TowerPtr& t) {
  std::vector<Vec> rows;
  for (auto& v : vs)
    for (auto& a : m.action[j]) {
      Vec w = row_times(v, a);
      if (!is_zero_vec(w)) rows.push_back(std::move(w));
    }
  if (rows.empty()) return {};
  Matrix mat = Matrix::from_rows(rows, t);
  size_t rk = mat.rref().size();
  std::vector<Vec> out;
  for (size_t r = 0; r < rk; ++r) out.push_back(mat.row(r));
  return out;
}

std::string vec_string(const Vec& v) {
  std::string s = "(";
  for (size_t k = 0; k < v.size(); ++k) s += (k ? ", " : "") + v[k].to_string();
  return s + ")";
}

}  // namespace

PointSequence point_sequence_from_linear_automorphism(const Presentation& algebra, const ProjPoint& p0,
                                                      const Matrix& sigma, int D) {
  if (sigma.rows() != algebra.ngens() || sigma.cols() != algebra.ngens() || p0.coords.size() != algebra.ngens())
    fail_pre("shape", "sigma and p0 must match the number of generators");
  if (!sigma.inverse()) fail_pre("singular", "sigma is not invertible");
  if (D < 0) fail_pre("degree-bound", "D must be nonnegative");
  PointSequence ps;
  ps.points.push_back(p0);
  for (int j = 0; j < D; ++j) ps.points.push_back(ProjPoint::make(sigma.apply(ps.points.back().coords)));
  // A point outside the scheme is caught at step 0 even when D = 0.
  if (D == 0) check_pair(algebra, p0, ProjPoint::make(sigma.apply(p0.coords)), 0);
  for (int j = 0; j < D; ++j) check_pair(algebra, ps.points[j], ps.points[j + 1], j);
  return ps;
}

PointSequence point_sequence_from_points(const Presentation& algebra, std::vector<ProjPoint> points) {
  if (points.empty()) fail_pre("shape", "a point sequence needs at least one point");
  for (auto& p : points)
    if (p.coords.size() != algebra.ngens()) fail_pre("shape", "point " + p.to_string() + " has the wrong length");
  for (size_t j = 0; j + 1 < points.size(); ++j) check_pair(algebra, points[j], points[j + 1], j);
  return PointSequence{std::move(points)};
}

TowerPtr TruncatedModule::tower() const { return tower_of_points(algebra.tower, source_points); }

std::optional<std::pair<int, size_t>> relation_violation(const TruncatedModule& m) {
  int D = m.degree();
  TowerPtr t = m.tower();
  for (int j = 0; j <= D; ++j) {
    for (size_t r = 0; r < m.algebra.relations.size(); ++r) {
      const NcPoly& f = m.algebra.relations[r];
      if (j + f.degree() > D) continue;
      Matrix total(m.dims[j], m.dims[j + f.degree()], t);
      for (auto& [w, c] : f.terms()) {
        Matrix prod = Matrix::identity(m.dims[j], t);
        for (size_t k = 0; k < w.size(); ++k) prod = prod * m.action[j + k][letter(w, k)];
        total = total + prod.scaled(c);
      }
      if (!total.is_zero()) return std::make_pair(j, r);
    }
  }
  return std::nullopt;
}

TruncatedModule point_module(const Presentation& algebra, const PointSequence& ps) {
  TruncatedModule m;
  m.algebra = algebra;
  m.source_points = ps.points;
  m.dims.assign(ps.points.size(), 1);
  TowerPtr t = m.tower();
  for (int j = 0; j < ps.degree(); ++j) {
    std::vector<Matrix> acts;
    for (size_t i = 0; i < algebra.ngens(); ++i) {
      Matrix a(1, 1, t);
      a(0, 0) = ps.points[j].coords[i];
      acts.push_back(a);
    }
    m.action.push_back(std::move(acts));
  }
  m.description = "point module at " + ps.points.front().to_string();
  return m;
}

MatrixEmbedding klein_embedding(const GGrading& grading, const TowerPtr& tower) {
  const FinAbGroup& G = grading.group;
  if (G.size() != 4 || G.order_of(G.generator(0)) != 2 || G.order_of(G.generator(1)) != 2)
    fail_pre("group", "the Klein embedding needs a (C2)^2-grading");
  FinAbGroup::Elem g1 = G.generator(0), g2 = G.generator(1);
  size_t n = grading.grade.size();
  MatrixEmbedding emb;
  emb.size = 2;
  for (size_t k = 0; k < n; ++k) {
    std::vector<std::vector<Vec>> img(2, std::vector<Vec>(2, Vec(n, Scalar(0))));
    auto set = [&](size_t r, size_t c, long s) { img[r][c][k] = Scalar(s).in(tower); };
    FinAbGroup::Elem g = grading.grade[k];
    if (g == G.identity()) {
      set(0, 0, 1), set(1, 1, 1);
    } else if (g == g1) {
      set(0, 0, 1), set(1, 1, -1);
    } else if (g == g2) {
      set(0, 1, 1), set(1, 0, 1);
    } else {
      set(0, 1, -1), set(1, 0, 1);
    }
    emb.images.push_back(std::move(img));
  }
  return emb;
}

TruncatedModule restrict_along(const TruncatedModule& m, const Presentation& target, const MatrixEmbedding& emb) {
  if (emb.images.size() != target.ngens()) fail_pre("shape", "the embedding needs one image per target generator");
  size_t k = emb.size;
  TruncatedModule out;
  out.algebra = target;
  out.source_points = m.source_points;
  TowerPtr t = join_towers(m.tower(), target.tower);
  out.algebra.tower = target.tower;
  for (size_t d : m.dims) out.dims.push_back(k * d);
  for (int j = 0; j < m.degree(); ++j) {
    size_t dj = m.dims[j], dn = m.dims[j + 1];
    std::vector<Matrix> acts;
    for (size_t i = 0; i < target.ngens(); ++i) {
      Matrix a(k * dj, k * dn, t);
      for (size_t r = 0; r < k; ++r)
        for (size_t c = 0; c < k; ++c) {
          const Vec& form = emb.images[i][r][c];
          if (form.size() != m.algebra.ngens()) fail_pre("shape", "embedding entries are forms over the source");
          for (size_t s = 0; s < form.size(); ++s) {
            if (form[s].is_zero()) continue;
            const Matrix& src = m.action[j][s];
            for (size_t x = 0; x < dj; ++x)
              for (size_t y = 0; y < dn; ++y) a(r * dj + x, c * dn + y) += form[s] * src(x, y);
          }
        }
      acts.push_back(std::move(a));
    }
    out.action.push_back(std::move(acts));
  }
  out.description = m.description + " restricted through " + std::to_string(k) + "x" + std::to_string(k) +
                    " matrices";
  if (auto bad = relation_violation(out))
    fail_pre("relation-not-annihilated",
             "relation " + target.show(target.relations[bad->second]) + " acts nontrivially on degree " +
                 std::to_string(bad->first));
  return out;
}

TruncatedModule fat_point_build(const Presentation& source, const Presentation& twist, const PointSequence& ps,
                                const MatrixEmbedding& emb) {
  TruncatedModule fat = restrict_along(point_module(source, ps), twist, emb);
  fat.description = "M_p^2 at " + ps.points.front().to_string();
  return fat;
}

ModuleReport module_checks(const TruncatedModule& m) {
  ModuleReport rep;
  rep.dims = m.dims;
  int D = m.degree();
  TowerPtr t = m.tower();
  auto fills = [&](int from, std::vector<Vec> span, int need_from) {
    for (int j = from; j < D; ++j) {
      span = step_span(m, j, span, t);
      if (j + 1 >= need_from && span.size() != m.dims[j + 1]) return false;
    }
    return true;
  };
  if (!m.dims.empty() && m.dims[0] > 0) {
    std::vector<Vec> basis;
    for (size_t k = 0; k < m.dims[0]; ++k) {
      Vec e(m.dims[0], Scalar(0));
      e[k] = Scalar(1);
      basis.push_back(e);
    }
    if (!fills(0, basis, 1)) {
      rep.generated_in_degree_0 = false;
      rep.witness = "degree 0 does not generate";
    }
  }
  static const std::vector<Rational> lambdas = {Rational(1), Rational(-1), Rational(2), Rational(-1, 2), Rational(3)};
  for (int j = 0; j + 2 <= D && rep.criticality_proxy; ++j) {
    size_t d = m.dims[j];
    std::vector<Vec> tests;
    for (size_t k = 0; k < d; ++k) {
      Vec e(d, Scalar(0));
      e[k] = Scalar(1);
      tests.push_back(e);
    }
    for (size_t k = 1; k < d; ++k)
      for (auto& l : lambdas) {
        Vec e(d, Scalar(0));
        e[0] = Scalar(1);
        e[k] = Scalar(l);
        tests.push_back(e);
      }
    for (auto& v : tests) {
      if (!fills(j, {v}, j + 2)) {
        rep.criticality_proxy = false;
        rep.witness = "degree " + std::to_string(j) + " vector " + vec_string(v) + " generates a proper submodule";
        break;
      }
    }
  }
  return rep;
}

DecompositionCertificate decompose_check(const TruncatedModule& m, const std::vector<Vec>& vectors) {
  DecompositionCertificate cert;
  int D = m.degree();
  TowerPtr t = m.tower();
  size_t n = m.algebra.ngens();
  std::vector<std::vector<Vec>> pieces(D + 1);  // per degree, the u_j of every part
  for (auto& v : vectors) {
    if (m.dims.empty() || v.size() != m.dims[0]) fail_pre("shape", "candidate vectors live in degree 0");
    if (is_zero_vec(v)) fail_pre("not-a-point-submodule", "the zero vector generates nothing");
    PointSubmodule part;
    part.generator = v;
    Vec u = v;
    pieces[0].push_back(u);
    for (int j = 0; j < D; ++j) {
      std::vector<Vec> imgs;
      for (size_t i = 0; i < n; ++i) imgs.push_back(row_times(u, m.action[j][i]));
      size_t pivot = 0;
      while (pivot < n && is_zero_vec(imgs[pivot])) ++pivot;
      if (pivot == n)
        fail_pre("not-a-point-submodule",
                 "the submodule generated by " + vec_string(v) + " vanishes in degree " + std::to_string(j + 1));
      if (vector_rank(imgs, t) != 1)
        fail_pre("not-a-point-submodule", "the submodule generated by " + vec_string(v) + " has dimension " +
                                              std::to_string(vector_rank(imgs, t)) + " in degree " +
                                              std::to_string(j + 1));
      Vec next = imgs[pivot];
      size_t lead = 0;
      while (next[lead].is_zero()) ++lead;
      Vec q(n, Scalar(0));
      for (size_t i = 0; i < n; ++i) q[i] = imgs[i][lead] / next[lead];
      part.points.push_back(ProjPoint::make(q));
      Matrix form = Matrix::from_rows({q}, t);
      part.annihilators.push_back(form.kernel());
      u = next;
      pieces[j + 1].push_back(u);
    }
    cert.parts.push_back(std::move(part));
  }
  for (int j = 0; j <= D; ++j) {
    size_t rk = pieces[j].empty() ? 0 : vector_rank(pieces[j], t);
    if (rk != pieces[j].size()) cert.independent = false;
    if (rk != m.dims[j]) cert.spans = false;
  }
  return cert;
}

bool intertwines(const TruncatedModule& m, const TruncatedModule& n, const Matrix& t) {
  if (m.dims != n.dims || m.action.size() != n.action.size()) return false;
  for (size_t j = 0; j < m.action.size(); ++j)
    for (size_t i = 0; i < m.action[j].size(); ++i)
      if (m.action[j][i] * t != t * n.action[j][i]) return false;
  return true;
}

}  // namespace tb
