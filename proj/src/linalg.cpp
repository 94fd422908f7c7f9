#include "twistbench/linalg.hpp"

#include "twistbench/errors.hpp"

namespace tb {

Matrix::Matrix(size_t rows, size_t cols, TowerPtr tower)
    : r_(rows), c_(cols), tower_(std::move(tower)), a_(rows * cols, Scalar(tower_, 0)) {}

Matrix Matrix::identity(size_t n, TowerPtr tower) {
  Matrix m(n, n, tower);
  for (size_t i = 0; i < n; ++i) m(i, i) = Scalar(tower, 1);
  return m;
}

Matrix Matrix::from_rows(const std::vector<Vec>& rows, TowerPtr tower) {
  size_t c = rows.empty() ? 0 : rows[0].size();
  for (auto& r : rows)
    for (auto& x : r) tower = join_towers(tower, x.tower());
  Matrix m(rows.size(), c, tower);
  for (size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != c) fail_internal("shape", "ragged matrix rows");
    for (size_t j = 0; j < c; ++j) m(i, j) = rows[i][j].in(tower);
  }
  return m;
}

Matrix Matrix::diag(const Vec& d, TowerPtr tower) {
  for (auto& x : d) tower = join_towers(tower, x.tower());
  Matrix m(d.size(), d.size(), tower);
  for (size_t i = 0; i < d.size(); ++i) m(i, i) = d[i].in(tower);
  return m;
}

Vec Matrix::row(size_t i) const { return Vec(a_.begin() + i * c_, a_.begin() + (i + 1) * c_); }

Vec Matrix::col(size_t j) const {
  Vec v;
  for (size_t i = 0; i < r_; ++i) v.push_back((*this)(i, j));
  return v;
}

Matrix Matrix::operator*(const Matrix& o) const {
  if (c_ != o.r_) fail_internal("shape", "matrix product dimension mismatch");
  Matrix m(r_, o.c_, tower_);
  for (size_t i = 0; i < r_; ++i)
    for (size_t k = 0; k < c_; ++k) {
      const Scalar& x = (*this)(i, k);
      if (x.is_zero()) continue;
      for (size_t j = 0; j < o.c_; ++j)
        if (!o(k, j).is_zero()) m(i, j) += x * o(k, j);
    }
  return m;
}

Matrix Matrix::operator+(const Matrix& o) const {
  if (r_ != o.r_ || c_ != o.c_) fail_internal("shape", "matrix sum dimension mismatch");
  Matrix m = *this;
  for (size_t i = 0; i < a_.size(); ++i) m.a_[i] += o.a_[i];
  return m;
}

Matrix Matrix::operator-(const Matrix& o) const {
  if (r_ != o.r_ || c_ != o.c_) fail_internal("shape", "matrix difference dimension mismatch");
  Matrix m = *this;
  for (size_t i = 0; i < a_.size(); ++i) m.a_[i] -= o.a_[i];
  return m;
}

Matrix Matrix::scaled(const Scalar& s) const {
  Matrix m = *this;
  for (auto& x : m.a_) x *= s;
  return m;
}

Vec Matrix::apply(const Vec& v) const {
  if (v.size() != c_) fail_internal("shape", "matrix-vector dimension mismatch");
  Vec out(r_, Scalar(tower_, 0));
  for (size_t i = 0; i < r_; ++i)
    for (size_t j = 0; j < c_; ++j)
      if (!(*this)(i, j).is_zero() && !v[j].is_zero()) out[i] += (*this)(i, j) * v[j];
  return out;
}

Matrix Matrix::transpose() const {
  Matrix m(c_, r_, tower_);
  for (size_t i = 0; i < r_; ++i)
    for (size_t j = 0; j < c_; ++j) m(j, i) = (*this)(i, j);
  return m;
}

bool Matrix::operator==(const Matrix& o) const {
  if (r_ != o.r_ || c_ != o.c_) return false;
  for (size_t i = 0; i < a_.size(); ++i)
    if (a_[i] != o.a_[i]) return false;
  return true;
}

bool Matrix::is_zero() const {
  for (auto& x : a_)
    if (!x.is_zero()) return false;
  return true;
}

std::vector<size_t> Matrix::rref() {
  std::vector<size_t> pivots;
  size_t r = 0;
  for (size_t c = 0; c < c_ && r < r_; ++c) {
    size_t p = r;
    while (p < r_ && (*this)(p, c).is_zero()) ++p;
    if (p == r_) continue;
    if (p != r)
      for (size_t j = 0; j < c_; ++j) std::swap((*this)(p, j), (*this)(r, j));
    Scalar inv = (*this)(r, c).inverse();
    for (size_t j = c; j < c_; ++j) (*this)(r, j) *= inv;
    for (size_t i = 0; i < r_; ++i) {
      if (i == r || (*this)(i, c).is_zero()) continue;
      Scalar f = (*this)(i, c);
      for (size_t j = c; j < c_; ++j)
        if (!(*this)(r, j).is_zero()) (*this)(i, j) -= f * (*this)(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

size_t Matrix::rank() const {
  Matrix m = *this;
  return m.rref().size();
}

std::vector<Vec> Matrix::kernel() const {
  Matrix m = *this;
  auto piv = m.rref();
  std::vector<char> is_piv(c_, 0);
  for (auto p : piv) is_piv[p] = 1;
  std::vector<Vec> basis;
  for (size_t f = 0; f < c_; ++f) {
    if (is_piv[f]) continue;
    Vec v(c_, Scalar(tower_, 0));
    v[f] = Scalar(tower_, 1);
    for (size_t k = 0; k < piv.size(); ++k) v[piv[k]] = -m(k, f);
    basis.push_back(v);
  }
  return basis;
}

std::optional<Matrix> Matrix::inverse() const {
  if (r_ != c_) fail_internal("shape", "inverse of a non-square matrix");
  Matrix aug(r_, 2 * c_, tower_);
  for (size_t i = 0; i < r_; ++i) {
    for (size_t j = 0; j < c_; ++j) aug(i, j) = (*this)(i, j);
    aug(i, c_ + i) = Scalar(tower_, 1);
  }
  auto piv = aug.rref();
  if (piv.size() < r_ || piv[r_ - 1] >= c_) return std::nullopt;
  Matrix inv(r_, c_, tower_);
  for (size_t i = 0; i < r_; ++i)
    for (size_t j = 0; j < c_; ++j) inv(i, j) = aug(i, c_ + j);
  return inv;
}

Scalar Matrix::determinant() const {
  if (r_ != c_) fail_internal("shape", "determinant of a non-square matrix");
  Matrix m = *this;
  Scalar det(tower_, 1);
  for (size_t c = 0; c < c_; ++c) {
    size_t p = c;
    while (p < r_ && m(p, c).is_zero()) ++p;
    if (p == r_) return Scalar(tower_, 0);
    if (p != c) {
      for (size_t j = 0; j < c_; ++j) std::swap(m(p, j), m(c, j));
      det = -det;
    }
    det *= m(c, c);
    Scalar inv = m(c, c).inverse();
    for (size_t i = c + 1; i < r_; ++i) {
      if (m(i, c).is_zero()) continue;
      Scalar f = m(i, c) * inv;
      for (size_t j = c; j < c_; ++j) m(i, j) -= f * m(c, j);
    }
  }
  return det;
}

Matrix Matrix::pow(long e) const {
  if (e < 0) {
    auto inv = inverse();
    if (!inv) fail_pre("singular-matrix", "negative power of a singular matrix");
    return inv->pow(-e);
  }
  Matrix r = identity(r_, tower_), b = *this;
  while (e > 0) {
    if (e & 1) r = r * b;
    b = b * b;
    e >>= 1;
  }
  return r;
}

std::string Matrix::to_string() const {
  std::string s;
  for (size_t i = 0; i < r_; ++i) {
    s += i ? "; " : "";
    for (size_t j = 0; j < c_; ++j) s += (j ? ", " : "") + (*this)(i, j).to_string();
  }
  return "[" + s + "]";
}

size_t vector_rank(const std::vector<Vec>& vs, const TowerPtr& tower) {
  if (vs.empty() || vs[0].empty()) return 0;
  return Matrix::from_rows(vs, tower).rank();
}

bool in_span(const std::vector<Vec>& vs, const Vec& v, const TowerPtr& tower) {
  return solve_combination(vs, v, tower).has_value();
}

std::optional<Vec> solve_combination(const std::vector<Vec>& vs, const Vec& v, const TowerPtr& base) {
  // Columns are the vs; solve [vs | v] by elimination.
  TowerPtr tower = base;
  for (auto& x : v) tower = join_towers(tower, x.tower());
  for (auto& r : vs)
    for (auto& x : r) tower = join_towers(tower, x.tower());
  size_t n = v.size(), k = vs.size();
  Matrix aug(n, k + 1, tower);
  for (size_t j = 0; j < k; ++j)
    for (size_t i = 0; i < n; ++i) aug(i, j) = vs[j][i].in(tower);
  for (size_t i = 0; i < n; ++i) aug(i, k) = v[i].in(tower);
  auto piv = aug.rref();
  if (!piv.empty() && piv.back() == k) return std::nullopt;
  Vec c(k, Scalar(tower, 0));
  for (size_t r = 0; r < piv.size(); ++r) c[piv[r]] = aug(r, k);
  return c;
}

}  // namespace tb
