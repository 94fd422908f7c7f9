#pragma once

#include <optional>
#include <string>
#include <vector>

#include "twistbench/scalars.hpp"

namespace tb {

using Vec = std::vector<Scalar>;

// Dense exact matrix over a field tower.
class Matrix {
 public:
  Matrix() = default;
  Matrix(size_t rows, size_t cols, TowerPtr tower = FieldTower::rationals());
  static Matrix identity(size_t n, TowerPtr tower = FieldTower::rationals());
  static Matrix from_rows(const std::vector<Vec>& rows, TowerPtr tower = FieldTower::rationals());
  static Matrix diag(const Vec& d, TowerPtr tower = FieldTower::rationals());

  size_t rows() const { return r_; }
  size_t cols() const { return c_; }
  const TowerPtr& tower() const { return tower_; }
  Scalar& operator()(size_t i, size_t j) { return a_[i * c_ + j]; }
  const Scalar& operator()(size_t i, size_t j) const { return a_[i * c_ + j]; }
  Vec row(size_t i) const;
  Vec col(size_t j) const;

  Matrix operator*(const Matrix& o) const;
  Matrix operator+(const Matrix& o) const;
  Matrix operator-(const Matrix& o) const;
  Matrix scaled(const Scalar& s) const;
  Vec apply(const Vec& v) const;  // M v
  Matrix transpose() const;
  bool operator==(const Matrix& o) const;
  bool operator!=(const Matrix& o) const { return !(*this == o); }
  bool is_zero() const;

  // In-place reduced row echelon form; returns the pivot columns.
  std::vector<size_t> rref();
  size_t rank() const;
  // Basis of {v : M v = 0}.
  std::vector<Vec> kernel() const;
  std::optional<Matrix> inverse() const;
  Scalar determinant() const;
  Matrix pow(long e) const;

  std::string to_string() const;

 private:
  size_t r_ = 0, c_ = 0;
  TowerPtr tower_ = FieldTower::rationals();
  std::vector<Scalar> a_;
};

// Rank of a family of vectors of equal length.
size_t vector_rank(const std::vector<Vec>& vs, const TowerPtr& tower);
// Whether v lies in the span of vs.
bool in_span(const std::vector<Vec>& vs, const Vec& v, const TowerPtr& tower);
// Coefficients c with sum c_k vs[k] = v, if any.
std::optional<Vec> solve_combination(const std::vector<Vec>& vs, const Vec& v, const TowerPtr& tower);

}  // namespace tb
