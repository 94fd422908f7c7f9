#pragma once

#include <string>
#include <vector>

#include "twistbench/comgeo.hpp"
#include "twistbench/linalg.hpp"
#include "twistbench/ncalg.hpp"

namespace tb {

// p_0, ..., p_D with every consecutive pair on Gamma_2 of the algebra.
struct PointSequence {
  std::vector<ProjPoint> points;
  int degree() const { return static_cast<int>(points.size()) - 1; }
};

// p_j = sigma^j(p_0) with sigma acting on column vectors. Raises
// gamma2-violation (payload: the step j) when (p_j, p_{j+1}) misses a
// multilinearised relation.
PointSequence point_sequence_from_linear_automorphism(const Presentation& algebra, const ProjPoint& p0,
                                                      const Matrix& sigma, int D);
// An explicit list of points, validated the same way.
PointSequence point_sequence_from_points(const Presentation& algebra, std::vector<ProjPoint> points);

// Graded right module truncated at degree D: action[j][i] is the d_j x d_{j+1}
// matrix of generator i on row vectors of degree j.
struct TruncatedModule {
  Presentation algebra;
  std::vector<size_t> dims;
  std::vector<std::vector<Matrix>> action;
  std::vector<ProjPoint> source_points;  // the point sequence a fat point was built from
  std::string description;

  int degree() const { return static_cast<int>(dims.size()) - 1; }
  TowerPtr tower() const;
};

// First (degree, relation) at which a relation does not act as zero, or
// nullopt when every relation annihilates every degree that it reaches.
std::optional<std::pair<int, size_t>> relation_violation(const TruncatedModule& m);

// M_p: one-dimensional pieces with m_j x_i = (p_j)_i m_{j+1}.
TruncatedModule point_module(const Presentation& algebra, const PointSequence& ps);

// images[i][r][c]: the (r, c) entry of the image of target generator i, a
// linear form over the source generators.
struct MatrixEmbedding {
  size_t size = 2;
  std::vector<std::vector<std::vector<Vec>>> images;
};
// v -> diag(x, x), diag(x, -x), antidiag(x, x) or [[0, -x], [x, 0]] for the
// grades e, g1, g2, g1*g2 of a (C_2)^2-grading.
MatrixEmbedding klein_embedding(const GGrading& grading, const TowerPtr& tower);

// The module M^k over the source, restricted to the target algebra through
// the embedding. Raises relation-not-annihilated when the result is not a
// module over the target.
TruncatedModule restrict_along(const TruncatedModule& m, const Presentation& target, const MatrixEmbedding& emb);

// M_p^2 restricted from M_2(source) to the twist.
TruncatedModule fat_point_build(const Presentation& source, const Presentation& twist, const PointSequence& ps,
                                const MatrixEmbedding& emb);

struct ModuleReport {
  std::vector<size_t> dims;
  bool generated_in_degree_0 = true;
  bool criticality_proxy = true;
  std::string witness;  // first failing test vector
};
// (a) degree 0 generates every piece up to D; (b) each test vector of each
// degree j <= D - 2 generates all pieces from degree j + 2 up to D. The test
// vectors are the coordinate vectors and e_0 + lambda e_k for a fixed list of
// lambda.
ModuleReport module_checks(const TruncatedModule& m);

struct PointSubmodule {
  Vec generator;
  std::vector<ProjPoint> points;               // q_j with u_j v_i = (q_j)_i u_{j+1}
  std::vector<std::vector<Vec>> annihilators;  // per degree, a basis of degree-1 forms killing u_j
  ProjPoint label() const { return points.front(); }
};
struct DecompositionCertificate {
  std::vector<PointSubmodule> parts;
  bool independent = true;  // the parts meet trivially in every degree
  bool spans = true;        // the parts fill every degree
  bool direct_sum() const { return independent && spans; }
};
// Each degree-0 vector must generate one-dimensional pieces up to degree D
// (otherwise not-a-point-submodule).
DecompositionCertificate decompose_check(const TruncatedModule& m, const std::vector<Vec>& vectors);

// Right multiplication by t is an isomorphism m -> n in every degree:
// A_i(m) t = t A_i(n).
bool intertwines(const TruncatedModule& m, const TruncatedModule& n, const Matrix& t);

}  // namespace tb
