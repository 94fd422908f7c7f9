#pragma once

#include <map>
#include <string>
#include <vector>

#include "twistbench/ncalg.hpp"

namespace tb {

struct CatalogInfo {
  std::string name;
  std::vector<std::string> params;
  std::string description;
};

// A constructed family member. The presentation carries the default action,
// grading and cocycle when the family has them; distinguished elements (Omega,
// Theta, quadrics, annihilator generators) are kept by name.
struct CatalogEntry {
  std::string name;
  std::vector<std::string> signature;
  Presentation presentation;
  std::map<std::string, NcPoly> elements;
};

const std::vector<CatalogInfo>& catalog_list();

// Parameters are scalar literals. When tower is null the entry chooses its
// own tower (adjoining i and square roots of rational parameters as needed);
// otherwise the literals are read in the given tower, which must contain
// every scalar the construction needs.
CatalogEntry catalog_get(const std::string& name, const std::vector<std::string>& params,
                         const TowerPtr& tower = nullptr);

// The Sklyanin twist at rational (alpha, beta, gamma) over
// Q(i, sqrt(alpha), sqrt(beta), sqrt(gamma)) with its 20 listed point-scheme
// points: e_0..e_3 first, then 16 pairs (p, p^phi) built from the principal
// inverse square roots 1/sqrt(alpha), 1/sqrt(beta), 1/sqrt(gamma).
struct SklyaninTwistPoints {
  CatalogEntry entry;
  std::vector<std::pair<Vec, Vec>> points;
};
SklyaninTwistPoints sklyanin_twist_points(const std::vector<std::string>& params);

// T(V*)/(R^perp) for a quadratic presentation, with the pairing
// <xb_i xb_j, x_k x_l> = delta_ik delta_jl. Generator names gain a "b" suffix
// unless new_names is given; a G-grading moves to inverse degrees and the
// action to the inverse transpose.
Presentation koszul_dual(const Presentation& p, const std::vector<std::string>& new_names = {});

}  // namespace tb
