#pragma once

#include <Eigen/Dense>
#include <vector>

#include "boundarykit/numeric_policy.hpp"
#include "boundarykit/point_cloud.hpp"
#include "boundarykit/tangent.hpp"

// Clipped Voronoi cell measurements in the projected tangent coordinates.
// Everything here works in R^d with d <= 6; the cell of a site p among sites
// {q} is the polytope
//     { O : 2 (q - p) . O <= |q|^2 - |p|^2  for all q != p }
// intersected with the axis box of half-width `clip` centered at p.

namespace boundarykit {

struct VoronoiProbe {
    double radius = 0.0;          // max distance from p over the clipped cell
    Eigen::VectorXd witness;      // a vertex attaining the radius (ties:
                                  // lexicographically smallest)
    Eigen::VectorXd direction;    // (witness - p) / radius; empty if radius 0
    bool bounded = true;          // false iff a radius-attaining vertex lies
                                  // on a box facet
};

// Exact probe by vertex enumeration: every feasible intersection of d
// constraint hyperplanes (site bisectors + 2d box facets) is a candidate.
// Sites that duplicate p (within policy.abs) are dropped, duplicate sites are
// merged.  An active-set loop keeps the enumeration near the cell: a site
// farther than twice the current radius bound cannot touch the cell, so the
// restricted enumeration is exact, not approximate.
VoronoiProbe cell_probe(const std::vector<Eigen::VectorXd>& sites, int p_index, double clip,
                        const NumericPolicy& policy = NumericPolicy::standard());

// Neighborhood of X_j pushed into its tangent coordinates: sites are the
// in-frame coefficients of X_k - X_j for k in B(X_j, R0), ascending k.
struct LocalProjection {
    std::vector<Eigen::VectorXd> sites;
    std::vector<int> cloud_indices;  // cloud_indices[s] = cloud index of sites[s]
    int origin_position = -1;        // position of j itself (the zero site)
};

LocalProjection project_local_cloud(const PointCloud& cloud, const TangentField& tangents,
                                    int j, double R0);

}  // namespace boundarykit
