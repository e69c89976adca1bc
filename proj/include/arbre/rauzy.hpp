#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "arbre/core_map.hpp"
#include "arbre/symbolic.hpp"

namespace arbre {

struct CloudPoint {
    double x = 0.0;
    double y = 0.0;
    std::string tag;
    std::size_t label = 0;  // prefix length of u for the point pi_*(u^-1)
};

using PointCloud = std::vector<CloudPoint>;

// Projection onto the contracting plane along the expanding eigenvector.
struct RauzyBasis {
    double expanding = 0.0;
    double contracting_modulus = 0.0;
    Eigen::Vector3d expanding_vector;
    Eigen::Matrix<double, 2, 3> coords;  // rows: plane coordinates of a vector
};

// Throws unless M is 3x3 with one real eigenvalue > 1 and two of modulus < 1.
RauzyBasis contracting_basis(const IntMatrix& m);
std::pair<double, double> project(const RauzyBasis& b, const std::vector<std::int64_t>& v);

struct Coloring {
    enum class Kind { cylinder, arc };
    Kind kind = Kind::cylinder;
    int value = 1;  // m for cylinders, n for arcs
    static Coloring parse(const std::string& s);  // "cylinder:7" or "arc:4"
};

// pi_*(u^-1) for every prefix u of omega with |u| <= depth.
PointCloud fractal_cloud(std::size_t depth, const Coloring& coloring);
// Points of the cloud whose branch point lies on the realized T_n, tagged by arc.
PointCloud zeta_cloud(int n, std::size_t depth);

// Largest projected norm over prefixes of length <= depth.
double orbit_sup_norm(std::size_t depth);
// Norms of the projections of sigma^k(1), k = 0..kmax.
std::vector<double> sigma_power_norms(int kmax);

// Pairs of points closer than eps carrying distinct labels.
std::vector<std::pair<std::size_t, std::size_t>> collisions(const PointCloud& cloud, double eps = 1e-9);

// Same points, and tags related by a bijection.
bool same_partition(const PointCloud& a, const PointCloud& b);

// Centroid-aligned symmetric RMS nearest-neighbour distance, relative to the diameter of a.
double congruence_discrepancy(const std::vector<std::pair<double, double>>& a,
                              const std::vector<std::pair<double, double>>& b);

std::string render_svg(const PointCloud& cloud);
std::string cloud_csv(const PointCloud& cloud);

}  // namespace arbre
