#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "mfvdm/graph.hpp"
#include "mfvdm/kernels.hpp"

namespace mfvdm {

/// Element of SO(3); the third column is the viewing direction on S^2.
struct RotationSample {
    Eigen::Matrix3d matrix;
    Eigen::Vector3d view() const { return matrix.col(2); }
};

struct TorusSample {
    double u;            ///< tube angle, radius r
    double v;            ///< ring angle, radius R
    Eigen::Vector3d position;
    double frame_angle;  ///< per-node tangent frame orientation
};

struct TorusGeometry {
    double major_radius = 1.0;  ///< R
    double minor_radius = 0.2;  ///< r
};

enum class TorusSampling { AreaUniform, ParameterUniform };

std::vector<RotationSample> sample_so3_uniform(std::size_t n, std::uint64_t seed);

/// Closest in-plane rotation angle between two frames: atan2 over the upper-left
/// 2x2 block of Ri^T Rj, wrapped to [0, 2*pi). Throws NumericalError when the
/// block carries no rotation component (antipodal views).
double optimal_inplane_angle(const Eigen::Matrix3d& ri, const Eigen::Matrix3d& rj);

Eigen::Vector3d torus_point(const TorusGeometry& geom, double u, double v);

std::vector<TorusSample> sample_torus_uniform(std::size_t n, const TorusGeometry& geom, std::uint64_t seed,
                                              TorusSampling mode = TorusSampling::AreaUniform);

enum class Manifold { Sphere, Torus };

/// Ground-truth frames and base-manifold coordinates of a synthetic dataset.
class GroundTruth {
public:
    static GroundTruth sphere(std::vector<RotationSample> rotations);
    static GroundTruth torus(std::vector<TorusSample> samples, TorusGeometry geom);

    Manifold manifold() const { return manifold_; }
    std::size_t size() const;

    /// True alignment alpha_ij in [0, 2*pi).
    double alpha(std::size_t i, std::size_t j) const;
    /// Sphere: great-circle angle between views. Torus: wrapped flat metric
    /// sqrt(r^2 du^2 + R^2 dv^2).
    double geodesic(std::size_t i, std::size_t j) const;
    /// Upper bound of geodesic() over all pairs.
    double max_geodesic() const;

    const std::vector<RotationSample>& rotations() const { return rotations_; }
    const std::vector<TorusSample>& torus_samples() const { return torus_; }
    const TorusGeometry& torus_geometry() const { return geom_; }

private:
    Manifold manifold_ = Manifold::Sphere;
    std::vector<RotationSample> rotations_;
    std::vector<TorusSample> torus_;
    TorusGeometry geom_;
};

double geodesic_distance(const GroundTruth& truth, std::size_t i, std::size_t j);

/// Symmetrized kappa-NN graph under the geodesic distance: (i,j) is an edge when
/// either endpoint is among the other's kappa nearest (ties to lower index).
/// Unit weights; angles from the ground truth.
AlignmentGraph build_clean_knn_graph(const GroundTruth& truth, std::size_t kappa,
                                     Execution exec = Execution::Parallel);

struct RewireResult {
    AlignmentGraph graph;
    std::size_t kept = 0;      ///< original edges that survived
    std::size_t rewired = 0;   ///< edges replaced by a random link
    std::size_t skipped = 0;   ///< removed edges with no replacement candidate
    std::size_t repaired = 0;  ///< isolated nodes re-linked at random
};

/// Random rewiring noise model. Each undirected edge is kept with probability p;
/// otherwise it is removed and its lower-index endpoint is linked to a uniformly
/// chosen vertex it is not connected to, with a uniform random angle.
RewireResult rewire_graph(const AlignmentGraph& graph, double p, std::uint64_t seed);

}  // namespace mfvdm
