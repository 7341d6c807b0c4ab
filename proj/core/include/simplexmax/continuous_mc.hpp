#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "simplexmax/geometry.hpp"

namespace simplexmax {

using RealFn = std::function<double(const Eigen::VectorXd&)>;

/// Haar-distributed rotations on SO(d): orthonormalize a matrix of i.i.d.
/// standard normals with positive R-diagonal, then flip the last column if
/// det = -1. Sample `index` is derived from the seed alone, so estimates
/// are identical for every thread count.
class RotationSampler {
public:
    RotationSampler(int dim, std::uint64_t seed);
    int dim() const { return dim_; }
    Eigen::MatrixXd sample(std::uint64_t index) const;

private:
    int dim_;
    std::uint64_t seed_;
};

struct SampledAverage {
    double estimate = 0;
    double stderr_est = 0; // sample stdev / sqrt(n)
    std::size_t samples = 0;
};

/// Monte-Carlo estimate of the rotation average of prod f_j(x + lambda U v_j).
SampledAverage mc_multilinear_average(std::span<const RealFn> fs, const Simplex& simplex,
                                      double lambda, const Eigen::VectorXd& x, std::size_t n,
                                      std::uint64_t seed);

/// Max over the lambda grid of |estimate|, with common random rotations
/// across the grid (so the max dominates every single-lambda estimate).
double mc_maximal(std::span<const RealFn> fs, const Simplex& simplex,
                  std::span<const double> lambda_grid, const Eigen::VectorXd& x, std::size_t n,
                  std::uint64_t seed);

/// Cauchy-Schwarz on the empirical measure, same sample set on both sides:
/// mean(ab)^2 - mean(a^2) mean(b^2). Never positive beyond roundoff.
double mc_cs_check(const RealFn& f1, const RealFn& f2, const Simplex& simplex, double lambda,
                   const Eigen::VectorXd& x, std::size_t n, std::uint64_t seed);

struct PairWeightResult {
    double value = 0;      // vol(y1, y1-y2, y1-y2')^{d-4} * vol(y2, y2')^{-d+3}
    double vol_ratio = 0;  // vol(y1, y1-y2, y1-y2') / vol(y2, y2')
    double distance = 0;   // dist(y1, span{y2, y2'})
    Eigen::VectorXd witness;
};

/// Normalization-free two-point weight of the triple sphere intersection.
/// T is the triangle's inner product matrix ([t11 t12; t12 t22]); a witness
/// y1 on the intersection is constructed (seeded) when not supplied.
PairWeightResult pair_weight(const Eigen::VectorXd& y2, const Eigen::VectorXd& y2p,
                             const Eigen::Matrix2d& t, int d,
                             const Eigen::VectorXd* witness = nullptr,
                             std::uint64_t seed = 1);

struct WithsScanResult {
    std::vector<std::pair<std::size_t, double>> running_means; // (n, mean)
    double final_mean = 0;
    double final_stderr = 0;
    double max_sample_fraction = 0; // largest single-sample share of the sum
    bool heavy_tail = false;        // d < m + s, or one sample dominates
    bool stabilized = false;        // last two checkpoints within 5 stderr
};

/// Empirical mean of vol(z_1..z_m)^{-s} over i.i.d. points uniform on the
/// sphere of radius sqrt(radius_sq). Finiteness shows up as stabilization
/// of the running means; the divergent regime d < m + s is flagged.
WithsScanResult lemma_withs_integrand_scan(int m, double s, int d, std::size_t n,
                                           std::uint64_t seed, double radius_sq = 1.0);

/// Uniform point on the sphere |y| = radius (deterministically derived
/// from seed and index).
Eigen::VectorXd sample_sphere_point(int dim, double radius, std::uint64_t seed,
                                    std::uint64_t index);

/// Uniform point on {y : |y|^2 = norm_sq, y . basis_i = dots_i}: the
/// iterated-sphere step realizing the factorized simplex measure.
/// Throws DegenerateConfigError when the section is empty or pointlike.
Eigen::VectorXd constrained_sphere_sample(double norm_sq,
                                          const std::vector<Eigen::VectorXd>& basis,
                                          std::span<const double> dots, std::uint64_t seed,
                                          std::uint64_t index);

/// Joint sample (y_1..y_k) of the isometric-copy configuration via the
/// iterated-sphere factorization; distributionally equal to (U v_1..U v_k)
/// for Haar U. Exposed for the cross-route agreement tests.
std::vector<Eigen::VectorXd> sample_configuration(const Simplex& simplex, std::uint64_t seed,
                                                  std::uint64_t index);

} // namespace simplexmax
