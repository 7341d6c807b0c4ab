#pragma once

#include <Eigen/Dense>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "simplexmax/errors.hpp"
#include "simplexmax/wide.hpp"

namespace simplexmax {

/// Symmetric k x k inner product matrix with integer entries.
/// Positive definite exactly when the source simplex is non-degenerate.
class GramMatrix {
public:
    GramMatrix() = default;
    explicit GramMatrix(int k) : k_(k), entries_(static_cast<std::size_t>(k) * k, 0) {
        if (k < 1) throw InvalidInputError("gram matrix order must be >= 1");
    }
    static GramMatrix identity(int k);

    // Parses "a b; b c" (rows separated by ';'). Used by the CLI.
    static GramMatrix parse(const std::string& text);

    int order() const { return k_; }
    Int operator()(int i, int j) const { return entries_[static_cast<std::size_t>(i) * k_ + j]; }
    void set(int i, int j, Int v) {
        entries_[static_cast<std::size_t>(i) * k_ + j] = v;
        entries_[static_cast<std::size_t>(j) * k_ + i] = v;
    }

    GramMatrix scaled(Int lambda_sq) const;

    Wide determinant() const;      // exact, fraction-free elimination
    bool positive_definite() const;
    bool positive_semidefinite() const;
    double frobenius() const;      // |T| = (sum t_ij^2)^{1/2}
    std::string to_string() const; // "a b; b c"

    bool operator==(const GramMatrix&) const = default;

private:
    int k_ = 0;
    std::vector<Int> entries_;
};

/// Lattice k-simplex {0, v_1, ..., v_k} in Z^d. v_0 = 0 is implicit.
class LatticeSimplex {
public:
    LatticeSimplex(int dim, std::vector<std::vector<Int>> vertices);

    int dim() const { return dim_; }
    int k() const { return int(vertices_.size()); }
    const std::vector<std::vector<Int>>& vertices() const { return vertices_; }

    GramMatrix gram() const; // t_ij = v_i . v_j, exact in 128-bit intermediates
    bool nondegenerate() const { return gram().determinant() > 0; }

    std::vector<Eigen::VectorXd> real_vertices() const;

    // Vertex file: first line "d k", then k rows of d integers.
    static LatticeSimplex read_text(const std::string& path);

private:
    int dim_ = 0;
    std::vector<std::vector<Int>> vertices_;
};

/// Simplex with real vertices, used by the continuous operators.
struct Simplex {
    int dim = 0;
    std::vector<Eigen::VectorXd> vertices; // v_1..v_k

    int k() const { return int(vertices.size()); }
    Eigen::MatrixXd gram() const;
    static Simplex from_lattice(const LatticeSimplex& s);
};

// Relative cutoff declaring an orthogonalized column dependent on its
// predecessors. Single fixed constant for the whole library.
inline constexpr double kDependenceCutoff = 1e-12;

/// Volume of the parallelepiped spanned by vs, via Householder
/// orthogonalization (|r_11 r_22 ... | of the QR factor). Dependent tuples
/// return exactly 0. Satisfies vol^2 = det(Gram) to ~1e-9 relative.
double parallelepiped_volume(const std::vector<Eigen::VectorXd>& vs);

struct DistanceResult {
    double distance = 0.0;
    bool degenerate_basis = false; // vol(basis) = 0 while y is off-span
};

/// dist(y, span(basis)) by orthogonal projection. Equals
/// vol(y, basis)/vol(basis) whenever vol(basis) > 0.
DistanceResult distance_to_span(const Eigen::VectorXd& y,
                                const std::vector<Eigen::VectorXd>& basis);

/// |vol(ys ++ zs) - vol(zs) * prod_i r_i| with
/// r_i = dist(y_i, span(zs, y_1..y_{i-1})).
double volume_chain_discrepancy(const std::vector<Eigen::VectorXd>& ys,
                                const std::vector<Eigen::VectorXd>& zs);

/// Density of the sphere-intersection measure at x relative to surface
/// measure: vol(2(x-x_1), ..., 2(x-x_m))^{-1}. Requires x on every sphere
/// |x - x_i|^2 = radii_sq[i] (within 1e-9) and x outside span(centers).
/// Equals 2^{-m} det(T_X)^{-1/2} with (T_X)_ij = (x-x_i).(x-x_j).
double gl_sphere_density(const Eigen::VectorXd& x,
                         const std::vector<Eigen::VectorXd>& centers,
                         const std::vector<double>& radii_sq);

// Exact Gram determinant of real vectors, as a double (for oracle checks).
double gram_determinant(const std::vector<Eigen::VectorXd>& vs);

} // namespace simplexmax
