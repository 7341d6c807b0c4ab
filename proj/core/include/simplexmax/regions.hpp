#pragma once

#include <span>
#include <string>
#include <vector>

#include "simplexmax/errors.hpp"
#include "simplexmax/wide.hpp"

namespace simplexmax {

/// Exact rational on 128-bit integers. Always reduced, den > 0.
struct Rat {
    Wide num = 0;
    Wide den = 1;

    Rat() = default;
    Rat(Wide n) : num(n) {}
    Rat(Wide n, Wide d);

    Rat operator+(const Rat& o) const;
    Rat operator-(const Rat& o) const;
    Rat operator*(const Rat& o) const;
    Rat operator/(const Rat& o) const;
    Rat operator-() const { return Rat(-num, den); }
    bool operator==(const Rat& o) const { return num == o.num && den == o.den; }
    bool operator<(const Rat& o) const;
    bool operator<=(const Rat& o) const { return *this < o || *this == o; }

    double value() const { return double(num) / double(den); }
    std::string str() const;
    static Rat parse(const std::string& s); // "p/q" or "p"
};

enum class Membership { Interior, Boundary, Exterior };

std::string membership_name(Membership m);

/// C_k classification by the direct inequalities: total sum < 1 and every
/// size-j subset sum < 1 - 2^{-j} (j <= k-1), via sorted prefix sums.
Membership in_Ck(std::span<const double> x, double eps = 1e-12);

/// C_{k,q} with q = m/(m-1): total sum < q^{-1}+...+q^{-(k-1)}+q^{-(k-1)},
/// size-j subset sums < q^{-1}+...+q^{-j}.
Membership in_Ckq(std::span<const double> x, int m, double eps = 1e-12);

struct LinearInequality {
    std::vector<Rat> normal; // normal . x <= offset
    Rat offset;
};

/// Convex polytope carrying a spanning vertex set (not necessarily minimal:
/// generator vertices of hull constructions are kept so the exported lists
/// match the defining data) and its exact facet inequalities.
class Polytope {
public:
    int dim() const { return dim_; }
    const std::vector<std::vector<Rat>>& vertices() const { return vertices_; }
    const std::vector<LinearInequality>& facets() const { return facets_; }

    static Polytope from_inequalities(int dim, std::vector<LinearInequality> ineqs);
    static Polytope from_points(int dim, std::vector<std::vector<Rat>> points);

    Membership classify(std::span<const double> x, double eps = 1e-9) const;
    bool contains_exact(std::span<const Rat> x) const; // closed region
    bool has_vertex_exact(std::span<const Rat> v) const;
    Polytope scaled(const Rat& s) const;

private:
    int dim_ = 0;
    std::vector<std::vector<Rat>> vertices_;
    std::vector<LinearInequality> facets_;
};

/// Inequality description of closure(C_{k,q}).
std::vector<LinearInequality> ckq_inequalities(int k, int m);

/// closure(C_{k,q}) with enumerated vertices (cached per (k, m)).
const Polytope& ckq_polytope(int k, int m);

/// The inductive hull region: k = 2 hulls C_{2,q} with the standard
/// triangle; k >= 3 hulls the all-projections polytope with C_{k,q}.
/// Exact rational construction, k <= 4.
const Polytope& tilde_region_polytope(int k, int m);

/// Membership in tilde C_{k,q}: facet margins for k <= 4, H-form
/// feasibility LP for k = 5. k >= 6 rejected.
Membership in_tilde(std::span<const double> x, int k, int m, double eps = 1e-9);

/// Second membership route, feasibility LP over the vertex form
/// (x in conv(V)); used by the region cross-check campaigns.
bool lp_membership(const Polytope& p, std::span<const double> x, double eps = 1e-9);

enum class TheoremId { T0, T1i, T1ii, T2i, T2ii, T3, C3, C3p, T3p };

TheoremId theorem_id_parse(const std::string& name);
std::string theorem_id_name(TheoremId id);

struct PredicateResult {
    bool claimed = false;
    std::string violation; // first failing hypothesis when not claimed
};

/// Evaluates the stated hypotheses exactly (dimension thresholds, exponent
/// identities, scaled-region membership). p entries may be infinity.
PredicateResult theorem_predicate(TheoremId id, int d, int k, int m,
                                  std::span<const double> p, double r);

struct RegionSpec {
    enum class Kind { Ck, Ckq, Tilde, Cube };
    Kind kind = Kind::Ck;
    int k = 2;
    int m = 2;          // q = m/(m-1); ignored for Ck
    Rat scale{1, 1};    // e.g. (d-2)/d

    static Kind kind_parse(const std::string& name);
};

Polytope region_polytope(const RegionSpec& spec);
std::string export_region_csv(const RegionSpec& spec);
std::string export_region_json(const RegionSpec& spec);

} // namespace simplexmax
