#include "simplexmax/regions.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <mutex>
#include <sstream>

#include <json.hpp>

namespace simplexmax {

namespace {

Wide wide_abs(Wide a) { return a < 0 ? -a : a; }

Wide wide_gcd(Wide a, Wide b) {
    a = wide_abs(a);
    b = wide_abs(b);
    while (b != 0) {
        Wide t = a % b;
        a = b;
        b = t;
    }
    return a;
}

} // namespace

Rat::Rat(Wide n, Wide d) {
    if (d == 0) throw InvalidInputError("rational with zero denominator");
    if (d < 0) {
        n = -n;
        d = -d;
    }
    const Wide g = wide_gcd(n, d);
    if (g > 1) {
        n /= g;
        d /= g;
    }
    num = n;
    den = d;
}

Rat Rat::operator+(const Rat& o) const { return Rat(num * o.den + o.num * den, den * o.den); }
Rat Rat::operator-(const Rat& o) const { return Rat(num * o.den - o.num * den, den * o.den); }
Rat Rat::operator*(const Rat& o) const { return Rat(num * o.num, den * o.den); }
Rat Rat::operator/(const Rat& o) const {
    if (o.num == 0) throw InvalidInputError("rational division by zero");
    return Rat(num * o.den, den * o.num);
}
bool Rat::operator<(const Rat& o) const { return num * o.den < o.num * den; }

std::string Rat::str() const {
    if (den == 1) return wide_to_string(num);
    return wide_to_string(num) + "/" + wide_to_string(den);
}

Rat Rat::parse(const std::string& s) {
    const auto slash = s.find('/');
    if (slash == std::string::npos) return Rat(wide_from_string(s));
    return Rat(wide_from_string(s.substr(0, slash)), wide_from_string(s.substr(slash + 1)));
}

std::string membership_name(Membership m) {
    switch (m) {
        case Membership::Interior: return "interior";
        case Membership::Boundary: return "boundary";
        case Membership::Exterior: return "exterior";
    }
    return "?";
}

namespace {

// Shared skeleton: bounds[j-1] limits the sum of the j largest coordinates
// (j = 1..k-1), bounds[k-1] limits the total.
Membership classify_prefix_sums(std::span<const double> x, const std::vector<double>& bounds,
                                double eps) {
    const int k = int(x.size());
    if (k < 2) throw InvalidInputError("region membership needs k >= 2");
    for (double xi : x)
        if (xi < -eps || xi > 1.0 + eps)
            throw InvalidInputError("region membership: coordinate outside [0,1]");
    std::vector<double> sorted(x.begin(), x.end());
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    bool boundary = false;
    double prefix = 0;
    for (int j = 1; j <= k; ++j) {
        prefix += sorted[static_cast<std::size_t>(j) - 1];
        const double margin = bounds[static_cast<std::size_t>(j) - 1] - prefix;
        if (margin < -eps) return Membership::Exterior;
        if (margin <= eps) boundary = true;
    }
    return boundary ? Membership::Boundary : Membership::Interior;
}

} // namespace

Membership in_Ck(std::span<const double> x, double eps) {
    const int k = int(x.size());
    if (k < 2) throw InvalidInputError("in_Ck needs k >= 2");
    std::vector<double> bounds(static_cast<std::size_t>(k));
    for (int j = 1; j < k; ++j) bounds[static_cast<std::size_t>(j) - 1] = 1.0 - std::pow(2.0, -j);
    bounds[static_cast<std::size_t>(k) - 1] = 1.0;
    return classify_prefix_sums(x, bounds, eps);
}

Membership in_Ckq(std::span<const double> x, int m, double eps) {
    const int k = int(x.size());
    if (k < 2) throw InvalidInputError("in_Ckq needs k >= 2");
    if (m < 2) throw InvalidInputError("in_Ckq: q must be m/(m-1) with integer m >= 2");
    const double qinv = double(m - 1) / double(m);
    std::vector<double> bounds(static_cast<std::size_t>(k));
    double geo = 0, power = 1;
    for (int j = 1; j < k; ++j) {
        power *= qinv;
        geo += power;
        bounds[static_cast<std::size_t>(j) - 1] = geo;
    }
    bounds[static_cast<std::size_t>(k) - 1] = geo + power; // last term doubled
    return classify_prefix_sums(x, bounds, eps);
}

// ---------------------------------------------------------------------------
// Exact polytope machinery
// ---------------------------------------------------------------------------

namespace {

// Gaussian elimination over the rationals; returns false when singular.
bool rat_solve(std::vector<std::vector<Rat>> a, std::vector<Rat> b, std::vector<Rat>& out) {
    const int n = int(b.size());
    for (int col = 0; col < n; ++col) {
        int pivot = -1;
        for (int r = col; r < n; ++r)
            if (a[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)].num != 0) {
                pivot = r;
                break;
            }
        if (pivot < 0) return false;
        std::swap(a[static_cast<std::size_t>(col)], a[static_cast<std::size_t>(pivot)]);
        std::swap(b[static_cast<std::size_t>(col)], b[static_cast<std::size_t>(pivot)]);
        const Rat inv = Rat(1) / a[static_cast<std::size_t>(col)][static_cast<std::size_t>(col)];
        for (int c = col; c < n; ++c) a[static_cast<std::size_t>(col)][static_cast<std::size_t>(c)] = a[static_cast<std::size_t>(col)][static_cast<std::size_t>(c)] * inv;
        b[static_cast<std::size_t>(col)] = b[static_cast<std::size_t>(col)] * inv;
        for (int r = 0; r < n; ++r) {
            if (r == col || a[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)].num == 0) continue;
            const Rat f = a[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)];
            for (int c = col; c < n; ++c)
                a[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = a[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] - f * a[static_cast<std::size_t>(col)][static_cast<std::size_t>(c)];
            b[static_cast<std::size_t>(r)] = b[static_cast<std::size_t>(r)] - f * b[static_cast<std::size_t>(col)];
        }
    }
    out = std::move(b);
    return true;
}

Rat rat_det(const std::vector<std::vector<Rat>>& a) {
    const int n = int(a.size());
    if (n == 0) return Rat(1);
    if (n == 1) return a[0][0];
    if (n == 2) return a[0][0] * a[1][1] - a[0][1] * a[1][0];
    Rat det(0);
    for (int j = 0; j < n; ++j) {
        if (a[0][static_cast<std::size_t>(j)].num == 0) continue;
        std::vector<std::vector<Rat>> minor;
        minor.reserve(static_cast<std::size_t>(n) - 1);
        for (int r = 1; r < n; ++r) {
            std::vector<Rat> row;
            row.reserve(static_cast<std::size_t>(n) - 1);
            for (int c = 0; c < n; ++c)
                if (c != j) row.push_back(a[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)]);
            minor.push_back(std::move(row));
        }
        const Rat term = a[0][static_cast<std::size_t>(j)] * rat_det(minor);
        det = (j % 2 == 0) ? det + term : det - term;
    }
    return det;
}

// Normal of the hyperplane through `pts` (dim points), zero when degenerate.
std::vector<Rat> hyperplane_normal(const std::vector<const std::vector<Rat>*>& pts, int dim) {
    std::vector<std::vector<Rat>> diff(static_cast<std::size_t>(dim) - 1, std::vector<Rat>(static_cast<std::size_t>(dim)));
    for (int r = 0; r + 1 < dim; ++r)
        for (int c = 0; c < dim; ++c)
            diff[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = (*pts[static_cast<std::size_t>(r) + 1])[static_cast<std::size_t>(c)] - (*pts[0])[static_cast<std::size_t>(c)];
    std::vector<Rat> normal(static_cast<std::size_t>(dim));
    for (int j = 0; j < dim; ++j) {
        std::vector<std::vector<Rat>> minor(static_cast<std::size_t>(dim) - 1, std::vector<Rat>(static_cast<std::size_t>(dim) - 1));
        for (int r = 0; r + 1 < dim; ++r) {
            int cc = 0;
            for (int c = 0; c < dim; ++c) {
                if (c == j) continue;
                minor[static_cast<std::size_t>(r)][static_cast<std::size_t>(cc)] = diff[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
                ++cc;
            }
        }
        const Rat d = rat_det(minor);
        normal[static_cast<std::size_t>(j)] = (j % 2 == 0) ? d : -d;
    }
    return normal;
}

// Scale (normal, offset) to a primitive integer vector; orientation kept.
void canonicalize_facet(LinearInequality& f) {
    Wide l = 1;
    for (const Rat& r : f.normal) l = l / wide_gcd(l, r.den) * r.den;
    l = l / wide_gcd(l, f.offset.den) * f.offset.den;
    std::vector<Wide> ints;
    ints.reserve(f.normal.size() + 1);
    for (const Rat& r : f.normal) ints.push_back(r.num * (l / r.den));
    ints.push_back(f.offset.num * (l / f.offset.den));
    Wide g = 0;
    for (Wide v : ints) g = wide_gcd(g, v);
    if (g > 1)
        for (Wide& v : ints) v /= g;
    for (std::size_t i = 0; i < f.normal.size(); ++i) f.normal[i] = Rat(ints[i]);
    f.offset = Rat(ints.back());
}

std::string facet_key(const LinearInequality& f) {
    std::string k;
    for (const Rat& r : f.normal) k += r.str() + ",";
    k += "|" + f.offset.str();
    return k;
}

bool rat_vec_less(const std::vector<Rat>& a, const std::vector<Rat>& b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] < b[i]) return true;
        if (b[i] < a[i]) return false;
    }
    return false;
}

std::vector<std::vector<Rat>> dedupe_sorted(std::vector<std::vector<Rat>> pts) {
    std::sort(pts.begin(), pts.end(), rat_vec_less);
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

// Iterates over all size-`r` index subsets of [0, n).
template <typename Fn>
void for_each_subset(int n, int r, const Fn& fn) {
    if (r > n) return;
    std::vector<int> idx(static_cast<std::size_t>(r));
    for (int i = 0; i < r; ++i) idx[static_cast<std::size_t>(i)] = i;
    for (;;) {
        fn(idx);
        int i = r - 1;
        while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - r + i) --i;
        if (i < 0) return;
        ++idx[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < r; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j) - 1] + 1;
    }
}

} // namespace

Polytope Polytope::from_inequalities(int dim, std::vector<LinearInequality> ineqs) {
    Polytope p;
    p.dim_ = dim;
    p.facets_ = std::move(ineqs);

    // Double shadow for cheap infeasibility rejection.
    std::vector<std::vector<double>> dnormals;
    std::vector<double> doffsets;
    for (const auto& f : p.facets_) {
        std::vector<double> row;
        row.reserve(static_cast<std::size_t>(dim));
        for (const Rat& r : f.normal) row.push_back(r.value());
        dnormals.push_back(std::move(row));
        doffsets.push_back(f.offset.value());
    }

    std::vector<std::vector<Rat>> verts;
    const int n = int(p.facets_.size());
    for_each_subset(n, dim, [&](const std::vector<int>& idx) {
        std::vector<std::vector<Rat>> a(static_cast<std::size_t>(dim), std::vector<Rat>(static_cast<std::size_t>(dim)));
        std::vector<Rat> b(static_cast<std::size_t>(dim));
        for (int r = 0; r < dim; ++r) {
            a[static_cast<std::size_t>(r)] = p.facets_[static_cast<std::size_t>(idx[static_cast<std::size_t>(r)])].normal;
            b[static_cast<std::size_t>(r)] = p.facets_[static_cast<std::size_t>(idx[static_cast<std::size_t>(r)])].offset;
        }
        std::vector<Rat> x;
        if (!rat_solve(std::move(a), std::move(b), x)) return;

        std::vector<double> xd(static_cast<std::size_t>(dim));
        for (int c = 0; c < dim; ++c) xd[static_cast<std::size_t>(c)] = x[static_cast<std::size_t>(c)].value();
        for (int f = 0; f < n; ++f) {
            double dot = 0;
            for (int c = 0; c < dim; ++c) dot += dnormals[static_cast<std::size_t>(f)][static_cast<std::size_t>(c)] * xd[static_cast<std::size_t>(c)];
            if (dot > doffsets[static_cast<std::size_t>(f)] + 1e-7) return; // clearly infeasible
        }
        for (int f = 0; f < n; ++f) { // exact confirmation
            Rat dot(0);
            for (int c = 0; c < dim; ++c)
                dot = dot + p.facets_[static_cast<std::size_t>(f)].normal[static_cast<std::size_t>(c)] * x[static_cast<std::size_t>(c)];
            if (p.facets_[static_cast<std::size_t>(f)].offset < dot) return;
        }
        verts.push_back(std::move(x));
    });

    p.vertices_ = dedupe_sorted(std::move(verts));
    return p;
}

Polytope Polytope::from_points(int dim, std::vector<std::vector<Rat>> points) {
    Polytope p;
    p.dim_ = dim;
    p.vertices_ = dedupe_sorted(std::move(points));
    const auto& pts = p.vertices_;
    const int n = int(pts.size());
    if (n < dim + 1) throw InvalidInputError("hull construction needs a full-dimensional point set");

    std::vector<std::vector<double>> dpts(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(dim)));
    for (int i = 0; i < n; ++i)
        for (int c = 0; c < dim; ++c) dpts[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)] = pts[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)].value();

    std::map<std::string, LinearInequality> facets;
    for_each_subset(n, dim, [&](const std::vector<int>& idx) {
        std::vector<const std::vector<Rat>*> sel;
        sel.reserve(static_cast<std::size_t>(dim));
        for (int i : idx) sel.push_back(&pts[static_cast<std::size_t>(i)]);

        // Double prefilter: a supporting hyperplane has every point on one
        // side; float margins below -1e-7 cannot occur for a true facet.
        std::vector<double> dn(static_cast<std::size_t>(dim));
        {
            std::vector<std::vector<double>> diff(static_cast<std::size_t>(dim) - 1, std::vector<double>(static_cast<std::size_t>(dim)));
            for (int r = 0; r + 1 < dim; ++r)
                for (int c = 0; c < dim; ++c)
                    diff[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] =
                        dpts[static_cast<std::size_t>(idx[static_cast<std::size_t>(r) + 1])][static_cast<std::size_t>(c)] - dpts[static_cast<std::size_t>(idx[0])][static_cast<std::size_t>(c)];
            // cofactor expansion on doubles
            for (int j = 0; j < dim; ++j) {
                std::vector<std::vector<double>> minor(static_cast<std::size_t>(dim) - 1,
                                                       std::vector<double>(static_cast<std::size_t>(dim) - 1));
                for (int r = 0; r + 1 < dim; ++r) {
                    int cc = 0;
                    for (int c = 0; c < dim; ++c) {
                        if (c == j) continue;
                        minor[static_cast<std::size_t>(r)][static_cast<std::size_t>(cc)] = diff[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
                        ++cc;
                    }
                }
                double det = 0;
                if (dim - 1 == 1) det = minor[0][0];
                else if (dim - 1 == 2) det = minor[0][0] * minor[1][1] - minor[0][1] * minor[1][0];
                else if (dim - 1 == 3)
                    det = minor[0][0] * (minor[1][1] * minor[2][2] - minor[1][2] * minor[2][1]) -
                          minor[0][1] * (minor[1][0] * minor[2][2] - minor[1][2] * minor[2][0]) +
                          minor[0][2] * (minor[1][0] * minor[2][1] - minor[1][1] * minor[2][0]);
                else {
                    det = 1; // dim > 4: no shortcut, fall through to exact path
                    break;
                }
                dn[static_cast<std::size_t>(j)] = (j % 2 == 0) ? det : -det;
            }
            double scale = 0;
            for (double v : dn) scale = std::max(scale, std::abs(v));
            if (dim <= 4) {
                if (scale < 1e-12) return; // degenerate subset
                double off = 0;
                for (int c = 0; c < dim; ++c) off += dn[static_cast<std::size_t>(c)] * dpts[static_cast<std::size_t>(idx[0])][static_cast<std::size_t>(c)];
                bool below = true, above = true;
                for (int i = 0; i < n && (below || above); ++i) {
                    double dot = 0;
                    for (int c = 0; c < dim; ++c) dot += dn[static_cast<std::size_t>(c)] * dpts[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)];
                    if (dot > off + 1e-7 * scale) below = false;
                    if (dot < off - 1e-7 * scale) above = false;
                }
                if (!below && !above) return;
            }
        }

        std::vector<Rat> normal = hyperplane_normal(sel, dim);
        bool zero = true;
        for (const Rat& r : normal)
            if (r.num != 0) zero = false;
        if (zero) return;
        Rat offset(0);
        for (int c = 0; c < dim; ++c) offset = offset + normal[static_cast<std::size_t>(c)] * (*sel[0])[static_cast<std::size_t>(c)];

        bool below = true, above = true;
        for (int i = 0; i < n && (below || above); ++i) {
            Rat dot(0);
            for (int c = 0; c < dim; ++c) dot = dot + normal[static_cast<std::size_t>(c)] * pts[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)];
            if (offset < dot) below = false;
            if (dot < offset) above = false;
        }
        if (!below && !above) return;
        LinearInequality f;
        if (below) {
            f.normal = normal;
            f.offset = offset;
        } else {
            for (Rat& r : normal) r = -r;
            f.normal = normal;
            f.offset = -offset;
        }
        canonicalize_facet(f);
        facets.emplace(facet_key(f), std::move(f));
    });

    for (auto& [key, f] : facets) p.facets_.push_back(std::move(f));
    return p;
}

Membership Polytope::classify(std::span<const double> x, double eps) const {
    if (int(x.size()) != dim_) throw InvalidInputError("classify: dimension mismatch");
    bool boundary = false;
    for (const auto& f : facets_) {
        double dot = 0, scale = std::abs(f.offset.value());
        for (int c = 0; c < dim_; ++c) {
            dot += f.normal[static_cast<std::size_t>(c)].value() * x[static_cast<std::size_t>(c)];
            scale = std::max(scale, std::abs(f.normal[static_cast<std::size_t>(c)].value()));
        }
        const double margin = f.offset.value() - dot;
        const double band = eps * std::max(1.0, scale);
        if (margin < -band) return Membership::Exterior;
        if (margin <= band) boundary = true;
    }
    return boundary ? Membership::Boundary : Membership::Interior;
}

bool Polytope::contains_exact(std::span<const Rat> x) const {
    for (const auto& f : facets_) {
        Rat dot(0);
        for (int c = 0; c < dim_; ++c) dot = dot + f.normal[static_cast<std::size_t>(c)] * x[static_cast<std::size_t>(c)];
        if (f.offset < dot) return false;
    }
    return true;
}

bool Polytope::has_vertex_exact(std::span<const Rat> v) const {
    for (const auto& vert : vertices_) {
        bool eq = true;
        for (int c = 0; c < dim_ && eq; ++c) eq = vert[static_cast<std::size_t>(c)] == v[static_cast<std::size_t>(c)];
        if (eq) return true;
    }
    return false;
}

Polytope Polytope::scaled(const Rat& s) const {
    if (!(Rat(0) < s)) throw InvalidInputError("polytope scale must be positive");
    Polytope p = *this;
    for (auto& v : p.vertices_)
        for (auto& c : v) c = c * s;
    for (auto& f : p.facets_) f.offset = f.offset * s;
    return p;
}

// ---------------------------------------------------------------------------
// The regions
// ---------------------------------------------------------------------------

std::vector<LinearInequality> ckq_inequalities(int k, int m) {
    if (k < 2) throw InvalidInputError("C_{k,q} needs k >= 2");
    if (m < 2) throw InvalidInputError("C_{k,q} needs integer m >= 2");
    const Rat qinv(m - 1, m);
    std::vector<Rat> bound(static_cast<std::size_t>(k)); // bound[j-1]: sum of any j coords
    Rat geo(0), power(1);
    for (int j = 1; j < k; ++j) {
        power = power * qinv;
        geo = geo + power;
        bound[static_cast<std::size_t>(j) - 1] = geo;
    }
    bound[static_cast<std::size_t>(k) - 1] = geo + power;

    std::vector<LinearInequality> ineqs;
    for (int i = 0; i < k; ++i) { // x_i >= 0
        LinearInequality f;
        f.normal.assign(static_cast<std::size_t>(k), Rat(0));
        f.normal[static_cast<std::size_t>(i)] = Rat(-1);
        f.offset = Rat(0);
        ineqs.push_back(std::move(f));
    }
    for (unsigned mask = 1; mask < (1u << k); ++mask) {
        const int j = __builtin_popcount(mask);
        if (j > k) continue;
        LinearInequality f;
        f.normal.assign(static_cast<std::size_t>(k), Rat(0));
        for (int i = 0; i < k; ++i)
            if (mask & (1u << i)) f.normal[static_cast<std::size_t>(i)] = Rat(1);
        f.offset = bound[static_cast<std::size_t>(j) - 1];
        ineqs.push_back(std::move(f));
    }
    return ineqs;
}

namespace {

std::mutex g_region_mutex;
std::map<std::pair<int, int>, Polytope> g_ckq_cache;
std::map<std::pair<int, int>, Polytope> g_tilde_cache;

Polytope build_tilde(int k, int m);

} // namespace

const Polytope& ckq_polytope(int k, int m) {
    std::lock_guard<std::mutex> lock(g_region_mutex);
    auto it = g_ckq_cache.find({k, m});
    if (it != g_ckq_cache.end()) return it->second;
    Polytope p = Polytope::from_inequalities(k, ckq_inequalities(k, m));
    return g_ckq_cache.emplace(std::make_pair(k, m), std::move(p)).first->second;
}

namespace {

Polytope build_tilde(int k, int m) {
    if (k == 2) {
        std::vector<std::vector<Rat>> pts = ckq_polytope(2, m).vertices();
        pts.push_back({Rat(0), Rat(0)});
        pts.push_back({Rat(1), Rat(0)});
        pts.push_back({Rat(0), Rat(1)});
        return Polytope::from_points(2, std::move(pts));
    }
    // Lift every facet of tilde C_{k-1,q} through each coordinate projection,
    // add the unit box, and hull the result with C_{k,q}.
    const Polytope& lower = tilde_region_polytope(k - 1, m);
    std::vector<LinearInequality> ineqs;
    for (int skip = 0; skip < k; ++skip) {
        for (const auto& f : lower.facets()) {
            LinearInequality g;
            g.normal.assign(static_cast<std::size_t>(k), Rat(0));
            int src = 0;
            for (int c = 0; c < k; ++c) {
                if (c == skip) continue;
                g.normal[static_cast<std::size_t>(c)] = f.normal[static_cast<std::size_t>(src)];
                ++src;
            }
            g.offset = f.offset;
            ineqs.push_back(std::move(g));
        }
    }
    for (int i = 0; i < k; ++i) {
        LinearInequality lo, hi;
        lo.normal.assign(static_cast<std::size_t>(k), Rat(0));
        lo.normal[static_cast<std::size_t>(i)] = Rat(-1);
        lo.offset = Rat(0);
        hi.normal.assign(static_cast<std::size_t>(k), Rat(0));
        hi.normal[static_cast<std::size_t>(i)] = Rat(1);
        hi.offset = Rat(1);
        ineqs.push_back(std::move(lo));
        ineqs.push_back(std::move(hi));
    }
    Polytope projections = Polytope::from_inequalities(k, std::move(ineqs));

    std::vector<std::vector<Rat>> pts = projections.vertices();
    const auto& cv = ckq_polytope(k, m).vertices();
    pts.insert(pts.end(), cv.begin(), cv.end());
    return Polytope::from_points(k, std::move(pts));
}

} // namespace

const Polytope& tilde_region_polytope(int k, int m) {
    if (k < 2) throw InvalidInputError("tilde region needs k >= 2");
    if (k > 4)
        throw InvalidInputError(
            "tilde region vertex construction supports k <= 4 (membership up to k = 5)");
    if (m < 2) throw InvalidInputError("tilde region needs integer m >= 2");
    {
        std::lock_guard<std::mutex> lock(g_region_mutex);
        auto it = g_tilde_cache.find({k, m});
        if (it != g_tilde_cache.end()) return it->second;
    }
    Polytope p = build_tilde(k, m);
    std::lock_guard<std::mutex> lock(g_region_mutex);
    return g_tilde_cache.emplace(std::make_pair(k, m), std::move(p)).first->second;
}

// ---------------------------------------------------------------------------
// Feasibility LP (phase-1 simplex, Bland's rule)
// ---------------------------------------------------------------------------

namespace {

// Feasibility of {A z = b, z >= 0}.
bool lp_feasible_eq(std::vector<std::vector<double>> a, std::vector<double> b,
                    double tol = 1e-9) {
    const int m = int(b.size());
    const int n = m > 0 ? int(a[0].size()) : 0;
    for (int i = 0; i < m; ++i)
        if (b[static_cast<std::size_t>(i)] < 0) {
            for (auto& v : a[static_cast<std::size_t>(i)]) v = -v;
            b[static_cast<std::size_t>(i)] = -b[static_cast<std::size_t>(i)];
        }
    // Tableau with artificial basis; minimize the artificial sum.
    const int cols = n + m;
    std::vector<std::vector<double>> t(static_cast<std::size_t>(m), std::vector<double>(static_cast<std::size_t>(cols) + 1, 0.0));
    std::vector<int> basis(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < n; ++j) t[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        t[static_cast<std::size_t>(i)][static_cast<std::size_t>(n + i)] = 1.0;
        t[static_cast<std::size_t>(i)].back() = b[static_cast<std::size_t>(i)];
        basis[static_cast<std::size_t>(i)] = n + i;
    }
    std::vector<double> obj(static_cast<std::size_t>(cols) + 1, 0.0); // reduced costs of -sum(artificials)
    for (int i = 0; i < m; ++i)
        for (int j = 0; j <= cols; ++j) obj[static_cast<std::size_t>(j)] += t[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    for (int j = n; j < cols; ++j) obj[static_cast<std::size_t>(j)] -= 1.0;

    for (int iter = 0; iter < 20000; ++iter) {
        int enter = -1;
        for (int j = 0; j < cols; ++j)
            if (obj[static_cast<std::size_t>(j)] > tol) {
                enter = j;
                break; // Bland: smallest index
            }
        if (enter < 0) break;
        int leave = -1;
        double best = 0;
        for (int i = 0; i < m; ++i) {
            const double aij = t[static_cast<std::size_t>(i)][static_cast<std::size_t>(enter)];
            if (aij > tol) {
                const double ratio = t[static_cast<std::size_t>(i)].back() / aij;
                if (leave < 0 || ratio < best - 1e-15 ||
                    (std::abs(ratio - best) <= 1e-15 && basis[static_cast<std::size_t>(i)] < basis[static_cast<std::size_t>(leave)])) {
                    leave = i;
                    best = ratio;
                }
            }
        }
        if (leave < 0) break; // unbounded: cannot happen in phase 1
        const double piv = t[static_cast<std::size_t>(leave)][static_cast<std::size_t>(enter)];
        for (double& v : t[static_cast<std::size_t>(leave)]) v /= piv;
        for (int i = 0; i < m; ++i) {
            if (i == leave) continue;
            const double f = t[static_cast<std::size_t>(i)][static_cast<std::size_t>(enter)];
            if (f == 0.0) continue;
            for (int j = 0; j <= cols; ++j)
                t[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] -= f * t[static_cast<std::size_t>(leave)][static_cast<std::size_t>(j)];
        }
        const double f = obj[static_cast<std::size_t>(enter)];
        for (int j = 0; j <= cols; ++j) obj[static_cast<std::size_t>(j)] -= f * t[static_cast<std::size_t>(leave)][static_cast<std::size_t>(j)];
        basis[static_cast<std::size_t>(leave)] = enter;
    }
    return obj.back() <= tol; // residual artificial mass
}

} // namespace

bool lp_membership(const Polytope& p, std::span<const double> x, double) {
    const int dim = p.dim();
    if (int(x.size()) != dim) throw InvalidInputError("lp_membership: dimension mismatch");
    const int n = int(p.vertices().size());
    std::vector<std::vector<double>> a(static_cast<std::size_t>(dim) + 1, std::vector<double>(static_cast<std::size_t>(n)));
    std::vector<double> b(static_cast<std::size_t>(dim) + 1);
    for (int j = 0; j < n; ++j)
        for (int c = 0; c < dim; ++c) a[static_cast<std::size_t>(c)][static_cast<std::size_t>(j)] = p.vertices()[static_cast<std::size_t>(j)][static_cast<std::size_t>(c)].value();
    for (int j = 0; j < n; ++j) a[static_cast<std::size_t>(dim)][static_cast<std::size_t>(j)] = 1.0;
    for (int c = 0; c < dim; ++c) b[static_cast<std::size_t>(c)] = x[static_cast<std::size_t>(c)];
    b[static_cast<std::size_t>(dim)] = 1.0;
    return lp_feasible_eq(std::move(a), std::move(b));
}

namespace {

// Hull-of-union feasibility for k = 5: x = a' + b' with a' in theta*A and
// b' in (1-theta)*B, where A (projection polytope) and B (C_{k,q}) are
// given by inequalities. Free variables are split into +/- parts.
bool tilde5_contains(std::span<const double> x, int m) {
    const int k = 5;
    const Polytope& lower = tilde_region_polytope(4, m);
    std::vector<std::vector<double>> ha;
    std::vector<double> hb;
    for (int skip = 0; skip < k; ++skip)
        for (const auto& f : lower.facets()) {
            std::vector<double> row(static_cast<std::size_t>(k), 0.0);
            int src = 0;
            for (int c = 0; c < k; ++c) {
                if (c == skip) continue;
                row[static_cast<std::size_t>(c)] = f.normal[static_cast<std::size_t>(src)].value();
                ++src;
            }
            ha.push_back(std::move(row));
            hb.push_back(f.offset.value());
        }
    for (int i = 0; i < k; ++i) {
        std::vector<double> lo(static_cast<std::size_t>(k), 0.0), hi(static_cast<std::size_t>(k), 0.0);
        lo[static_cast<std::size_t>(i)] = -1.0;
        hi[static_cast<std::size_t>(i)] = 1.0;
        ha.push_back(lo);
        hb.push_back(0.0);
        ha.push_back(hi);
        hb.push_back(1.0);
    }
    std::vector<std::vector<double>> hc;
    std::vector<double> hd;
    for (const auto& f : ckq_inequalities(k, m)) {
        std::vector<double> row(static_cast<std::size_t>(k));
        for (int c = 0; c < k; ++c) row[static_cast<std::size_t>(c)] = f.normal[static_cast<std::size_t>(c)].value();
        hc.push_back(std::move(row));
        hd.push_back(f.offset.value());
    }

    // Variables: a+(k), a-(k), b+(k), b-(k), theta, slacks.
    const int na = int(ha.size()), nc = int(hc.size());
    const int nvars = 4 * k + 1;
    const int nslack = na + nc + 1; // inequality slacks + theta <= 1
    const int rows = na + nc + 1 + k;
    std::vector<std::vector<double>> a(static_cast<std::size_t>(rows), std::vector<double>(static_cast<std::size_t>(nvars + nslack), 0.0));
    std::vector<double> b(static_cast<std::size_t>(rows), 0.0);
    auto av = [&](int j) { return j; };
    auto avn = [&](int j) { return k + j; };
    auto bv = [&](int j) { return 2 * k + j; };
    auto bvn = [&](int j) { return 3 * k + j; };
    const int th = 4 * k;

    int r = 0;
    for (int i = 0; i < na; ++i, ++r) { // H_A a' - theta h_A <= 0
        for (int j = 0; j < k; ++j) {
            a[static_cast<std::size_t>(r)][static_cast<std::size_t>(av(j))] = ha[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            a[static_cast<std::size_t>(r)][static_cast<std::size_t>(avn(j))] = -ha[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        }
        a[static_cast<std::size_t>(r)][static_cast<std::size_t>(th)] = -hb[static_cast<std::size_t>(i)];
        a[static_cast<std::size_t>(r)][static_cast<std::size_t>(nvars + i)] = 1.0;
        b[static_cast<std::size_t>(r)] = 0.0;
    }
    for (int i = 0; i < nc; ++i, ++r) { // H_B b' + theta h_B <= h_B
        for (int j = 0; j < k; ++j) {
            a[static_cast<std::size_t>(r)][static_cast<std::size_t>(bv(j))] = hc[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            a[static_cast<std::size_t>(r)][static_cast<std::size_t>(bvn(j))] = -hc[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        }
        a[static_cast<std::size_t>(r)][static_cast<std::size_t>(th)] = hd[static_cast<std::size_t>(i)];
        a[static_cast<std::size_t>(r)][static_cast<std::size_t>(nvars + na + i)] = 1.0;
        b[static_cast<std::size_t>(r)] = hd[static_cast<std::size_t>(i)];
    }
    { // theta <= 1
        a[static_cast<std::size_t>(r)][static_cast<std::size_t>(th)] = 1.0;
        a[static_cast<std::size_t>(r)][static_cast<std::size_t>(nvars + na + nc)] = 1.0;
        b[static_cast<std::size_t>(r)] = 1.0;
        ++r;
    }
    for (int j = 0; j < k; ++j, ++r) { // a' + b' = x
        a[static_cast<std::size_t>(r)][static_cast<std::size_t>(av(j))] = 1.0;
        a[static_cast<std::size_t>(r)][static_cast<std::size_t>(avn(j))] = -1.0;
        a[static_cast<std::size_t>(r)][static_cast<std::size_t>(bv(j))] = 1.0;
        a[static_cast<std::size_t>(r)][static_cast<std::size_t>(bvn(j))] = -1.0;
        b[static_cast<std::size_t>(r)] = x[static_cast<std::size_t>(j)];
    }
    return lp_feasible_eq(std::move(a), std::move(b));
}

} // namespace

Membership in_tilde(std::span<const double> x, int k, int m, double eps) {
    if (int(x.size()) != k) throw InvalidInputError("in_tilde: point has wrong dimension");
    if (k >= 2 && k <= 4) return tilde_region_polytope(k, m).classify(x, eps);
    if (k != 5)
        throw InvalidInputError("in_tilde supports 2 <= k <= 5");
    for (double xi : x)
        if (xi < -eps) return Membership::Exterior;
    // Radial classification: the region is downward closed with 0 a vertex,
    // so t* = sup{t : t x inside} decides, with zero coordinates capping the
    // verdict at boundary.
    double lo = 0.0, hi = 2.0;
    if (!tilde5_contains(x, m)) {
        hi = 1.0;
        // might still be boundary: check a slightly shrunk copy
    }
    std::vector<double> probe(x.begin(), x.end());
    for (int iter = 0; iter < 40; ++iter) {
        const double mid = (lo + hi) / 2;
        for (int c = 0; c < k; ++c) probe[static_cast<std::size_t>(c)] = x[static_cast<std::size_t>(c)] * mid;
        if (tilde5_contains(probe, m)) lo = mid;
        else hi = mid;
    }
    const double tstar = lo;
    if (tstar < 1.0 - eps * 10) return Membership::Exterior;
    if (tstar <= 1.0 + eps * 10) return Membership::Boundary;
    for (double xi : x)
        if (xi <= eps) return Membership::Boundary;
    return Membership::Interior;
}

// ---------------------------------------------------------------------------
// Theorem hypothesis predicates
// ---------------------------------------------------------------------------

TheoremId theorem_id_parse(const std::string& name) {
    if (name == "T0") return TheoremId::T0;
    if (name == "T1i") return TheoremId::T1i;
    if (name == "T1ii") return TheoremId::T1ii;
    if (name == "T2i") return TheoremId::T2i;
    if (name == "T2ii") return TheoremId::T2ii;
    if (name == "T3") return TheoremId::T3;
    if (name == "C3") return TheoremId::C3;
    if (name == "C3p" || name == "C3'") return TheoremId::C3p;
    if (name == "T3p" || name == "T3'") return TheoremId::T3p;
    throw InvalidInputError("unknown theorem id: " + name);
}

std::string theorem_id_name(TheoremId id) {
    switch (id) {
        case TheoremId::T0: return "T0";
        case TheoremId::T1i: return "T1i";
        case TheoremId::T1ii: return "T1ii";
        case TheoremId::T2i: return "T2i";
        case TheoremId::T2ii: return "T2ii";
        case TheoremId::T3: return "T3";
        case TheoremId::C3: return "C3";
        case TheoremId::C3p: return "C3p";
        case TheoremId::T3p: return "T3p";
    }
    return "?";
}

namespace {

constexpr double kExponentTol = 1e-12;

std::string num(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

} // namespace

PredicateResult theorem_predicate(TheoremId id, int d, int k, int m,
                                  std::span<const double> p, double r) {
    if (k < 1 || int(p.size()) != k)
        throw InvalidInputError("theorem_predicate: p must have k entries");
    if (!(r >= 1.0)) throw InvalidInputError("theorem_predicate: r must be >= 1");
    for (double pj : p)
        if (!(pj >= 1.0)) throw InvalidInputError("theorem_predicate: p_j must be in [1, inf]");

    double sum = 0;
    for (double pj : p) sum += std::isinf(pj) ? 0.0 : 1.0 / pj;
    const double q = double(m) / double(m - 1);

    auto fail = [](std::string s) { return PredicateResult{false, std::move(s)}; };
    auto sum_eq_r = [&]() { return std::abs(sum - 1.0 / r) <= kExponentTol; };
    auto scaled = [&](double factor) {
        std::vector<double> y(p.size());
        for (std::size_t j = 0; j < p.size(); ++j)
            y[j] = (std::isinf(p[j]) ? 0.0 : 1.0 / p[j]) / factor;
        return y;
    };
    auto need_m = [&]() {
        if (m < 2) throw InvalidInputError("theorem_predicate: m must be >= 2 for this theorem");
    };
    auto tail_sum_q = [&]() { // q^{-1}+...+q^{-(k-1)}+q^{-(k-1)}
        double geo = 0, power = 1;
        for (int j = 1; j < k; ++j) {
            power /= q;
            geo += power;
        }
        return geo + power;
    };

    switch (id) {
        case TheoremId::T0: {
            if (d < k + 1) return fail("d >= k+1 = " + std::to_string(k + 1) + " fails");
            if (!sum_eq_r()) return fail("1/r = sum 1/p_j fails");
            if (!(sum < double(d - 1) / d))
                return fail("sum 1/p_j < (d-1)/d = " + num(double(d - 1) / d) + " fails");
            return {true, ""};
        }
        case TheoremId::T1i: {
            if (d < 4 * k + 1) return fail("d >= 4k+1 = " + std::to_string(4 * k + 1) + " fails");
            if (!(r > 2.0 * d / (d - 2))) return fail("r > 2d/(d-2) = " + num(2.0 * d / (d - 2)) + " fails");
            if (!sum_eq_r()) return fail("1/r = sum 1/p_j fails");
            return {true, ""};
        }
        case TheoremId::T1ii: {
            if (k < 2) return fail("k >= 2 fails");
            if (d < 4 * k + 3) return fail("d >= 4k+3 = " + std::to_string(4 * k + 3) + " fails");
            if (!(r > double(d) / (d - 2))) return fail("r > d/(d-2) = " + num(double(d) / (d - 2)) + " fails");
            for (double pj : p)
                if (!(pj > 2.0 * d / (d - 2)))
                    return fail("p_j > 2d/(d-2) = " + num(2.0 * d / (d - 2)) + " fails");
            if (!sum_eq_r()) return fail("1/r = sum 1/p_j fails");
            const auto y = scaled(double(d - 2) / d);
            if (in_Ck(y) != Membership::Interior)
                return fail("(1/p) in (d-2)/d * C_k fails (" + membership_name(in_Ck(y)) + ")");
            return {true, ""};
        }
        case TheoremId::T2i: {
            need_m();
            if (d < 2 * m * (k - 1) + 5)
                return fail("d >= 2m(k-1)+5 = " + std::to_string(2 * m * (k - 1) + 5) + " fails");
            if (!(r > q * d / (d - 2))) return fail("r > q d/(d-2) = " + num(q * d / (d - 2)) + " fails");
            if (!(1.0 / r <= sum + kExponentTol)) return fail("1/r <= sum 1/p_j fails");
            return {true, ""};
        }
        case TheoremId::T2ii: {
            need_m();
            if (k < 2) return fail("k >= 2 fails");
            if (d < 2 * m * k + 3)
                return fail("d >= 2mk+3 = " + std::to_string(2 * m * k + 3) + " fails");
            const double rb = (1.0 / tail_sum_q()) * d / (d - 2);
            if (!(r > rb)) return fail("r > (sum q^-j)^-1 d/(d-2) = " + num(rb) + " fails");
            for (double pj : p)
                if (!(pj > q * d / (d - 2)))
                    return fail("p_j > q d/(d-2) = " + num(q * d / (d - 2)) + " fails");
            if (!sum_eq_r()) return fail("1/r = sum 1/p_j fails");
            const auto y = scaled(double(d - 2) / d);
            if (in_Ckq(y, m) != Membership::Interior)
                return fail("(1/p) in (d-2)/d * C_{k,q} fails (" + membership_name(in_Ckq(y, m)) + ")");
            return {true, ""};
        }
        case TheoremId::T3: {
            need_m();
            if (k != 2) return fail("k = 2 required");
            if (d < 2 * m) return fail("d >= 2m = " + std::to_string(2 * m) + " fails");
            if (!(r > q / 2 * d / (d - 1)))
                return fail("r > q/2 d/(d-1) = " + num(q / 2 * d / (d - 1)) + " fails");
            for (double pj : p)
                if (!(pj > q * d / (d - 1)))
                    return fail("p_j > q d/(d-1) = " + num(q * d / (d - 1)) + " fails");
            if (!sum_eq_r()) return fail("1/r = 1/p_1 + 1/p_2 fails");
            return {true, ""};
        }
        case TheoremId::C3: {
            need_m();
            if (k != 2) return fail("k = 2 required");
            if (d < 2 * m) return fail("d >= 2m = " + std::to_string(2 * m) + " fails");
            if (!(r > q / 2 * d / (d - 1)))
                return fail("r > q/2 d/(d-1) = " + num(q / 2 * d / (d - 1)) + " fails");
            if (!sum_eq_r()) return fail("1/r = 1/p_1 + 1/p_2 fails");
            const auto y = scaled(double(d - 1) / d);
            if (in_tilde(y, 2, m) != Membership::Interior)
                return fail("(1/p) in (d-1)/d * tilde C_{2,q} fails (" +
                            membership_name(in_tilde(y, 2, m)) + ")");
            return {true, ""};
        }
        case TheoremId::C3p: {
            need_m();
            if (k != 3) return fail("k = 3 required");
            if (d < 2 * m) return fail("d >= 2m = " + std::to_string(2 * m) + " fails");
            if (!(r > q / 2 * d / (d - 1)))
                return fail("r > q/2 d/(d-1) = " + num(q / 2 * d / (d - 1)) + " fails");
            if (!sum_eq_r()) return fail("1/r = sum 1/p_j fails");
            const auto y = scaled(double(d - 1) / d);
            for (int i = 0; i < 3; ++i)
                for (int j = i + 1; j < 3; ++j) {
                    const double pair[2] = {y[static_cast<std::size_t>(i)], y[static_cast<std::size_t>(j)]};
                    if (in_tilde(pair, 2, m) != Membership::Interior)
                        return fail("pair (1/p_" + std::to_string(i + 1) + ",1/p_" +
                                    std::to_string(j + 1) + ") in (d-1)/d * tilde C_{2,q} fails");
                }
            return {true, ""};
        }
        case TheoremId::T3p: {
            need_m();
            if (k < 2) return fail("k >= 2 fails");
            if (d < m * k) return fail("d >= mk = " + std::to_string(m * k) + " fails");
            const double rb = (1.0 / tail_sum_q()) * d / (d - 1);
            if (!(r > rb)) return fail("r > (sum q^-j)^-1 d/(d-1) = " + num(rb) + " fails");
            if (!sum_eq_r()) return fail("1/r = sum 1/p_j fails");
            const auto y = scaled(double(d - 1) / d);
            if (in_tilde(y, k, m) != Membership::Interior)
                return fail("(1/p) in (d-1)/d * tilde C_{k,q} fails (" +
                            membership_name(in_tilde(y, k, m)) + ")");
            return {true, ""};
        }
    }
    throw InvalidInputError("theorem_predicate: unknown id");
}

// ---------------------------------------------------------------------------
// Exports
// ---------------------------------------------------------------------------

RegionSpec::Kind RegionSpec::kind_parse(const std::string& name) {
    if (name == "ck") return Kind::Ck;
    if (name == "ckq") return Kind::Ckq;
    if (name == "tilde") return Kind::Tilde;
    if (name == "cube") return Kind::Cube;
    throw InvalidInputError("unknown region kind: " + name);
}

Polytope region_polytope(const RegionSpec& spec) {
    if (!(Rat(0) < spec.scale) || Rat(1) < spec.scale)
        throw InvalidInputError("region scale must lie in (0, 1]");
    Polytope base;
    switch (spec.kind) {
        case RegionSpec::Kind::Ck: base = ckq_polytope(spec.k, 2); break;
        case RegionSpec::Kind::Ckq: base = ckq_polytope(spec.k, spec.m); break;
        case RegionSpec::Kind::Tilde: base = tilde_region_polytope(spec.k, spec.m); break;
        case RegionSpec::Kind::Cube: {
            if (spec.k < 2 || spec.m < 2) throw InvalidInputError("cube region needs k, m >= 2");
            Rat side(1);
            const Rat qinv(spec.m - 1, spec.m);
            for (int j = 0; j + 1 < spec.k; ++j) side = side * qinv;
            std::vector<LinearInequality> ineqs;
            for (int i = 0; i < spec.k; ++i) {
                LinearInequality lo, hi;
                lo.normal.assign(static_cast<std::size_t>(spec.k), Rat(0));
                lo.normal[static_cast<std::size_t>(i)] = Rat(-1);
                lo.offset = Rat(0);
                hi.normal.assign(static_cast<std::size_t>(spec.k), Rat(0));
                hi.normal[static_cast<std::size_t>(i)] = Rat(1);
                hi.offset = side;
                ineqs.push_back(std::move(lo));
                ineqs.push_back(std::move(hi));
            }
            base = Polytope::from_inequalities(spec.k, std::move(ineqs));
            break;
        }
    }
    if (spec.scale == Rat(1)) return base;
    return base.scaled(spec.scale);
}

std::string export_region_csv(const RegionSpec& spec) {
    Polytope p = region_polytope(spec);
    std::string out;
    char buf[48];
    for (const auto& v : p.vertices()) {
        for (std::size_t c = 0; c < v.size(); ++c) {
            if (c) out += ",";
            std::snprintf(buf, sizeof buf, "%.17g", v[c].value());
            out += buf;
        }
        out += "\n";
    }
    return out;
}

std::string export_region_json(const RegionSpec& spec) {
    Polytope p = region_polytope(spec);
    nlohmann::ordered_json j;
    switch (spec.kind) {
        case RegionSpec::Kind::Ck: j["kind"] = "ck"; break;
        case RegionSpec::Kind::Ckq: j["kind"] = "ckq"; break;
        case RegionSpec::Kind::Tilde: j["kind"] = "tilde"; break;
        case RegionSpec::Kind::Cube: j["kind"] = "cube"; break;
    }
    j["k"] = spec.k;
    j["m"] = spec.m;
    j["scale"] = spec.scale.str();
    auto verts = nlohmann::ordered_json::array();
    for (const auto& v : p.vertices()) {
        auto row = nlohmann::ordered_json::array();
        for (const auto& c : v) row.push_back(c.str());
        verts.push_back(row);
    }
    j["vertices"] = verts;
    auto ineqs = nlohmann::ordered_json::array();
    for (const auto& f : p.facets()) {
        nlohmann::ordered_json fi;
        auto normal = nlohmann::ordered_json::array();
        for (const auto& c : f.normal) normal.push_back(c.str());
        fi["normal"] = normal;
        fi["offset"] = f.offset.str();
        ineqs.push_back(fi);
    }
    j["inequalities"] = ineqs;
    return j.dump(2) + "\n";
}

} // namespace simplexmax
