#include "simplexmax/geometry.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace simplexmax {

GramMatrix GramMatrix::identity(int k) {
    GramMatrix t(k);
    for (int i = 0; i < k; ++i) t.set(i, i, 1);
    return t;
}

GramMatrix GramMatrix::parse(const std::string& text) {
    std::vector<std::vector<Int>> rows;
    std::stringstream ss(text);
    std::string row_text;
    while (std::getline(ss, row_text, ';')) {
        std::vector<Int> row;
        std::stringstream rs(row_text);
        std::string tok;
        while (rs >> tok) {
            try {
                std::size_t used = 0;
                long long v = std::stoll(tok, &used);
                if (used != tok.size()) throw std::invalid_argument(tok);
                row.push_back(v);
            } catch (const std::exception&) {
                throw InvalidInputError("gram matrix: bad token '" + tok + "'");
            }
        }
        if (!row.empty()) rows.push_back(std::move(row));
    }
    if (rows.empty()) throw InvalidInputError("gram matrix: no entries");
    const int k = int(rows.size());
    GramMatrix t(k);
    for (int i = 0; i < k; ++i) {
        if (int(rows[i].size()) != k)
            throw InvalidInputError("gram matrix: row " + std::to_string(i + 1) +
                                    " has " + std::to_string(rows[i].size()) +
                                    " entries, expected " + std::to_string(k));
        for (int j = 0; j < k; ++j) t.entries_[static_cast<std::size_t>(i) * k + j] = rows[i][j];
    }
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j)
            if (t(i, j) != t(j, i))
                throw InvalidInputError("gram matrix: not symmetric at (" +
                                        std::to_string(i + 1) + "," + std::to_string(j + 1) + ")");
    return t;
}

GramMatrix GramMatrix::scaled(Int lambda_sq) const {
    GramMatrix t(k_);
    for (std::size_t i = 0; i < entries_.size(); ++i)
        t.entries_[i] = entries_[i] * lambda_sq;
    return t;
}

namespace {

// Bareiss fraction-free elimination; all intermediates are exact minors.
Wide bareiss_det(std::vector<Wide> a, int n) {
    Wide prev = 1;
    Wide sign = 1;
    for (int col = 0; col < n - 1; ++col) {
        if (a[static_cast<std::size_t>(col) * n + col] == 0) {
            int pivot = -1;
            for (int r = col + 1; r < n; ++r)
                if (a[static_cast<std::size_t>(r) * n + col] != 0) { pivot = r; break; }
            if (pivot < 0) return 0;
            for (int c = 0; c < n; ++c)
                std::swap(a[static_cast<std::size_t>(col) * n + c], a[static_cast<std::size_t>(pivot) * n + c]);
            sign = -sign;
        }
        for (int r = col + 1; r < n; ++r) {
            for (int c = col + 1; c < n; ++c) {
                a[static_cast<std::size_t>(r) * n + c] =
                    (a[static_cast<std::size_t>(r) * n + c] * a[static_cast<std::size_t>(col) * n + col] -
                     a[static_cast<std::size_t>(r) * n + col] * a[static_cast<std::size_t>(col) * n + c]) /
                    prev;
            }
            a[static_cast<std::size_t>(r) * n + col] = 0;
        }
        prev = a[static_cast<std::size_t>(col) * n + col];
    }
    return sign * a[static_cast<std::size_t>(n - 1) * n + (n - 1)];
}

} // namespace

Wide GramMatrix::determinant() const {
    std::vector<Wide> a(entries_.begin(), entries_.end());
    return bareiss_det(std::move(a), k_);
}

bool GramMatrix::positive_definite() const {
    // All leading principal minors positive.
    for (int m = 1; m <= k_; ++m) {
        std::vector<Wide> a;
        a.reserve(static_cast<std::size_t>(m) * m);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) a.push_back((*this)(i, j));
        if (bareiss_det(std::move(a), m) <= 0) return false;
    }
    return true;
}

bool GramMatrix::positive_semidefinite() const {
    // Eigen check on doubles is enough here; exactness only matters for
    // the definite case which is decided by integer minors.
    Eigen::MatrixXd m(k_, k_);
    for (int i = 0; i < k_; ++i)
        for (int j = 0; j < k_; ++j) m(i, j) = double((*this)(i, j));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    return es.eigenvalues().minCoeff() >= -1e-9 * std::max(1.0, m.norm());
}

double GramMatrix::frobenius() const {
    double s = 0;
    for (Int e : entries_) s += double(e) * double(e);
    return std::sqrt(s);
}

std::string GramMatrix::to_string() const {
    std::string out;
    for (int i = 0; i < k_; ++i) {
        if (i) out += "; ";
        for (int j = 0; j < k_; ++j) {
            if (j) out += " ";
            out += std::to_string((*this)(i, j));
        }
    }
    return out;
}

LatticeSimplex::LatticeSimplex(int dim, std::vector<std::vector<Int>> vertices)
    : dim_(dim), vertices_(std::move(vertices)) {
    if (dim_ < 1) throw InvalidInputError("simplex dimension must be >= 1");
    if (vertices_.empty()) throw InvalidInputError("simplex needs at least one vertex");
    if (int(vertices_.size()) > dim_)
        throw InvalidInputError("simplex has k > d");
    for (const auto& v : vertices_)
        if (int(v.size()) != dim_)
            throw InvalidInputError("simplex vertex has wrong dimension");
}

GramMatrix LatticeSimplex::gram() const {
    const int kk = k();
    GramMatrix t(kk);
    for (int i = 0; i < kk; ++i) {
        for (int j = i; j < kk; ++j) {
            Wide dot = 0;
            for (int c = 0; c < dim_; ++c)
                dot += Wide(vertices_[i][c]) * Wide(vertices_[j][c]);
            if (dot > Wide(std::numeric_limits<Int>::max()) ||
                dot < Wide(std::numeric_limits<Int>::min()))
                throw InvalidInputError("gram entry exceeds 64 bits");
            t.set(i, j, Int(dot));
        }
    }
    return t;
}

std::vector<Eigen::VectorXd> LatticeSimplex::real_vertices() const {
    std::vector<Eigen::VectorXd> out;
    out.reserve(vertices_.size());
    for (const auto& v : vertices_) {
        Eigen::VectorXd x(dim_);
        for (int c = 0; c < dim_; ++c) x[c] = double(v[c]);
        out.push_back(std::move(x));
    }
    return out;
}

LatticeSimplex LatticeSimplex::read_text(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInputError("cannot open simplex file: " + path);
    int d = 0, k = 0;
    if (!(in >> d >> k)) throw InvalidInputError("simplex file: bad header");
    if (d < 1 || k < 1 || k > d) throw InvalidInputError("simplex file: invalid d/k");
    std::vector<std::vector<Int>> verts(static_cast<std::size_t>(k), std::vector<Int>(static_cast<std::size_t>(d), 0));
    for (int i = 0; i < k; ++i)
        for (int c = 0; c < d; ++c)
            if (!(in >> verts[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)]))
                throw InvalidInputError("simplex file: truncated vertex data");
    return LatticeSimplex(d, std::move(verts));
}

Eigen::MatrixXd Simplex::gram() const {
    const int kk = k();
    Eigen::MatrixXd t(kk, kk);
    for (int i = 0; i < kk; ++i)
        for (int j = 0; j < kk; ++j) t(i, j) = vertices[static_cast<std::size_t>(i)].dot(vertices[static_cast<std::size_t>(j)]);
    return t;
}

Simplex Simplex::from_lattice(const LatticeSimplex& s) {
    return Simplex{s.dim(), s.real_vertices()};
}

namespace {

Eigen::MatrixXd columns(const std::vector<Eigen::VectorXd>& vs) {
    const int d = int(vs.front().size());
    Eigen::MatrixXd m(d, int(vs.size()));
    for (int j = 0; j < int(vs.size()); ++j) {
        if (int(vs[static_cast<std::size_t>(j)].size()) != d)
            throw InvalidInputError("vectors of mixed dimension");
        m.col(j) = vs[static_cast<std::size_t>(j)];
    }
    return m;
}

// |diag(R)| of the unpivoted QR factor: entry i is the distance of column i
// to the span of columns 0..i-1.
Eigen::VectorXd orthogonal_column_norms(const Eigen::MatrixXd& m) {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
    const int n = int(m.cols());
    Eigen::VectorXd diag(n);
    Eigen::MatrixXd r = qr.matrixQR().topRows(n).template triangularView<Eigen::Upper>();
    for (int i = 0; i < n; ++i) diag[i] = std::abs(r(i, i));
    return diag;
}

} // namespace

double parallelepiped_volume(const std::vector<Eigen::VectorXd>& vs) {
    if (vs.empty()) return 1.0;
    if (int(vs.size()) > int(vs.front().size())) return 0.0;
    Eigen::VectorXd diag = orthogonal_column_norms(columns(vs));
    const double largest = diag.maxCoeff();
    if (largest == 0.0) return 0.0;
    if (diag.minCoeff() < kDependenceCutoff * largest) return 0.0;
    double vol = 1.0;
    for (int i = 0; i < diag.size(); ++i) vol *= diag[i];
    return vol;
}

DistanceResult distance_to_span(const Eigen::VectorXd& y,
                                const std::vector<Eigen::VectorXd>& basis) {
    DistanceResult res;
    if (basis.empty()) {
        res.distance = y.norm();
        return res;
    }
    Eigen::MatrixXd b = columns(basis);
    if (y.size() != b.rows()) throw InvalidInputError("vectors of mixed dimension");
    // Projection through column-pivoted QR handles rank-deficient bases.
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(b);
    qr.setThreshold(kDependenceCutoff);
    Eigen::VectorXd coeffs = qr.solve(y);
    res.distance = (y - b * coeffs).norm();
    const bool basis_dependent = parallelepiped_volume(basis) == 0.0;
    if (basis_dependent && res.distance > kDependenceCutoff * std::max(1.0, y.norm()))
        res.degenerate_basis = true;
    return res;
}

double volume_chain_discrepancy(const std::vector<Eigen::VectorXd>& ys,
                                const std::vector<Eigen::VectorXd>& zs) {
    std::vector<Eigen::VectorXd> all = zs;
    double product = parallelepiped_volume(zs);
    for (const auto& y : ys) {
        product *= distance_to_span(y, all).distance;
        all.push_back(y);
    }
    return std::abs(parallelepiped_volume(all) - product);
}

double gl_sphere_density(const Eigen::VectorXd& x,
                         const std::vector<Eigen::VectorXd>& centers,
                         const std::vector<double>& radii_sq) {
    if (centers.empty()) throw InvalidInputError("gl_sphere_density: no spheres");
    if (centers.size() != radii_sq.size())
        throw InvalidInputError("gl_sphere_density: centers/radii size mismatch");
    std::vector<Eigen::VectorXd> grads;
    grads.reserve(centers.size());
    for (std::size_t i = 0; i < centers.size(); ++i) {
        const double err = std::abs((x - centers[i]).squaredNorm() - radii_sq[i]);
        if (err > 1e-9 * std::max(1.0, std::abs(radii_sq[i])))
            throw InvalidInputError("gl_sphere_density: x is off sphere " + std::to_string(i));
        grads.push_back(2.0 * (x - centers[i]));
    }
    const double vol = parallelepiped_volume(grads);
    if (vol == 0.0)
        throw DegenerateConfigError("gl_sphere_density: gradient system singular (x in span of centers)");
    return 1.0 / vol;
}

double gram_determinant(const std::vector<Eigen::VectorXd>& vs) {
    if (vs.empty()) return 1.0;
    Eigen::MatrixXd m = columns(vs);
    Eigen::MatrixXd g = m.transpose() * m;
    return g.determinant();
}

} // namespace simplexmax
