#include "simplexmax/grid_function.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace simplexmax {

std::size_t Box::cells() const {
    std::size_t n = 1;
    for (Int e : extent) {
        if (e <= 0) return 0;
        if (n > (static_cast<std::size_t>(1) << 40) / static_cast<std::size_t>(e))
            throw InvalidInputError("box too large to materialize");
        n *= static_cast<std::size_t>(e);
    }
    return n;
}

bool Box::contains(std::span<const Int> x) const {
    for (int i = 0; i < dim(); ++i)
        if (x[static_cast<std::size_t>(i)] < corner[static_cast<std::size_t>(i)] ||
            x[static_cast<std::size_t>(i)] >= corner[static_cast<std::size_t>(i)] + extent[static_cast<std::size_t>(i)])
            return false;
    return true;
}

Box Box::dilated(Int r) const {
    Box b = *this;
    for (int i = 0; i < dim(); ++i) {
        b.corner[static_cast<std::size_t>(i)] -= r;
        b.extent[static_cast<std::size_t>(i)] += 2 * r;
    }
    return b;
}

Box Box::hull(const Box& a, const Box& b) {
    if (a.dim() != b.dim()) throw InvalidInputError("box hull: dimension mismatch");
    Box h;
    h.corner.resize(a.corner.size());
    h.extent.resize(a.corner.size());
    for (int i = 0; i < a.dim(); ++i) {
        const Int lo = std::min(a.corner[static_cast<std::size_t>(i)], b.corner[static_cast<std::size_t>(i)]);
        const Int hi = std::max(a.corner[static_cast<std::size_t>(i)] + a.extent[static_cast<std::size_t>(i)],
                                b.corner[static_cast<std::size_t>(i)] + b.extent[static_cast<std::size_t>(i)]);
        h.corner[static_cast<std::size_t>(i)] = lo;
        h.extent[static_cast<std::size_t>(i)] = hi - lo;
    }
    return h;
}

Box Box::cube(int dim, Int lo, Int hi) {
    if (hi < lo) throw InvalidInputError("box cube: hi < lo");
    Box b;
    b.corner.assign(static_cast<std::size_t>(dim), lo);
    b.extent.assign(static_cast<std::size_t>(dim), hi - lo + 1);
    return b;
}

GridFunction GridFunction::zeros(Box box) {
    GridFunction f;
    const std::size_t n = box.cells();
    f.box_ = std::move(box);
    f.values_.assign(n, 0.0);
    return f;
}

GridFunction GridFunction::constant(Box box, double value) {
    GridFunction f = zeros(std::move(box));
    for (auto& v : f.values_) v = value;
    return f;
}

GridFunction GridFunction::delta(int dim) {
    GridFunction f = zeros(Box::cube(dim, 0, 0));
    f.values_[0] = 1.0;
    return f;
}

std::size_t GridFunction::index_of(std::span<const Int> x) const {
    std::size_t idx = 0;
    for (int i = 0; i < dim(); ++i)
        idx = idx * static_cast<std::size_t>(box_.extent[static_cast<std::size_t>(i)]) +
              static_cast<std::size_t>(x[static_cast<std::size_t>(i)] - box_.corner[static_cast<std::size_t>(i)]);
    return idx;
}

double GridFunction::at(std::span<const Int> x) const {
    if (int(x.size()) != dim()) throw InvalidInputError("grid point dimension mismatch");
    if (!box_.contains(x)) return 0.0;
    return values_[index_of(x)];
}

void GridFunction::set(std::span<const Int> x, double v) {
    if (!box_.contains(x)) throw InvalidInputError("grid set: point outside box");
    values_[index_of(x)] = v;
}

void GridFunction::for_each(const std::function<void(std::span<const Int>, double)>& fn) const {
    if (values_.empty()) return;
    std::vector<Int> x = box_.corner;
    for (std::size_t idx = 0;; ++idx) {
        fn(x, values_[idx]);
        int i = dim() - 1;
        for (; i >= 0; --i) {
            if (++x[static_cast<std::size_t>(i)] <
                box_.corner[static_cast<std::size_t>(i)] + box_.extent[static_cast<std::size_t>(i)])
                break;
            x[static_cast<std::size_t>(i)] = box_.corner[static_cast<std::size_t>(i)];
        }
        if (i < 0) return;
    }
}

GridFunction GridFunction::map(const std::function<double(double)>& fn) const {
    GridFunction g = *this;
    for (auto& v : g.values_) v = fn(v);
    return g;
}

GridFunction GridFunction::abs_pow(double p) const {
    return map([p](double v) { return std::pow(std::abs(v), p); });
}

GridFunction GridFunction::read_text(std::istream& in) {
    int d = 0;
    long long nrows = 0;
    if (!(in >> d >> nrows) || d < 1 || nrows < 0)
        throw InvalidInputError("grid file: bad header");
    std::vector<std::vector<Int>> pts(static_cast<std::size_t>(nrows), std::vector<Int>(static_cast<std::size_t>(d), 0));
    std::vector<double> vals(static_cast<std::size_t>(nrows), 0.0);
    for (long long r = 0; r < nrows; ++r) {
        for (int i = 0; i < d; ++i)
            if (!(in >> pts[static_cast<std::size_t>(r)][static_cast<std::size_t>(i)]))
                throw InvalidInputError("grid file: truncated row");
        if (!(in >> vals[static_cast<std::size_t>(r)])) throw InvalidInputError("grid file: missing value");
    }
    Box box;
    if (nrows == 0) {
        box = Box::cube(d, 0, 0);
    } else {
        box.corner = pts[0];
        std::vector<Int> hi = pts[0];
        for (const auto& p : pts)
            for (int i = 0; i < d; ++i) {
                box.corner[static_cast<std::size_t>(i)] = std::min(box.corner[static_cast<std::size_t>(i)], p[static_cast<std::size_t>(i)]);
                hi[static_cast<std::size_t>(i)] = std::max(hi[static_cast<std::size_t>(i)], p[static_cast<std::size_t>(i)]);
            }
        box.extent.resize(static_cast<std::size_t>(d));
        for (int i = 0; i < d; ++i)
            box.extent[static_cast<std::size_t>(i)] = hi[static_cast<std::size_t>(i)] - box.corner[static_cast<std::size_t>(i)] + 1;
    }
    GridFunction f = zeros(std::move(box));
    for (long long r = 0; r < nrows; ++r) f.set(pts[static_cast<std::size_t>(r)], vals[static_cast<std::size_t>(r)]);
    return f;
}

GridFunction GridFunction::read_text_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInputError("cannot open grid file: " + path);
    return read_text(in);
}

void GridFunction::write_text(std::ostream& out) const {
    std::size_t nrows = 0;
    for (double v : values_)
        if (v != 0.0) ++nrows;
    out << dim() << " " << nrows << "\n";
    char buf[64];
    for_each([&](std::span<const Int> x, double v) {
        if (v == 0.0) return;
        for (int i = 0; i < dim(); ++i) out << x[static_cast<std::size_t>(i)] << " ";
        std::snprintf(buf, sizeof buf, "%.17g", v);
        out << buf << "\n";
    });
}

void GridFunction::write_text_file(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw InvalidInputError("cannot write grid file: " + path);
    write_text(out);
}

double lp_norm(const GridFunction& f, double p) {
    if (std::isinf(p)) {
        double m = 0;
        for (double v : f.values()) m = std::max(m, std::abs(v));
        return m;
    }
    if (!(p >= 1.0)) throw InvalidInputError("lp_norm: p must be >= 1 or infinity");
    double s = 0;
    for (double v : f.values())
        if (v != 0.0) s += std::pow(std::abs(v), p);
    return std::pow(s, 1.0 / p);
}

} // namespace simplexmax
