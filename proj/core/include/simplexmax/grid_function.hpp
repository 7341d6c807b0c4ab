#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "simplexmax/errors.hpp"
#include "simplexmax/wide.hpp"

namespace simplexmax {

/// Integer box: corner (inclusive minimum) plus extents.
struct Box {
    std::vector<Int> corner;
    std::vector<Int> extent;

    int dim() const { return int(corner.size()); }
    std::size_t cells() const;
    bool contains(std::span<const Int> x) const;
    Box dilated(Int r) const;
    static Box hull(const Box& a, const Box& b);
    static Box cube(int dim, Int lo, Int hi); // [lo, hi]^dim
};

/// Finitely supported real function on Z^d stored densely on a box;
/// zero outside.
class GridFunction {
public:
    GridFunction() = default;
    static GridFunction zeros(Box box);
    static GridFunction constant(Box box, double value);
    static GridFunction delta(int dim); // point mass at the origin

    int dim() const { return box_.dim(); }
    const Box& box() const { return box_; }

    double at(std::span<const Int> x) const;
    void set(std::span<const Int> x, double v); // x must lie inside the box
    void for_each(const std::function<void(std::span<const Int>, double)>& fn) const;

    GridFunction map(const std::function<double(double)>& fn) const;
    GridFunction abs_pow(double p) const; // |f|^p

    std::span<const double> values() const { return values_; }
    std::span<double> values() { return values_; }

    // Text format: header "d nrows", then per row d integer coordinates and
    // one value. Rows are the nonzero points in lexicographic order.
    static GridFunction read_text(std::istream& in);
    static GridFunction read_text_file(const std::string& path);
    void write_text(std::ostream& out) const;
    void write_text_file(const std::string& path) const;

private:
    Box box_;
    std::vector<double> values_;
    std::size_t index_of(std::span<const Int> x) const;
};

/// (sum |f|^p)^{1/p}, or max|f| for p = infinity. Requires p >= 1.
double lp_norm(const GridFunction& f, double p);

} // namespace simplexmax
