#pragma once

#include <vector>

#include "simplexmax/errors.hpp"
#include "simplexmax/wide.hpp"

namespace simplexmax {

/// Tables of r_j(n) = #{(u_1..u_j) in Z^j : u_1^2+...+u_j^2 = n} for
/// 0 <= j <= max_dim, 0 <= n <= max_n, built by the elementary
/// convolution r_j = r_{j-1} * r_1.
class SumSquaresTable {
public:
    SumSquaresTable(int max_dim, Int max_n);

    int max_dim() const { return max_dim_; }
    Int max_n() const { return max_n_; }

    Wide count(int j, Int n) const {
        if (n < 0) return 0;
        if (j < 0 || j > max_dim_ || n > max_n_)
            throw InvalidInputError("SumSquaresTable: query out of range");
        return rows_[static_cast<std::size_t>(j)][static_cast<std::size_t>(n)];
    }

private:
    int max_dim_;
    Int max_n_;
    std::vector<std::vector<Wide>> rows_;
};

} // namespace simplexmax
