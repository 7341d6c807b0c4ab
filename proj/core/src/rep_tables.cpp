#include "simplexmax/rep_tables.hpp"

namespace simplexmax {

SumSquaresTable::SumSquaresTable(int max_dim, Int max_n)
    : max_dim_(max_dim), max_n_(max_n) {
    if (max_dim < 0 || max_n < 0)
        throw InvalidInputError("SumSquaresTable: negative range");
    rows_.assign(static_cast<std::size_t>(max_dim) + 1, std::vector<Wide>(static_cast<std::size_t>(max_n) + 1, 0));
    rows_[0][0] = 1;
    for (int j = 1; j <= max_dim; ++j) {
        const auto& prev = rows_[static_cast<std::size_t>(j - 1)];
        auto& cur = rows_[static_cast<std::size_t>(j)];
        for (Int n = 0; n <= max_n; ++n) {
            Wide s = prev[static_cast<std::size_t>(n)];
            for (Int u = 1; u * u <= n; ++u) s += 2 * prev[static_cast<std::size_t>(n - u * u)];
            cur[static_cast<std::size_t>(n)] = s;
        }
    }
}

} // namespace simplexmax
