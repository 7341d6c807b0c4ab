#include "simplexmax/continuous_mc.hpp"

#include <cmath>
#include <random>

#include "simplexmax/parallel.hpp"

namespace simplexmax {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::mt19937_64 engine_for(std::uint64_t seed, std::uint64_t index, std::uint64_t stream = 0) {
    return std::mt19937_64(splitmix64(seed ^ splitmix64(index ^ splitmix64(stream))));
}

constexpr std::size_t kBlock = 1024;

// Deterministic blockwise reduction: per-sample values are accumulated in
// fixed-size blocks and the block sums are combined in block order, so the
// floating result does not depend on the thread count.
template <typename PerSample>
void blockwise(std::size_t n, std::size_t width, std::vector<double>& out_sums,
               const PerSample& per_sample) {
    const std::size_t nblocks = (n + kBlock - 1) / kBlock;
    std::vector<std::vector<double>> partial(nblocks, std::vector<double>(width, 0.0));
    parallel_tasks(nblocks, [&](std::size_t b) {
        std::vector<double> local(width, 0.0);
        std::vector<double> row(width, 0.0);
        const std::size_t lo = b * kBlock;
        const std::size_t hi = std::min(lo + kBlock, n);
        for (std::size_t i = lo; i < hi; ++i) {
            per_sample(i, row);
            for (std::size_t w = 0; w < width; ++w) local[w] += row[w];
        }
        partial[b] = std::move(local);
    });
    out_sums.assign(width, 0.0);
    for (std::size_t b = 0; b < nblocks; ++b)
        for (std::size_t w = 0; w < width; ++w) out_sums[w] += partial[b][w];
}

Eigen::VectorXd gaussian_vector(std::mt19937_64& gen, int dim) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::VectorXd v(dim);
    for (int i = 0; i < dim; ++i) v[i] = normal(gen);
    return v;
}

} // namespace

RotationSampler::RotationSampler(int dim, std::uint64_t seed) : dim_(dim), seed_(seed) {
    if (dim < 2) throw InvalidInputError("rotations need d >= 2");
}

Eigen::MatrixXd RotationSampler::sample(std::uint64_t index) const {
    auto gen = engine_for(seed_, index);
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXd g(dim_, dim_);
    for (int j = 0; j < dim_; ++j)
        for (int i = 0; i < dim_; ++i) g(i, j) = normal(gen);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    Eigen::MatrixXd q = qr.householderQ();
    Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < dim_; ++j)
        if (r(j, j) < 0) q.col(j) = -q.col(j);
    if (q.determinant() < 0) q.col(dim_ - 1) = -q.col(dim_ - 1);
    return q;
}

SampledAverage mc_multilinear_average(std::span<const RealFn> fs, const Simplex& simplex,
                                      double lambda, const Eigen::VectorXd& x, std::size_t n,
                                      std::uint64_t seed) {
    if (n < 1) throw InvalidInputError("mc average needs n >= 1");
    if (lambda <= 0) throw InvalidInputError("mc average needs lambda > 0");
    if (int(fs.size()) != simplex.k())
        throw InvalidInputError("function count must match simplex order");
    RotationSampler sampler(simplex.dim, seed);

    std::vector<double> sums;
    blockwise(n, 2, sums, [&](std::size_t i, std::vector<double>& row) {
        Eigen::MatrixXd u = sampler.sample(i);
        double prod = 1.0;
        for (std::size_t j = 0; j < fs.size() && prod != 0.0; ++j)
            prod *= fs[j](x + lambda * (u * simplex.vertices[j]));
        row[0] = prod;
        row[1] = prod * prod;
    });

    SampledAverage res;
    res.samples = n;
    res.estimate = sums[0] / double(n);
    if (n > 1) {
        const double var =
            std::max(0.0, (sums[1] - sums[0] * sums[0] / double(n)) / double(n - 1));
        res.stderr_est = std::sqrt(var / double(n));
    }
    return res;
}

double mc_maximal(std::span<const RealFn> fs, const Simplex& simplex,
                  std::span<const double> lambda_grid, const Eigen::VectorXd& x, std::size_t n,
                  std::uint64_t seed) {
    if (lambda_grid.empty()) throw InvalidInputError("mc_maximal: empty lambda grid");
    if (n < 1) throw InvalidInputError("mc_maximal needs n >= 1");
    RotationSampler sampler(simplex.dim, seed);

    const std::size_t width = lambda_grid.size();
    std::vector<double> sums;
    blockwise(n, width, sums, [&](std::size_t i, std::vector<double>& row) {
        Eigen::MatrixXd u = sampler.sample(i);
        std::vector<Eigen::VectorXd> rotated;
        rotated.reserve(fs.size());
        for (std::size_t j = 0; j < fs.size(); ++j) rotated.push_back(u * simplex.vertices[j]);
        for (std::size_t li = 0; li < width; ++li) {
            double prod = 1.0;
            for (std::size_t j = 0; j < fs.size() && prod != 0.0; ++j)
                prod *= fs[j](x + lambda_grid[li] * rotated[j]);
            row[li] = prod;
        }
    });

    double best = 0;
    for (std::size_t li = 0; li < width; ++li)
        best = std::max(best, std::abs(sums[li] / double(n)));
    return best;
}

double mc_cs_check(const RealFn& f1, const RealFn& f2, const Simplex& simplex, double lambda,
                   const Eigen::VectorXd& x, std::size_t n, std::uint64_t seed) {
    if (simplex.k() != 2) throw InvalidInputError("mc_cs_check is bilinear (k = 2)");
    RotationSampler sampler(simplex.dim, seed);
    std::vector<double> sums;
    blockwise(n, 3, sums, [&](std::size_t i, std::vector<double>& row) {
        Eigen::MatrixXd u = sampler.sample(i);
        const double a = f1(x + lambda * (u * simplex.vertices[0]));
        const double b = f2(x + lambda * (u * simplex.vertices[1]));
        row[0] = a * b;
        row[1] = a * a;
        row[2] = b * b;
    });
    const double mab = sums[0] / double(n);
    const double maa = sums[1] / double(n);
    const double mbb = sums[2] / double(n);
    return mab * mab - maa * mbb;
}

Eigen::VectorXd sample_sphere_point(int dim, double radius, std::uint64_t seed,
                                    std::uint64_t index) {
    auto gen = engine_for(seed, index, 0x5f3e);
    Eigen::VectorXd v = gaussian_vector(gen, dim);
    double norm = v.norm();
    while (norm < 1e-12) { // astronomically rare; resample
        v = gaussian_vector(gen, dim);
        norm = v.norm();
    }
    return v * (radius / norm);
}

Eigen::VectorXd constrained_sphere_sample(double norm_sq,
                                          const std::vector<Eigen::VectorXd>& basis,
                                          std::span<const double> dots, std::uint64_t seed,
                                          std::uint64_t index) {
    if (basis.empty()) throw InvalidInputError("constrained sample needs a basis; use sample_sphere_point");
    if (basis.size() != dots.size())
        throw InvalidInputError("constrained sample: basis/dots size mismatch");
    const int dim = int(basis.front().size());
    const int l = int(basis.size());

    Eigen::MatrixXd b(dim, l);
    for (int j = 0; j < l; ++j) b.col(j) = basis[static_cast<std::size_t>(j)];
    Eigen::MatrixXd gram = b.transpose() * b;
    Eigen::VectorXd rhs(l);
    for (int j = 0; j < l; ++j) rhs[j] = dots[static_cast<std::size_t>(j)];

    Eigen::FullPivLU<Eigen::MatrixXd> lu(gram);
    if (!lu.isInvertible())
        throw DegenerateConfigError("constrained sample: dependent basis");
    Eigen::VectorXd alpha = lu.solve(rhs);
    Eigen::VectorXd center = b * alpha;
    const double rad_sq = norm_sq - center.squaredNorm();
    if (rad_sq <= 1e-12 * std::max(1.0, norm_sq))
        throw DegenerateConfigError("constrained sample: empty or pointlike section");

    auto gen = engine_for(seed, index, 0xa11ce);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(b);
    Eigen::MatrixXd qthin = qr.householderQ() * Eigen::MatrixXd::Identity(dim, l);
    Eigen::VectorXd w = gaussian_vector(gen, dim);
    w -= qthin * (qthin.transpose() * w);
    double wn = w.norm();
    while (wn < 1e-12) {
        w = gaussian_vector(gen, dim);
        w -= qthin * (qthin.transpose() * w);
        wn = w.norm();
    }
    return center + w * (std::sqrt(rad_sq) / wn);
}

std::vector<Eigen::VectorXd> sample_configuration(const Simplex& simplex, std::uint64_t seed,
                                                  std::uint64_t index) {
    Eigen::MatrixXd t = simplex.gram();
    std::vector<Eigen::VectorXd> ys;
    ys.reserve(static_cast<std::size_t>(simplex.k()));
    for (int j = 0; j < simplex.k(); ++j) {
        if (j == 0) {
            ys.push_back(sample_sphere_point(simplex.dim, std::sqrt(t(0, 0)), seed,
                                             splitmix64(index) + 0));
        } else {
            std::vector<double> dots(static_cast<std::size_t>(j));
            for (int i = 0; i < j; ++i) dots[static_cast<std::size_t>(i)] = t(i, j);
            ys.push_back(constrained_sphere_sample(t(j, j), ys, dots, seed,
                                                   splitmix64(index) + std::uint64_t(j)));
        }
    }
    return ys;
}

PairWeightResult pair_weight(const Eigen::VectorXd& y2, const Eigen::VectorXd& y2p,
                             const Eigen::Matrix2d& t, int d, const Eigen::VectorXd* witness,
                             std::uint64_t seed) {
    if (y2.size() != y2p.size()) throw InvalidInputError("pair_weight: dimension mismatch");
    const double t11 = t(0, 0), t12 = t(0, 1), t22 = t(1, 1);
    const double tol = 1e-9 * std::max(1.0, std::abs(t22));
    if (std::abs(y2.squaredNorm() - t22) > tol || std::abs(y2p.squaredNorm() - t22) > tol)
        throw InvalidInputError("pair_weight: |y2|^2 and |y2'|^2 must equal t22");

    std::vector<Eigen::VectorXd> pair = {y2, y2p};
    const double vol2 = parallelepiped_volume(pair);
    if (vol2 == 0.0) throw DegenerateConfigError("pair_weight: dependent pair");

    PairWeightResult res;
    if (witness) {
        res.witness = *witness;
    } else {
        std::vector<double> dots = {t12, t12};
        res.witness = constrained_sphere_sample(t11, pair, dots, seed, 0);
    }

    std::vector<Eigen::VectorXd> triple = {res.witness, res.witness - y2, res.witness - y2p};
    const double vol3 = parallelepiped_volume(triple);
    res.vol_ratio = vol3 / vol2;
    res.distance = distance_to_span(res.witness, pair).distance;
    res.value = std::pow(vol3, double(d - 4)) * std::pow(vol2, double(-d + 3));
    return res;
}

WithsScanResult lemma_withs_integrand_scan(int m, double s, int d, std::size_t n,
                                           std::uint64_t seed, double radius_sq) {
    if (m < 1 || d < 1 || n < 4) throw InvalidInputError("withs scan: bad parameters");
    const double radius = std::sqrt(radius_sq);

    // Sequential accumulation: running means at doubling checkpoints need a
    // fixed sample order anyway.
    WithsScanResult res;
    double sum = 0, sumsq = 0, maxval = 0;
    std::size_t checkpoint = std::max<std::size_t>(n / 64, 8);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<Eigen::VectorXd> zs;
        zs.reserve(static_cast<std::size_t>(m));
        for (int j = 0; j < m; ++j)
            zs.push_back(sample_sphere_point(d, radius, seed,
                                             splitmix64(i * std::uint64_t(m) + std::uint64_t(j))));
        const double vol = parallelepiped_volume(zs);
        const double val = vol > 0 ? std::pow(vol, -s) : 1e300;
        sum += val;
        sumsq += val * val;
        maxval = std::max(maxval, val);
        if (i + 1 == checkpoint || i + 1 == n) {
            res.running_means.emplace_back(i + 1, sum / double(i + 1));
            checkpoint *= 2;
        }
    }

    res.final_mean = sum / double(n);
    const double var = std::max(0.0, (sumsq - sum * sum / double(n)) / double(n - 1));
    res.final_stderr = std::sqrt(var / double(n));
    res.max_sample_fraction = sum > 0 ? maxval / sum : 0;

    if (res.running_means.size() >= 2) {
        const auto& [n1, m1] = res.running_means[res.running_means.size() - 2];
        const auto& [n2, m2] = res.running_means.back();
        const double se1 = res.final_stderr * std::sqrt(double(n2) / double(n1));
        res.stabilized = std::abs(m2 - m1) < 5.0 * (se1 + res.final_stderr);
    }
    res.heavy_tail = (double(d) < double(m) + s) || res.max_sample_fraction > 0.2;
    return res;
}

} // namespace simplexmax
