#include "nccw/elements.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace nccw {

ComplexMatrix multiply(const ComplexMatrix& a, const ComplexMatrix& b)
{
    if (a.cols() != b.rows())
        throw DimensionError("complex matrix product: inner dimensions differ");
    ComplexMatrix out(a.rows(), b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < b.cols(); ++j) {
            Complex acc = 0.0;
            for (Eigen::Index k = 0; k < a.cols(); ++k)
                acc += a(i, k) * b(k, j);
            out(i, j) = acc;
        }
    return out;
}

double spectral_norm(const ComplexMatrix& m)
{
    if (m.size() == 0)
        return 0.0;
    Eigen::JacobiSVD<ComplexMatrix> svd(m);
    return svd.singularValues()(0);
}

// ---------------------------------------------------------------------------

BlockMatrix::BlockMatrix(FinDimAlgebra algebra, std::vector<ComplexMatrix> blocks)
    : algebra_(std::move(algebra)), blocks_(std::move(blocks))
{
    if (blocks_.size() != algebra_.block_count())
        throw DimensionError("block matrix has " + std::to_string(blocks_.size()) + " blocks, algebra " +
                             algebra_.to_string() + " has " + std::to_string(algebra_.block_count()));
    for (std::size_t k = 0; k < blocks_.size(); ++k) {
        const auto n = static_cast<Eigen::Index>(algebra_.block_size(k));
        if (blocks_[k].rows() != n || blocks_[k].cols() != n)
            throw DimensionError("block " + std::to_string(k) + " is " + std::to_string(blocks_[k].rows()) + "x" +
                                 std::to_string(blocks_[k].cols()) + ", expected " + std::to_string(n) + "x" +
                                 std::to_string(n));
    }
}

BlockMatrix BlockMatrix::zero(const FinDimAlgebra& algebra)
{
    std::vector<ComplexMatrix> blocks;
    for (std::size_t n : algebra.blocks())
        blocks.push_back(ComplexMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)));
    return BlockMatrix(algebra, std::move(blocks));
}

bool BlockMatrix::is_zero() const
{
    return std::all_of(blocks_.begin(), blocks_.end(), [](const ComplexMatrix& b) { return (b.array() == 0.0).all(); });
}

double BlockMatrix::norm() const
{
    double n = 0.0;
    for (const auto& b : blocks_)
        n = std::max(n, spectral_norm(b));
    return n;
}

BlockMatrix BlockMatrix::adjoint() const
{
    std::vector<ComplexMatrix> out;
    for (const auto& b : blocks_)
        out.push_back(b.adjoint());
    return BlockMatrix(algebra_, std::move(out));
}

namespace {

void require_same_algebra(const BlockMatrix& a, const BlockMatrix& b)
{
    if (!(a.algebra() == b.algebra()))
        throw DimensionError("block matrices live in different algebras: " + a.algebra().to_string() + " vs " +
                             b.algebra().to_string());
}

template <class Op>
BlockMatrix blockwise(const BlockMatrix& a, const BlockMatrix& b, Op op)
{
    require_same_algebra(a, b);
    std::vector<ComplexMatrix> out;
    for (std::size_t k = 0; k < a.blocks().size(); ++k)
        out.push_back(op(a.block(k), b.block(k)));
    return BlockMatrix(a.algebra(), std::move(out));
}

}  // namespace

bool operator==(const BlockMatrix& a, const BlockMatrix& b)
{
    if (!(a.algebra_ == b.algebra_))
        return false;
    for (std::size_t k = 0; k < a.blocks_.size(); ++k)
        if (!(a.blocks_[k].array() == b.blocks_[k].array()).all())
            return false;
    return true;
}

BlockMatrix operator+(const BlockMatrix& a, const BlockMatrix& b)
{
    return blockwise(a, b, [](const ComplexMatrix& x, const ComplexMatrix& y) -> ComplexMatrix { return x + y; });
}

BlockMatrix operator-(const BlockMatrix& a, const BlockMatrix& b)
{
    return blockwise(a, b, [](const ComplexMatrix& x, const ComplexMatrix& y) -> ComplexMatrix { return x - y; });
}

BlockMatrix operator*(const BlockMatrix& a, const BlockMatrix& b)
{
    return blockwise(a, b, [](const ComplexMatrix& x, const ComplexMatrix& y) { return multiply(x, y); });
}

BlockMatrix operator*(Complex s, const BlockMatrix& a)
{
    std::vector<ComplexMatrix> out;
    for (const auto& b : a.blocks_)
        out.push_back(s * b);
    return BlockMatrix(a.algebra_, std::move(out));
}

BlockMatrix apply(const MultiplicityMorphism& f, const BlockMatrix& x)
{
    if (!(x.algebra() == f.domain()))
        throw DimensionError("element of " + x.algebra().to_string() + " is not in the domain " +
                             f.domain().to_string());
    const IntMatrix& r = f.multiplicities();
    BlockMatrix out = BlockMatrix::zero(f.codomain());
    std::vector<ComplexMatrix> blocks = out.blocks();
    for (std::size_t j = 0; j < f.codomain().block_count(); ++j) {
        Eigen::Index offset = 0;
        for (std::size_t i = 0; i < f.domain().block_count(); ++i) {
            const auto n = static_cast<Eigen::Index>(f.domain().block_size(i));
            const unsigned long copies = r(j, i).get_ui();
            for (unsigned long c = 0; c < copies; ++c) {
                blocks[j].block(offset, offset, n, n) = x.block(i);
                offset += n;
            }
        }
    }
    return BlockMatrix(f.codomain(), std::move(blocks));
}

BlockMatrix concatenate(const BlockMatrix& a, const BlockMatrix& b)
{
    std::vector<ComplexMatrix> blocks = a.blocks();
    blocks.insert(blocks.end(), b.blocks().begin(), b.blocks().end());
    return BlockMatrix(direct_sum(a.algebra(), b.algebra()), std::move(blocks));
}

std::pair<BlockMatrix, BlockMatrix> split(const BlockMatrix& x, std::size_t first_blocks)
{
    const auto& all = x.algebra().blocks();
    if (first_blocks == 0 || first_blocks >= all.size())
        throw DimensionError("split point " + std::to_string(first_blocks) + " out of range for " +
                             x.algebra().to_string());
    const auto mid = static_cast<std::ptrdiff_t>(first_blocks);
    FinDimAlgebra head(std::vector<std::size_t>(all.begin(), all.begin() + mid));
    FinDimAlgebra tail(std::vector<std::size_t>(all.begin() + mid, all.end()));
    std::vector<ComplexMatrix> hb(x.blocks().begin(), x.blocks().begin() + mid);
    std::vector<ComplexMatrix> tb(x.blocks().begin() + mid, x.blocks().end());
    return {BlockMatrix(std::move(head), std::move(hb)), BlockMatrix(std::move(tail), std::move(tb))};
}

// ---------------------------------------------------------------------------

SampledPath::SampledPath(FinDimAlgebra target, std::vector<BlockMatrix> samples)
    : target_(std::move(target)), samples_(std::move(samples))
{
    if (samples_.size() < 3)
        throw std::invalid_argument("a sampled path needs grid size >= 2 (at least 3 samples)");
    for (const auto& s : samples_)
        if (!(s.algebra() == target_))
            throw DimensionError("path sample in " + s.algebra().to_string() + ", expected " + target_.to_string());
}

SampledPath SampledPath::constant(const BlockMatrix& value, std::size_t grid)
{
    return SampledPath(value.algebra(), std::vector<BlockMatrix>(grid + 1, value));
}

BlockMatrix SampledPath::at_grid(double u) const
{
    const auto g = static_cast<double>(grid());
    if (!(u > 0.0))
        return samples_.front();
    if (u >= g)
        return samples_.back();
    const double k = std::floor(u);
    const double w = u - k;
    const auto i = static_cast<std::size_t>(k);
    if (w == 0.0)
        return samples_[i];
    return Complex(1.0 - w) * samples_[i] + Complex(w) * samples_[i + 1];
}

BlockMatrix SampledPath::operator()(double t) const
{
    return at_grid(t * static_cast<double>(grid()));
}

// ---------------------------------------------------------------------------

TelescopeElement element_make(const MorphismSequence& s, BlockMatrix seed, std::vector<SampledPath> paths,
                              Flavor flavor)
{
    if (!(seed.algebra() == s.algebra(0)))
        throw DimensionError("seed lives in " + seed.algebra().to_string() + ", expected " +
                             s.algebra(0).to_string());
    if (paths.size() != s.length())
        throw DimensionError("expected " + std::to_string(s.length()) + " paths, got " +
                             std::to_string(paths.size()));
    const std::size_t grid = paths.front().grid();
    const auto composites = s.composites();
    for (std::size_t p = 0; p < paths.size(); ++p) {
        const std::size_t k = p + 1;
        if (!(paths[p].target() == s.algebra(k)))
            throw DimensionError("path f_" + std::to_string(k + 1) + " maps into " + paths[p].target().to_string() +
                                 ", expected " + s.algebra(k).to_string());
        if (paths[p].grid() != grid)
            throw DimensionError("paths use different grids");
        if (!(paths[p].end() == apply(composites[p], seed)))
            throw MembershipError(k, 1,
                                  "f_" + std::to_string(k + 1) + "(1) differs from the image of the seed under C_" +
                                      std::to_string(k));
        if (flavor == Flavor::conical && !paths[p].start().is_zero())
            throw MembershipError(k, 0, "f_" + std::to_string(k + 1) + "(0) is not zero in a conical element");
    }
    return TelescopeElement(s, std::move(seed), std::move(paths), flavor);
}

TelescopeElement section(const MorphismSequence& s, const BlockMatrix& a, std::size_t grid)
{
    std::vector<SampledPath> paths;
    for (const auto& c : s.composites())
        paths.push_back(SampledPath::constant(apply(c, a), grid));
    return element_make(s, a, std::move(paths), Flavor::cylindrical);
}

TelescopeElement element_zero(const MorphismSequence& s, Flavor flavor, std::size_t grid)
{
    std::vector<SampledPath> paths;
    for (std::size_t k = 1; k <= s.length(); ++k)
        paths.push_back(SampledPath::constant(BlockMatrix::zero(s.algebra(k)), grid));
    return element_make(s, BlockMatrix::zero(s.algebra(0)), std::move(paths), flavor);
}

namespace {

void require_compatible(const TelescopeElement& x, const TelescopeElement& y)
{
    if (!(x.sequence() == y.sequence()))
        throw std::invalid_argument("elements belong to different sequences");
    if (x.flavor() != y.flavor())
        throw std::invalid_argument("elements have different flavors");
    if (x.grid() != y.grid())
        throw std::invalid_argument("elements use different grids");
}

template <class Op>
TelescopeElement pointwise(const TelescopeElement& x, const TelescopeElement& y, Op op)
{
    require_compatible(x, y);
    std::vector<SampledPath> paths;
    for (std::size_t p = 0; p < x.paths().size(); ++p) {
        const auto& fx = x.paths()[p].samples();
        const auto& fy = y.paths()[p].samples();
        std::vector<BlockMatrix> samples;
        samples.reserve(fx.size());
        for (std::size_t j = 0; j < fx.size(); ++j)
            samples.push_back(op(fx[j], fy[j]));
        paths.emplace_back(x.paths()[p].target(), std::move(samples));
    }
    return element_make(x.sequence(), op(x.seed(), y.seed()), std::move(paths), x.flavor());
}

template <class Op>
TelescopeElement map_values(const TelescopeElement& x, Op op)
{
    std::vector<SampledPath> paths;
    for (const auto& f : x.paths()) {
        std::vector<BlockMatrix> samples;
        samples.reserve(f.samples().size());
        for (const auto& v : f.samples())
            samples.push_back(op(v));
        paths.emplace_back(f.target(), std::move(samples));
    }
    return element_make(x.sequence(), op(x.seed()), std::move(paths), x.flavor());
}

double max_entry_difference(const BlockMatrix& a, const BlockMatrix& b)
{
    double d = 0.0;
    for (std::size_t k = 0; k < a.blocks().size(); ++k)
        d = std::max(d, (a.block(k) - b.block(k)).cwiseAbs().maxCoeff());
    return d;
}

}  // namespace

TelescopeElement element_mul(const TelescopeElement& x, const TelescopeElement& y)
{
    return pointwise(x, y, [](const BlockMatrix& a, const BlockMatrix& b) { return a * b; });
}

TelescopeElement element_add(const TelescopeElement& x, const TelescopeElement& y)
{
    return pointwise(x, y, [](const BlockMatrix& a, const BlockMatrix& b) { return a + b; });
}

TelescopeElement element_sub(const TelescopeElement& x, const TelescopeElement& y)
{
    return pointwise(x, y, [](const BlockMatrix& a, const BlockMatrix& b) { return a - b; });
}

TelescopeElement element_scale(Complex s, const TelescopeElement& x)
{
    return map_values(x, [s](const BlockMatrix& a) { return s * a; });
}

TelescopeElement element_adjoint(const TelescopeElement& x)
{
    return map_values(x, [](const BlockMatrix& a) { return a.adjoint(); });
}

double element_norm(const TelescopeElement& x)
{
    double n = x.seed().norm();
    for (const auto& f : x.paths())
        for (const auto& v : f.samples())
            n = std::max(n, v.norm());
    return n;
}

double max_abs_difference(const TelescopeElement& x, const TelescopeElement& y)
{
    require_compatible(x, y);
    double d = max_entry_difference(x.seed(), y.seed());
    for (std::size_t p = 0; p < x.paths().size(); ++p)
        for (std::size_t j = 0; j < x.paths()[p].samples().size(); ++j)
            d = std::max(d, max_entry_difference(x.paths()[p].samples()[j], y.paths()[p].samples()[j]));
    return d;
}

TelescopeElement homotopy(const TelescopeElement& x, double t)
{
    if (!(t >= 0.0 && t <= 1.0))
        throw std::invalid_argument("homotopy parameter must lie in [0, 1]");
    const std::size_t g = x.grid();
    std::vector<SampledPath> paths;
    for (const auto& f : x.paths()) {
        std::vector<BlockMatrix> samples;
        samples.reserve(g + 1);
        // Grid coordinate of (1 - s) t + s at s = j / G, kept in grid units so
        // that t = 0 and t = 1 land exactly on grid points.
        for (std::size_t j = 0; j <= g; ++j) {
            const auto jd = static_cast<double>(j);
            samples.push_back(f.at_grid(jd + t * (static_cast<double>(g) - jd)));
        }
        paths.emplace_back(f.target(), std::move(samples));
    }
    return element_make(x.sequence(), x.seed(), std::move(paths), x.flavor());
}

RetractionReport retraction_check(const TelescopeElement& x, const TelescopeElement& y,
                                  std::span<const double> t_samples)
{
    if (x.flavor() != Flavor::cylindrical || y.flavor() != Flavor::cylindrical)
        throw std::invalid_argument("the retraction homotopy is defined for cylindrical telescopes only");
    require_compatible(x, y);

    RetractionReport report;
    report.start_residual = max_abs_difference(homotopy(x, 0.0), x);
    report.end_residual = max_abs_difference(homotopy(x, 1.0), section(x.sequence(), x.seed(), x.grid()));

    // psi(xy)(t) - psi(x)(t) psi(y)(t) at a sample between nodes k, k+1 with
    // weight w equals w (1 - w) (f_{k+1} - f_k)(g_{k+1} - g_k).
    double bound = 0.0;
    for (std::size_t p = 0; p < x.paths().size(); ++p) {
        double dx = 0.0;
        double dy = 0.0;
        const auto& fx = x.paths()[p].samples();
        const auto& fy = y.paths()[p].samples();
        for (std::size_t j = 0; j + 1 < fx.size(); ++j) {
            dx = std::max(dx, (fx[j + 1] - fx[j]).norm());
            dy = std::max(dy, (fy[j + 1] - fy[j]).norm());
        }
        bound = std::max(bound, 0.25 * dx * dy);
    }
    bound += 1e-9 * (1.0 + element_norm(x) * element_norm(y));

    const TelescopeElement xy = element_mul(x, y);
    bool ok = report.start_residual == 0.0 && report.end_residual == 0.0;
    for (double t : t_samples) {
        RetractionSample sample;
        sample.t = t;
        sample.multiplicativity_bound = bound;
        try {
            const TelescopeElement hx = homotopy(x, t);
            const TelescopeElement hy = homotopy(y, t);
            const TelescopeElement hxy = homotopy(xy, t);
            sample.member = true;
            double residual = (hxy.seed() - hx.seed() * hy.seed()).norm();
            for (std::size_t p = 0; p < hx.paths().size(); ++p)
                for (std::size_t j = 0; j <= hx.grid(); ++j) {
                    const auto& a = hx.paths()[p].samples()[j];
                    const auto& b = hy.paths()[p].samples()[j];
                    const auto& ab = hxy.paths()[p].samples()[j];
                    residual = std::max(residual, (ab - a * b).norm());
                }
            sample.multiplicativity_residual = residual;
        } catch (const MembershipError&) {
            sample.member = false;
            sample.multiplicativity_residual = std::numeric_limits<double>::infinity();
        }
        ok = ok && sample.member && sample.multiplicativity_residual <= sample.multiplicativity_bound;
        report.samples.push_back(sample);
    }
    report.pass = ok;
    return report;
}

bool pullback_check(const BlockMatrix& a1, const BlockMatrix& a2, const MultiplicityMorphism& f,
                    const MultiplicityMorphism& g)
{
    if (!(f.codomain() == g.codomain()))
        throw DimensionError("pullback maps have different codomains: " + f.codomain().to_string() + " vs " +
                             g.codomain().to_string());
    return apply(f, a1) == apply(g, a2);
}

// ---------------------------------------------------------------------------

namespace {

BlockMatrix concatenate_all(const std::vector<const BlockMatrix*>& parts)
{
    BlockMatrix out = *parts.front();
    for (std::size_t i = 1; i < parts.size(); ++i)
        out = concatenate(out, *parts[i]);
    return out;
}

// Splits an element of A_2 + ... + A_{n+1} into its summands.
std::vector<BlockMatrix> split_tail(const MorphismSequence& s, BlockMatrix v)
{
    std::vector<BlockMatrix> out;
    for (std::size_t k = 1; k < s.length(); ++k) {
        auto [head, rest] = split(v, s.algebra(k).block_count());
        out.push_back(std::move(head));
        v = std::move(rest);
    }
    out.push_back(std::move(v));
    return out;
}

}  // namespace

CellCoordinates to_cells(const TelescopeElement& x)
{
    const std::size_t g = x.grid();
    std::vector<BlockMatrix> fiber_samples;
    for (std::size_t j = 0; j <= g; ++j) {
        std::vector<const BlockMatrix*> parts;
        for (const auto& f : x.paths())
            parts.push_back(&f.samples()[j]);
        fiber_samples.push_back(concatenate_all(parts));
    }
    FinDimAlgebra fiber_algebra = fiber_samples.front().algebra();
    SampledPath fiber(std::move(fiber_algebra), std::move(fiber_samples));
    if (x.flavor() == Flavor::conical)
        return CellCoordinates{x.seed(), std::move(fiber)};
    return CellCoordinates{concatenate(x.seed(), fiber.start()), std::move(fiber)};
}

TelescopeElement from_cells(const MorphismSequence& s, Flavor flavor, const CellCoordinates& c)
{
    const std::size_t g = c.fiber.grid();
    std::vector<std::vector<BlockMatrix>> per_path(s.length());
    for (std::size_t j = 0; j <= g; ++j) {
        auto parts = split_tail(s, c.fiber.samples()[j]);
        for (std::size_t p = 0; p < parts.size(); ++p)
            per_path[p].push_back(std::move(parts[p]));
    }
    std::vector<SampledPath> paths;
    for (std::size_t p = 0; p < per_path.size(); ++p)
        paths.emplace_back(s.algebra(p + 1), std::move(per_path[p]));

    if (flavor == Flavor::conical)
        return element_make(s, c.skeleton, std::move(paths), flavor);

    auto [seed, free_ends] = split(c.skeleton, s.algebra(0).block_count());
    const auto ends = split_tail(s, std::move(free_ends));
    for (std::size_t p = 0; p < ends.size(); ++p)
        if (!(ends[p] == paths[p].start()))
            throw MembershipError(p + 1, 0,
                                  "f_" + std::to_string(p + 2) + "(0) differs from the recorded 0-skeleton value");
    return element_make(s, std::move(seed), std::move(paths), flavor);
}

BlockMatrix random_block_matrix(const FinDimAlgebra& a, std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<ComplexMatrix> blocks;
    for (std::size_t n : a.blocks()) {
        const auto m = static_cast<Eigen::Index>(n);
        ComplexMatrix b(m, m);
        // Row-major draw order, real part first.
        for (Eigen::Index i = 0; i < m; ++i)
            for (Eigen::Index j = 0; j < m; ++j) {
                const double re = unit(rng);
                const double im = unit(rng);
                b(i, j) = Complex(re, im);
            }
        blocks.push_back(std::move(b));
    }
    return BlockMatrix(a, std::move(blocks));
}

TelescopeElement random_element(const MorphismSequence& s, Flavor flavor, std::size_t grid, std::mt19937_64& rng)
{
    const BlockMatrix seed = random_block_matrix(s.algebra(0), rng);
    const auto composites = s.composites();
    std::vector<SampledPath> paths;
    for (std::size_t p = 0; p < s.length(); ++p) {
        const BlockMatrix end = apply(composites[p], seed);
        const BlockMatrix linear = random_block_matrix(s.algebra(p + 1), rng);
        const BlockMatrix bump = random_block_matrix(s.algebra(p + 1), rng);
        std::vector<BlockMatrix> samples;
        samples.reserve(grid + 1);
        for (std::size_t j = 0; j <= grid; ++j) {
            const double t = static_cast<double>(j) / static_cast<double>(grid);
            const Complex hump(t * (1.0 - t));
            if (flavor == Flavor::cylindrical)
                samples.push_back(end + Complex(1.0 - t) * linear + hump * bump);
            else
                samples.push_back(Complex(t) * end + hump * bump);
        }
        paths.emplace_back(s.algebra(p + 1), std::move(samples));
    }
    return element_make(s, seed, std::move(paths), flavor);
}

}  // namespace nccw
