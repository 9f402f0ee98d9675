#include "nccw/abelian.hpp"

#include <algorithm>
#include <optional>
#include <sstream>
#include <utility>

namespace nccw {

IntMatrix::IntMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols, Integer(0))
{
}

IntMatrix::IntMatrix(std::size_t rows, std::size_t cols, std::vector<Integer> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries))
{
    if (entries_.size() != rows * cols)
        throw DimensionError("IntMatrix: expected " + std::to_string(rows * cols) + " entries, got " +
                             std::to_string(entries_.size()));
}

IntMatrix IntMatrix::from_rows(std::initializer_list<std::initializer_list<long>> rows)
{
    std::vector<std::vector<long>> nested;
    for (const auto& row : rows)
        nested.emplace_back(row);
    return from_rows(nested);
}

IntMatrix IntMatrix::from_rows(const std::vector<std::vector<long>>& rows)
{
    const std::size_t r = rows.size();
    const std::size_t c = r == 0 ? 0 : rows.front().size();
    std::vector<Integer> entries;
    entries.reserve(r * c);
    for (const auto& row : rows) {
        if (row.size() != c)
            throw DimensionError("IntMatrix::from_rows: ragged rows");
        for (long v : row)
            entries.emplace_back(v);
    }
    return IntMatrix(r, c, std::move(entries));
}

IntMatrix IntMatrix::identity(std::size_t n)
{
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        m(i, i) = 1;
    return m;
}

bool IntMatrix::is_zero() const
{
    return std::all_of(entries_.begin(), entries_.end(), [](const Integer& x) { return x == 0; });
}

IntMatrix IntMatrix::transpose() const
{
    IntMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            t(j, i) = (*this)(i, j);
    return t;
}

IntMatrix IntMatrix::column_range(std::size_t first, std::size_t count) const
{
    if (first + count > cols_)
        throw DimensionError("IntMatrix::column_range out of bounds");
    IntMatrix out(rows_, count);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < count; ++j)
            out(i, j) = (*this)(i, first + j);
    return out;
}

IntMatrix IntMatrix::row_range(std::size_t first, std::size_t count) const
{
    if (first + count > rows_)
        throw DimensionError("IntMatrix::row_range out of bounds");
    IntMatrix out(count, cols_);
    for (std::size_t i = 0; i < count; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            out(i, j) = (*this)(first + i, j);
    return out;
}

IntMatrix IntMatrix::hstack(const IntMatrix& left, const IntMatrix& right)
{
    if (left.rows_ != right.rows_)
        throw DimensionError("IntMatrix::hstack: row counts differ");
    IntMatrix out(left.rows_, left.cols_ + right.cols_);
    for (std::size_t i = 0; i < left.rows_; ++i) {
        for (std::size_t j = 0; j < left.cols_; ++j)
            out(i, j) = left(i, j);
        for (std::size_t j = 0; j < right.cols_; ++j)
            out(i, left.cols_ + j) = right(i, j);
    }
    return out;
}

IntMatrix IntMatrix::vstack(const IntMatrix& top, const IntMatrix& bottom)
{
    if (top.cols_ != bottom.cols_)
        throw DimensionError("IntMatrix::vstack: column counts differ");
    std::vector<Integer> entries = top.entries_;
    entries.insert(entries.end(), bottom.entries_.begin(), bottom.entries_.end());
    return IntMatrix(top.rows_ + bottom.rows_, top.cols_, std::move(entries));
}

std::string IntMatrix::to_string() const
{
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < rows_; ++i) {
        if (i)
            os << ", ";
        os << '[';
        for (std::size_t j = 0; j < cols_; ++j) {
            if (j)
                os << ", ";
            os << (*this)(i, j).get_str();
        }
        os << ']';
    }
    os << ']';
    return os.str();
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b)
{
    if (a.cols() != b.rows())
        throw DimensionError("IntMatrix product: " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                             " times " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
    IntMatrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            if (a(i, k) == 0)
                continue;
            for (std::size_t j = 0; j < b.cols(); ++j)
                out(i, j) += a(i, k) * b(k, j);
        }
    return out;
}

// ---------------------------------------------------------------------------
// Abelian groups

FGAbelianGroup::FGAbelianGroup(std::size_t rank, std::vector<Integer> torsion)
    : rank_(rank), torsion_(std::move(torsion))
{
    for (std::size_t i = 0; i < torsion_.size(); ++i) {
        if (torsion_[i] < 2)
            throw std::invalid_argument("FGAbelianGroup: invariant factors must be >= 2");
        if (i + 1 < torsion_.size() && !mpz_divisible_p(torsion_[i + 1].get_mpz_t(), torsion_[i].get_mpz_t()))
            throw std::invalid_argument("FGAbelianGroup: invariant factors must form a divisibility chain");
    }
}

FGAbelianGroup FGAbelianGroup::from_cyclic(std::size_t rank, const std::vector<Integer>& orders)
{
    std::vector<Integer> finite;
    for (const Integer& n : orders) {
        if (n == 0)
            ++rank;
        else
            finite.push_back(abs(n));
    }
    IntMatrix diag(finite.size(), finite.size());
    for (std::size_t i = 0; i < finite.size(); ++i)
        diag(i, i) = finite[i];
    std::vector<Integer> torsion;
    for (const Integer& d : smith_normal_form(diag).invariant_factors())
        if (d > 1)
            torsion.push_back(d);
    return FGAbelianGroup(rank, std::move(torsion));
}

std::string FGAbelianGroup::to_string() const
{
    if (is_trivial())
        return "0";
    std::ostringstream os;
    bool first = true;
    if (rank_ > 0) {
        os << 'Z';
        if (rank_ > 1)
            os << '^' << rank_;
        first = false;
    }
    for (const Integer& d : torsion_) {
        if (!first)
            os << " + ";
        os << "Z/" << d.get_str();
        first = false;
    }
    return os.str();
}

FGAbelianGroup direct_sum(const FGAbelianGroup& a, const FGAbelianGroup& b)
{
    std::vector<Integer> orders = a.torsion();
    orders.insert(orders.end(), b.torsion().begin(), b.torsion().end());
    return FGAbelianGroup::from_cyclic(a.rank() + b.rank(), orders);
}

namespace {

Integer gcd_of(const Integer& a, const Integer& b)
{
    Integer g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

}  // namespace

FGAbelianGroup tensor_product(const FGAbelianGroup& a, const FGAbelianGroup& b)
{
    std::vector<Integer> orders;
    for (std::size_t i = 0; i < b.rank(); ++i)
        orders.insert(orders.end(), a.torsion().begin(), a.torsion().end());
    for (std::size_t i = 0; i < a.rank(); ++i)
        orders.insert(orders.end(), b.torsion().begin(), b.torsion().end());
    for (const Integer& d : a.torsion())
        for (const Integer& e : b.torsion())
            orders.push_back(gcd_of(d, e));
    return FGAbelianGroup::from_cyclic(a.rank() * b.rank(), orders);
}

FGAbelianGroup tor(const FGAbelianGroup& a, const FGAbelianGroup& b)
{
    std::vector<Integer> orders;
    for (const Integer& d : a.torsion())
        for (const Integer& e : b.torsion())
            orders.push_back(gcd_of(d, e));
    return FGAbelianGroup::from_cyclic(0, orders);
}

// ---------------------------------------------------------------------------
// Smith normal form

namespace {

void swap_rows(IntMatrix& m, std::size_t a, std::size_t b)
{
    if (a == b)
        return;
    for (std::size_t j = 0; j < m.cols(); ++j)
        swap(m(a, j), m(b, j));
}

void swap_cols(IntMatrix& m, std::size_t a, std::size_t b)
{
    if (a == b)
        return;
    for (std::size_t i = 0; i < m.rows(); ++i)
        swap(m(i, a), m(i, b));
}

// row_target += factor * row_source
void add_row(IntMatrix& m, std::size_t target, std::size_t source, const Integer& factor)
{
    for (std::size_t j = 0; j < m.cols(); ++j)
        if (m(source, j) != 0)
            m(target, j) += factor * m(source, j);
}

// col_target += factor * col_source
void add_col(IntMatrix& m, std::size_t target, std::size_t source, const Integer& factor)
{
    for (std::size_t i = 0; i < m.rows(); ++i)
        if (m(i, source) != 0)
            m(i, target) += factor * m(i, source);
}

void negate_row(IntMatrix& m, std::size_t r)
{
    for (std::size_t j = 0; j < m.cols(); ++j)
        m(r, j) = -m(r, j);
}

struct Pivot {
    std::size_t row;
    std::size_t col;
};

// Smallest |a| in the submatrix starting at (t, t); row-major scan keeps the
// lowest row, then lowest column, on ties.
std::optional<Pivot> find_pivot(const IntMatrix& a, std::size_t t)
{
    std::optional<Pivot> best;
    Integer best_abs;
    for (std::size_t i = t; i < a.rows(); ++i)
        for (std::size_t j = t; j < a.cols(); ++j) {
            if (a(i, j) == 0)
                continue;
            Integer v = abs(a(i, j));
            if (!best || v < best_abs) {
                best = Pivot{i, j};
                best_abs = std::move(v);
            }
        }
    return best;
}

}  // namespace

std::size_t SNFDecomposition::rank() const
{
    std::size_t r = 0;
    const std::size_t n = std::min(D.rows(), D.cols());
    while (r < n && D(r, r) != 0)
        ++r;
    return r;
}

std::vector<Integer> SNFDecomposition::invariant_factors() const
{
    std::vector<Integer> out;
    for (std::size_t i = 0; i < rank(); ++i)
        out.push_back(D(i, i));
    return out;
}

SNFDecomposition smith_normal_form(const IntMatrix& m)
{
    IntMatrix a = m;
    IntMatrix u = IntMatrix::identity(m.rows());
    IntMatrix v = IntMatrix::identity(m.cols());
    const std::size_t steps = std::min(m.rows(), m.cols());

    for (std::size_t t = 0; t < steps; ++t) {
        bool finished = false;
        for (;;) {
            auto pivot = find_pivot(a, t);
            if (!pivot) {
                finished = true;
                break;
            }
            swap_rows(a, t, pivot->row);
            swap_rows(u, t, pivot->row);
            swap_cols(a, t, pivot->col);
            swap_cols(v, t, pivot->col);

            bool remainder = false;
            for (std::size_t i = t + 1; i < a.rows(); ++i) {
                if (a(i, t) == 0)
                    continue;
                Integer q = a(i, t) / a(t, t);
                if (q != 0) {
                    Integer neg = -q;
                    add_row(a, i, t, neg);
                    add_row(u, i, t, neg);
                }
                remainder = remainder || a(i, t) != 0;
            }
            for (std::size_t j = t + 1; j < a.cols(); ++j) {
                if (a(t, j) == 0)
                    continue;
                Integer q = a(t, j) / a(t, t);
                if (q != 0) {
                    Integer neg = -q;
                    add_col(a, j, t, neg);
                    add_col(v, j, t, neg);
                }
                remainder = remainder || a(t, j) != 0;
            }
            if (remainder)
                continue;

            // Enforce d_t | every remaining entry.
            std::optional<std::size_t> offending;
            for (std::size_t i = t + 1; i < a.rows() && !offending; ++i)
                for (std::size_t j = t + 1; j < a.cols(); ++j)
                    if (!mpz_divisible_p(a(i, j).get_mpz_t(), a(t, t).get_mpz_t())) {
                        offending = i;
                        break;
                    }
            if (offending) {
                add_row(a, t, *offending, Integer(1));
                add_row(u, t, *offending, Integer(1));
                continue;
            }
            break;
        }
        if (finished)
            break;
        if (a(t, t) < 0) {
            negate_row(a, t);
            negate_row(u, t);
        }
    }
    return SNFDecomposition{std::move(u), std::move(a), std::move(v)};
}

std::size_t rank(const IntMatrix& m)
{
    return smith_normal_form(m).rank();
}

IntMatrix kernel_basis(const IntMatrix& m)
{
    auto snf = smith_normal_form(m);
    const std::size_t r = snf.rank();
    return snf.V.column_range(r, m.cols() - r);
}

FGAbelianGroup cokernel(const IntMatrix& m)
{
    auto snf = smith_normal_form(m);
    std::vector<Integer> torsion;
    for (const Integer& d : snf.invariant_factors())
        if (d > 1)
            torsion.push_back(d);
    return FGAbelianGroup(m.rows() - snf.rank(), std::move(torsion));
}

// ---------------------------------------------------------------------------
// Hermite normal form and lattices

IntMatrix hermite_normal_form(const IntMatrix& m)
{
    IntMatrix a = m;
    std::size_t r = 0;
    for (std::size_t c = 0; c < a.cols() && r < a.rows(); ++c) {
        // Euclid on column c among rows r.. until a single nonzero remains.
        for (;;) {
            std::optional<std::size_t> best;
            for (std::size_t i = r; i < a.rows(); ++i)
                if (a(i, c) != 0 && (!best || abs(a(i, c)) < abs(a(*best, c))))
                    best = i;
            if (!best)
                break;
            swap_rows(a, r, *best);
            bool cleared = true;
            for (std::size_t i = r + 1; i < a.rows(); ++i) {
                if (a(i, c) == 0)
                    continue;
                Integer q = a(i, c) / a(r, c);
                add_row(a, i, r, Integer(-q));
                cleared = cleared && a(i, c) == 0;
            }
            if (cleared)
                break;
        }
        if (a(r, c) == 0)
            continue;
        if (a(r, c) < 0)
            negate_row(a, r);
        for (std::size_t i = 0; i < r; ++i) {
            Integer q;
            mpz_fdiv_q(q.get_mpz_t(), a(i, c).get_mpz_t(), a(r, c).get_mpz_t());
            if (q != 0)
                add_row(a, i, r, Integer(-q));
        }
        ++r;
    }
    return a.row_range(0, r);
}

IntMatrix column_lattice_basis(const IntMatrix& b)
{
    return hermite_normal_form(b.transpose()).transpose();
}

bool lattice_equal(const IntMatrix& b1, const IntMatrix& b2)
{
    if (b1.rows() != b2.rows())
        throw DimensionError("lattice_equal: row counts differ (" + std::to_string(b1.rows()) + " vs " +
                             std::to_string(b2.rows()) + ")");
    const IntMatrix h1 = hermite_normal_form(b1.transpose());
    const IntMatrix h2 = hermite_normal_form(b2.transpose());
    return h1 == h2;
}

bool is_saturated(const IntMatrix& b)
{
    return cokernel(b).is_torsion_free();
}

}  // namespace nccw
