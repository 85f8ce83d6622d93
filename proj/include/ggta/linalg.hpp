#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ggta {

/// Thrown when a pivot falls below the singularity threshold.
class SingularSystem : public std::runtime_error {
public:
    explicit SingularSystem(const std::string& what) : std::runtime_error(what) {}
};

namespace linalg {

inline constexpr double kPivotThreshold = 1e-12;

/// Row-major dense matrix. Sized for the small systems the allocator builds,
/// not for general numerical work.
template <std::floating_point T>
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols, T fill = T{0})
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    DenseMatrix(std::size_t rows, std::size_t cols, std::vector<T> entries)
        : rows_(rows), cols_(cols), data_(std::move(entries)) {
        if (data_.size() != rows_ * cols_) {
            throw std::invalid_argument("DenseMatrix: entry count does not match rows*cols");
        }
    }

    static DenseMatrix identity(std::size_t n) {
        DenseMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = T{1};
        return m;
    }

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
    [[nodiscard]] bool square() const noexcept { return rows_ == cols_; }

    T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<T> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
    std::span<const T> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

    [[nodiscard]] std::span<const T> entries() const noexcept { return data_; }

    [[nodiscard]] bool all_finite() const {
        return std::all_of(data_.begin(), data_.end(), [](T v) { return std::isfinite(v); });
    }

    [[nodiscard]] std::vector<T> multiply(std::span<const T> x) const {
        if (x.size() != cols_) throw std::invalid_argument("DenseMatrix::multiply: dimension mismatch");
        std::vector<T> y(rows_, T{0});
        for (std::size_t r = 0; r < rows_; ++r) {
            T acc{0};
            for (std::size_t c = 0; c < cols_; ++c) acc += (*this)(r, c) * x[c];
            y[r] = acc;
        }
        return y;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

/// Solves A x = b by Gaussian elimination with partial (row) pivoting.
/// Throws SingularSystem when the largest remaining pivot is below
/// kPivotThreshold in magnitude.
template <std::floating_point T>
std::vector<T> solve_linear(DenseMatrix<T> a, std::vector<T> b) {
    if (!a.square()) throw std::invalid_argument("solve_linear: matrix is not square");
    if (b.size() != a.rows()) throw std::invalid_argument("solve_linear: rhs dimension mismatch");
    if (!a.all_finite()) throw std::invalid_argument("solve_linear: non-finite matrix entry");

    const std::size_t n = a.rows();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        T best = std::abs(a(col, col));
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::abs(a(r, col)) > best) {
                best = std::abs(a(r, col));
                pivot = r;
            }
        }
        if (best < static_cast<T>(kPivotThreshold)) {
            throw SingularSystem("solve_linear: pivot " + std::to_string(static_cast<double>(best)) +
                                 " below threshold at column " + std::to_string(col));
        }
        if (pivot != col) {
            std::swap_ranges(a.row(col).begin(), a.row(col).end(), a.row(pivot).begin());
            std::swap(b[col], b[pivot]);
        }
        const T diag = a(col, col);
        for (std::size_t r = col + 1; r < n; ++r) {
            const T factor = a(r, col) / diag;
            if (factor == T{0}) continue;
            a(r, col) = T{0};
            for (std::size_t c = col + 1; c < n; ++c) a(r, c) -= factor * a(col, c);
            b[r] -= factor * b[col];
        }
    }

    std::vector<T> x(n, T{0});
    for (std::size_t i = n; i-- > 0;) {
        T acc = b[i];
        for (std::size_t c = i + 1; c < n; ++c) acc -= a(i, c) * x[c];
        x[i] = acc / a(i, i);
    }
    return x;
}

template <std::floating_point T>
T residual_inf_norm(const DenseMatrix<T>& a, std::span<const T> x, std::span<const T> b) {
    const auto ax = a.multiply(x);
    T worst{0};
    for (std::size_t i = 0; i < ax.size(); ++i) worst = std::max(worst, std::abs(ax[i] - b[i]));
    return worst;
}

}  // namespace linalg
}  // namespace ggta
