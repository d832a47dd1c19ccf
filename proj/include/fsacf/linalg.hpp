#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace fsacf::linalg {

/// Dense row-major matrix.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix identity(std::size_t n);

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
    [[nodiscard]] std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
    [[nodiscard]] std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
    [[nodiscard]] std::span<const double> data() const noexcept { return data_; }

    [[nodiscard]] Matrix transpose() const;
    [[nodiscard]] double frobenius_norm() const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

[[nodiscard]] Matrix multiply(const Matrix& a, const Matrix& b);
/// a' b without forming the transpose.
[[nodiscard]] Matrix multiply_transposed_left(const Matrix& a, const Matrix& b);

/// Eigenvalues in descending order; column k of vectors is the k-th eigenvector.
struct SymmetricEigen {
    std::vector<double> values;
    Matrix vectors;
    std::size_t sweeps = 0;
};

/**
 * @brief Cyclic Jacobi eigendecomposition of a symmetric matrix.
 *
 * Stops once the off-diagonal Frobenius mass falls below
 * relative_tolerance * |A|_F.
 */
[[nodiscard]] SymmetricEigen jacobi_eigen(Matrix a, double relative_tolerance = 1e-12, std::size_t max_sweeps = 100);

class SingularMatrixError : public std::runtime_error {
public:
    explicit SingularMatrixError(const std::string& what) : std::runtime_error(what) {}
};

/**
 * @brief Solves A X = B for symmetric positive-definite A by Cholesky.
 *
 * @throws SingularMatrixError when a pivot drops below pivot_floor times the
 * largest diagonal entry of A.
 */
[[nodiscard]] Matrix cholesky_solve(const Matrix& a, const Matrix& b, double pivot_floor = 1e-12);

}  // namespace fsacf::linalg
