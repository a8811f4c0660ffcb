#pragma once

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <vector>

#include "strata/scalar.hpp"

namespace strata {
namespace exact {

/// Dense matrix over one field, row-major. Zero-sized shapes are legal.
class Matrix {
public:
    Matrix() : spec_(FieldSpec::rationals()), rows_(0), cols_(0) {}
    Matrix(FieldSpec spec, std::size_t rows, std::size_t cols);
    static Matrix identity(FieldSpec spec, std::size_t n);
    static Matrix from_ints(FieldSpec spec, std::initializer_list<std::initializer_list<long>> grid);
    static Matrix column(FieldSpec spec, std::initializer_list<long> entries);

    const FieldSpec& spec() const { return spec_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Scalar& at(std::size_t r, std::size_t c);
    const Scalar& at(std::size_t r, std::size_t c) const;

    Matrix operator+(const Matrix& o) const;
    Matrix operator-(const Matrix& o) const;
    Matrix operator*(const Matrix& o) const;
    Matrix operator*(const Scalar& s) const;
    Matrix operator-() const;
    Matrix transpose() const;
    bool operator==(const Matrix& o) const;
    bool operator!=(const Matrix& o) const { return !(*this == o); }
    bool is_zero() const;

    Matrix row(std::size_t r) const;    // 1 x cols
    Matrix col(std::size_t c) const;    // rows x 1
    Matrix vstack(const Matrix& below) const;
    Matrix hstack(const Matrix& right) const;
    Matrix submatrix(std::size_t r0, std::size_t c0, std::size_t nrows, std::size_t ncols) const;
    Scalar trace() const;

    std::string str() const;

private:
    FieldSpec spec_;
    std::size_t rows_, cols_;
    std::vector<Scalar> e_;
};

struct RrefResult {
    Matrix R;
    std::size_t rank = 0;
    std::vector<std::size_t> pivots;
};

/// Unique reduced row-echelon form; pivot columns strictly increasing.
RrefResult rref(const Matrix& m);

/// One particular solution of A x = b (free variables zero), or nullopt when
/// the system is inconsistent. b may have several columns; each is solved.
std::optional<Matrix> solve(const Matrix& A, const Matrix& b);

/// RREF basis of the right null space, one basis vector per row.
Matrix kernel_basis(const Matrix& m);

bool is_invertible(const Matrix& m);
Matrix inverse(const Matrix& m); // throws on singular / non-square

} // namespace exact
} // namespace strata
