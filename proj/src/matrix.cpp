#include "strata/matrix.hpp"

#include <optional>
#include <sstream>

namespace strata {
namespace exact {

Matrix::Matrix(FieldSpec spec, std::size_t rows, std::size_t cols)
    : spec_(spec), rows_(rows), cols_(cols), e_(rows * cols, Scalar::zero(spec)) {}

Matrix Matrix::identity(FieldSpec spec, std::size_t n) {
    Matrix m(spec, n, n);
    for (std::size_t i = 0; i < n; ++i)
        m.at(i, i) = Scalar::one(spec);
    return m;
}

Matrix Matrix::from_ints(FieldSpec spec, std::initializer_list<std::initializer_list<long>> grid) {
    std::size_t r = grid.size();
    std::size_t c = r == 0 ? 0 : grid.begin()->size();
    Matrix m(spec, r, c);
    std::size_t i = 0;
    for (const auto& row : grid) {
        check(row.size() == c, Errc::Dimension, "ragged initializer grid");
        std::size_t j = 0;
        for (long v : row)
            m.at(i, j++) = Scalar::of_int(spec, v);
        ++i;
    }
    return m;
}

Matrix Matrix::column(FieldSpec spec, std::initializer_list<long> entries) {
    Matrix m(spec, entries.size(), 1);
    std::size_t i = 0;
    for (long v : entries)
        m.at(i++, 0) = Scalar::of_int(spec, v);
    return m;
}

Scalar& Matrix::at(std::size_t r, std::size_t c) {
    check(r < rows_ && c < cols_, Errc::Dimension, "matrix index out of range");
    return e_[r * cols_ + c];
}

const Scalar& Matrix::at(std::size_t r, std::size_t c) const {
    check(r < rows_ && c < cols_, Errc::Dimension, "matrix index out of range");
    return e_[r * cols_ + c];
}

Matrix Matrix::operator+(const Matrix& o) const {
    require_same_field(spec_, o.spec_);
    check(rows_ == o.rows_ && cols_ == o.cols_, Errc::Dimension, "shape mismatch in +");
    Matrix m(spec_, rows_, cols_);
    for (std::size_t i = 0; i < e_.size(); ++i)
        m.e_[i] = e_[i] + o.e_[i];
    return m;
}

Matrix Matrix::operator-(const Matrix& o) const {
    require_same_field(spec_, o.spec_);
    check(rows_ == o.rows_ && cols_ == o.cols_, Errc::Dimension, "shape mismatch in -");
    Matrix m(spec_, rows_, cols_);
    for (std::size_t i = 0; i < e_.size(); ++i)
        m.e_[i] = e_[i] - o.e_[i];
    return m;
}

Matrix Matrix::operator*(const Matrix& o) const {
    require_same_field(spec_, o.spec_);
    check(cols_ == o.rows_, Errc::Dimension, "shape mismatch in *");
    Matrix m(spec_, rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = 0; k < cols_; ++k) {
            const Scalar& a = at(i, k);
            if (a.is_zero())
                continue;
            for (std::size_t j = 0; j < o.cols_; ++j)
                m.at(i, j) = m.at(i, j) + a * o.at(k, j);
        }
    return m;
}

Matrix Matrix::operator*(const Scalar& s) const {
    Matrix m(spec_, rows_, cols_);
    for (std::size_t i = 0; i < e_.size(); ++i)
        m.e_[i] = e_[i] * s;
    return m;
}

Matrix Matrix::operator-() const {
    Matrix m(spec_, rows_, cols_);
    for (std::size_t i = 0; i < e_.size(); ++i)
        m.e_[i] = -e_[i];
    return m;
}

Matrix Matrix::transpose() const {
    Matrix m(spec_, cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            m.at(j, i) = at(i, j);
    return m;
}

bool Matrix::operator==(const Matrix& o) const {
    return spec_ == o.spec_ && rows_ == o.rows_ && cols_ == o.cols_ && e_ == o.e_;
}

bool Matrix::is_zero() const {
    for (const auto& s : e_)
        if (!s.is_zero())
            return false;
    return true;
}

Matrix Matrix::row(std::size_t r) const {
    return submatrix(r, 0, 1, cols_);
}

Matrix Matrix::col(std::size_t c) const {
    return submatrix(0, c, rows_, 1);
}

Matrix Matrix::vstack(const Matrix& below) const {
    if (rows_ == 0 && cols_ == 0)
        return below;
    if (below.rows_ == 0 && below.cols_ == 0)
        return *this;
    require_same_field(spec_, below.spec_);
    check(cols_ == below.cols_, Errc::Dimension, "vstack column mismatch");
    Matrix m(spec_, rows_ + below.rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            m.at(i, j) = at(i, j);
    for (std::size_t i = 0; i < below.rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            m.at(rows_ + i, j) = below.at(i, j);
    return m;
}

Matrix Matrix::hstack(const Matrix& right) const {
    require_same_field(spec_, right.spec_);
    check(rows_ == right.rows_, Errc::Dimension, "hstack row mismatch");
    Matrix m(spec_, rows_, cols_ + right.cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j)
            m.at(i, j) = at(i, j);
        for (std::size_t j = 0; j < right.cols_; ++j)
            m.at(i, cols_ + j) = right.at(i, j);
    }
    return m;
}

Matrix Matrix::submatrix(std::size_t r0, std::size_t c0, std::size_t nrows, std::size_t ncols) const {
    check(r0 + nrows <= rows_ && c0 + ncols <= cols_, Errc::Dimension, "submatrix out of range");
    Matrix m(spec_, nrows, ncols);
    for (std::size_t i = 0; i < nrows; ++i)
        for (std::size_t j = 0; j < ncols; ++j)
            m.at(i, j) = at(r0 + i, c0 + j);
    return m;
}

Scalar Matrix::trace() const {
    check(rows_ == cols_, Errc::Dimension, "trace of non-square matrix");
    Scalar t = Scalar::zero(spec_);
    for (std::size_t i = 0; i < rows_; ++i)
        t = t + at(i, i);
    return t;
}

std::string Matrix::str() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < rows_; ++i) {
        os << "[";
        for (std::size_t j = 0; j < cols_; ++j)
            os << (j ? " " : "") << at(i, j).str();
        os << "]";
        if (i + 1 < rows_)
            os << "\n";
    }
    return os.str();
}

RrefResult rref(const Matrix& m) {
    RrefResult out;
    out.R = m;
    Matrix& R = out.R;
    std::size_t lead = 0;
    for (std::size_t col = 0; col < m.cols() && lead < m.rows(); ++col) {
        std::size_t piv = lead;
        while (piv < m.rows() && R.at(piv, col).is_zero())
            ++piv;
        if (piv == m.rows())
            continue;
        if (piv != lead)
            for (std::size_t j = 0; j < m.cols(); ++j)
                std::swap(R.at(piv, j), R.at(lead, j));
        Scalar inv = R.at(lead, col).inv();
        for (std::size_t j = 0; j < m.cols(); ++j)
            R.at(lead, j) = R.at(lead, j) * inv;
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == lead || R.at(i, col).is_zero())
                continue;
            Scalar f = R.at(i, col);
            for (std::size_t j = 0; j < m.cols(); ++j)
                R.at(i, j) = R.at(i, j) - f * R.at(lead, j);
        }
        out.pivots.push_back(col);
        ++lead;
    }
    out.rank = out.pivots.size();
    return out;
}

std::optional<Matrix> solve(const Matrix& A, const Matrix& b) {
    require_same_field(A.spec(), b.spec());
    check(A.rows() == b.rows(), Errc::Dimension, "solve: row counts differ");
    RrefResult r = rref(A.hstack(b));
    // a pivot inside the b-block means some column of b is inconsistent
    for (std::size_t p : r.pivots)
        if (p >= A.cols())
            return std::nullopt;
    Matrix x(A.spec(), A.cols(), b.cols());
    for (std::size_t i = 0; i < r.rank; ++i)
        for (std::size_t j = 0; j < b.cols(); ++j)
            x.at(r.pivots[i], j) = r.R.at(i, A.cols() + j);
    return x;
}

Matrix kernel_basis(const Matrix& m) {
    RrefResult r = rref(m);
    std::vector<std::size_t> free_cols;
    {
        std::size_t pi = 0;
        for (std::size_t c = 0; c < m.cols(); ++c) {
            if (pi < r.pivots.size() && r.pivots[pi] == c)
                ++pi;
            else
                free_cols.push_back(c);
        }
    }
    Matrix K(m.spec(), free_cols.size(), m.cols());
    for (std::size_t v = 0; v < free_cols.size(); ++v) {
        K.at(v, free_cols[v]) = Scalar::one(m.spec());
        for (std::size_t i = 0; i < r.rank; ++i)
            K.at(v, r.pivots[i]) = -r.R.at(i, free_cols[v]);
    }
    return rref(K).R; // canonical form
}

bool is_invertible(const Matrix& m) {
    return m.rows() == m.cols() && rref(m).rank == m.rows();
}

Matrix inverse(const Matrix& m) {
    check(m.rows() == m.cols(), Errc::Dimension, "inverse of non-square matrix");
    RrefResult r = rref(m.hstack(Matrix::identity(m.spec(), m.rows())));
    check(r.rank >= m.rows() && (m.rows() == 0 || r.pivots[m.rows() - 1] < m.cols()), Errc::Input,
          "matrix is singular");
    return r.R.submatrix(0, m.cols(), m.rows(), m.cols());
}

} // namespace exact
} // namespace strata
