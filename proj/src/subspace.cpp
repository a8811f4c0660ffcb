#include "strata/subspace.hpp"

namespace strata {
namespace exact {

Subspace Subspace::zero(FieldSpec spec, std::size_t ambient_dim) {
    Subspace s;
    s.ambient_ = ambient_dim;
    s.basis_ = Matrix(spec, 0, ambient_dim);
    return s;
}

Subspace Subspace::full(FieldSpec spec, std::size_t ambient_dim) {
    Subspace s;
    s.ambient_ = ambient_dim;
    s.basis_ = Matrix::identity(spec, ambient_dim);
    return s;
}

Subspace Subspace::from_rows(const Matrix& rows, std::size_t ambient_dim) {
    check(rows.cols() == ambient_dim, Errc::Dimension, "spanning rows have wrong width");
    RrefResult r = rref(rows);
    Subspace s;
    s.ambient_ = ambient_dim;
    s.basis_ = r.R.submatrix(0, 0, r.rank, ambient_dim);
    return s;
}

Subspace Subspace::from_vectors(const std::vector<Matrix>& columns, std::size_t ambient_dim, FieldSpec spec) {
    Matrix rows(spec, columns.size(), ambient_dim);
    for (std::size_t i = 0; i < columns.size(); ++i) {
        check(columns[i].rows() == ambient_dim && columns[i].cols() == 1, Errc::Dimension,
              "expected ambient-dim column vector");
        for (std::size_t j = 0; j < ambient_dim; ++j)
            rows.at(i, j) = columns[i].at(j, 0);
    }
    return from_rows(rows, ambient_dim);
}

Matrix Subspace::reduce(const Matrix& v) const {
    check(v.rows() == ambient_ && v.cols() == 1, Errc::Dimension, "reduce expects an ambient column vector");
    Matrix r = v;
    // pivots are strictly increasing; find them from the basis shape
    std::size_t col = 0;
    for (std::size_t i = 0; i < basis_.rows(); ++i) {
        while (col < ambient_ && basis_.at(i, col).is_zero())
            ++col;
        if (col == ambient_)
            break;
        Scalar f = r.at(col, 0); // copy: the pivot entry itself is cleared below
        if (!f.is_zero())
            for (std::size_t j = col; j < ambient_; ++j)
                r.at(j, 0) = r.at(j, 0) - f * basis_.at(i, j);
        ++col;
    }
    return r;
}

bool Subspace::contains(const Matrix& v) const {
    return reduce(v).is_zero();
}

bool Subspace::contains(const Subspace& o) const {
    check(ambient_ == o.ambient_, Errc::Dimension, "ambient dimension mismatch");
    for (std::size_t i = 0; i < o.dim(); ++i)
        if (!contains(o.basis_vector(i)))
            return false;
    return true;
}

Subspace Subspace::sum(const Subspace& o) const {
    check(ambient_ == o.ambient_, Errc::Dimension, "ambient dimension mismatch");
    require_same_field(spec(), o.spec());
    return from_rows(basis_.vstack(o.basis_), ambient_);
}

Subspace Subspace::intersect(const Subspace& o) const {
    check(ambient_ == o.ambient_, Errc::Dimension, "ambient dimension mismatch");
    require_same_field(spec(), o.spec());
    // Zassenhaus: reduce [U|U; V|0]; rows with zero left half carry the intersection
    std::size_t n = ambient_;
    Matrix big(spec(), dim() + o.dim(), 2 * n);
    for (std::size_t i = 0; i < dim(); ++i)
        for (std::size_t j = 0; j < n; ++j) {
            big.at(i, j) = basis_.at(i, j);
            big.at(i, n + j) = basis_.at(i, j);
        }
    for (std::size_t i = 0; i < o.dim(); ++i)
        for (std::size_t j = 0; j < n; ++j)
            big.at(dim() + i, j) = o.basis_.at(i, j);
    RrefResult r = rref(big);
    Matrix inter(spec(), 0, n);
    for (std::size_t i = 0; i < r.rank; ++i) {
        bool left_zero = true;
        for (std::size_t j = 0; j < n && left_zero; ++j)
            left_zero = r.R.at(i, j).is_zero();
        if (left_zero)
            inter = inter.vstack(r.R.submatrix(i, n, 1, n));
    }
    return from_rows(inter, n);
}

Matrix Subspace::coords_of(const Matrix& v) const {
    auto x = solve(basis_.transpose(), v);
    check(x.has_value(), Errc::Input, "vector outside subspace in coords_of");
    return *x;
}

} // namespace exact
} // namespace strata
