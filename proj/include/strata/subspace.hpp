#pragma once

#include "strata/matrix.hpp"

namespace strata {
namespace exact {

/// A subspace of k^n in canonical form: basis rows in RREF with strictly
/// increasing pivots. Equality of subspaces is equality of these matrices.
class Subspace {
public:
    Subspace() = default;
    static Subspace zero(FieldSpec spec, std::size_t ambient_dim);
    static Subspace full(FieldSpec spec, std::size_t ambient_dim);
    /// Canonicalizes arbitrary spanning rows (zero rows dropped).
    static Subspace from_rows(const Matrix& rows, std::size_t ambient_dim);
    static Subspace from_vectors(const std::vector<Matrix>& columns, std::size_t ambient_dim, FieldSpec spec);

    std::size_t ambient_dim() const { return ambient_; }
    std::size_t dim() const { return basis_.rows(); }
    const Matrix& basis() const { return basis_; }
    const FieldSpec& spec() const { return basis_.spec(); }
    Matrix basis_vector(std::size_t i) const { return basis_.row(i).transpose(); } // column form

    bool contains(const Matrix& column_vector) const;
    bool contains(const Subspace& other) const;
    bool operator==(const Subspace& o) const { return ambient_ == o.ambient_ && basis_ == o.basis_; }
    bool operator!=(const Subspace& o) const { return !(*this == o); }
    bool is_zero() const { return dim() == 0; }

    Subspace sum(const Subspace& o) const;
    Subspace intersect(const Subspace& o) const; // Zassenhaus block reduction

    /// Residue of v after eliminating pivot coordinates; zero iff v is a member.
    Matrix reduce(const Matrix& column_vector) const;

    /// Coordinates of v in the row basis, when v is a member.
    Matrix coords_of(const Matrix& column_vector) const;

private:
    std::size_t ambient_ = 0;
    Matrix basis_; // RREF rows
};

} // namespace exact
} // namespace strata
