#pragma once

#include <memory>
#include <string>
#include <vector>

#include "strata/poly.hpp"
#include "strata/subspace.hpp"

namespace strata {
namespace alg {

using exact::FieldSpec;
using exact::Matrix;
using exact::Scalar;
using exact::Subspace;

class Algebra;

/// Element of a structure-constant algebra, held as a coordinate column.
/// The parent handle shares the algebra's immutable data, so elements stay
/// valid independently of the object they were created from.
struct AlgebraElement {
    AlgebraElement() = default;
    AlgebraElement(const Algebra& parent, Matrix coords);
    std::shared_ptr<const void> parent_id; // identity of the defining data
    Matrix coords;                         // n x 1

    bool is_zero() const { return coords.is_zero(); }
    bool operator==(const AlgebraElement& o) const { return coords == o.coords; }
};

enum class Side { Left, Right };
enum class Sidedness { Left, Right, TwoSided };

/// Finite-dimensional associative unital algebra given by structure constants
/// sc[i][j][k] (coefficient of e_k in e_i e_j) and the coordinates of 1.
/// Immutable after construction; copies share data.
class Algebra {
public:
    Algebra() = default;
    Algebra(FieldSpec spec, std::size_t dim, std::vector<Scalar> sc, Matrix unit);
    static Algebra field_as_algebra(FieldSpec spec); // the 1-dimensional algebra k

    const FieldSpec& spec() const { return d_->spec; }
    std::size_t dim() const { return d_->dim; }
    const Scalar& sc(std::size_t i, std::size_t j, std::size_t k) const;
    const Matrix& unit_coords() const { return d_->unit; }
    AlgebraElement unit() const { return AlgebraElement(*this, d_->unit); }
    AlgebraElement basis_element(std::size_t i) const;
    AlgebraElement element(Matrix coords) const { return AlgebraElement(*this, std::move(coords)); }
    AlgebraElement zero() const { return AlgebraElement(*this, Matrix(spec(), dim(), 1)); }

    /// Matrix of b -> e_i * b (Side::Left) or b -> b * e_i (Side::Right).
    const Matrix& basis_regular(std::size_t i, Side side) const;

    bool same_data(const Algebra& o) const { return d_ == o.d_; }
    std::shared_ptr<const void> data_id() const { return d_; }

private:
    struct Data {
        FieldSpec spec;
        std::size_t dim = 0;
        std::vector<Scalar> sc; // flattened n*n*n
        Matrix unit;
        std::vector<Matrix> left_mult, right_mult; // per basis element
    };
    std::shared_ptr<const Data> d_;
};

struct AlgebraReport {
    bool pass = true;
    std::vector<std::string> violations;
};

/// Checks associativity on all basis triples and the two-sided unit law.
/// Violations are reported, not thrown.
AlgebraReport algebra_verify(const Algebra& A);

AlgebraElement multiply(const Algebra& A, const AlgebraElement& a, const AlgebraElement& b);
AlgebraElement add(const AlgebraElement& a, const AlgebraElement& b);
AlgebraElement scale(const AlgebraElement& a, const Scalar& s);

/// Matrix of x -> a*x (left) or x -> x*a (right) in the algebra basis.
Matrix regular_rep(const Algebra& A, const AlgebraElement& a, Side side);

/// Smallest subspace containing the generators and closed under the
/// requested multiplications by basis elements.
Subspace ideal_generated(const Algebra& A, const std::vector<AlgebraElement>& gens, Sidedness sided);

/// Checks closure of I under two-sided multiplication by basis elements.
/// On failure returns the offending pair (basis index, ideal basis vector).
struct IdealCheck {
    bool is_ideal = true;
    std::size_t basis_index = 0;
    Matrix violating_vector;
    Side side = Side::Left;
};
IdealCheck check_two_sided_ideal(const Algebra& A, const Subspace& I);

struct QuotientAlgebra {
    Algebra Q;
    Matrix proj;    // dim Q x dim A
    Matrix section; // dim A x dim Q, proj * section = identity
};

/// Quotient by a verified two-sided ideal. The canonical basis of Q is the
/// set of non-pivot coordinates of I's RREF; the section maps them back with
/// zeros at pivot positions.
QuotientAlgebra quotient_algebra(const Algebra& A, const Subspace& I);

/// Corner algebra e*A*e for an idempotent e, with its embedding data.
struct CornerAlgebra {
    Algebra C;
    Matrix basis_rows; // dim C x dim A, rows = corner basis in A-coords
    Matrix embed(const Matrix& corner_coords) const;  // C-coords -> A-coords
    Matrix restrict(const Matrix& a_coords) const;    // A-coords -> C-coords (member required)
};
CornerAlgebra corner_algebra(const Algebra& A, const AlgebraElement& e);

/// Monic minimal polynomial of a as an element of A.
exact::Poly minimal_polynomial(const Algebra& A, const AlgebraElement& a);

/// Evaluates a polynomial at an algebra element.
AlgebraElement eval_poly(const Algebra& A, const exact::Poly& p, const AlgebraElement& a);

bool is_idempotent(const Algebra& A, const AlgebraElement& e);

/// True iff the span of pairwise products of J-basis vectors equals J.
/// J must be a two-sided ideal.
bool is_idempotent_subideal(const Algebra& A, const Subspace& J);

} // namespace alg
} // namespace strata
