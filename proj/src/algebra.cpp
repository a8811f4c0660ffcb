#include "strata/algebra.hpp"

#include <sstream>

namespace strata {
namespace alg {

AlgebraElement::AlgebraElement(const Algebra& parent, Matrix coords_)
    : parent_id(parent.data_id()), coords(std::move(coords_)) {
    check(coords.rows() == parent.dim() && coords.cols() == 1, Errc::Dimension,
          "element coordinate vector has wrong shape");
}

Algebra::Algebra(FieldSpec spec, std::size_t dim, std::vector<Scalar> sc, Matrix unit) {
    check(sc.size() == dim * dim * dim, Errc::Dimension, "structure constant tensor has wrong size");
    check(unit.rows() == dim && unit.cols() == 1, Errc::Dimension, "unit vector has wrong shape");
    auto d = std::make_shared<Data>();
    d->spec = spec;
    d->dim = dim;
    d->sc = std::move(sc);
    d->unit = std::move(unit);
    for (std::size_t t = 0; t < dim; ++t) {
        Matrix L(spec, dim, dim), R(spec, dim, dim);
        for (std::size_t j = 0; j < dim; ++j)
            for (std::size_t k = 0; k < dim; ++k) {
                L.at(k, j) = d->sc[(t * dim + j) * dim + k]; // e_t * e_j
                R.at(k, j) = d->sc[(j * dim + t) * dim + k]; // e_j * e_t
            }
        d->left_mult.push_back(std::move(L));
        d->right_mult.push_back(std::move(R));
    }
    d_ = std::move(d);
}

Algebra Algebra::field_as_algebra(FieldSpec spec) {
    std::vector<Scalar> sc{Scalar::one(spec)};
    Matrix unit(spec, 1, 1);
    unit.at(0, 0) = Scalar::one(spec);
    return Algebra(spec, 1, std::move(sc), std::move(unit));
}

const Scalar& Algebra::sc(std::size_t i, std::size_t j, std::size_t k) const {
    return d_->sc[(i * d_->dim + j) * d_->dim + k];
}

AlgebraElement Algebra::basis_element(std::size_t i) const {
    check(i < dim(), Errc::Dimension, "basis index out of range");
    Matrix c(spec(), dim(), 1);
    c.at(i, 0) = Scalar::one(spec());
    return AlgebraElement(*this, std::move(c));
}

const Matrix& Algebra::basis_regular(std::size_t i, Side side) const {
    check(i < dim(), Errc::Dimension, "basis index out of range");
    return side == Side::Left ? d_->left_mult[i] : d_->right_mult[i];
}

namespace {

void require_same_parent(const AlgebraElement& a, const AlgebraElement& b) {
    check(a.parent_id == b.parent_id, Errc::Input, "elements of different algebras");
}

} // namespace

AlgebraElement multiply(const Algebra& A, const AlgebraElement& a, const AlgebraElement& b) {
    require_same_parent(a, b);
    check(a.parent_id == A.data_id(), Errc::Input, "element does not belong to this algebra");
    Matrix out(A.spec(), A.dim(), 1);
    for (std::size_t i = 0; i < A.dim(); ++i) {
        const Scalar& ai = a.coords.at(i, 0);
        if (ai.is_zero())
            continue;
        out = out + (A.basis_regular(i, Side::Left) * b.coords) * ai;
    }
    return AlgebraElement(A, std::move(out));
}

AlgebraElement add(const AlgebraElement& a, const AlgebraElement& b) {
    require_same_parent(a, b);
    AlgebraElement r = a;
    r.coords = a.coords + b.coords;
    return r;
}

AlgebraElement scale(const AlgebraElement& a, const Scalar& s) {
    AlgebraElement r = a;
    r.coords = a.coords * s;
    return r;
}

Matrix regular_rep(const Algebra& A, const AlgebraElement& a, Side side) {
    Matrix out(A.spec(), A.dim(), A.dim());
    for (std::size_t i = 0; i < A.dim(); ++i) {
        const Scalar& ai = a.coords.at(i, 0);
        if (ai.is_zero())
            continue;
        out = out + A.basis_regular(i, side) * ai;
    }
    return out;
}

AlgebraReport algebra_verify(const Algebra& A) {
    AlgebraReport rep;
    std::size_t n = A.dim();
    for (std::size_t i = 0; i < n; ++i) {
        // (e_i e_j) e_k vs e_i (e_j e_k), via precomputed regular matrices:
        // associativity on all triples is L_{e_i e_j} = L_i L_j applied to e_k
        for (std::size_t j = 0; j < n; ++j) {
            Matrix prod = A.basis_regular(i, Side::Left) * A.basis_element(j).coords;
            Matrix lhs(A.spec(), n, n);
            for (std::size_t t = 0; t < n; ++t)
                if (!prod.at(t, 0).is_zero())
                    lhs = lhs + A.basis_regular(t, Side::Left) * prod.at(t, 0);
            Matrix rhs = A.basis_regular(i, Side::Left) * A.basis_regular(j, Side::Left);
            if (lhs != rhs)
                for (std::size_t k = 0; k < n; ++k)
                    if (lhs.col(k) != rhs.col(k)) {
                        std::ostringstream os;
                        os << "associativity fails on basis triple (" << i << "," << j << "," << k << ")";
                        rep.violations.push_back(os.str());
                    }
        }
    }
    AlgebraElement one = A.unit();
    for (std::size_t i = 0; i < n; ++i) {
        AlgebraElement e = A.basis_element(i);
        if (!(multiply(A, one, e) == e))
            rep.violations.push_back("left unit law fails on basis element " + std::to_string(i));
        if (!(multiply(A, e, one) == e))
            rep.violations.push_back("right unit law fails on basis element " + std::to_string(i));
    }
    rep.pass = rep.violations.empty();
    return rep;
}

Subspace ideal_generated(const Algebra& A, const std::vector<AlgebraElement>& gens, Sidedness sided) {
    std::vector<Matrix> vs;
    for (const auto& g : gens)
        vs.push_back(g.coords);
    Subspace span = Subspace::from_vectors(vs, A.dim(), A.spec());
    for (;;) {
        std::size_t before = span.dim();
        std::vector<Matrix> next;
        for (std::size_t r = 0; r < span.dim(); ++r) {
            Matrix v = span.basis_vector(r);
            next.push_back(v);
            for (std::size_t t = 0; t < A.dim(); ++t) {
                if (sided != Sidedness::Right)
                    next.push_back(A.basis_regular(t, Side::Left) * v);
                if (sided != Sidedness::Left)
                    next.push_back(A.basis_regular(t, Side::Right) * v);
            }
        }
        span = Subspace::from_vectors(next, A.dim(), A.spec());
        if (span.dim() == before)
            return span;
    }
}

IdealCheck check_two_sided_ideal(const Algebra& A, const Subspace& I) {
    check(I.ambient_dim() == A.dim(), Errc::Dimension, "ideal lives in the wrong space");
    for (std::size_t r = 0; r < I.dim(); ++r) {
        Matrix v = I.basis_vector(r);
        for (std::size_t t = 0; t < A.dim(); ++t) {
            if (!I.contains(A.basis_regular(t, Side::Left) * v))
                return {false, t, v, Side::Left};
            if (!I.contains(A.basis_regular(t, Side::Right) * v))
                return {false, t, v, Side::Right};
        }
    }
    return {};
}

QuotientAlgebra quotient_algebra(const Algebra& A, const Subspace& I) {
    IdealCheck ic = check_two_sided_ideal(A, I);
    if (!ic.is_ideal) {
        std::ostringstream os;
        os << "not a two-sided ideal: basis element " << ic.basis_index
           << (ic.side == Side::Left ? " * v" : ", v * it") << " leaves the subspace";
        throw Error(Errc::NotIdeal, os.str());
    }
    std::size_t n = A.dim(), q = n - I.dim();
    // complementary coordinates = non-pivot columns of I's RREF
    std::vector<std::size_t> pivots, rest;
    {
        std::size_t col = 0;
        for (std::size_t i = 0; i < I.dim(); ++i) {
            while (I.basis().at(i, col).is_zero())
                ++col;
            pivots.push_back(col++);
        }
        std::size_t pi = 0;
        for (std::size_t c = 0; c < n; ++c) {
            if (pi < pivots.size() && pivots[pi] == c)
                ++pi;
            else
                rest.push_back(c);
        }
    }
    Matrix proj(A.spec(), q, n), section(A.spec(), n, q);
    for (std::size_t i = 0; i < q; ++i)
        section.at(rest[i], i) = Scalar::one(A.spec());
    // proj(v) = complementary coordinates of (v reduced modulo I)
    for (std::size_t c = 0; c < n; ++c) {
        Matrix e(A.spec(), n, 1);
        e.at(c, 0) = Scalar::one(A.spec());
        Matrix red = I.reduce(e);
        for (std::size_t i = 0; i < q; ++i)
            proj.at(i, c) = red.at(rest[i], 0);
    }
    std::vector<Scalar> sc(q * q * q, Scalar::zero(A.spec()));
    for (std::size_t i = 0; i < q; ++i)
        for (std::size_t j = 0; j < q; ++j) {
            AlgebraElement prod =
                multiply(A, A.element(section.col(i)), A.element(section.col(j)));
            Matrix pc = proj * prod.coords;
            for (std::size_t k = 0; k < q; ++k)
                sc[(i * q + j) * q + k] = pc.at(k, 0);
        }
    Matrix unit = proj * A.unit_coords();
    return {Algebra(A.spec(), q, std::move(sc), std::move(unit)), std::move(proj), std::move(section)};
}

Matrix CornerAlgebra::embed(const Matrix& corner_coords) const {
    return basis_rows.transpose() * corner_coords;
}

Matrix CornerAlgebra::restrict(const Matrix& a_coords) const {
    auto x = exact::solve(basis_rows.transpose(), a_coords);
    check(x.has_value(), Errc::Input, "vector outside the corner subspace");
    return *x;
}

CornerAlgebra corner_algebra(const Algebra& A, const AlgebraElement& e) {
    check(is_idempotent(A, e), Errc::Input, "corner algebra requires an idempotent");
    std::vector<Matrix> gens;
    for (std::size_t t = 0; t < A.dim(); ++t)
        gens.push_back(multiply(A, multiply(A, e, A.basis_element(t)), e).coords);
    Subspace sp = Subspace::from_vectors(gens, A.dim(), A.spec());
    std::size_t c = sp.dim();
    CornerAlgebra out;
    out.basis_rows = sp.basis();
    std::vector<Scalar> sc(c * c * c, Scalar::zero(A.spec()));
    for (std::size_t i = 0; i < c; ++i)
        for (std::size_t j = 0; j < c; ++j) {
            AlgebraElement prod =
                multiply(A, A.element(sp.basis_vector(i)), A.element(sp.basis_vector(j)));
            Matrix pc = sp.coords_of(prod.coords);
            for (std::size_t k = 0; k < c; ++k)
                sc[(i * c + j) * c + k] = pc.at(k, 0);
        }
    Matrix unit = sp.coords_of(e.coords);
    out.C = Algebra(A.spec(), c, std::move(sc), std::move(unit));
    return out;
}

exact::Poly minimal_polynomial(const Algebra& A, const AlgebraElement& a) {
    std::size_t n = A.dim();
    std::vector<Matrix> powers; // coords of a^0, a^1, ...
    AlgebraElement p = A.unit();
    for (std::size_t k = 0; k <= n; ++k) {
        Matrix stacked(A.spec(), n, powers.size());
        for (std::size_t c = 0; c < powers.size(); ++c)
            for (std::size_t r = 0; r < n; ++r)
                stacked.at(r, c) = powers[c].at(r, 0);
        auto x = exact::solve(stacked, p.coords);
        if (x.has_value()) {
            // a^k = sum x_i a^i gives the monic minimal polynomial
            std::vector<Scalar> coeffs(k + 1, Scalar::zero(A.spec()));
            for (std::size_t i = 0; i < k; ++i)
                coeffs[i] = -x->at(i, 0);
            coeffs[k] = Scalar::one(A.spec());
            return exact::Poly(A.spec(), std::move(coeffs));
        }
        powers.push_back(p.coords);
        p = multiply(A, p, a);
    }
    throw Error(Errc::InternalCheck, "no minimal polynomial within dim+1 powers");
}

AlgebraElement eval_poly(const Algebra& A, const exact::Poly& p, const AlgebraElement& a) {
    AlgebraElement acc = A.zero();
    for (std::size_t i = p.coeffs().size(); i-- > 0;) {
        acc = multiply(A, acc, a);
        acc = add(acc, scale(A.unit(), p.coeff(i)));
    }
    return acc;
}

bool is_idempotent(const Algebra& A, const AlgebraElement& e) {
    return multiply(A, e, e) == e;
}

bool is_idempotent_subideal(const Algebra& A, const Subspace& J) {
    IdealCheck ic = check_two_sided_ideal(A, J);
    check(ic.is_ideal, Errc::NotIdeal, "is_idempotent_subideal requires a two-sided ideal");
    std::vector<Matrix> prods;
    for (std::size_t i = 0; i < J.dim(); ++i)
        for (std::size_t j = 0; j < J.dim(); ++j)
            prods.push_back(
                multiply(A, A.element(J.basis_vector(i)), A.element(J.basis_vector(j))).coords);
    return Subspace::from_vectors(prods, A.dim(), A.spec()) == J;
}

} // namespace alg
} // namespace strata
