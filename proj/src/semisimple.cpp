#include "strata/semisimple.hpp"

#include <algorithm>
#include <functional>

namespace strata {
namespace alg {

using exact::FieldKind;
using exact::Poly;
using exact::PolyFactor;

namespace {

// ---------------------------------------------------------------------------
// raw module helpers (spin / submodule / quotient on plain action matrices)
// ---------------------------------------------------------------------------

Subspace spin_vector(const RawModule& M, const Matrix& v) {
    Subspace span = Subspace::from_vectors({v}, M.dim, M.spec);
    for (;;) {
        std::size_t before = span.dim();
        std::vector<Matrix> next;
        for (std::size_t r = 0; r < span.dim(); ++r) {
            Matrix w = span.basis_vector(r);
            next.push_back(w);
            for (const Matrix& act : M.action)
                next.push_back(act * w);
        }
        span = Subspace::from_vectors(next, M.dim, M.spec);
        if (span.dim() == before)
            return span;
    }
}

RawModule restrict_to(const RawModule& M, const Subspace& W) {
    // action in W-coordinates: B^T * S = act * B^T
    RawModule out{M.spec, W.dim(), {}};
    Matrix Bt = W.basis().transpose();
    for (const Matrix& act : M.action) {
        auto S = exact::solve(Bt, act * Bt);
        check(S.has_value(), Errc::InternalCheck, "restricting action to a non-invariant subspace");
        out.action.push_back(*S);
    }
    return out;
}

RawModule quotient_by(const RawModule& M, const Subspace& W, Matrix* proj_out = nullptr) {
    std::size_t n = M.dim, q = n - W.dim();
    std::vector<std::size_t> rest;
    {
        std::vector<std::size_t> pivots;
        std::size_t col = 0;
        for (std::size_t i = 0; i < W.dim(); ++i) {
            while (W.basis().at(i, col).is_zero())
                ++col;
            pivots.push_back(col++);
        }
        std::size_t pi = 0;
        for (std::size_t c = 0; c < n; ++c)
            if (pi < pivots.size() && pivots[pi] == c)
                ++pi;
            else
                rest.push_back(c);
    }
    Matrix proj(M.spec, q, n);
    for (std::size_t c = 0; c < n; ++c) {
        Matrix e(M.spec, n, 1);
        e.at(c, 0) = exact::Scalar::one(M.spec);
        Matrix red = W.reduce(e);
        for (std::size_t i = 0; i < q; ++i)
            proj.at(i, c) = red.at(rest[i], 0);
    }
    Matrix section(M.spec, n, q);
    for (std::size_t i = 0; i < q; ++i)
        section.at(rest[i], i) = exact::Scalar::one(M.spec);
    RawModule out{M.spec, q, {}};
    for (const Matrix& act : M.action)
        out.action.push_back(proj * act * section);
    if (proj_out)
        *proj_out = proj;
    return out;
}

bool enumerable(const FieldSpec& spec, std::size_t dim, unsigned long cap) {
    if (spec.kind != FieldKind::PrimeField || dim == 0)
        return false;
    double total = 1;
    for (std::size_t i = 0; i < dim; ++i) {
        total *= static_cast<double>(spec.characteristic);
        if (total > static_cast<double>(cap) * 1.0001)
            return false;
    }
    return true;
}

/// Enumerates nonzero coordinate vectors of GF(p)^dim in lexicographic order,
/// stopping early when fn returns false. Returns false when p^dim exceeds cap.
bool for_each_nonzero_vector(FieldSpec spec, std::size_t dim, unsigned long cap,
                             const std::function<bool(const Matrix&)>& fn) {
    if (!enumerable(spec, dim, cap))
        return false;
    unsigned long p = spec.characteristic;
    std::vector<unsigned long> digits(dim, 0);
    for (;;) {
        std::size_t i = 0;
        while (i < dim && digits[i] + 1 == p)
            digits[i++] = 0;
        if (i == dim)
            return true; // wrapped: all vectors visited
        ++digits[i];
        Matrix v(spec, dim, 1);
        for (std::size_t r = 0; r < dim; ++r)
            v.at(r, 0) = exact::Scalar::of_int(spec, static_cast<long>(digits[r]));
        if (!fn(v))
            return true;
    }
}

/// Deterministic sweep of algebra elements: basis, pairwise sums, pairwise
/// products, then exhaustive enumeration (finite fields) or {0,+1,-1}
/// combinations (rationals), all budget-capped.
void sweep_elements(const Algebra& A, const Config& cfg, bool& enumerated_all,
                    const std::function<bool(const AlgebraElement&)>& fn) {
    enumerated_all = false;
    std::size_t n = A.dim(), used = 0;
    auto emit = [&](const AlgebraElement& x) {
        ++used;
        return fn(x);
    };
    for (std::size_t i = 0; i < n; ++i)
        if (!emit(A.basis_element(i)))
            return;
    for (std::size_t i = 0; i < n && used < cfg.sweep_budget; ++i)
        for (std::size_t j = i + 1; j < n && used < cfg.sweep_budget; ++j)
            if (!emit(add(A.basis_element(i), A.basis_element(j))))
                return;
    for (std::size_t i = 0; i < n && used < cfg.sweep_budget; ++i)
        for (std::size_t j = 0; j < n && used < cfg.sweep_budget; ++j)
            if (!emit(multiply(A, A.basis_element(i), A.basis_element(j))))
                return;
    if (A.spec().kind == FieldKind::PrimeField) {
        bool stopped = false;
        bool complete = for_each_nonzero_vector(A.spec(), n, cfg.exhaustion_cap, [&](const Matrix& v) {
            if (!fn(A.element(v))) {
                stopped = true;
                return false;
            }
            return true;
        });
        enumerated_all = complete && !stopped;
        return;
    }
    // rational combinations with coefficients in {0, 1, -1}
    std::vector<int> digits(n, 0);
    std::size_t combos = 0;
    for (;;) {
        std::size_t i = 0;
        while (i < n && digits[i] == 2)
            digits[i++] = 0;
        if (i == n || ++combos > cfg.combo_budget)
            return;
        ++digits[i];
        Matrix v(A.spec(), n, 1);
        for (std::size_t r = 0; r < n; ++r)
            v.at(r, 0) = exact::Scalar::of_int(A.spec(), digits[r] == 2 ? -1 : digits[r]);
        if (!fn(A.element(v)))
            return;
    }
}

// ---------------------------------------------------------------------------
// irreducibility / constituent splitting (meataxe-style)
// ---------------------------------------------------------------------------

std::optional<Subspace> proper_submodule(const RawModule& M, const Config& cfg) {
    check(M.dim > 0, Errc::InternalCheck, "splitting a zero module");
    if (M.dim == 1)
        return std::nullopt;
    auto try_vector = [&](const Matrix& v) -> std::optional<Subspace> {
        Subspace s = spin_vector(M, v);
        if (s.dim() > 0 && s.dim() < M.dim)
            return s;
        return std::nullopt;
    };
    for (std::size_t i = 0; i < M.dim; ++i) {
        Matrix v(M.spec, M.dim, 1);
        v.at(i, 0) = exact::Scalar::one(M.spec);
        if (auto s = try_vector(v))
            return s;
    }
    // Norton's test on singular elements of the acting algebra's image
    std::vector<Matrix> cands;
    for (const Matrix& a : M.action)
        cands.push_back(a);
    for (std::size_t i = 0; i < M.action.size(); ++i)
        for (std::size_t j = 0; j < M.action.size(); ++j) {
            cands.push_back(M.action[i] * M.action[j]);
            if (j > i)
                cands.push_back(M.action[i] + M.action[j]);
            if (cands.size() > cfg.sweep_budget)
                break;
        }
    for (const Matrix& theta : cands) {
        if (theta.is_zero())
            continue;
        Matrix K = exact::kernel_basis(theta);
        if (K.rows() == 0 || K.rows() == M.dim)
            continue;
        for (std::size_t r = 0; r < K.rows(); ++r)
            if (auto s = try_vector(K.row(r).transpose()))
                return s;
        // every kernel vector spins to all of M; check one dual kernel vector
        RawModule dual{M.spec, M.dim, {}};
        for (const Matrix& a : M.action)
            dual.action.push_back(a.transpose());
        Matrix Kt = exact::kernel_basis(theta.transpose());
        check(Kt.rows() > 0, Errc::InternalCheck, "transpose of a singular matrix must be singular");
        Subspace W = spin_vector(dual, Kt.row(0).transpose());
        if (W.dim() < M.dim) {
            // the perp of a proper dual submodule is a proper submodule
            Subspace perp = Subspace::from_rows(exact::kernel_basis(W.basis()), M.dim);
            check(perp.dim() > 0 && perp.dim() < M.dim, Errc::InternalCheck, "bad dual perp");
            return perp;
        }
        return std::nullopt; // Norton: irreducible, certified
    }
    // no singular element found in the sweep; finite fields allow exhaustion
    if (enumerable(M.spec, M.dim, cfg.exhaustion_cap)) {
        std::optional<Subspace> found;
        for_each_nonzero_vector(M.spec, M.dim, cfg.exhaustion_cap, [&](const Matrix& v) {
            if (auto s = try_vector(v)) {
                found = s;
                return false;
            }
            return true;
        });
        return found; // nullopt: every nonzero vector generates, irreducible
    }
    throw Error(Errc::Inapplicable,
                "cannot decide irreducibility: no singular acting element found and the field is too large "
                "to enumerate");
}

void constituents_rec(const RawModule& M, const Config& cfg, std::vector<RawModule>& out) {
    if (M.dim == 0)
        return;
    auto s = proper_submodule(M, cfg);
    if (!s.has_value()) {
        out.push_back(M);
        return;
    }
    constituents_rec(restrict_to(M, *s), cfg, out);
    constituents_rec(quotient_by(M, *s), cfg, out);
}

Subspace annihilator(const Algebra& A, const RawModule& M) {
    std::size_t n = A.dim(), d = M.dim;
    Matrix C(A.spec(), d * d, n);
    for (std::size_t t = 0; t < n; ++t)
        for (std::size_t r = 0; r < d; ++r)
            for (std::size_t c = 0; c < d; ++c)
                C.at(r * d + c, t) = M.action[t].at(r, c);
    return Subspace::from_rows(exact::kernel_basis(C), n);
}

// ---------------------------------------------------------------------------
// idempotent splitting of a semisimple algebra
// ---------------------------------------------------------------------------

std::vector<AlgebraElement> crt_idempotents(const Algebra& C, const AlgebraElement& z,
                                            const std::vector<PolyFactor>& factors) {
    Poly m(C.spec());
    m = factors[0].f;
    for (std::size_t i = 1; i < factors.size(); ++i)
        m = m * factors[i].f;
    std::vector<AlgebraElement> out;
    for (const auto& fac : factors) {
        Poly h = exact::divmod(m, fac.f).quot;
        exact::PolyEgcd eg = exact::poly_egcd(h, fac.f);
        check(!eg.g.is_zero() && eg.g.degree() == 0, Errc::InternalCheck,
              "CRT factors are not coprime");
        Poly ei = exact::poly_mod(eg.u * h, m);
        out.push_back(eval_poly(C, ei, z));
    }
    // exactness checks: orthogonal idempotents summing to 1
    AlgebraElement sum = C.zero();
    for (const auto& e : out) {
        check(is_idempotent(C, e), Errc::InternalCheck, "CRT element is not idempotent");
        sum = add(sum, e);
    }
    check(sum == C.unit(), Errc::InternalCheck, "CRT idempotents do not sum to 1");
    for (std::size_t i = 0; i < out.size(); ++i)
        for (std::size_t j = 0; j < out.size(); ++j)
            if (i != j)
                check(multiply(C, out[i], out[j]).is_zero(), Errc::InternalCheck,
                      "CRT idempotents are not orthogonal");
    return out;
}

/// Decomposes the unit of a semisimple algebra into orthogonal idempotents,
/// splitting as far as the deterministic sweep allows. `embed` maps this
/// algebra's coordinates into the ambient algebra's. `certified_all` reports
/// whether every returned summand is provably primitive.
void split_semisimple(const Algebra& C, const Config& cfg, const Matrix& embed,
                      std::vector<Matrix>& out_cols, bool& certified_all) {
    if (C.dim() == 1) {
        out_cols.push_back(embed * C.unit_coords());
        return;
    }
    bool enumerated_all = false;
    bool all_minpolys_irreducible = true;
    std::optional<std::pair<AlgebraElement, std::vector<PolyFactor>>> split;
    sweep_elements(C, cfg, enumerated_all, [&](const AlgebraElement& z) {
        Poly m = minimal_polynomial(C, z);
        if (m.degree() == 0)
            return true; // z == 0
        check(exact::is_squarefree(m), Errc::InternalCheck,
              "non-squarefree minimal polynomial in a semisimple algebra");
        auto factors = exact::split_squarefree(m);
        if (factors.size() >= 2) {
            split = {z, factors};
            return false;
        }
        all_minpolys_irreducible = all_minpolys_irreducible && factors[0].irreducible_certified;
        return true;
    });
    if (split.has_value()) {
        for (const AlgebraElement& e : crt_idempotents(C, split->first, split->second)) {
            CornerAlgebra corner = corner_algebra(C, e);
            split_semisimple(corner.C, cfg, embed * corner.basis_rows.transpose(), out_cols,
                             certified_all);
        }
        return;
    }
    // no splitting element found: this summand stays whole
    bool certified = enumerated_all || (is_commutative(C) && all_minpolys_irreducible);
    certified_all = certified_all && certified;
    out_cols.push_back(embed * C.unit_coords());
}

} // namespace

bool is_commutative(const Algebra& A) {
    for (std::size_t i = 0; i < A.dim(); ++i)
        for (std::size_t j = i + 1; j < A.dim(); ++j)
            if (!(multiply(A, A.basis_element(i), A.basis_element(j)) ==
                  multiply(A, A.basis_element(j), A.basis_element(i))))
                return false;
    return true;
}

std::vector<RawModule> regular_constituents(const Algebra& A, const Config& cfg) {
    RawModule reg{A.spec(), A.dim(), {}};
    for (std::size_t t = 0; t < A.dim(); ++t)
        reg.action.push_back(A.basis_regular(t, Side::Left));
    std::vector<RawModule> out;
    constituents_rec(reg, cfg, out);
    return out;
}

Subspace radical(const Algebra& A, const Config& cfg) {
    std::size_t n = A.dim();
    const FieldSpec& spec = A.spec();
    bool trace_form_ok =
        spec.kind == FieldKind::Rationals || spec.characteristic > n;
    if (trace_form_ok) {
        Matrix G(spec, n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j) {
                G.at(i, j) = (A.basis_regular(i, Side::Left) * A.basis_regular(j, Side::Left)).trace();
                G.at(j, i) = G.at(i, j);
            }
        Subspace rad = Subspace::from_rows(exact::kernel_basis(G), n);
        check(check_two_sided_ideal(A, rad).is_ideal, Errc::InternalCheck,
              "trace-form radical is not an ideal");
        return rad;
    }
    check(cfg.char_p_fallback, Errc::Inapplicable,
          "radical by trace form needs characteristic 0 or p > dim; the characteristic-p fallback is "
          "disabled");
    Subspace rad = Subspace::full(spec, n);
    for (const RawModule& M : regular_constituents(A, cfg))
        rad = rad.intersect(annihilator(A, M));
    check(check_two_sided_ideal(A, rad).is_ideal, Errc::InternalCheck,
          "annihilator radical is not an ideal");
    return rad;
}

AlgebraElement lift_idempotent_newton(const Algebra& A, const AlgebraElement& x) {
    AlgebraElement e = x;
    for (std::size_t iter = 0; iter <= A.dim() + 2; ++iter) {
        AlgebraElement e2 = multiply(A, e, e);
        if (e2 == e)
            return e;
        AlgebraElement e3 = multiply(A, e2, e);
        e = add(scale(e2, Scalar::of_int(A.spec(), 3)), scale(e3, Scalar::of_int(A.spec(), -2)));
    }
    throw Error(Errc::InternalCheck, "idempotent lift did not converge; input was not near-idempotent");
}

IdempotentSplit decompose_idempotents(const Algebra& A, const Config& cfg) {
    Subspace R = radical(A, cfg);
    QuotientAlgebra qa = quotient_algebra(A, R);
    std::vector<Matrix> cols;
    bool certified = true;
    split_semisimple(qa.Q, cfg, Matrix::identity(A.spec(), qa.Q.dim()), cols, certified);

    // lift sequentially; each lift is confined to the corner of what remains
    IdempotentSplit out;
    out.certified = certified;
    AlgebraElement complement = A.unit();
    for (std::size_t i = 0; i + 1 < cols.size(); ++i) {
        AlgebraElement pre = A.element(qa.section * cols[i]);
        AlgebraElement confined = multiply(A, multiply(A, complement, pre), complement);
        AlgebraElement e = lift_idempotent_newton(A, confined);
        out.idempotents.push_back(e);
        complement = add(complement, scale(e, Scalar::of_int(A.spec(), -1)));
    }
    out.idempotents.push_back(complement);

    AlgebraElement sum = A.zero();
    for (const auto& e : out.idempotents) {
        check(is_idempotent(A, e), Errc::InternalCheck, "lifted element is not idempotent");
        sum = add(sum, e);
    }
    check(sum == A.unit(), Errc::InternalCheck, "lifted idempotents do not sum to 1");
    for (std::size_t i = 0; i < out.idempotents.size(); ++i)
        for (std::size_t j = 0; j < out.idempotents.size(); ++j)
            if (i != j)
                check(multiply(A, out.idempotents[i], out.idempotents[j]).is_zero(),
                      Errc::InternalCheck, "lifted idempotents are not orthogonal");
    std::sort(out.idempotents.begin(), out.idempotents.end(),
              [](const AlgebraElement& a, const AlgebraElement& b) {
                  return a.coords.str() < b.coords.str();
              });
    return out;
}

std::vector<AlgebraElement> primitive_idempotents(const Algebra& A, const Config& cfg) {
    IdempotentSplit s = decompose_idempotents(A, cfg);
    if (!s.certified)
        throw InconclusiveSplit("primitivity of the idempotent decomposition could not be certified",
                                s.idempotents);
    return s.idempotents;
}

IdempotentVerdict division_verdict(const Algebra& D, const Config& cfg) {
    Subspace R;
    try {
        R = radical(D, cfg);
    } catch (const Error& e) {
        if (e.code() == Errc::Inapplicable)
            return {VerdictStatus::Inconclusive, std::nullopt, e.what()};
        throw;
    }
    if (!R.is_zero())
        return {VerdictStatus::NotDivision, D.element(R.basis_vector(0)),
                "nonzero radical: nilpotent zero divisor"};
    if (D.spec().kind == FieldKind::PrimeField) {
        std::optional<AlgebraElement> bad;
        bool complete = for_each_nonzero_vector(D.spec(), D.dim(), cfg.exhaustion_cap, [&](const Matrix& v) {
            if (!exact::is_invertible(regular_rep(D, D.element(v), Side::Right))) {
                bad = D.element(v);
                return false;
            }
            return true;
        });
        if (bad.has_value())
            return {VerdictStatus::NotDivision, bad, "exhaustive search found a zero divisor"};
        if (complete)
            return {VerdictStatus::Division, std::nullopt, "exhaustive invertibility check"};
        // fall through to splitting when the field is too large to enumerate
    }
    std::vector<Matrix> cols;
    bool certified = true;
    split_semisimple(D, cfg, Matrix::identity(D.spec(), D.dim()), cols, certified);
    if (cols.size() >= 2) {
        AlgebraElement e = D.element(cols[0]);
        return {VerdictStatus::NotDivision, e, "nontrivial idempotent"};
    }
    if (certified)
        return {VerdictStatus::Division, std::nullopt, "no zero divisors: certified by splitting sweep"};
    return {VerdictStatus::Inconclusive, std::nullopt,
            "no splitting found but primitivity could not be certified"};
}

IdempotentVerdict local_verdict(const Algebra& D, const Config& cfg) {
    Subspace R;
    try {
        R = radical(D, cfg);
    } catch (const Error& e) {
        if (e.code() == Errc::Inapplicable)
            return {VerdictStatus::Inconclusive, std::nullopt, e.what()};
        throw;
    }
    QuotientAlgebra qa = quotient_algebra(D, R);
    IdempotentVerdict dv = division_verdict(qa.Q, cfg);
    if (dv.status == VerdictStatus::Division)
        return {VerdictStatus::Local, std::nullopt, "semisimple quotient is a division ring"};
    if (dv.status == VerdictStatus::Inconclusive)
        return {VerdictStatus::Inconclusive, std::nullopt, dv.detail};
    // lift the witness when it happens to be an idempotent of the quotient
    AlgebraElement w = *dv.witness;
    AlgebraElement pre = D.element(qa.section * w.coords);
    std::optional<AlgebraElement> witness;
    if (is_idempotent(qa.Q, w))
        witness = lift_idempotent_newton(D, pre);
    else
        witness = pre;
    return {VerdictStatus::NotLocal, witness, "semisimple quotient has " + dv.detail};
}

} // namespace alg
} // namespace strata
