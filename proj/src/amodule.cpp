#include "strata/repthy.hpp"

namespace strata {
namespace rep {

using alg::multiply;
using exact::Scalar;

AModule::AModule(Algebra A, Side side, std::vector<Matrix> action_mats) {
    auto d = std::make_shared<Data>();
    d->A = std::move(A);
    d->side = side;
    d->action = std::move(action_mats);
    check(d->action.size() == d->A.dim(), Errc::Dimension, "one action matrix per basis element");
    d->dim = d->action.empty() ? 0 : d->action[0].rows();
    for (const Matrix& m : d->action)
        check(m.rows() == d->dim && m.cols() == d->dim, Errc::Dimension,
              "action matrices must be square of the module dimension");
    d_ = std::move(d);

    // the action must respect the structure constants and the unit
    const Algebra& par = d_->A;
    Matrix unit_act = act(par.unit_coords());
    check(unit_act == Matrix::identity(par.spec(), dim()), Errc::Input,
          "module action: unit does not act as identity");
    for (std::size_t s = 0; s < par.dim(); ++s)
        for (std::size_t t = 0; t < par.dim(); ++t) {
            Matrix composed =
                side == Side::Left ? action(s) * action(t) : action(t) * action(s);
            Matrix prod = act(multiply(par, par.basis_element(s), par.basis_element(t)).coords);
            check(composed == prod, Errc::Input,
                  "module action does not respect the structure constants");
        }
}

AModule AModule::regular(const Algebra& A, Side side) {
    std::vector<Matrix> action;
    for (std::size_t t = 0; t < A.dim(); ++t)
        action.push_back(A.basis_regular(t, side));
    return AModule(A, side, std::move(action));
}

AModule AModule::from_std(const Algebra& A, const StdModule& sm) {
    return AModule(A, sm.side, sm.A_action);
}

Matrix AModule::act(const Matrix& element_coords) const {
    Matrix out(d_->A.spec(), dim(), dim());
    for (std::size_t t = 0; t < d_->A.dim(); ++t)
        if (!element_coords.at(t, 0).is_zero())
            out = out + d_->action[t] * element_coords.at(t, 0);
    return out;
}

HomBasis hom_space(const AModule& M, const AModule& N) {
    check(M.side() == N.side(), Errc::Input, "hom_space requires modules on the same side");
    check(M.algebra().same_data(N.algebra()), Errc::Input,
          "hom_space requires modules over the same algebra");
    std::size_t n = M.algebra().dim(), dm = M.dim(), dn = N.dim();
    Matrix C(M.algebra().spec(), n * dn * dm, dn * dm);
    std::size_t row = 0;
    for (std::size_t t = 0; t < n; ++t) {
        const Matrix& rm = M.action(t);
        const Matrix& rn = N.action(t);
        for (std::size_t r = 0; r < dn; ++r)
            for (std::size_t c = 0; c < dm; ++c) {
                // (rho_N T - T rho_M)[r][c] = 0, unknowns T[s][c'] at s*dm+c'
                for (std::size_t s = 0; s < dn; ++s)
                    C.at(row, s * dm + c) = C.at(row, s * dm + c) + rn.at(r, s);
                for (std::size_t s = 0; s < dm; ++s)
                    C.at(row, r * dm + s) = C.at(row, r * dm + s) - rm.at(s, c);
                ++row;
            }
    }
    Matrix K = exact::kernel_basis(C);
    HomBasis out;
    out.dim = K.rows();
    for (std::size_t v = 0; v < K.rows(); ++v) {
        Matrix T(M.algebra().spec(), dn, dm);
        for (std::size_t r = 0; r < dn; ++r)
            for (std::size_t c = 0; c < dm; ++c)
                T.at(r, c) = K.at(v, r * dm + c);
        out.basis.push_back(std::move(T));
    }
    return out;
}

Subspace spin(const AModule& M, const Matrix& v) {
    Subspace span = Subspace::from_vectors({v}, M.dim(), M.algebra().spec());
    for (;;) {
        std::size_t before = span.dim();
        std::vector<Matrix> next;
        for (std::size_t r = 0; r < span.dim(); ++r) {
            Matrix w = span.basis_vector(r);
            next.push_back(w);
            for (std::size_t t = 0; t < M.algebra().dim(); ++t)
                next.push_back(M.action(t) * w);
        }
        span = Subspace::from_vectors(next, M.dim(), M.algebra().spec());
        if (span.dim() == before)
            return span;
    }
}

AModule submodule(const AModule& M, const Subspace& W) {
    Matrix Bt = W.basis().transpose();
    std::vector<Matrix> action;
    for (std::size_t t = 0; t < M.algebra().dim(); ++t) {
        auto S = exact::solve(Bt, M.action(t) * Bt);
        check(S.has_value(), Errc::Input, "subspace is not invariant under the action");
        action.push_back(*S);
    }
    return AModule(M.algebra(), M.side(), std::move(action));
}

AModule quotient_module(const AModule& M, const Subspace& W, Matrix* proj_out) {
    std::size_t n = M.dim(), q = n - W.dim();
    const auto spec = M.algebra().spec();
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
    Matrix proj(spec, q, n), section(spec, n, q);
    for (std::size_t i = 0; i < q; ++i)
        section.at(rest[i], i) = Scalar::one(spec);
    for (std::size_t c = 0; c < n; ++c) {
        Matrix e(spec, n, 1);
        e.at(c, 0) = Scalar::one(spec);
        Matrix red = W.reduce(e);
        for (std::size_t i = 0; i < q; ++i)
            proj.at(i, c) = red.at(rest[i], 0);
    }
    std::vector<Matrix> action;
    for (std::size_t t = 0; t < M.algebra().dim(); ++t)
        action.push_back(proj * M.action(t) * section);
    if (proj_out)
        *proj_out = proj;
    return AModule(M.algebra(), M.side(), std::move(action));
}

Subspace module_radical(const AModule& M, const Config& cfg) {
    Subspace radA = alg::radical(M.algebra(), cfg);
    std::vector<Matrix> gens;
    for (std::size_t r = 0; r < radA.dim(); ++r) {
        Matrix act = M.act(radA.basis_vector(r));
        for (std::size_t c = 0; c < M.dim(); ++c)
            gens.push_back(act.col(c));
    }
    return Subspace::from_vectors(gens, M.dim(), M.algebra().spec());
}

ProjectiveData projective_data(const Algebra& A, Side side, const Config& cfg) {
    ProjectiveData pd;
    pd.idempotents = alg::primitive_idempotents(A, cfg);
    AModule reg = AModule::regular(A, side);
    Subspace radA = alg::radical(A, cfg);
    for (const AlgebraElement& e : pd.idempotents) {
        // A e (left) or e A (right) as a submodule of the regular module
        std::vector<Matrix> gens;
        for (std::size_t t = 0; t < A.dim(); ++t)
            gens.push_back(side == Side::Left ? multiply(A, A.basis_element(t), e).coords
                                              : multiply(A, e, A.basis_element(t)).coords);
        Subspace span = Subspace::from_vectors(gens, A.dim(), A.spec());
        AModule P = submodule(reg, span);
        // top = P / rad(A) P
        std::vector<Matrix> radgens;
        for (std::size_t r = 0; r < radA.dim(); ++r) {
            Matrix act = reg.act(radA.basis_vector(r));
            for (std::size_t c = 0; c < span.dim(); ++c)
                radgens.push_back(span.coords_of(act * span.basis_vector(c)));
        }
        Subspace radP = Subspace::from_vectors(radgens, span.dim(), A.spec());
        pd.projectives.push_back(P);
        pd.tops.push_back(quotient_module(P, radP));
    }
    // group by isomorphism of (simple) tops: hom nonzero iff isomorphic
    pd.class_of.assign(pd.idempotents.size(), 0);
    for (std::size_t i = 0; i < pd.tops.size(); ++i) {
        bool found = false;
        for (std::size_t r : pd.class_reps)
            if (hom_space(pd.tops[i], pd.tops[r]).dim > 0) {
                pd.class_of[i] = pd.class_of[r];
                found = true;
                break;
            }
        if (!found) {
            pd.class_of[i] = pd.class_reps.size();
            pd.class_reps.push_back(i);
        }
    }
    return pd;
}

std::vector<std::size_t> top_multiplicities(const AModule& M, const ProjectiveData& pd,
                                            const Config& cfg) {
    Subspace radM = module_radical(M, cfg);
    AModule top = quotient_module(M, radM);
    std::vector<std::size_t> mult;
    for (std::size_t r : pd.class_reps) {
        std::size_t h = hom_space(top, pd.tops[r]).dim;
        std::size_t e = hom_space(pd.tops[r], pd.tops[r]).dim;
        check(h % e == 0, Errc::InternalCheck, "top multiplicity is not an integer");
        mult.push_back(h / e);
    }
    return mult;
}

bool is_projective(const AModule& M, const ProjectiveData& pd, const Config& cfg) {
    std::vector<std::size_t> mult = top_multiplicities(M, pd, cfg);
    std::size_t cover_dim = 0;
    for (std::size_t c = 0; c < pd.class_reps.size(); ++c)
        cover_dim += mult[c] * pd.projectives[pd.class_reps[c]].dim();
    return cover_dim == M.dim();
}

} // namespace rep
} // namespace strata
