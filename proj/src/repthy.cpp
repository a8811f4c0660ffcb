#include "strata/repthy.hpp"

#include <sstream>

namespace strata {
namespace rep {

using alg::multiply;
using cell::GramTable;
using cell::Layer;
using cell::LayerSpaces;
using cell::PhiResult;
using exact::Scalar;

namespace {

/// phi(b (x) a) for arbitrary coordinate vectors of Delta-op and Delta.
Matrix pair_full(const Algebra& D, const GramTable& table, std::size_t d, const Matrix& b_coords,
                 const Matrix& a_coords) {
    Matrix out(D.spec(), D.dim(), 1);
    std::size_t J = table.J_size, I = table.I_size;
    for (std::size_t j = 0; j < J; ++j)
        for (std::size_t k = 0; k < d; ++k) {
            const Scalar& wb = b_coords.at(j * d + k, 0);
            if (wb.is_zero())
                continue;
            for (std::size_t i = 0; i < I; ++i)
                for (std::size_t l = 0; l < d; ++l) {
                    const Scalar& wa = a_coords.at(i * d + l, 0);
                    if (wa.is_zero())
                        continue;
                    Matrix term = multiply(D,
                                           multiply(D, D.basis_element(k), D.element(table.entry(j, i))),
                                           D.basis_element(l))
                                      .coords;
                    out = out + term * (wb * wa);
                }
        }
    return out;
}

void require_divisible(System& S, const Config& cfg) {
    for (const Label& l : S.datum().poset().linear_extension()) {
        alg::IdempotentVerdict v = alg::division_verdict(S.datum().layer(l).D, cfg);
        if (v.status == alg::VerdictStatus::Inconclusive)
            throw Error(Errc::Inconclusive, "divisibility of D(" + l + ") is inconclusive: " + v.detail);
        if (v.status != alg::VerdictStatus::Division)
            throw Error(Errc::Input, "system not divisible: D(" + l + ") is not a division ring");
    }
}

} // namespace

FullnessVerdict fullness(System& S, const Label& l) {
    S.ensure_verified();
    PhiResult ph = cell::phi(S, l);
    const Algebra& D = S.datum().layer(l).D;
    bool image_full = ph.image_ideal.dim() == D.dim();

    const alg::QuotientAlgebra& qa = S.quotient_above(l);
    const LayerSpaces& ls = S.layers(l);
    std::vector<Matrix> vecs;
    for (std::size_t r = 0; r < ls.ge.dim(); ++r)
        vecs.push_back(qa.proj * ls.ge.basis_vector(r));
    Subspace layer_ideal = Subspace::from_vectors(vecs, qa.Q.dim(), qa.Q.spec());
    bool idem = alg::is_idempotent_subideal(qa.Q, layer_ideal);

    check(image_full == idem, Errc::InternalCheck,
          "fullness equivalence violated at " + l + ": im(phi)=D is " + (image_full ? "true" : "false") +
              " but layer idempotency is " + (idem ? "true" : "false"));
    return {l, image_full, idem};
}

std::vector<Label> lambda_irr(System& S, const Config& cfg) {
    S.ensure_verified();
    require_divisible(S, cfg);
    std::vector<Label> out;
    for (const Label& l : S.datum().poset().linear_extension())
        if (!S.gram(l).all_zero())
            out.push_back(l);
    return out;
}

Subspace rad_delta(System& S, const Label& l, const Config& cfg) {
    S.ensure_verified();
    const Layer& layer = S.datum().layer(l);
    const Algebra& D = layer.D;
    const GramTable& table = S.gram(l);
    check(!table.all_zero(), Errc::Input, "rad_delta requires lambda in Lambda_irr (phi nonzero)");
    {
        alg::IdempotentVerdict v = alg::division_verdict(D, cfg);
        check(v.status == alg::VerdictStatus::Division, Errc::Input,
              "rad_delta requires a divisible system");
    }
    std::size_t d = D.dim(), I = layer.I_size, J = layer.J_size;
    // rows: (j, k, component), columns: Delta basis (i, l)
    Matrix P(D.spec(), J * d * d, I * d);
    for (std::size_t j = 0; j < J; ++j)
        for (std::size_t k = 0; k < d; ++k)
            for (std::size_t i = 0; i < I; ++i)
                for (std::size_t lidx = 0; lidx < d; ++lidx) {
                    Matrix val = multiply(D,
                                          multiply(D, D.basis_element(k), D.element(table.entry(j, i))),
                                          D.basis_element(lidx))
                                     .coords;
                    for (std::size_t comp = 0; comp < d; ++comp)
                        P.at((j * d + k) * d + comp, i * d + lidx) = val.at(comp, 0);
                }
    Subspace kernel = Subspace::from_rows(exact::kernel_basis(P), I * d);

    AModule delta = AModule::from_std(S.ambient(), S.delta(l));
    Subspace oracle = module_radical(delta, cfg);
    check(kernel == oracle, Errc::InternalCheck,
          "pairing radical differs from rad(A) Delta(lambda) at " + l);
    return kernel;
}

AModule simple(System& S, const Label& l, const Config& cfg) {
    Subspace N = rad_delta(S, l, cfg);
    AModule delta = AModule::from_std(S.ambient(), S.delta(l));
    AModule L = quotient_module(delta, N);
    for (std::size_t i = 0; i < L.dim(); ++i) {
        Matrix v(L.algebra().spec(), L.dim(), 1);
        v.at(i, 0) = Scalar::one(L.algebra().spec());
        check(spin(L, v).dim() == L.dim(), Errc::InternalCheck,
              "canonical basis vector " + std::to_string(i) + " does not generate L(" + l + ")");
    }
    return L;
}

std::vector<std::pair<Label, AModule>> classify_simples(System& S, const Config& cfg) {
    std::vector<Label> irr = lambda_irr(S, cfg);
    std::vector<std::pair<Label, AModule>> out;
    for (const Label& l : irr)
        out.emplace_back(l, simple(S, l, cfg));
    for (std::size_t a = 0; a < out.size(); ++a)
        for (std::size_t b = 0; b < out.size(); ++b)
            if (a != b)
                check(hom_space(out[a].second, out[b].second).dim == 0, Errc::InternalCheck,
                      "simples " + out[a].first + " and " + out[b].first + " are isomorphic");
    ProjectiveData pd = projective_data(S.ambient(), Side::Left, cfg);
    check(pd.class_reps.size() == out.size(), Errc::InternalCheck,
          "|Lambda_irr| = " + std::to_string(out.size()) + " but A/rad has " +
          std::to_string(pd.class_reps.size()) + " blocks");
    return out;
}

AModule projective_cover(System& S, const Label& l, const Config& cfg) {
    AModule L = simple(S, l, cfg);
    ProjectiveData pd = projective_data(S.ambient(), Side::Left, cfg);
    for (std::size_t i = 0; i < pd.idempotents.size(); ++i)
        if (hom_space(pd.tops[i], L).dim > 0)
            return pd.projectives[i];
    throw Error(Errc::InternalCheck, "no primitive idempotent matches the top of L(" + l + ")");
}

std::size_t comp_multiplicity(System& S, const AModule& M, const Label& l, const Config& cfg) {
    AModule P = projective_cover(S, l, cfg);
    AModule L = simple(S, l, cfg);
    std::size_t e = hom_space(L, L).dim;
    std::size_t h = hom_space(P, M).dim;
    check(e > 0 && h % e == 0, Errc::InternalCheck,
          "Hom(P, M) dimension is not divisible by dim End(L)");
    std::size_t mult = h / e;
    if (M.dim() <= 8) {
        // independent count through the radical series of M
        std::size_t brute = 0;
        AModule cur = M;
        while (cur.dim() > 0) {
            Subspace radc = module_radical(cur, cfg);
            AModule layer = quotient_module(cur, radc);
            std::size_t hl = hom_space(L, layer).dim;
            check(hl % e == 0, Errc::InternalCheck, "semisimple layer multiplicity not integral");
            brute += hl / e;
            if (radc.dim() == 0)
                break;
            cur = submodule(cur, radc);
        }
        check(brute == mult, Errc::InternalCheck,
              "composition-series count disagrees with the Hom formula for [M : L(" + l + ")]");
    }
    return mult;
}

DeltaFiltration delta_filtration(System& S, const AModule& P, const Config& cfg,
                                 const std::optional<Label>& cover_label) {
    S.ensure_verified();
    require_divisible(S, cfg);
    const auto& ext = S.datum().poset().linear_extension();
    const Algebra& A = S.ambient();

    DeltaFiltration out;
    Subspace prev = Subspace::zero(A.spec(), P.dim());
    Subspace ideal_so_far = Subspace::zero(A.spec(), A.dim());
    out.chain.push_back(prev);
    for (const Label& lk : ext) {
        const Layer& layer = S.datum().layer(lk);
        std::vector<Matrix> cols;
        for (const Matrix& c : layer.c)
            for (std::size_t k = 0; k < layer.D.dim(); ++k)
                cols.push_back(c.col(k));
        for (std::size_t r = 0; r < ideal_so_far.dim(); ++r)
            cols.push_back(ideal_so_far.basis_vector(r));
        ideal_so_far = Subspace::from_vectors(cols, A.dim(), A.spec());

        std::vector<Matrix> mgens;
        for (std::size_t r = 0; r < ideal_so_far.dim(); ++r) {
            Matrix act = P.act(ideal_so_far.basis_vector(r));
            for (std::size_t c = 0; c < P.dim(); ++c)
                mgens.push_back(act.col(c));
        }
        Subspace Mk = Subspace::from_vectors(mgens, P.dim(), A.spec());
        check(Mk.contains(prev), Errc::InternalCheck, "filtration chain is not increasing");

        std::size_t sect_dim = Mk.dim() - prev.dim();
        if (sect_dim == 0) {
            out.chain.push_back(Mk);
            prev = Mk;
            continue;
        }
        AModule sub = submodule(P, Mk);
        // previous stage in sub-coordinates
        std::vector<Matrix> prev_in_sub;
        for (std::size_t r = 0; r < prev.dim(); ++r)
            prev_in_sub.push_back(Mk.coords_of(prev.basis_vector(r)));
        Subspace prev_sub = Subspace::from_vectors(prev_in_sub, Mk.dim(), A.spec());
        AModule section = quotient_module(sub, prev_sub);

        AModule delta = AModule::from_std(A, S.delta(lk));
        check(delta.dim() > 0 && sect_dim % delta.dim() == 0, Errc::Input,
              "section at " + lk + " is not a multiple of Delta");
        std::size_t m = sect_dim / delta.dim();

        // assemble an explicit isomorphism Delta^m -> section from hom basis
        HomBasis H = hom_space(delta, section);
        std::vector<Matrix> picked;
        Subspace covered = Subspace::zero(A.spec(), section.dim());
        auto try_pick = [&](const Matrix& h) {
            std::vector<Matrix> vecs;
            for (std::size_t r = 0; r < covered.dim(); ++r)
                vecs.push_back(covered.basis_vector(r));
            for (std::size_t c = 0; c < h.cols(); ++c)
                vecs.push_back(h.col(c));
            Subspace bigger = Subspace::from_vectors(vecs, section.dim(), A.spec());
            if (bigger.dim() == covered.dim() + delta.dim()) {
                covered = bigger;
                picked.push_back(h);
                return true;
            }
            return false;
        };
        for (const Matrix& h : H.basis) {
            if (picked.size() == m)
                break;
            try_pick(h);
        }
        for (std::size_t a = 0; a < H.basis.size() && picked.size() < m; ++a)
            for (std::size_t b = a + 1; b < H.basis.size() && picked.size() < m; ++b)
                try_pick(H.basis[a] + H.basis[b]);
        check(picked.size() == m && covered.dim() == section.dim(), Errc::Input,
              "section at " + lk + " fails the Delta^m isomorphism test");

        out.sections.emplace_back(lk, m);
        out.chain.push_back(Mk);
        prev = Mk;
    }
    check(prev.dim() == P.dim(), Errc::InternalCheck, "filtration does not exhaust the module");

    if (cover_label.has_value()) {
        for (const auto& [mu, m] : out.sections) {
            check(S.datum().poset().geq(mu, *cover_label), Errc::Input,
                  "Delta-filtration of P(" + *cover_label + ") has a section below it at " + mu);
            if (mu == *cover_label)
                check(m == 1, Errc::Input,
                      "multiplicity of Delta(" + mu + ") in its projective cover is not one");
        }
    }
    return out;
}

std::optional<Matrix> cyclic_generator(System& S, const Label& l, const Config& cfg) {
    S.ensure_verified();
    const Layer& layer = S.datum().layer(l);
    const Algebra& D = layer.D;
    const GramTable& table = S.gram(l);
    std::size_t d = D.dim(), I = layer.I_size, J = layer.J_size;
    std::size_t dim_delta = I * d;
    if (table.all_zero())
        return std::nullopt;

    auto image_full = [&](const Matrix& v) {
        Matrix R(D.spec(), J * d, d);
        for (std::size_t j = 0; j < J; ++j)
            for (std::size_t k = 0; k < d; ++k) {
                Matrix b(D.spec(), J * d, 1);
                b.at(j * d + k, 0) = Scalar::one(D.spec());
                Matrix val = pair_full(D, table, d, b, v);
                for (std::size_t comp = 0; comp < d; ++comp)
                    R.at(j * d + k, comp) = val.at(comp, 0);
            }
        return exact::rref(R).rank == d;
    };
    auto finish = [&](const Matrix& v) {
        AModule delta = AModule::from_std(S.ambient(), S.delta(l));
        check(spin(delta, v).dim() == dim_delta, Errc::InternalCheck,
              "cyclic witness does not generate Delta(" + l + ") over A");
        const LayerSpaces& ls = S.layers(l);
        std::vector<Matrix> vecs;
        for (std::size_t r = 0; r < ls.ge.dim(); ++r)
            vecs.push_back(delta.act(ls.ge.basis_vector(r)) * v);
        check(Subspace::from_vectors(vecs, dim_delta, D.spec()).dim() == dim_delta,
              Errc::InternalCheck, "A^lambda v is a proper subspace of Delta(" + l + ")");
        return v;
    };

    for (std::size_t i = 0; i < I; ++i)
        for (std::size_t k = 0; k < d; ++k) {
            Matrix v(D.spec(), dim_delta, 1);
            v.at(i * d + k, 0) = Scalar::one(D.spec());
            if (image_full(v))
                return finish(v);
        }
    // small linear combinations: {0,1,-1} over Q, all residues over GF(p<=5)
    std::vector<long> coeff_pool;
    if (D.spec().kind == exact::FieldKind::Rationals)
        coeff_pool = {0, 1, -1};
    else if (D.spec().characteristic <= 5)
        for (unsigned long c = 0; c < D.spec().characteristic; ++c)
            coeff_pool.push_back(static_cast<long>(c));
    else
        coeff_pool = {0, 1};
    std::vector<std::size_t> digits(dim_delta, 0);
    std::size_t tried = 0;
    for (;;) {
        std::size_t pos = 0;
        while (pos < dim_delta && digits[pos] + 1 == coeff_pool.size())
            digits[pos++] = 0;
        if (pos == dim_delta || ++tried > cfg.combo_budget)
            return std::nullopt;
        ++digits[pos];
        Matrix v(D.spec(), dim_delta, 1);
        for (std::size_t r = 0; r < dim_delta; ++r)
            v.at(r, 0) = Scalar::of_int(D.spec(), coeff_pool[digits[r]]);
        if (image_full(v))
            return finish(v);
    }
}

Report hom_delta_check(System& S, const Config& cfg) {
    S.ensure_verified();
    Report rep;
    const auto& ext = S.datum().poset().linear_extension();
    for (const Label& l : ext) {
        auto witness = cyclic_generator(S, l, cfg);
        if (!witness.has_value()) {
            rep.add(true, "cyclic witness for " + l, "none found; Hom checks skipped for this label");
            continue;
        }
        AModule dl = AModule::from_std(S.ambient(), S.delta(l));
        for (const Label& mu : ext) {
            if (S.datum().poset().leq(l, mu))
                continue;
            std::size_t h = hom_space(dl, AModule::from_std(S.ambient(), S.delta(mu))).dim;
            rep.add(h == 0, "Hom(Delta(" + l + "), Delta(" + mu + ")) = 0",
                    h == 0 ? "" : "dimension " + std::to_string(h));
        }
        // endomorphism ring comparison with D(lambda), both orientations
        const Layer& layer = S.datum().layer(l);
        const Algebra& D = layer.D;
        const GramTable& table = S.gram(l);
        std::size_t d = D.dim();
        HomBasis E = hom_space(dl, dl);
        bool dims = E.dim == d;
        rep.add(dims, "dim End(Delta(" + l + ")) = dim D(" + l + ")",
                dims ? "" : std::to_string(E.dim) + " vs " + std::to_string(d));
        if (!dims)
            continue;
        // w with phi(w (x) v) = 1
        Matrix v = *witness;
        Matrix Phi_v(D.spec(), d, layer.J_size * d);
        for (std::size_t col = 0; col < layer.J_size * d; ++col) {
            Matrix b(D.spec(), layer.J_size * d, 1);
            b.at(col, 0) = Scalar::one(D.spec());
            Matrix val = pair_full(D, table, d, b, v);
            for (std::size_t comp = 0; comp < d; ++comp)
                Phi_v.at(comp, col) = val.at(comp, 0);
        }
        auto w = exact::solve(Phi_v, D.unit_coords());
        check(w.has_value(), Errc::InternalCheck, "no w with phi(w (x) v) = 1 despite a full image");
        auto theta = [&](const Matrix& endo) { return pair_full(D, table, d, *w, endo * v); };
        Matrix theta_mat(D.spec(), d, E.dim);
        for (std::size_t b = 0; b < E.dim; ++b) {
            Matrix tb = theta(E.basis[b]);
            for (std::size_t comp = 0; comp < d; ++comp)
                theta_mat.at(comp, b) = tb.at(comp, 0);
        }
        bool bijective = exact::rref(theta_mat).rank == d;
        rep.add(bijective, "End(Delta(" + l + ")) -> D(" + l + ") linear bijection");
        bool direct = true, opposite = true;
        for (std::size_t a = 0; a < E.dim; ++a)
            for (std::size_t b = 0; b < E.dim; ++b) {
                Matrix composed = theta(E.basis[a] * E.basis[b]); // apply b then a
                Matrix ta = theta(E.basis[a]), tb = theta(E.basis[b]);
                Matrix prod_direct = multiply(D, D.element(ta), D.element(tb)).coords;
                Matrix prod_op = multiply(D, D.element(tb), D.element(ta)).coords;
                direct = direct && composed == prod_direct;
                opposite = opposite && composed == prod_op;
            }
        std::string orientation = direct && opposite ? "both (commutative)"
                                  : opposite         ? "opposite ring"
                                  : direct           ? "direct ring"
                                                     : "neither";
        rep.add(direct || opposite, "End(Delta(" + l + ")) multiplication matches D: " + orientation,
                direct || opposite ? "" : "multiplication table mismatch");
    }
    return rep;
}

} // namespace rep
} // namespace strata
