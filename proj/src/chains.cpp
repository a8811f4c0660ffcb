#include "strata/chains.hpp"

#include <sstream>

namespace strata {
namespace chains {

using alg::multiply;
using alg::QuotientAlgebra;
using alg::Side;
using cell::Layer;
using exact::Scalar;

std::string claim_token(Claim c) {
    switch (c) {
    case Claim::QuasiHereditary: return "quasi-hereditary";
    case Claim::StandardlyStratified: return "standardly-stratified";
    case Claim::CellularSystemValid: return "cellular-system-valid";
    case Claim::NotQhExhausted: return "not-qh-exhausted";
    case Claim::Inconclusive: return "inconclusive";
    }
    throw Error(Errc::InternalCheck, "unknown claim");
}

Claim parse_claim(const std::string& tok) {
    for (Claim c : {Claim::QuasiHereditary, Claim::StandardlyStratified, Claim::CellularSystemValid,
                    Claim::NotQhExhausted, Claim::Inconclusive})
        if (claim_token(c) == tok)
            return c;
    throw Error(Errc::Parse, "unknown certificate claim '" + tok + "'");
}

std::string source_token(CertSource s) {
    switch (s) {
    case CertSource::DecideQh: return "decide-qh";
    case CertSource::Stratify: return "stratify";
    case CertSource::VerifySystem: return "verify-system";
    case CertSource::FromChain: return "from-chain";
    }
    throw Error(Errc::InternalCheck, "unknown source");
}

CertSource parse_source(const std::string& tok) {
    for (CertSource s :
         {CertSource::DecideQh, CertSource::Stratify, CertSource::VerifySystem, CertSource::FromChain})
        if (source_token(s) == tok)
            return s;
    throw Error(Errc::Parse, "unknown certificate source '" + tok + "'");
}

std::string subject_hash(const Algebra& A) {
    std::ostringstream os;
    os << A.spec().str() << ";" << A.dim() << ";";
    for (std::size_t r = 0; r < A.dim(); ++r)
        os << A.unit_coords().at(r, 0).str() << ",";
    os << ";";
    for (std::size_t i = 0; i < A.dim(); ++i)
        for (std::size_t j = 0; j < A.dim(); ++j)
            for (std::size_t k = 0; k < A.dim(); ++k)
                if (!A.sc(i, j, k).is_zero())
                    os << i << "." << j << "." << k << "=" << A.sc(i, j, k).str() << ";";
    const std::string s = os.str();
    unsigned long long h = 1469598103934665603ull;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    std::ostringstream hex;
    hex << std::hex;
    hex.width(16);
    hex.fill('0');
    hex << h;
    return hex.str();
}

IdealChain chain_from_system(System& S) {
    S.ensure_verified();
    const CellularDatum& dat = S.datum();
    const Algebra& A = dat.ambient();
    IdealChain chain;
    chain.ideals.push_back(Subspace::zero(A.spec(), A.dim()));
    Subspace cur = Subspace::zero(A.spec(), A.dim());
    for (const Label& lk : dat.poset().linear_extension()) {
        const Layer& layer = dat.layer(lk);
        std::vector<Matrix> cols;
        for (std::size_t r = 0; r < cur.dim(); ++r)
            cols.push_back(cur.basis_vector(r));
        for (const Matrix& c : layer.c)
            for (std::size_t k = 0; k < layer.D.dim(); ++k)
                cols.push_back(c.col(k));
        cur = Subspace::from_vectors(cols, A.dim(), A.spec());
        auto ic = alg::check_two_sided_ideal(A, cur);
        if (!ic.is_ideal)
            throw Error(Errc::AxiomViolation,
                        "chain ideal through " + lk + " is not two-sided");
        if (!cur.contains(S.layers(lk).ge))
            throw Error(Errc::AxiomViolation,
                        "A^{>=" + lk + "} is not inside its chain ideal");
        chain.ideals.push_back(cur);
    }
    check(cur.dim() == A.dim(), Errc::InternalCheck, "chain does not end at A");
    return chain;
}

HeredityVerdict verify_heredity_ideal(const Algebra& A, const Subspace& J, const Config& cfg,
                                      const std::optional<AlgebraElement>& hint) {
    check(alg::check_two_sided_ideal(A, J).is_ideal, Errc::NotIdeal,
          "heredity test requires a two-sided ideal");
    HeredityVerdict out;
    if (J.dim() == 0) {
        out.status = HeredityVerdict::Status::NotHeredity;
        out.detail = "the zero ideal is not a heredity ideal";
        return out;
    }
    Subspace radA = alg::radical(A, cfg);

    // (2) J rad(A) J = 0
    out.rad_condition = true;
    for (std::size_t a = 0; a < J.dim() && out.rad_condition; ++a)
        for (std::size_t r = 0; r < radA.dim() && out.rad_condition; ++r)
            for (std::size_t b = 0; b < J.dim() && out.rad_condition; ++b) {
                AlgebraElement prod = multiply(
                    A, multiply(A, A.element(J.basis_vector(a)), A.element(radA.basis_vector(r))),
                    A.element(J.basis_vector(b)));
                if (!prod.is_zero())
                    out.rad_condition = false;
            }

    // (1) J = AeA for an idempotent among sums of a complete primitive set
    alg::IdempotentSplit split = alg::decompose_idempotents(A, cfg);
    bool search_complete = split.certified;
    if (hint.has_value() && alg::is_idempotent(A, *hint) &&
        alg::ideal_generated(A, {*hint}, alg::Sidedness::TwoSided) == J) {
        out.idempotent_generated = true;
        out.witness = hint;
    } else {
        std::size_t t = split.idempotents.size();
        check(t < 63, Errc::Input, "too many idempotent summands to enumerate");
        for (unsigned long mask = 1; mask < (1ul << t) && !out.idempotent_generated; ++mask) {
            AlgebraElement e = A.zero();
            for (std::size_t b = 0; b < t; ++b)
                if (mask & (1ul << b))
                    e = alg::add(e, split.idempotents[b]);
            if (alg::ideal_generated(A, {e}, alg::Sidedness::TwoSided) == J) {
                out.idempotent_generated = true;
                out.witness = e;
            }
        }
    }

    // (3) left projectivity via the projective cover of J
    std::optional<bool> projective;
    try {
        rep::ProjectiveData pd = rep::projective_data(A, Side::Left, cfg);
        rep::AModule reg = rep::AModule::regular(A, Side::Left);
        projective = rep::is_projective(rep::submodule(reg, J), pd, cfg);
    } catch (const alg::InconclusiveSplit&) {
        projective = std::nullopt;
    }
    out.projective = projective.value_or(false);

    if (!out.rad_condition) {
        out.status = HeredityVerdict::Status::NotHeredity;
        out.detail = "J rad(A) J != 0";
        return out;
    }
    if (out.idempotent_generated && projective.has_value() && *projective) {
        out.status = HeredityVerdict::Status::Heredity;
        out.detail = "idempotent-generated, J rad J = 0, left projective";
        return out;
    }
    if ((!out.idempotent_generated && !search_complete) || !projective.has_value()) {
        out.status = HeredityVerdict::Status::Inconclusive;
        out.detail = "primitive idempotent decomposition could not be certified";
        return out;
    }
    out.status = HeredityVerdict::Status::NotHeredity;
    out.detail = !out.idempotent_generated
                     ? "no idempotent sum generates J (search over the fixed primitive set)"
                     : "J is not projective as a left module";
    return out;
}

namespace {

struct QuotientTower {
    Algebra B;        // current quotient algebra
    Matrix proj;      // A-coords -> B-coords
    Matrix section;   // B-coords -> A-coords (zero free variables)
};

QuotientTower initial_tower(const Algebra& A) {
    return {A, Matrix::identity(A.spec(), A.dim()), Matrix::identity(A.spec(), A.dim())};
}

Subspace image_in(const QuotientTower& tw, const Subspace& J_in_A) {
    std::vector<Matrix> vecs;
    for (std::size_t r = 0; r < J_in_A.dim(); ++r)
        vecs.push_back(tw.proj * J_in_A.basis_vector(r));
    return Subspace::from_vectors(vecs, tw.B.dim(), tw.B.spec());
}

QuotientTower descend(const QuotientTower& tw, const Subspace& J_in_B) {
    QuotientAlgebra qa = alg::quotient_algebra(tw.B, J_in_B);
    return {qa.Q, qa.proj * tw.proj, tw.section * qa.section};
}

void validate_chain_shape(const Algebra& A, const std::vector<Subspace>& ideals) {
    check(ideals.size() >= 2, Errc::Input, "a chain needs at least the two trivial ideals");
    check(ideals.front().dim() == 0, Errc::Input, "chain must start at the zero ideal");
    check(ideals.back().dim() == A.dim(), Errc::Input, "chain must end at the whole algebra");
    for (std::size_t k = 0; k + 1 < ideals.size(); ++k) {
        check(ideals[k + 1].contains(ideals[k]) && ideals[k + 1].dim() > ideals[k].dim(), Errc::Input,
              "chain inclusions must be strict and increasing at step " + std::to_string(k + 1));
    }
    for (const Subspace& J : ideals)
        check(alg::check_two_sided_ideal(A, J).is_ideal, Errc::NotIdeal,
              "every chain member must be a two-sided ideal of A");
}

} // namespace

ChainVerification verify_heredity_chain(const Algebra& A, const std::vector<Subspace>& ideals,
                                        const Config& cfg) {
    ChainVerification out;
    validate_chain_shape(A, ideals);
    QuotientTower tw = initial_tower(A);
    IdealChain chain;
    chain.ideals = ideals;
    for (std::size_t k = 1; k < ideals.size(); ++k) {
        Subspace Jbar = image_in(tw, ideals[k]);
        HeredityVerdict hv = verify_heredity_ideal(tw.B, Jbar, cfg);
        if (hv.status == HeredityVerdict::Status::Inconclusive) {
            out.inconclusive = true;
            out.failure = "step " + std::to_string(k) + ": " + hv.detail;
            return out;
        }
        if (hv.status == HeredityVerdict::Status::NotHeredity) {
            out.failure = "step " + std::to_string(k) + ": " + hv.detail;
            return out;
        }
        chain.witnesses.push_back(hv.witness->coords);
        if (k + 1 < ideals.size())
            tw = descend(tw, Jbar);
    }
    chain.kind = ChainKind::Heredity;
    out.ok = true;
    out.chain = std::move(chain);
    return out;
}

namespace {

/// Greedy extraction of a free module basis of `space` over the corner
/// division algebra: columns a with a * D (resp. D * a) jointly direct.
std::vector<Matrix> free_basis_over_corner(const Algebra& B, const Subspace& space,
                                           const alg::CornerAlgebra& corner, bool right_module) {
    std::vector<Matrix> picked;
    std::vector<Matrix> span_vecs;
    Subspace span = Subspace::zero(B.spec(), B.dim());
    for (std::size_t r = 0; r < space.dim(); ++r) {
        Matrix cand = space.basis_vector(r);
        if (span.contains(cand))
            continue;
        picked.push_back(cand);
        for (std::size_t k = 0; k < corner.C.dim(); ++k) {
            Matrix dk = corner.embed(corner.C.basis_element(k).coords);
            AlgebraElement prod = right_module
                                      ? multiply(B, B.element(cand), B.element(dk))
                                      : multiply(B, B.element(dk), B.element(cand));
            span_vecs.push_back(prod.coords);
        }
        span = Subspace::from_vectors(span_vecs, B.dim(), B.spec());
    }
    check(span == space && picked.size() * corner.C.dim() == space.dim(), Errc::InternalCheck,
          "span is not free over the corner division algebra");
    return picked;
}

std::map<Label, Layer> build_layers(const Algebra& B, const std::vector<Subspace>& ideals,
                                    const std::vector<Label>& labels, const Config& cfg) {
    check(ideals.size() == labels.size() + 1, Errc::InternalCheck, "label count mismatch");
    Subspace J1 = ideals[1];
    HeredityVerdict hv = verify_heredity_ideal(B, J1, cfg);
    if (hv.status == HeredityVerdict::Status::Inconclusive)
        throw Error(Errc::Inconclusive, "heredity of the top chain step is inconclusive");
    check(hv.status == HeredityVerdict::Status::Heredity, Errc::Input,
          "system_from_heredity_chain requires a verified heredity chain");
    AlgebraElement e = *hv.witness;
    alg::CornerAlgebra corner = alg::corner_algebra(B, e);
    {
        alg::IdempotentVerdict dv = alg::division_verdict(corner.C, cfg);
        if (dv.status == alg::VerdictStatus::Inconclusive)
            throw Error(Errc::Inconclusive, "division verdict for eAe is inconclusive");
        check(dv.status == alg::VerdictStatus::Division, Errc::Input,
              "eAe is not a division algebra; the chain step witness is not primitive enough");
    }
    // Ae and eA as subspaces
    std::vector<Matrix> ae, ea;
    for (std::size_t t = 0; t < B.dim(); ++t) {
        ae.push_back(multiply(B, B.basis_element(t), e).coords);
        ea.push_back(multiply(B, e, B.basis_element(t)).coords);
    }
    Subspace Ae = Subspace::from_vectors(ae, B.dim(), B.spec());
    Subspace eA = Subspace::from_vectors(ea, B.dim(), B.spec());
    std::vector<Matrix> a_basis = free_basis_over_corner(B, Ae, corner, true);  // right D-module
    std::vector<Matrix> b_basis = free_basis_over_corner(B, eA, corner, false); // left D-module

    Layer top;
    top.I_size = a_basis.size();
    top.J_size = b_basis.size();
    top.D = corner.C;
    check(top.I_size * top.J_size * corner.C.dim() == J1.dim(), Errc::InternalCheck,
          "heredity layer dimension bookkeeping failed");
    for (const Matrix& ai : a_basis)
        for (const Matrix& bj : b_basis) {
            Matrix cmap(B.spec(), B.dim(), corner.C.dim());
            for (std::size_t k = 0; k < corner.C.dim(); ++k) {
                Matrix x = corner.embed(corner.C.basis_element(k).coords);
                AlgebraElement img =
                    multiply(B, multiply(B, B.element(ai), B.element(x)), B.element(bj));
                for (std::size_t r = 0; r < B.dim(); ++r)
                    cmap.at(r, k) = img.coords.at(r, 0);
            }
            top.c.push_back(std::move(cmap));
        }

    std::map<Label, Layer> layers;
    layers.emplace(labels[0], std::move(top));
    if (labels.size() == 1)
        return layers;

    // recurse on B/J1 and lift through the zero-free-variable section
    QuotientAlgebra qa = alg::quotient_algebra(B, J1);
    std::vector<Subspace> rest;
    rest.push_back(Subspace::zero(B.spec(), qa.Q.dim()));
    for (std::size_t k = 2; k < ideals.size(); ++k) {
        std::vector<Matrix> vecs;
        for (std::size_t r = 0; r < ideals[k].dim(); ++r)
            vecs.push_back(qa.proj * ideals[k].basis_vector(r));
        rest.push_back(Subspace::from_vectors(vecs, qa.Q.dim(), qa.Q.spec()));
    }
    std::vector<Label> rest_labels(labels.begin() + 1, labels.end());
    std::map<Label, Layer> lower = build_layers(qa.Q, rest, rest_labels, cfg);
    for (auto& [l, layer] : lower) {
        for (Matrix& cmap : layer.c)
            cmap = qa.section * cmap;
        layers.emplace(l, std::move(layer));
    }
    return layers;
}

} // namespace

CellularDatum system_from_heredity_chain(const Algebra& A, const std::vector<Subspace>& ideals,
                                         const Config& cfg) {
    validate_chain_shape(A, ideals);
    std::size_t m = ideals.size() - 1;
    std::vector<Label> labels;
    for (std::size_t k = 1; k <= m; ++k) {
        std::ostringstream os;
        os << "s";
        os.width(2);
        os.fill('0');
        os << k;
        labels.push_back(os.str());
    }
    std::map<Label, Layer> layers = build_layers(A, ideals, labels, cfg);
    std::vector<std::pair<Label, Label>> rel;
    for (std::size_t a = 0; a < labels.size(); ++a)
        for (std::size_t b = a + 1; b < labels.size(); ++b)
            rel.emplace_back(labels[a], labels[b]);
    CellularDatum dat(A, cell::Poset(labels, rel), std::move(layers));

    // the construction must yield a full divisible system with Lambda_irr = Lambda
    System S(dat);
    cell::Report rep = cell::verify_axioms(S);
    check(rep.pass, Errc::InternalCheck, "constructed system fails the cellular axioms");
    for (const Label& l : dat.poset().linear_extension()) {
        rep::FullnessVerdict fv = rep::fullness(S, l);
        check(fv.image_equals_D, Errc::InternalCheck, "constructed system is not full at " + l);
        alg::IdempotentVerdict dv = alg::division_verdict(dat.layer(l).D, cfg);
        check(dv.status == alg::VerdictStatus::Division, Errc::InternalCheck,
              "constructed system is not divisible at " + l);
        check(!S.gram(l).all_zero(), Errc::InternalCheck,
              "constructed system has phi = 0 at " + l);
    }
    return dat;
}

CertifyOutcome certify_qh_from_system(System& S, const Config& cfg) {
    CertifyOutcome out;
    S.ensure_verified();
    const CellularDatum& dat = S.datum();
    for (const Label& l : dat.poset().linear_extension()) {
        alg::IdempotentVerdict dv = alg::division_verdict(dat.layer(l).D, cfg);
        if (dv.status == alg::VerdictStatus::Inconclusive) {
            out.kind = CertifyOutcome::Kind::Inconclusive;
            out.cert = {Claim::Inconclusive, CertSource::Stratify, subject_hash(dat.ambient()), 0,
                        "division verdict inconclusive at " + l, {}, std::nullopt};
            return out;
        }
        if (dv.status != alg::VerdictStatus::Division) {
            out.kind = CertifyOutcome::Kind::Refuted;
            out.refutation = "D(" + l + ") is not a division ring";
            return out;
        }
        rep::FullnessVerdict fv = rep::fullness(S, l);
        if (!fv.image_equals_D) {
            out.kind = CertifyOutcome::Kind::Refuted;
            out.refutation = "layer " + l + " is not full (im phi != D)";
            return out;
        }
        check(!S.gram(l).all_zero(), Errc::InternalCheck,
              "full layer with phi = 0 at " + l);
    }
    IdealChain raw = chain_from_system(S);
    ChainVerification cv = verify_heredity_chain(dat.ambient(), raw.ideals, cfg);
    if (cv.inconclusive) {
        out.kind = CertifyOutcome::Kind::Inconclusive;
        out.cert = {Claim::Inconclusive, CertSource::Stratify, subject_hash(dat.ambient()), 0,
                    cv.failure, {}, std::nullopt};
        return out;
    }
    check(cv.ok, Errc::InternalCheck,
          "full divisible system induced a non-heredity chain: " + cv.failure);
    out.kind = CertifyOutcome::Kind::Certified;
    out.cert = {Claim::QuasiHereditary, CertSource::FromChain, subject_hash(dat.ambient()), 0,
                "chain induced by the cellular layers", cv.chain, std::nullopt};
    return out;
}

StratifyingVerdict verify_stratifying_ideal(const Algebra& A, const Subspace& J, alg::Side side,
                                            const Config& cfg,
                                            const std::optional<AlgebraElement>& hint) {
    check(alg::check_two_sided_ideal(A, J).is_ideal, Errc::NotIdeal,
          "stratifying test requires a two-sided ideal");
    StratifyingVerdict out;
    if (J.dim() == 0) {
        out.status = StratifyingVerdict::Status::NotStratifying;
        out.detail = "the zero ideal is not a stratifying ideal";
        return out;
    }
    std::optional<AlgebraElement> e;
    bool search_complete = true;
    if (hint.has_value() && alg::is_idempotent(A, *hint) &&
        alg::ideal_generated(A, {*hint}, alg::Sidedness::TwoSided) == J) {
        e = hint;
    } else {
        alg::IdempotentSplit split = alg::decompose_idempotents(A, cfg);
        search_complete = split.certified;
        std::size_t t = split.idempotents.size();
        check(t < 63, Errc::Input, "too many idempotent summands to enumerate");
        for (unsigned long mask = 1; mask < (1ul << t) && !e.has_value(); ++mask) {
            AlgebraElement cand = A.zero();
            for (std::size_t b = 0; b < t; ++b)
                if (mask & (1ul << b))
                    cand = alg::add(cand, split.idempotents[b]);
            if (alg::ideal_generated(A, {cand}, alg::Sidedness::TwoSided) == J)
                e = cand;
        }
    }
    if (!e.has_value()) {
        out.status = search_complete ? StratifyingVerdict::Status::NotStratifying
                                     : StratifyingVerdict::Status::Inconclusive;
        out.detail = "no idempotent generates J" +
                     std::string(search_complete ? "" : " (search not certified complete)");
        return out;
    }
    out.witness = e;
    try {
        rep::ProjectiveData pd = rep::projective_data(A, side, cfg);
        rep::AModule reg = rep::AModule::regular(A, side);
        bool proj = rep::is_projective(rep::submodule(reg, J), pd, cfg);
        out.status =
            proj ? StratifyingVerdict::Status::Stratifying : StratifyingVerdict::Status::NotStratifying;
        out.detail = proj ? "J = AeA and J is projective"
                          : "J = AeA but J is not projective on the requested side";
    } catch (const alg::InconclusiveSplit& err) {
        out.status = StratifyingVerdict::Status::Inconclusive;
        out.detail = err.what();
    }
    return out;
}

CertifyOutcome stratification_from_local_system(System& S, const Config& cfg) {
    CertifyOutcome out;
    S.ensure_verified();
    const CellularDatum& dat = S.datum();
    const Algebra& A = dat.ambient();

    // per label: an invertible Gram entry (the full + local route reduces to it)
    std::map<Label, std::pair<std::size_t, std::size_t>> pick; // label -> (i, j) with f(j,i) invertible
    for (const Label& l : dat.poset().linear_extension()) {
        const Layer& layer = dat.layer(l);
        const cell::GramTable& table = S.gram(l);
        std::optional<std::pair<std::size_t, std::size_t>> found;
        for (std::size_t j = 0; j < layer.J_size && !found.has_value(); ++j)
            for (std::size_t i = 0; i < layer.I_size && !found.has_value(); ++i)
                if (exact::is_invertible(
                        alg::regular_rep(layer.D, layer.D.element(table.entry(j, i)), Side::Right)))
                    found = {i, j};
        if (!found.has_value()) {
            alg::IdempotentVerdict lv = alg::local_verdict(layer.D, cfg);
            if (lv.status == alg::VerdictStatus::Inconclusive) {
                out.kind = CertifyOutcome::Kind::Inconclusive;
                out.cert = {Claim::Inconclusive, CertSource::Stratify, subject_hash(A), 0,
                            "local verdict inconclusive at " + l, {}, std::nullopt};
                return out;
            }
            bool full = rep::fullness(S, l).image_equals_D;
            check(!(lv.status == alg::VerdictStatus::Local && full), Errc::InternalCheck,
                  "full local layer without an invertible Gram entry at " + l);
            out.kind = CertifyOutcome::Kind::Refuted;
            out.refutation = "no invertible Gram entry at " + l + " (" +
                             (lv.status == alg::VerdictStatus::Local ? "layer not full"
                                                                     : "D not local") +
                             ")";
            return out;
        }
        pick.emplace(l, *found);
    }

    IdealChain raw = chain_from_system(S);
    IdealChain chain;
    chain.ideals = raw.ideals;
    QuotientTower tw = initial_tower(A);
    const auto& ext = dat.poset().linear_extension();
    for (std::size_t k = 1; k < raw.ideals.size(); ++k) {
        const Label& l = ext[k - 1];
        const Layer& layer = dat.layer(l);
        auto [i, j] = pick.at(l);
        Matrix z = S.gram(l).entry(j, i);
        auto zinv = exact::solve(alg::regular_rep(layer.D, layer.D.element(z), Side::Left),
                                 layer.D.unit_coords());
        check(zinv.has_value(), Errc::InternalCheck, "invertible entry has no inverse");
        Matrix czinv = layer.cmap(i, j) * *zinv;
        AlgebraElement e_cand = tw.B.element(tw.proj * czinv);
        check(alg::is_idempotent(tw.B, e_cand), Errc::InternalCheck,
              "image of c(z^-1) is not idempotent at " + l);
        Subspace Jbar = image_in(tw, raw.ideals[k]);
        StratifyingVerdict left =
            verify_stratifying_ideal(tw.B, Jbar, Side::Left, cfg, e_cand);
        StratifyingVerdict right =
            verify_stratifying_ideal(tw.B, Jbar, Side::Right, cfg, e_cand);
        if (left.status == StratifyingVerdict::Status::Inconclusive ||
            right.status == StratifyingVerdict::Status::Inconclusive) {
            out.kind = CertifyOutcome::Kind::Inconclusive;
            out.cert = {Claim::Inconclusive, CertSource::Stratify, subject_hash(A), 0,
                        "stratifying verdict inconclusive at " + l, {}, std::nullopt};
            return out;
        }
        check(left.status == StratifyingVerdict::Status::Stratifying &&
                  right.status == StratifyingVerdict::Status::Stratifying,
              Errc::InternalCheck, "invertible-Gram chain step is not stratifying at " + l);
        chain.witnesses.push_back(left.witness->coords);
        if (k + 1 < raw.ideals.size())
            tw = descend(tw, Jbar);
    }
    chain.kind = ChainKind::StandardStratification;
    out.kind = CertifyOutcome::Kind::Certified;
    out.cert = {Claim::StandardlyStratified, CertSource::Stratify, subject_hash(A), 0,
                "invertible Gram entries at every label", chain, std::nullopt};
    return out;
}

namespace {

struct QhSearch {
    const Config& cfg;
    unsigned long budget;
    unsigned long used = 0;
    bool saw_uncertified = false;
    bool out_of_budget = false;

    bool dfs(const QuotientTower& tw, std::vector<Subspace>& chain_accum,
             std::vector<Matrix>& witness_accum, const Subspace& covered_in_A, const Algebra& A) {
        alg::IdempotentSplit split = alg::decompose_idempotents(tw.B, cfg);
        if (!split.certified)
            saw_uncertified = true;
        std::size_t t = split.idempotents.size();
        check(t < 63, Errc::Input, "too many idempotent summands to enumerate");
        for (unsigned long mask = 1; mask < (1ul << t); ++mask) {
            AlgebraElement e = tw.B.zero();
            for (std::size_t b = 0; b < t; ++b)
                if (mask & (1ul << b))
                    e = alg::add(e, split.idempotents[b]);
            Subspace Jbar = alg::ideal_generated(tw.B, {e}, alg::Sidedness::TwoSided);
            if (Jbar.dim() == 0)
                continue;
            if (used >= budget) {
                out_of_budget = true;
                return false;
            }
            ++used;
            HeredityVerdict hv = verify_heredity_ideal(tw.B, Jbar, cfg, e);
            if (hv.status == HeredityVerdict::Status::Inconclusive) {
                saw_uncertified = true;
                continue;
            }
            if (hv.status != HeredityVerdict::Status::Heredity)
                continue;
            // lift the step back to A-coordinates
            std::vector<Matrix> vecs;
            for (std::size_t r = 0; r < covered_in_A.dim(); ++r)
                vecs.push_back(covered_in_A.basis_vector(r));
            for (std::size_t r = 0; r < Jbar.dim(); ++r)
                vecs.push_back(tw.section * Jbar.basis_vector(r));
            Subspace lifted = Subspace::from_vectors(vecs, A.dim(), A.spec());
            chain_accum.push_back(lifted);
            witness_accum.push_back(hv.witness->coords);
            if (Jbar.dim() == tw.B.dim())
                return true; // chain reached A
            if (dfs(descend(tw, Jbar), chain_accum, witness_accum, lifted, A))
                return true;
            if (out_of_budget)
                return false;
            chain_accum.pop_back();
            witness_accum.pop_back();
        }
        return false;
    }
};

} // namespace

Certificate decide_qh_bounded(const Algebra& A, unsigned long budget, const Config& cfg) {
    Certificate cert;
    cert.source = CertSource::DecideQh;
    cert.subject_hash = subject_hash(A);
    cert.budget = budget;
    QhSearch search{cfg, budget};
    std::vector<Subspace> chain{Subspace::zero(A.spec(), A.dim())};
    std::vector<Matrix> witnesses;
    bool found;
    try {
        found = search.dfs(initial_tower(A), chain, witnesses, chain.front(), A);
    } catch (const Error& e) {
        if (e.code() != Errc::Inapplicable)
            throw;
        cert.claim = Claim::Inconclusive;
        cert.note = std::string("search aborted: ") + e.what();
        return cert;
    }
    if (found) {
        cert.claim = Claim::QuasiHereditary;
        cert.chain.kind = ChainKind::Heredity;
        cert.chain.ideals = chain;
        cert.chain.witnesses = witnesses;
        cert.note = "depth-first search over idempotent sums";
        return cert;
    }
    if (search.out_of_budget) {
        cert.claim = Claim::Inconclusive;
        cert.note = "budget exhausted after " + std::to_string(search.used) +
                    " heredity verifications";
        return cert;
    }
    if (search.saw_uncertified) {
        cert.claim = Claim::Inconclusive;
        cert.note = "search space enumerated but an idempotent decomposition was uncertified";
        return cert;
    }
    cert.claim = Claim::NotQhExhausted;
    cert.note = "search space fully enumerated over sums of the fixed primitive idempotent set (" +
                std::to_string(search.used) + " heredity verifications)";
    return cert;
}

int replay_certificate(const Certificate& cert, const Algebra& A, const Config& cfg) {
    check(cert.subject_hash == subject_hash(A), Errc::Input,
          "certificate subject hash does not match the given algebra");
    switch (cert.claim) {
    case Claim::QuasiHereditary: {
        ChainVerification cv = verify_heredity_chain(A, cert.chain.ideals, cfg);
        return cv.ok ? 0 : cv.inconclusive ? 2 : 1;
    }
    case Claim::StandardlyStratified: {
        validate_chain_shape(A, cert.chain.ideals);
        check(cert.chain.witnesses.size() + 1 == cert.chain.ideals.size(), Errc::Parse,
              "stratified certificate must carry one witness per step");
        QuotientTower tw = initial_tower(A);
        for (std::size_t k = 1; k < cert.chain.ideals.size(); ++k) {
            Subspace Jbar = image_in(tw, cert.chain.ideals[k]);
            AlgebraElement hint = tw.B.element(cert.chain.witnesses[k - 1]);
            StratifyingVerdict left = verify_stratifying_ideal(tw.B, Jbar, Side::Left, cfg, hint);
            StratifyingVerdict right = verify_stratifying_ideal(tw.B, Jbar, Side::Right, cfg, hint);
            if (left.status == StratifyingVerdict::Status::Inconclusive ||
                right.status == StratifyingVerdict::Status::Inconclusive)
                return 2;
            if (left.status != StratifyingVerdict::Status::Stratifying ||
                right.status != StratifyingVerdict::Status::Stratifying)
                return 1;
            if (k + 1 < cert.chain.ideals.size())
                tw = descend(tw, Jbar);
        }
        return 0;
    }
    case Claim::CellularSystemValid: {
        check(cert.system.has_value(), Errc::Parse, "certificate carries no system evidence");
        check(subject_hash(cert.system->ambient()) == cert.subject_hash, Errc::Input,
              "embedded system is over a different algebra");
        System S(*cert.system);
        return cell::verify_axioms(S).pass ? 0 : 1;
    }
    case Claim::NotQhExhausted: {
        Certificate redo = decide_qh_bounded(A, cert.budget, cfg);
        return redo.claim == Claim::NotQhExhausted ? 0 : 1;
    }
    case Claim::Inconclusive: {
        if (cert.source == CertSource::DecideQh) {
            Certificate redo = decide_qh_bounded(A, cert.budget, cfg);
            return redo.claim == Claim::Inconclusive ? 0 : 1;
        }
        return 2; // other inconclusive certificates carry no replayable search
    }
    }
    throw Error(Errc::InternalCheck, "unknown claim in replay");
}

} // namespace chains
} // namespace strata
