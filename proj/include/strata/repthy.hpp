#pragma once

#include "strata/cellsys.hpp"

namespace strata {
namespace rep {

using alg::Algebra;
using alg::AlgebraElement;
using alg::Config;
using alg::Side;
using cell::Label;
using cell::Report;
using cell::StdModule;
using cell::System;
using exact::Matrix;
using exact::Subspace;

/// Finite-dimensional module given by one action matrix per algebra basis
/// element. Left modules satisfy rho(ab) = rho(a) rho(b), right modules the
/// reversed law; both act on coordinate columns. Verified on construction.
class AModule {
public:
    AModule() = default;
    AModule(Algebra A, Side side, std::vector<Matrix> action);
    static AModule regular(const Algebra& A, Side side);
    static AModule from_std(const Algebra& A, const StdModule& sm);

    const Algebra& algebra() const { return d_->A; }
    Side side() const { return d_->side; }
    std::size_t dim() const { return d_->dim; }
    const Matrix& action(std::size_t t) const { return d_->action[t]; }
    Matrix act(const Matrix& element_coords) const; // action of a general element

private:
    struct Data {
        Algebra A;
        Side side = Side::Left;
        std::size_t dim = 0;
        std::vector<Matrix> action;
    };
    std::shared_ptr<const Data> d_;
};

struct HomBasis {
    std::size_t dim = 0;
    std::vector<Matrix> basis; // intertwiner matrices N.dim x M.dim
};

/// Solves T rho_M(e_t) = rho_N(e_t) T over all basis elements.
HomBasis hom_space(const AModule& M, const AModule& N);

/// Smallest submodule containing v.
Subspace spin(const AModule& M, const Matrix& v);

AModule submodule(const AModule& M, const Subspace& W);
AModule quotient_module(const AModule& M, const Subspace& W, Matrix* proj_out = nullptr);

/// rad(A) * M, the standard radical description for finite-dimensional A.
Subspace module_radical(const AModule& M, const Config& cfg = {});

// ---------------------------------------------------------------------------
// idempotent-derived projective data (no cellular system involved)
// ---------------------------------------------------------------------------

/// Projectives A e_i with their simple tops, grouped into isomorphism
/// classes. Throws InconclusiveSplit when the idempotent decomposition
/// cannot be certified.
struct ProjectiveData {
    std::vector<AlgebraElement> idempotents;
    std::vector<AModule> projectives;   // A e_i as left modules (or e_i A, right)
    std::vector<AModule> tops;          // simple tops
    std::vector<std::size_t> class_of;  // iso-class index per idempotent
    std::vector<std::size_t> class_reps;
};
ProjectiveData projective_data(const Algebra& A, Side side, const Config& cfg = {});

/// Multiplicity of each projective class in the top of M; M and the data
/// must be on the same side.
std::vector<std::size_t> top_multiplicities(const AModule& M, const ProjectiveData& pd,
                                            const Config& cfg = {});

/// dim M == sum multiplicities * dim P over the top of M; the projective
/// cover surjection is bijective exactly in this case.
bool is_projective(const AModule& M, const ProjectiveData& pd, const Config& cfg = {});

// ---------------------------------------------------------------------------
// spec operations on a verified cellular system
// ---------------------------------------------------------------------------

struct FullnessVerdict {
    Label lambda;
    bool image_equals_D = false;
    bool layer_idempotent = false;
};

/// Computes both sides of the fullness equivalence independently and
/// cross-checks them; disagreement is a hard internal error.
FullnessVerdict fullness(System& S, const Label& l);

/// Labels with nonzero pairing. Requires a divisible system.
std::vector<Label> lambda_irr(System& S, const Config& cfg = {});

/// Kernel of the pairing matrix on Delta(lambda); cross-checked against
/// rad(A) Delta(lambda).
Subspace rad_delta(System& S, const Label& l, const Config& cfg = {});

/// L(lambda) = Delta(lambda)/rad Delta(lambda); simplicity spot-checked by
/// spinning every canonical basis vector.
AModule simple(System& S, const Label& l, const Config& cfg = {});

/// The complete list of simples over Lambda_irr, pairwise non-isomorphic,
/// with completeness checked against the block count of A/rad(A).
std::vector<std::pair<Label, AModule>> classify_simples(System& S, const Config& cfg = {});

/// Composition multiplicity [M : L(lambda)] = dim Hom(P(lambda), M) / dim
/// End(L(lambda)); cross-checked by an explicit radical-series count when
/// dim M <= 8.
std::size_t comp_multiplicity(System& S, const AModule& M, const Label& l, const Config& cfg = {});

/// P(lambda) = A e for a primitive idempotent whose top matches L(lambda).
AModule projective_cover(System& S, const Label& l, const Config& cfg = {});

struct DeltaFiltration {
    std::vector<Subspace> chain;                        // inside the filtered module
    std::vector<std::pair<Label, std::size_t>> sections; // (label, multiplicity), nonzero only
};

/// Filtration J_k P along the linear extension; every section is verified
/// isomorphic to Delta(lambda_k)^m by an explicit isomorphism. When
/// cover_label is given, also enforces the projective-cover multiplicity
/// pattern (sections only at mu >= lambda, multiplicity one at lambda).
DeltaFiltration delta_filtration(System& S, const AModule& P, const Config& cfg = {},
                                 const std::optional<Label>& cover_label = std::nullopt);

/// Hom vanishing for incomparable-or-lower targets plus the endomorphism
/// ring comparison with D(lambda), trying both orientations.
Report hom_delta_check(System& S, const Config& cfg = {});

/// Searches canonical generators and small combinations for v with
/// phi(Delta-op (x) v) = D(lambda); asserts A v = A^lambda v = Delta(lambda)
/// on success.
std::optional<Matrix> cyclic_generator(System& S, const Label& l, const Config& cfg = {});

} // namespace rep
} // namespace strata
