#pragma once

#include <map>
#include <tuple>

#include "strata/semisimple.hpp"

namespace strata {
namespace cell {

using alg::Algebra;
using alg::AlgebraElement;
using alg::Side;
using exact::FieldSpec;
using exact::Matrix;
using exact::Scalar;
using exact::Subspace;
using Label = std::string;

/// Finite poset of layer labels. The stored linear extension lists greater
/// elements first, ties broken lexicographically; it is the canonical
/// iteration order for chains, layers and filtrations.
class Poset {
public:
    Poset() = default;
    Poset(std::vector<Label> elements, std::vector<std::pair<Label, Label>> strictly_greater);

    const std::vector<Label>& elements() const { return elements_; }
    const std::vector<Label>& linear_extension() const { return linext_; }
    bool greater(const Label& a, const Label& b) const; // a > b
    bool geq(const Label& a, const Label& b) const;
    bool leq(const Label& a, const Label& b) const { return geq(b, a); }
    std::vector<std::pair<Label, Label>> strict_pairs() const; // sorted, transitively closed

private:
    std::size_t index(const Label& l) const;
    std::vector<Label> elements_;
    std::vector<std::vector<bool>> gt_; // gt_[i][j]: elements_[i] > elements_[j]
    std::vector<Label> linext_;
};

/// One layer of a cellular datum: the algebra D(lambda) with its designated
/// basis, the index-set sizes, and the injection matrices c^lambda_{i,j}
/// (columns = images of the D-basis in A-coordinates).
struct Layer {
    std::size_t I_size = 0, J_size = 0;
    Algebra D;
    std::vector<Matrix> c; // I_size * J_size maps, index i * J_size + j, each n x d
    const Matrix& cmap(std::size_t i, std::size_t j) const { return c[i * J_size + j]; }
};

/// The full cellular datum: ambient algebra, poset, and per-label layers.
/// Construction validates shapes and algebra axioms, not the cellular axioms;
/// those are the subject of verify_axioms.
class CellularDatum {
public:
    CellularDatum() = default;
    CellularDatum(Algebra ambient, Poset poset, std::map<Label, Layer> layers);

    const Algebra& ambient() const { return d_->ambient; }
    const Poset& poset() const { return d_->poset; }
    const Layer& layer(const Label& l) const;
    const std::map<Label, Layer>& layers() const { return d_->layers; }

private:
    struct Data {
        Algebra ambient;
        Poset poset;
        std::map<Label, Layer> layers;
    };
    std::shared_ptr<const Data> d_;
};

struct CheckItem {
    bool pass = true;
    std::string name;
    std::string witness; // empty when passing
};

struct Report {
    bool pass = true;
    std::vector<CheckItem> items;
    void add(bool ok, const std::string& name, const std::string& witness = "");
    std::string str() const;
};

struct LayerSpaces {
    Subspace gt, ge;            // A^{>lambda}, A^{>=lambda}
    std::size_t layer_dim = 0;  // |I||J| dim D
};

/// Action coefficients of one algebra element on one layer:
/// f[(i_out, i_in)] and g[(j_out, j_in)] as D-coordinate columns.
struct ActionCoeffs {
    std::size_t I_size = 0, J_size = 0;
    std::vector<Matrix> f; // index i_out * I_size + i_in, each d x 1
    std::vector<Matrix> g; // index j_out * J_size + j_in, each d x 1
    bool residual_ok = true;
    const Matrix& fr(std::size_t i_out, std::size_t i_in) const { return f[i_out * I_size + i_in]; }
    const Matrix& gr(std::size_t j_out, std::size_t j_in) const { return g[j_out * J_size + j_in]; }
};

/// A standard module: Delta(lambda) (left) on coordinates (i, k), or its
/// right counterpart on (j, k); free over D(lambda) by construction.
struct StdModule {
    Side side = Side::Left;
    Label lambda;
    std::size_t dim = 0;
    std::size_t copies = 0;             // |I| (left) or |J| (right)
    std::size_t d_dim = 0;              // dim D(lambda)
    std::vector<Matrix> A_action;       // per algebra basis element
    std::vector<Matrix> D_action;       // per D(lambda) basis element
    std::vector<Matrix> embeddings;     // per copy: dim x d inclusion
};

struct GramTable {
    Label lambda;
    std::size_t I_size = 0, J_size = 0;
    std::vector<Matrix> f; // index j * I_size + i, each d x 1: f^lambda(j, i)
    const Matrix& entry(std::size_t j, std::size_t i) const { return f[j * I_size + i]; }
    bool all_zero() const;
};

struct MIsoResult {
    Matrix matrix; // source (i,k,j)-coordinates -> A/A^{>lambda} coordinates
    bool bijective = false;
    bool left_decomp_checked = false;
};

/// The pairing phi_lambda together with the ideal its values generate.
struct PhiResult {
    GramTable gram;
    Subspace image_ideal; // two-sided ideal of D(lambda)
    /// phi(b_j(x) (x) a_i(y)) = x f(j,i) y, all in D-coordinates.
    Matrix pair(const Algebra& D, std::size_t j, const Matrix& x, std::size_t i, const Matrix& y) const;
};

struct LayerRealization {
    Matrix left_embedding;   // Delta(lambda) -> A/A^{>lambda}, intertwines left actions
    Matrix right_embedding;  // right counterpart
    Subspace left_span, right_span;
};

struct LabeledBasisElement {
    Label lambda;
    std::size_t i = 0, j = 0, k = 0;
    AlgebraElement element;
};

/// A cellular datum plus lazily computed caches (layer spaces, quotients,
/// action coefficients, standard modules, Gram tables). Immutable datum;
/// single-threaded cache mutation.
class System {
public:
    explicit System(CellularDatum datum) : datum_(std::move(datum)) {}
    const CellularDatum& datum() const { return datum_; }
    const Algebra& ambient() const { return datum_.ambient(); }

    const LayerSpaces& layers(const Label& l);
    const alg::QuotientAlgebra& quotient_above(const Label& l); // A / A^{>lambda}
    const ActionCoeffs& coeffs(const Label& l, std::size_t basis_index);
    ActionCoeffs coeffs_of(const Label& l, const AlgebraElement& a); // any element
    const StdModule& delta(const Label& l);
    const StdModule& delta_op(const Label& l);
    const GramTable& gram(const Label& l);

    /// Runs verify_axioms once and throws AxiomViolation unless it passes.
    void ensure_verified();

private:
    friend Report verify_axioms(System& S);
    struct LayerCtx {
        std::optional<LayerSpaces> spaces;
        std::optional<alg::QuotientAlgebra> quot;
        std::map<std::size_t, ActionCoeffs> coeffs;
        std::optional<StdModule> delta, delta_op;
        std::optional<GramTable> gram;
    };
    CellularDatum datum_;
    std::map<Label, LayerCtx> ctx_;
    std::optional<bool> verified_;
};

/// Def-level check: every c injective and the images decompose A.
Report verify_decomposition(System& S);

/// Computes and validates A^{>lambda} and A^{>=lambda} (both two-sided ideals).
LayerSpaces layer_spaces(System& S, const Label& l);

/// Solves the two layer congruences for one element and verifies probe- and
/// argument-independence exactly; throws AxiomViolation on failure.
ActionCoeffs action_coeffs(System& S, const Label& l, const AlgebraElement& a);

/// The full axiom suite: decomposition, layer ideals, both congruences for
/// every algebra basis element and every label. Aggregated, never throws.
Report verify_axioms(System& S);

/// Builds the datum with D(lambda) = k and c(x) = x * a_{i,j} from a labeled
/// basis, then verifies it; throws AxiomViolation ("not a cellular-type
/// basis") with a witness otherwise.
CellularDatum from_cellular_basis(const Algebra& A, const Poset& poset,
                                  const std::vector<LabeledBasisElement>& labeled_basis);

StdModule standard_module(System& S, const Label& l, Side side);

/// Dual of the right standard module, as a left module.
StdModule costandard_module(System& S, const Label& l);

GramTable gram_table(System& S, const Label& l);

/// The bimodule isomorphism Delta (x)_D Delta-op -> A^lambda on generators;
/// verifies bijectivity, both module structures, and the |J| block
/// decomposition of the layer as a left module.
MIsoResult m_iso(System& S, const Label& l);

PhiResult phi(System& S, const Label& l);

/// Exact check of m(a (x) b) a' = a phi(b (x) a') on all generator triples.
bool check_associativity(System& S, const Label& l);

/// Nonzero action of a mu-generator on Delta(lambda) forces lambda >= mu.
Report order_compat(System& S);

LayerRealization layer_realizations(System& S, const Label& l, std::size_t i, std::size_t j);

/// The generalized cellular-type basis B(delta), labeled (lambda,i,j,k).
std::vector<LabeledBasisElement> emit_basis(System& S);

} // namespace cell
} // namespace strata
