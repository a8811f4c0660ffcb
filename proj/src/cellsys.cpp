#include "strata/cellsys.hpp"

#include <algorithm>
#include <sstream>

namespace strata {
namespace cell {

using alg::multiply;
using alg::QuotientAlgebra;
using exact::rref;

// ---------------------------------------------------------------------------
// Poset
// ---------------------------------------------------------------------------

Poset::Poset(std::vector<Label> elements, std::vector<std::pair<Label, Label>> strictly_greater)
    : elements_(std::move(elements)) {
    check(!elements_.empty(), Errc::Input, "poset must be nonempty");
    {
        auto sorted = elements_;
        std::sort(sorted.begin(), sorted.end());
        check(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end(), Errc::Input,
              "duplicate poset labels");
    }
    std::size_t n = elements_.size();
    gt_.assign(n, std::vector<bool>(n, false));
    for (const auto& [a, b] : strictly_greater)
        gt_[index(a)][index(b)] = true;
    // transitive closure
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            if (gt_[i][k])
                for (std::size_t j = 0; j < n; ++j)
                    if (gt_[k][j])
                        gt_[i][j] = true;
    for (std::size_t i = 0; i < n; ++i) {
        check(!gt_[i][i], Errc::Input, "poset relation is not irreflexive at " + elements_[i]);
        for (std::size_t j = 0; j < n; ++j)
            check(!(gt_[i][j] && gt_[j][i]), Errc::Input,
                  "poset relation is not antisymmetric on " + elements_[i] + "," + elements_[j]);
    }
    // linear extension: repeatedly take the lexicographically least maximal label
    std::vector<bool> used(n, false);
    for (std::size_t step = 0; step < n; ++step) {
        std::size_t best = n;
        for (std::size_t i = 0; i < n; ++i) {
            if (used[i])
                continue;
            bool maximal = true;
            for (std::size_t j = 0; j < n && maximal; ++j)
                if (!used[j] && gt_[j][i])
                    maximal = false;
            if (maximal && (best == n || elements_[i] < elements_[best]))
                best = i;
        }
        check(best != n, Errc::InternalCheck, "no maximal element found");
        used[best] = true;
        linext_.push_back(elements_[best]);
    }
}

std::size_t Poset::index(const Label& l) const {
    for (std::size_t i = 0; i < elements_.size(); ++i)
        if (elements_[i] == l)
            return i;
    throw Error(Errc::Input, "unknown poset label '" + l + "'");
}

bool Poset::greater(const Label& a, const Label& b) const {
    return gt_[index(a)][index(b)];
}

bool Poset::geq(const Label& a, const Label& b) const {
    return a == b || greater(a, b);
}

std::vector<std::pair<Label, Label>> Poset::strict_pairs() const {
    std::vector<std::pair<Label, Label>> out;
    for (std::size_t i = 0; i < elements_.size(); ++i)
        for (std::size_t j = 0; j < elements_.size(); ++j)
            if (gt_[i][j])
                out.emplace_back(elements_[i], elements_[j]);
    std::sort(out.begin(), out.end());
    return out;
}

// ---------------------------------------------------------------------------
// CellularDatum
// ---------------------------------------------------------------------------

CellularDatum::CellularDatum(Algebra ambient, Poset poset, std::map<Label, Layer> layers) {
    auto d = std::make_shared<Data>();
    d->ambient = std::move(ambient);
    d->poset = std::move(poset);
    d->layers = std::move(layers);
    check(!d->layers.empty(), Errc::Input, "a cellular datum needs at least one layer");
    check(d->poset.elements().size() == d->layers.size(), Errc::Input,
          "poset and layer map disagree on labels");
    check(alg::algebra_verify(d->ambient).pass, Errc::Input, "ambient algebra fails its axioms");
    std::size_t n = d->ambient.dim();
    for (const auto& [l, layer] : d->layers) {
        (void)d->poset.greater(l, l) /* validates the label */;
        check(layer.I_size >= 1 && layer.J_size >= 1, Errc::Input,
              "layer " + l + " has an empty index set");
        check(alg::algebra_verify(layer.D).pass, Errc::Input,
              "layer algebra D(" + l + ") fails its axioms");
        exact::require_same_field(layer.D.spec(), d->ambient.spec());
        check(layer.c.size() == layer.I_size * layer.J_size, Errc::Input,
              "layer " + l + " has a wrong number of maps");
        for (const Matrix& m : layer.c)
            check(m.rows() == n && m.cols() == layer.D.dim(), Errc::Dimension,
                  "map matrix of layer " + l + " has wrong shape");
    }
    d_ = std::move(d);
}

const Layer& CellularDatum::layer(const Label& l) const {
    auto it = d_->layers.find(l);
    check(it != d_->layers.end(), Errc::Input, "unknown layer label '" + l + "'");
    return it->second;
}

void Report::add(bool ok, const std::string& name, const std::string& witness) {
    items.push_back({ok, name, witness});
    pass = pass && ok;
}

std::string Report::str() const {
    std::ostringstream os;
    for (const auto& it : items) {
        os << (it.pass ? "ok   " : "FAIL ") << it.name;
        if (!it.witness.empty())
            os << "  [" << it.witness << "]";
        os << "\n";
    }
    os << (pass ? "VERDICT pass" : "VERDICT fail") << "\n";
    return os.str();
}

bool GramTable::all_zero() const {
    for (const Matrix& m : f)
        if (!m.is_zero())
            return false;
    return true;
}

// ---------------------------------------------------------------------------
// System caches
// ---------------------------------------------------------------------------

const LayerSpaces& System::layers(const Label& l) {
    auto& ctx = ctx_[l];
    if (!ctx.spaces.has_value())
        ctx.spaces = layer_spaces(*this, l);
    return *ctx.spaces;
}

const QuotientAlgebra& System::quotient_above(const Label& l) {
    auto& ctx = ctx_[l];
    if (!ctx.quot.has_value())
        ctx.quot = alg::quotient_algebra(ambient(), layers(l).gt);
    return *ctx.quot;
}

const ActionCoeffs& System::coeffs(const Label& l, std::size_t basis_index) {
    auto& ctx = ctx_[l];
    auto it = ctx.coeffs.find(basis_index);
    if (it == ctx.coeffs.end())
        it = ctx.coeffs.emplace(basis_index, action_coeffs(*this, l, ambient().basis_element(basis_index)))
                 .first;
    return it->second;
}

ActionCoeffs System::coeffs_of(const Label& l, const AlgebraElement& a) {
    return action_coeffs(*this, l, a);
}

const StdModule& System::delta(const Label& l) {
    auto& ctx = ctx_[l];
    if (!ctx.delta.has_value())
        ctx.delta = standard_module(*this, l, Side::Left);
    return *ctx.delta;
}

const StdModule& System::delta_op(const Label& l) {
    auto& ctx = ctx_[l];
    if (!ctx.delta_op.has_value())
        ctx.delta_op = standard_module(*this, l, Side::Right);
    return *ctx.delta_op;
}

const GramTable& System::gram(const Label& l) {
    auto& ctx = ctx_[l];
    if (!ctx.gram.has_value())
        ctx.gram = gram_table(*this, l);
    return *ctx.gram;
}

void System::ensure_verified() {
    if (!verified_.has_value()) {
        Report rep = verify_axioms(*this);
        verified_ = rep.pass;
        if (!rep.pass) {
            for (const auto& it : rep.items)
                if (!it.pass)
                    throw Error(Errc::AxiomViolation, it.name + ": " + it.witness);
        }
    }
    check(*verified_, Errc::AxiomViolation, "cellular axioms failed earlier for this datum");
}

// ---------------------------------------------------------------------------
// axiom suite
// ---------------------------------------------------------------------------

Report verify_decomposition(System& S) {
    Report rep;
    const CellularDatum& dat = S.datum();
    std::size_t n = dat.ambient().dim();
    Matrix all(dat.ambient().spec(), n, 0);
    std::size_t total = 0;
    for (const Label& l : dat.poset().linear_extension()) {
        const Layer& layer = dat.layer(l);
        for (std::size_t i = 0; i < layer.I_size; ++i)
            for (std::size_t j = 0; j < layer.J_size; ++j) {
                const Matrix& c = layer.cmap(i, j);
                bool inj = rref(c).rank == layer.D.dim();
                std::ostringstream name;
                name << "injectivity of c^{" << l << "}_{" << i << "," << j << "}";
                rep.add(inj, name.str(), inj ? "" : "column rank deficit");
                all = all.hstack(c);
                total += layer.D.dim();
            }
    }
    bool dims = total == n;
    rep.add(dims, "dimension bookkeeping sum |I||J| dim D = dim A",
            dims ? "" : "got " + std::to_string(total) + " expected " + std::to_string(n));
    std::size_t rank = rref(all).rank;
    bool direct = rank == n && total == n;
    rep.add(direct, "direct sum decomposition of A",
            direct ? "" : "stacked image rank " + std::to_string(rank) + " of " + std::to_string(n));
    return rep;
}

LayerSpaces layer_spaces(System& S, const Label& l) {
    const CellularDatum& dat = S.datum();
    std::size_t n = dat.ambient().dim();
    const FieldSpec& spec = dat.ambient().spec();
    Matrix gt_cols(spec, n, 0), ge_cols(spec, n, 0);
    for (const Label& mu : dat.poset().elements()) {
        bool is_gt = dat.poset().greater(mu, l);
        bool is_ge = is_gt || mu == l;
        if (!is_ge)
            continue;
        const Layer& layer = dat.layer(mu);
        for (const Matrix& c : layer.c) {
            ge_cols = ge_cols.hstack(c);
            if (is_gt)
                gt_cols = gt_cols.hstack(c);
        }
    }
    LayerSpaces out;
    out.gt = Subspace::from_rows(gt_cols.transpose(), n);
    out.ge = Subspace::from_rows(ge_cols.transpose(), n);
    const Layer& layer = dat.layer(l);
    out.layer_dim = layer.I_size * layer.J_size * layer.D.dim();
    auto ic = alg::check_two_sided_ideal(dat.ambient(), out.gt);
    if (!ic.is_ideal)
        throw Error(Errc::AxiomViolation,
                    "A^{>" + l + "} is not a two-sided ideal (basis element " +
                        std::to_string(ic.basis_index) + " escapes)");
    auto ic2 = alg::check_two_sided_ideal(dat.ambient(), out.ge);
    if (!ic2.is_ideal)
        throw Error(Errc::AxiomViolation,
                    "A^{>=" + l + "} is not a two-sided ideal (basis element " +
                        std::to_string(ic2.basis_index) + " escapes)");
    return out;
}

namespace {

/// Columns [c_{0,probe} | ... | c_{last,probe} | basis of A^{>lambda}]; the
/// unique decomposition of layer elements modulo the higher layers.
Matrix stack_probe_columns(const Layer& layer, const Subspace& gt, bool probe_is_j,
                           std::size_t probe) {
    Matrix m(layer.D.spec(), layer.c[0].rows(), 0);
    std::size_t count = probe_is_j ? layer.I_size : layer.J_size;
    for (std::size_t t = 0; t < count; ++t)
        m = m.hstack(probe_is_j ? layer.cmap(t, probe) : layer.cmap(probe, t));
    return m.hstack(gt.basis().transpose());
}

Matrix apply_cmap(const Layer& layer, std::size_t i, std::size_t j, const Matrix& d_coords) {
    return layer.cmap(i, j) * d_coords;
}

} // namespace

ActionCoeffs action_coeffs(System& S, const Label& l, const AlgebraElement& a) {
    const CellularDatum& dat = S.datum();
    const Layer& layer = dat.layer(l);
    const LayerSpaces& ls = S.layers(l);
    const Algebra& A = dat.ambient();
    const Algebra& D = layer.D;
    std::size_t d = D.dim();
    Matrix a_left = alg::regular_rep(A, a, Side::Left);
    Matrix a_right = alg::regular_rep(A, a, Side::Right);

    ActionCoeffs out;
    out.I_size = layer.I_size;
    out.J_size = layer.J_size;
    out.f.assign(layer.I_size * layer.I_size, Matrix(D.spec(), d, 1));
    out.g.assign(layer.J_size * layer.J_size, Matrix(D.spec(), d, 1));

    // extract f from probe j = 0, x = 1; then verify against all j and x
    {
        Matrix cols = stack_probe_columns(layer, ls.gt, true, 0);
        for (std::size_t i = 0; i < layer.I_size; ++i) {
            Matrix w = a_left * apply_cmap(layer, i, 0, D.unit_coords());
            auto u = exact::solve(cols, w);
            if (!u.has_value())
                throw Error(Errc::AxiomViolation, "left congruence unsolvable at layer " + l +
                                                      ", column probe 0, i=" + std::to_string(i));
            for (std::size_t i_out = 0; i_out < layer.I_size; ++i_out)
                out.f[i_out * layer.I_size + i] = u->submatrix(i_out * d, 0, d, 1);
        }
        for (std::size_t j = 0; j < layer.J_size; ++j)
            for (std::size_t i = 0; i < layer.I_size; ++i)
                for (std::size_t k = 0; k < d; ++k) {
                    Matrix x = D.basis_element(k).coords;
                    Matrix lhs = a_left * apply_cmap(layer, i, j, x);
                    Matrix rhs(A.spec(), A.dim(), 1);
                    for (std::size_t i_out = 0; i_out < layer.I_size; ++i_out) {
                        Matrix fx = multiply(D, D.element(out.fr(i_out, i)), D.element(x)).coords;
                        rhs = rhs + apply_cmap(layer, i_out, j, fx);
                    }
                    if (!ls.gt.contains(lhs - rhs))
                        throw Error(Errc::AxiomViolation,
                                    "left congruence coefficient depends on the probe at layer " + l +
                                        ", i=" + std::to_string(i) + ", j=" + std::to_string(j) +
                                        ", delta_" + std::to_string(k));
                }
    }
    // mirror side: extract g from probe i = 0, x = 1
    {
        Matrix cols = stack_probe_columns(layer, ls.gt, false, 0);
        for (std::size_t j = 0; j < layer.J_size; ++j) {
            Matrix w = a_right * apply_cmap(layer, 0, j, D.unit_coords());
            auto u = exact::solve(cols, w);
            if (!u.has_value())
                throw Error(Errc::AxiomViolation, "right congruence unsolvable at layer " + l +
                                                      ", row probe 0, j=" + std::to_string(j));
            for (std::size_t j_out = 0; j_out < layer.J_size; ++j_out)
                out.g[j_out * layer.J_size + j] = u->submatrix(j_out * d, 0, d, 1);
        }
        for (std::size_t i = 0; i < layer.I_size; ++i)
            for (std::size_t j = 0; j < layer.J_size; ++j)
                for (std::size_t k = 0; k < d; ++k) {
                    Matrix x = D.basis_element(k).coords;
                    Matrix lhs = a_right * apply_cmap(layer, i, j, x);
                    Matrix rhs(A.spec(), A.dim(), 1);
                    for (std::size_t j_out = 0; j_out < layer.J_size; ++j_out) {
                        Matrix xg = multiply(D, D.element(x), D.element(out.gr(j_out, j))).coords;
                        rhs = rhs + apply_cmap(layer, i, j_out, xg);
                    }
                    if (!ls.gt.contains(lhs - rhs))
                        throw Error(Errc::AxiomViolation,
                                    "right congruence coefficient depends on the probe at layer " + l +
                                        ", i=" + std::to_string(i) + ", j=" + std::to_string(j) +
                                        ", delta_" + std::to_string(k));
                }
    }
    out.residual_ok = true;
    return out;
}

Report verify_axioms(System& S) {
    Report rep = verify_decomposition(S);
    if (!rep.pass)
        return rep; // layer spaces are meaningless without the decomposition
    const CellularDatum& dat = S.datum();
    for (const Label& l : dat.poset().linear_extension()) {
        try {
            S.layers(l);
            rep.add(true, "layer ideals at " + l);
        } catch (const Error& e) {
            rep.add(false, "layer ideals at " + l, e.what());
            continue;
        }
        bool ok = true;
        std::string witness;
        for (std::size_t t = 0; t < dat.ambient().dim() && ok; ++t) {
            try {
                S.coeffs(l, t);
            } catch (const Error& e) {
                ok = false;
                witness = "basis element " + std::to_string(t) + ": " + e.what();
            }
        }
        rep.add(ok, "layer congruences at " + l, witness);
    }
    return rep;
}

CellularDatum from_cellular_basis(const Algebra& A, const Poset& poset,
                                  const std::vector<LabeledBasisElement>& labeled_basis) {
    check(labeled_basis.size() == A.dim(), Errc::Input,
          "labeled set size differs from dim A; not a basis labeling");
    std::map<Label, Layer> layers;
    std::map<Label, std::map<std::pair<std::size_t, std::size_t>, Matrix>> maps;
    for (const auto& lb : labeled_basis) {
        check(maps[lb.lambda].emplace(std::make_pair(lb.i, lb.j), lb.element.coords).second,
              Errc::Input, "duplicate label (" + lb.lambda + "," + std::to_string(lb.i) + "," +
                               std::to_string(lb.j) + ")");
    }
    for (auto& [l, grid] : maps) {
        std::size_t I = 0, J = 0;
        for (const auto& [ij, m] : grid) {
            I = std::max(I, ij.first + 1);
            J = std::max(J, ij.second + 1);
        }
        check(grid.size() == I * J, Errc::Input,
              "label grid of layer " + l + " is not a full I x J rectangle");
        Layer layer;
        layer.I_size = I;
        layer.J_size = J;
        layer.D = Algebra::field_as_algebra(A.spec());
        for (std::size_t i = 0; i < I; ++i)
            for (std::size_t j = 0; j < J; ++j)
                layer.c.push_back(grid.at({i, j})); // n x 1: x -> x * a_{i,j}
        layers.emplace(l, std::move(layer));
    }
    CellularDatum dat(A, poset, std::move(layers));
    System S(dat);
    Report rep = verify_axioms(S);
    if (!rep.pass) {
        std::string w;
        for (const auto& it : rep.items)
            if (!it.pass) {
                w = it.name + (it.witness.empty() ? "" : " [" + it.witness + "]");
                break;
            }
        throw Error(Errc::AxiomViolation, "not a cellular-type basis: " + w);
    }
    return dat;
}

StdModule standard_module(System& S, const Label& l, Side side) {
    S.ensure_verified();
    const CellularDatum& dat = S.datum();
    const Layer& layer = dat.layer(l);
    const Algebra& A = dat.ambient();
    const Algebra& D = layer.D;
    std::size_t d = D.dim();
    std::size_t copies = side == Side::Left ? layer.I_size : layer.J_size;

    StdModule M;
    M.side = side;
    M.lambda = l;
    M.copies = copies;
    M.d_dim = d;
    M.dim = copies * d;
    for (std::size_t t = 0; t < A.dim(); ++t) {
        const ActionCoeffs& co = S.coeffs(l, t);
        Matrix act(A.spec(), M.dim, M.dim);
        for (std::size_t out = 0; out < copies; ++out)
            for (std::size_t in = 0; in < copies; ++in) {
                // left: a a_i(x) = sum a_{i'}(f_{i'}(a,i) x); right: b_j(x) a = sum b_{j'}(x g_{j'}(j,a))
                Matrix blk = side == Side::Left
                                 ? alg::regular_rep(D, D.element(co.fr(out, in)), Side::Left)
                                 : alg::regular_rep(D, D.element(co.gr(out, in)), Side::Right);
                for (std::size_t r = 0; r < d; ++r)
                    for (std::size_t c = 0; c < d; ++c)
                        act.at(out * d + r, in * d + c) = blk.at(r, c);
            }
        M.A_action.push_back(std::move(act));
    }
    for (std::size_t k = 0; k < d; ++k) {
        // D acts on the right of Delta (a_i(x) y = a_i(xy)) and on the left of
        // its right-module counterpart (y b_j(x) = b_j(yx))
        Matrix blk = side == Side::Left ? alg::regular_rep(D, D.basis_element(k), Side::Right)
                                        : alg::regular_rep(D, D.basis_element(k), Side::Left);
        Matrix act(A.spec(), M.dim, M.dim);
        for (std::size_t cpy = 0; cpy < copies; ++cpy)
            for (std::size_t r = 0; r < d; ++r)
                for (std::size_t c = 0; c < d; ++c)
                    act.at(cpy * d + r, cpy * d + c) = blk.at(r, c);
        M.D_action.push_back(std::move(act));
    }
    for (std::size_t cpy = 0; cpy < copies; ++cpy) {
        Matrix emb(A.spec(), M.dim, d);
        for (std::size_t r = 0; r < d; ++r)
            emb.at(cpy * d + r, r) = Scalar::one(A.spec());
        M.embeddings.push_back(std::move(emb));
    }

    // construction invariants (failures indicate a verification bug)
    auto act_of = [&](const Matrix& coords) {
        Matrix m(A.spec(), M.dim, M.dim);
        for (std::size_t t = 0; t < A.dim(); ++t)
            if (!coords.at(t, 0).is_zero())
                m = m + M.A_action[t] * coords.at(t, 0);
        return m;
    };
    check(act_of(A.unit_coords()) == Matrix::identity(A.spec(), M.dim), Errc::InternalCheck,
          "standard module: unit does not act as identity");
    for (std::size_t s = 0; s < A.dim(); ++s)
        for (std::size_t t = 0; t < A.dim(); ++t) {
            Matrix composed = side == Side::Left ? M.A_action[s] * M.A_action[t]
                                                 : M.A_action[t] * M.A_action[s];
            Matrix prod = act_of(multiply(A, A.basis_element(s), A.basis_element(t)).coords);
            check(composed == prod, Errc::InternalCheck,
                  "standard module action does not respect structure constants");
        }
    for (std::size_t t = 0; t < A.dim(); ++t)
        for (std::size_t k = 0; k < d; ++k)
            check(M.A_action[t] * M.D_action[k] == M.D_action[k] * M.A_action[t], Errc::InternalCheck,
                  "standard module: A- and D-actions do not commute");
    const LayerSpaces& ls = S.layers(l);
    for (std::size_t r = 0; r < ls.gt.dim(); ++r)
        check(act_of(ls.gt.basis_vector(r)).is_zero(), Errc::InternalCheck,
              "A^{>lambda} does not annihilate the standard module");
    return M;
}

StdModule costandard_module(System& S, const Label& l) {
    const StdModule& op = S.delta_op(l);
    StdModule M;
    M.side = Side::Left;
    M.lambda = l;
    M.dim = op.dim;
    M.copies = op.copies;
    M.d_dim = op.d_dim;
    for (const Matrix& act : op.A_action)
        M.A_action.push_back(act.transpose()); // (a phi)(v) = phi(v a)
    for (const Matrix& act : op.D_action)
        M.D_action.push_back(act.transpose());
    M.embeddings = op.embeddings;
    return M;
}

GramTable gram_table(System& S, const Label& l) {
    S.ensure_verified();
    const CellularDatum& dat = S.datum();
    const Layer& layer = dat.layer(l);
    const LayerSpaces& ls = S.layers(l);
    const Algebra& A = dat.ambient();
    const Algebra& D = layer.D;
    std::size_t d = D.dim();
    std::size_t I = layer.I_size, J = layer.J_size;

    // decomposition columns for the whole layer plus the higher layers
    Matrix cols(A.spec(), A.dim(), 0);
    for (std::size_t i = 0; i < I; ++i)
        for (std::size_t j = 0; j < J; ++j)
            cols = cols.hstack(layer.cmap(i, j));
    cols = cols.hstack(ls.gt.basis().transpose());

    GramTable table;
    table.lambda = l;
    table.I_size = I;
    table.J_size = J;
    table.f.assign(J * I, Matrix(D.spec(), d, 1));

    for (std::size_t j = 0; j < J; ++j)
        for (std::size_t ip = 0; ip < I; ++ip) {
            std::optional<Matrix> extracted;
            for (std::size_t i = 0; i < I; ++i)
                for (std::size_t jp = 0; jp < J; ++jp) {
                    AlgebraElement left = A.element(apply_cmap(layer, i, j, D.unit_coords()));
                    AlgebraElement right = A.element(apply_cmap(layer, ip, jp, D.unit_coords()));
                    Matrix prod = multiply(A, left, right).coords;
                    auto u = exact::solve(cols, prod);
                    if (!u.has_value())
                        throw Error(Errc::AxiomViolation,
                                    "layer product escapes A^{>=" + l + "}");
                    // the only nonzero layer block must be (i, jp)
                    Matrix fval(D.spec(), d, 1);
                    for (std::size_t bi = 0; bi < I; ++bi)
                        for (std::size_t bj = 0; bj < J; ++bj) {
                            Matrix blk = u->submatrix((bi * J + bj) * d, 0, d, 1);
                            if (bi == i && bj == jp)
                                fval = blk;
                            else if (!blk.is_zero())
                                throw Error(Errc::AxiomViolation,
                                            "layer product has an off-diagonal block at " + l);
                        }
                    if (!extracted.has_value())
                        extracted = fval;
                    else if (!(*extracted == fval))
                        throw Error(Errc::AxiomViolation,
                                    "Gram entry depends on the probe pair at layer " + l + ", (j=" +
                                        std::to_string(j) + ", i'=" + std::to_string(ip) + ")");
                }
            table.f[j * I + ip] = *extracted;
        }

    // general law c(x) c(y) = c(x f y) on all basis pairs
    for (std::size_t i = 0; i < I; ++i)
        for (std::size_t j = 0; j < J; ++j)
            for (std::size_t ip = 0; ip < I; ++ip)
                for (std::size_t jp = 0; jp < J; ++jp)
                    for (std::size_t kx = 0; kx < d; ++kx)
                        for (std::size_t ky = 0; ky < d; ++ky) {
                            Matrix x = D.basis_element(kx).coords;
                            Matrix y = D.basis_element(ky).coords;
                            Matrix prod = multiply(A, A.element(apply_cmap(layer, i, j, x)),
                                                   A.element(apply_cmap(layer, ip, jp, y)))
                                              .coords;
                            Matrix xfy = multiply(D,
                                                  multiply(D, D.element(x),
                                                           D.element(table.entry(j, ip))),
                                                  D.element(y))
                                             .coords;
                            Matrix expect = apply_cmap(layer, i, jp, xfy);
                            if (!ls.gt.contains(prod - expect))
                                throw Error(Errc::AxiomViolation,
                                            "general Gram law fails at layer " + l);
                        }
    return table;
}

MIsoResult m_iso(System& S, const Label& l) {
    S.ensure_verified();
    const CellularDatum& dat = S.datum();
    const Layer& layer = dat.layer(l);
    const QuotientAlgebra& qa = S.quotient_above(l);
    const LayerSpaces& ls = S.layers(l);
    const Algebra& A = dat.ambient();
    const Algebra& D = layer.D;
    std::size_t d = D.dim(), I = layer.I_size, J = layer.J_size;
    std::size_t src = I * d * J; // basis a_i(delta_k) (x) b_j(1)
    auto src_index = [&](std::size_t i, std::size_t k, std::size_t j) {
        return (i * d + k) * J + j;
    };

    MIsoResult out;
    out.matrix = Matrix(A.spec(), qa.Q.dim(), src);
    for (std::size_t i = 0; i < I; ++i)
        for (std::size_t k = 0; k < d; ++k)
            for (std::size_t j = 0; j < J; ++j) {
                Matrix img = qa.proj * apply_cmap(layer, i, j, D.basis_element(k).coords);
                for (std::size_t r = 0; r < qa.Q.dim(); ++r)
                    out.matrix.at(r, src_index(i, k, j)) = img.at(r, 0);
            }
    out.bijective = rref(out.matrix).rank == src && src == ls.layer_dim;

    // bimodule property on generators, via the quotient algebra's own product
    const StdModule& delta = S.delta(l);
    for (std::size_t t = 0; t < A.dim(); ++t) {
        AlgebraElement at_bar = qa.Q.element(qa.proj * A.basis_element(t).coords);
        Matrix left_mult_Q = alg::regular_rep(qa.Q, at_bar, Side::Left);
        Matrix right_mult_Q = alg::regular_rep(qa.Q, at_bar, Side::Right);
        // left action goes through Delta's action on the left tensor factor;
        // the right action moves b_j(1) to b_{j'}(g), rewritten as
        // a_i(delta_k) (x) b_{j'}(g) = a_i(delta_k g) (x) b_{j'}(1)
        const ActionCoeffs& co = S.coeffs(l, t);
        Matrix tensor_left(A.spec(), src, src), tensor_right(A.spec(), src, src);
        const Matrix& dl = delta.A_action[t];
        for (std::size_t i = 0; i < I; ++i)
            for (std::size_t k = 0; k < d; ++k)
                for (std::size_t j = 0; j < J; ++j) {
                    for (std::size_t i2 = 0; i2 < I; ++i2)
                        for (std::size_t k2 = 0; k2 < d; ++k2) {
                            tensor_left.at(src_index(i2, k2, j), src_index(i, k, j)) =
                                dl.at(i2 * d + k2, i * d + k);
                        }
                    for (std::size_t j2 = 0; j2 < J; ++j2) {
                        Matrix moved =
                            multiply(D, D.basis_element(k), D.element(co.gr(j2, j))).coords;
                        for (std::size_t k2 = 0; k2 < d; ++k2) {
                            Scalar cur = tensor_right.at(src_index(i, k2, j2), src_index(i, k, j));
                            tensor_right.at(src_index(i, k2, j2), src_index(i, k, j)) =
                                cur + moved.at(k2, 0);
                        }
                    }
                }
        check(out.matrix * tensor_left == left_mult_Q * out.matrix, Errc::InternalCheck,
              "m_lambda is not a left module map at " + l);
        check(out.matrix * tensor_right == right_mult_Q * out.matrix, Errc::InternalCheck,
              "m_lambda is not a right module map at " + l);
    }

    // left-module block structure: each column family j realizes Delta(lambda)
    bool decomp = true;
    for (std::size_t j = 0; j < J && decomp; ++j) {
        Matrix T(A.spec(), qa.Q.dim(), I * d);
        for (std::size_t i = 0; i < I; ++i)
            for (std::size_t k = 0; k < d; ++k) {
                Matrix img = qa.proj * apply_cmap(layer, i, j, D.basis_element(k).coords);
                for (std::size_t r = 0; r < qa.Q.dim(); ++r)
                    T.at(r, i * d + k) = img.at(r, 0);
            }
        if (rref(T).rank != I * d)
            decomp = false;
        for (std::size_t t = 0; t < A.dim() && decomp; ++t) {
            AlgebraElement at_bar = qa.Q.element(qa.proj * A.basis_element(t).coords);
            if (T * delta.A_action[t] != alg::regular_rep(qa.Q, at_bar, Side::Left) * T)
                decomp = false;
        }
    }
    out.left_decomp_checked = decomp && out.bijective;
    return out;
}

Matrix PhiResult::pair(const Algebra& D, std::size_t j, const Matrix& x, std::size_t i,
                       const Matrix& y) const {
    return multiply(D, multiply(D, D.element(x), D.element(gram.entry(j, i))), D.element(y)).coords;
}

PhiResult phi(System& S, const Label& l) {
    const GramTable& table = S.gram(l);
    const Layer& layer = S.datum().layer(l);
    const Algebra& D = layer.D;
    PhiResult out;
    out.gram = table;
    std::vector<AlgebraElement> gens;
    for (const Matrix& f : table.f)
        gens.push_back(D.element(f));
    out.image_ideal = alg::ideal_generated(D, gens, alg::Sidedness::TwoSided);

    // balancedness over A (the computation behind the pairing's existence):
    // sum_{j'} g_{j'}(j,a) f(j',i) = sum_{i'} f(j,i') f_{i'}(a,i)
    const Algebra& A = S.ambient();
    for (std::size_t t = 0; t < A.dim(); ++t) {
        const ActionCoeffs& co = S.coeffs(l, t);
        for (std::size_t j = 0; j < layer.J_size; ++j)
            for (std::size_t i = 0; i < layer.I_size; ++i) {
                AlgebraElement lhs = D.zero(), rhs = D.zero();
                for (std::size_t jp = 0; jp < layer.J_size; ++jp)
                    lhs = add(lhs, multiply(D, D.element(co.gr(jp, j)), D.element(table.entry(jp, i))));
                for (std::size_t ip = 0; ip < layer.I_size; ++ip)
                    rhs = add(rhs, multiply(D, D.element(table.entry(j, ip)), D.element(co.fr(ip, i))));
                check(lhs == rhs, Errc::InternalCheck,
                      "phi balancedness identity fails at layer " + l);
            }
    }
    return out;
}

bool check_associativity(System& S, const Label& l) {
    S.ensure_verified();
    const CellularDatum& dat = S.datum();
    const Layer& layer = dat.layer(l);
    const QuotientAlgebra& qa = S.quotient_above(l);
    const Algebra& A = dat.ambient();
    const Algebra& D = layer.D;
    const StdModule& delta = S.delta(l);
    const GramTable& table = S.gram(l);
    std::size_t d = D.dim();

    auto delta_coords = [&](std::size_t i, const Matrix& x) {
        Matrix v(A.spec(), delta.dim, 1);
        for (std::size_t r = 0; r < d; ++r)
            v.at(i * d + r, 0) = x.at(r, 0);
        return v;
    };
    for (std::size_t i = 0; i < layer.I_size; ++i)
        for (std::size_t kd = 0; kd < d; ++kd)
            for (std::size_t j = 0; j < layer.J_size; ++j)
                for (std::size_t kb = 0; kb < d; ++kb)
                    for (std::size_t ip = 0; ip < layer.I_size; ++ip)
                        for (std::size_t kp = 0; kp < d; ++kp) {
                            Matrix dlt = D.basis_element(kd).coords;   // a = a_i(delta)
                            Matrix dltb = D.basis_element(kb).coords;  // b = b_j(delta'')
                            Matrix dltp = D.basis_element(kp).coords;  // a' = a_{i'}(delta')
                            // m(a (x) b) = class of c_{i,j}(delta * delta'')
                            Matrix dd = multiply(D, D.element(dlt), D.element(dltb)).coords;
                            Matrix rep = qa.section * (qa.proj * apply_cmap(layer, i, j, dd));
                            // act with the lifted representative on Delta
                            Matrix act(A.spec(), delta.dim, delta.dim);
                            for (std::size_t t = 0; t < A.dim(); ++t)
                                if (!rep.at(t, 0).is_zero())
                                    act = act + delta.A_action[t] * rep.at(t, 0);
                            Matrix lhs = act * delta_coords(ip, dltp);
                            // a * phi(b (x) a') = a_i(delta * (delta'' f(j,i') delta'))
                            Matrix z = multiply(D,
                                                multiply(D, D.element(dltb),
                                                         D.element(table.entry(j, ip))),
                                                D.element(dltp))
                                           .coords;
                            Matrix rhs = delta_coords(i, multiply(D, D.element(dlt), D.element(z)).coords);
                            if (!(lhs == rhs))
                                return false;
                        }
    return true;
}

Report order_compat(System& S) {
    S.ensure_verified();
    Report rep;
    const CellularDatum& dat = S.datum();
    for (const Label& mu : dat.poset().linear_extension()) {
        const Layer& layer = dat.layer(mu);
        for (const Label& l : dat.poset().linear_extension()) {
            const StdModule& delta = S.delta(l);
            bool ok = true;
            std::string witness;
            for (std::size_t i = 0; i < layer.I_size && ok; ++i)
                for (std::size_t j = 0; j < layer.J_size && ok; ++j)
                    for (std::size_t k = 0; k < layer.D.dim() && ok; ++k) {
                        Matrix v = apply_cmap(layer, i, j, layer.D.basis_element(k).coords);
                        Matrix act(dat.ambient().spec(), delta.dim, delta.dim);
                        for (std::size_t t = 0; t < dat.ambient().dim(); ++t)
                            if (!v.at(t, 0).is_zero())
                                act = act + delta.A_action[t] * v.at(t, 0);
                        if (!act.is_zero() && !dat.poset().geq(l, mu)) {
                            ok = false;
                            witness = "c^{" + mu + "}_{" + std::to_string(i) + "," +
                                      std::to_string(j) + "}(delta_" + std::to_string(k) +
                                      ") acts nonzero on Delta(" + l + ")";
                        }
                    }
            rep.add(ok, "order compatibility of " + mu + " acting on Delta(" + l + ")", witness);
        }
    }
    return rep;
}

LayerRealization layer_realizations(System& S, const Label& l, std::size_t i, std::size_t j) {
    S.ensure_verified();
    const CellularDatum& dat = S.datum();
    const Layer& layer = dat.layer(l);
    const QuotientAlgebra& qa = S.quotient_above(l);
    const Algebra& A = dat.ambient();
    const Algebra& D = layer.D;
    std::size_t d = D.dim();
    check(i < layer.I_size && j < layer.J_size, Errc::Input, "layer index out of range");
    const StdModule& delta = S.delta(l);
    const StdModule& delta_op = S.delta_op(l);

    LayerRealization out;
    out.left_embedding = Matrix(A.spec(), qa.Q.dim(), delta.dim);
    for (std::size_t ip = 0; ip < layer.I_size; ++ip)
        for (std::size_t k = 0; k < d; ++k) {
            Matrix img = qa.proj * apply_cmap(layer, ip, j, D.basis_element(k).coords);
            for (std::size_t r = 0; r < qa.Q.dim(); ++r)
                out.left_embedding.at(r, ip * d + k) = img.at(r, 0);
        }
    out.right_embedding = Matrix(A.spec(), qa.Q.dim(), delta_op.dim);
    for (std::size_t jp = 0; jp < layer.J_size; ++jp)
        for (std::size_t k = 0; k < d; ++k) {
            Matrix img = qa.proj * apply_cmap(layer, i, jp, D.basis_element(k).coords);
            for (std::size_t r = 0; r < qa.Q.dim(); ++r)
                out.right_embedding.at(r, jp * d + k) = img.at(r, 0);
        }
    check(rref(out.left_embedding).rank == delta.dim, Errc::InternalCheck,
          "column realization is not injective at " + l);
    check(rref(out.right_embedding).rank == delta_op.dim, Errc::InternalCheck,
          "row realization is not injective at " + l);
    for (std::size_t t = 0; t < A.dim(); ++t) {
        AlgebraElement at_bar = qa.Q.element(qa.proj * A.basis_element(t).coords);
        check(out.left_embedding * delta.A_action[t] ==
                  alg::regular_rep(qa.Q, at_bar, Side::Left) * out.left_embedding,
              Errc::InternalCheck, "column realization does not intertwine at " + l);
        check(out.right_embedding * delta_op.A_action[t] ==
                  alg::regular_rep(qa.Q, at_bar, Side::Right) * out.right_embedding,
              Errc::InternalCheck, "row realization does not intertwine at " + l);
    }
    out.left_span = Subspace::from_rows(out.left_embedding.transpose(), qa.Q.dim());
    out.right_span = Subspace::from_rows(out.right_embedding.transpose(), qa.Q.dim());
    return out;
}

std::vector<LabeledBasisElement> emit_basis(System& S) {
    const CellularDatum& dat = S.datum();
    Report dec = verify_decomposition(S);
    check(dec.pass, Errc::AxiomViolation, "decomposition must hold before emitting a basis");
    std::vector<LabeledBasisElement> out;
    std::vector<Matrix> cols;
    for (const Label& l : dat.poset().linear_extension()) {
        const Layer& layer = dat.layer(l);
        for (std::size_t i = 0; i < layer.I_size; ++i)
            for (std::size_t j = 0; j < layer.J_size; ++j)
                for (std::size_t k = 0; k < layer.D.dim(); ++k) {
                    Matrix v = apply_cmap(layer, i, j, layer.D.basis_element(k).coords);
                    out.push_back({l, i, j, k, dat.ambient().element(v)});
                    cols.push_back(v);
                }
    }
    check(Subspace::from_vectors(cols, dat.ambient().dim(), dat.ambient().spec()).dim() ==
              dat.ambient().dim(),
          Errc::InternalCheck, "emitted set is not a basis");
    return out;
}

} // namespace cell
} // namespace strata
