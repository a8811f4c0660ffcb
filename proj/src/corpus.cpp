#include "strata/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>

namespace strata {
namespace corpus {

using alg::AlgebraElement;
using cell::LabeledBasisElement;
using cell::Layer;
using cell::Poset;
using exact::FieldKind;

namespace {

FieldSpec parse_field_token(const std::string& tok) {
    if (tok == "Q")
        return FieldSpec::rationals();
    if (tok.rfind("GF", 0) == 0) {
        const std::string num = tok.substr(2);
        check(!num.empty() && num.find_first_not_of("0123456789") == std::string::npos, Errc::Parse,
              "bad field token '" + tok + "'");
        return FieldSpec::prime(std::stoul(num));
    }
    throw Error(Errc::Parse, "bad field token '" + tok + "'");
}

std::string field_token(const FieldSpec& spec) {
    return spec.kind == FieldKind::Rationals ? "Q" : "GF" + std::to_string(spec.characteristic);
}

std::string padded(const std::string& prefix, std::size_t k) {
    std::ostringstream os;
    os << prefix;
    os.width(2);
    os.fill('0');
    os << k;
    return os.str();
}

// ---------------------------------------------------------------------------
// algebra builders
// ---------------------------------------------------------------------------

Algebra make_matrix_algebra(std::size_t n, FieldSpec spec) {
    std::size_t dim = n * n;
    auto idx = [n](std::size_t r, std::size_t c) { return r * n + c; };
    std::vector<Scalar> sc(dim * dim * dim, Scalar::zero(spec));
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            for (std::size_t c = 0; c < n; ++c)
                for (std::size_t d = 0; d < n; ++d)
                    if (b == c)
                        sc[(idx(a, b) * dim + idx(c, d)) * dim + idx(a, d)] = Scalar::one(spec);
    Matrix unit(spec, dim, 1);
    for (std::size_t i = 0; i < n; ++i)
        unit.at(idx(i, i), 0) = Scalar::one(spec);
    return Algebra(spec, dim, std::move(sc), std::move(unit));
}

Algebra make_upper_triangular(std::size_t n, FieldSpec spec,
                              std::vector<std::pair<std::size_t, std::size_t>>* basis_out = nullptr) {
    std::vector<std::pair<std::size_t, std::size_t>> basis;
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = r; c < n; ++c)
            basis.emplace_back(r, c);
    std::size_t dim = basis.size();
    auto idx = [&basis](std::size_t r, std::size_t c) {
        for (std::size_t i = 0; i < basis.size(); ++i)
            if (basis[i] == std::make_pair(r, c))
                return i;
        throw Error(Errc::InternalCheck, "bad triangular index");
    };
    std::vector<Scalar> sc(dim * dim * dim, Scalar::zero(spec));
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) {
            auto [a, b] = basis[i];
            auto [c, d] = basis[j];
            if (b == c)
                sc[(i * dim + j) * dim + idx(a, d)] = Scalar::one(spec);
        }
    Matrix unit(spec, dim, 1);
    for (std::size_t i = 0; i < n; ++i)
        unit.at(idx(i, i), 0) = Scalar::one(spec);
    if (basis_out)
        *basis_out = basis;
    return Algebra(spec, dim, std::move(sc), std::move(unit));
}

Algebra make_truncated_poly(std::size_t n, FieldSpec spec) {
    std::vector<Scalar> sc(n * n * n, Scalar::zero(spec));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i + j < n)
                sc[(i * n + j) * n + (i + j)] = Scalar::one(spec);
    Matrix unit(spec, n, 1);
    unit.at(0, 0) = Scalar::one(spec);
    return Algebra(spec, n, std::move(sc), std::move(unit));
}

Algebra make_group_cyclic(std::size_t m, FieldSpec spec) {
    std::vector<Scalar> sc(m * m * m, Scalar::zero(spec));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            sc[(i * m + j) * m + ((i + j) % m)] = Scalar::one(spec);
    Matrix unit(spec, m, 1);
    unit.at(0, 0) = Scalar::one(spec);
    return Algebra(spec, m, std::move(sc), std::move(unit));
}

// --- Temperley-Lieb diagrams ------------------------------------------------

struct HalfDiagram {
    std::vector<std::pair<std::size_t, std::size_t>> arcs;
    std::vector<std::size_t> defects; // ascending
};

/// Planar half-diagrams on points lo..hi-1: non-crossing arcs, defects not
/// covered by any arc. Perfect matchings only when allow_defects is false.
void enumerate_half(std::size_t lo, std::size_t hi, bool allow_defects,
                    HalfDiagram& partial, std::vector<HalfDiagram>& out) {
    if (lo == hi) {
        out.push_back(partial);
        return;
    }
    if (allow_defects) {
        partial.defects.push_back(lo);
        enumerate_half(lo + 1, hi, allow_defects, partial, out);
        partial.defects.pop_back();
    }
    for (std::size_t q = lo + 1; q < hi; q += 2) {
        // inside (lo, q) must be perfectly matched; outside continues freely
        std::vector<HalfDiagram> insides;
        {
            HalfDiagram empty;
            enumerate_half(lo + 1, q, false, empty, insides);
        }
        for (const HalfDiagram& in : insides) {
            HalfDiagram saved = partial;
            partial.arcs.emplace_back(lo, q);
            for (const auto& a : in.arcs)
                partial.arcs.push_back(a);
            enumerate_half(q + 1, hi, allow_defects, partial, out);
            partial = saved;
        }
    }
}

std::vector<HalfDiagram> half_diagrams(std::size_t n, std::size_t defect_count) {
    HalfDiagram partial;
    std::vector<HalfDiagram> all;
    enumerate_half(0, n, true, partial, all);
    std::vector<HalfDiagram> out;
    for (const HalfDiagram& h : all)
        if (h.defects.size() == defect_count)
            out.push_back(h);
    return out;
}

/// A full diagram as a mate table on 2n points: top 0..n-1, bottom n..2n-1.
std::vector<std::size_t> diagram_mates(std::size_t n, const HalfDiagram& top,
                                       const HalfDiagram& bottom) {
    std::vector<std::size_t> mate(2 * n, 0);
    auto link = [&mate](std::size_t a, std::size_t b) {
        mate[a] = b;
        mate[b] = a;
    };
    for (const auto& [a, b] : top.arcs)
        link(a, b);
    for (const auto& [a, b] : bottom.arcs)
        link(n + a, n + b);
    check(top.defects.size() == bottom.defects.size(), Errc::InternalCheck, "defect mismatch");
    for (std::size_t k = 0; k < top.defects.size(); ++k)
        link(top.defects[k], n + bottom.defects[k]);
    return mate;
}

/// Composes x above y; returns the resulting mate table and the number of
/// closed loops absorbed into the coefficient delta^loops.
std::pair<std::vector<std::size_t>, std::size_t>
compose_diagrams(std::size_t n, const std::vector<std::size_t>& x, const std::vector<std::size_t>& y) {
    // nodes: 0..n-1 final top, n..2n-1 middle, 2n..3n-1 final bottom
    // x pairs {top, middle}: x-bottom i <-> middle i
    // y pairs {middle, bottom}: y-top i <-> middle i, y-bottom i <-> final bottom i
    auto x_node = [n](std::size_t p) { return p < n ? p : p; };
    (void)x_node;
    std::vector<std::vector<std::size_t>> adj(3 * n);
    auto add_edge = [&adj](std::size_t a, std::size_t b) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    };
    for (std::size_t p = 0; p < 2 * n; ++p) {
        std::size_t q = x[p];
        if (p < q)
            add_edge(p < n ? p : n + (p - n), q < n ? q : n + (q - n));
    }
    for (std::size_t p = 0; p < 2 * n; ++p) {
        std::size_t q = y[p];
        if (p < q) {
            auto node = [n](std::size_t r) { return r < n ? n + r : 2 * n + (r - n); };
            add_edge(node(p), node(q));
        }
    }
    std::vector<bool> visited(3 * n, false);
    std::vector<std::size_t> mate(2 * n, 0);
    auto is_endpoint = [n](std::size_t v) { return v < n || v >= 2 * n; };
    auto as_result = [n](std::size_t v) { return v < n ? v : n + (v - 2 * n); };
    for (std::size_t start = 0; start < 3 * n; ++start) {
        if (visited[start] || !is_endpoint(start))
            continue;
        // walk to the other endpoint
        std::size_t prev = start, cur = adj[start].at(0);
        visited[start] = true;
        while (!is_endpoint(cur)) {
            visited[cur] = true;
            std::size_t next = adj[cur].at(0) == prev ? adj[cur].at(1) : adj[cur].at(0);
            prev = cur;
            cur = next;
        }
        visited[cur] = true;
        mate[as_result(start)] = as_result(cur);
        mate[as_result(cur)] = as_result(start);
    }
    std::size_t loops = 0;
    for (std::size_t start = n; start < 2 * n; ++start) {
        if (visited[start])
            continue;
        ++loops;
        std::size_t prev = start, cur = adj[start].at(0);
        visited[start] = true;
        while (cur != start) {
            visited[cur] = true;
            std::size_t next = adj[cur].at(0) == prev ? adj[cur].at(1) : adj[cur].at(0);
            prev = cur;
            cur = next;
        }
    }
    return {mate, loops};
}

struct TLBasis {
    std::vector<std::vector<std::size_t>> mates; // per basis diagram
    std::vector<Label> labels;                   // layer label per diagram
    std::vector<std::size_t> i_index, j_index;   // half-diagram indices
    std::vector<std::size_t> through_counts;     // descending layer order
    std::map<std::size_t, std::size_t> half_count; // t -> number of half-diagrams
};

TLBasis tl_basis(std::size_t n) {
    TLBasis out;
    for (std::size_t t = n;; t -= 2) {
        std::vector<HalfDiagram> halves = half_diagrams(n, t);
        if (!halves.empty()) {
            out.through_counts.push_back(t);
            out.half_count[t] = halves.size();
            for (std::size_t i = 0; i < halves.size(); ++i)
                for (std::size_t j = 0; j < halves.size(); ++j) {
                    out.mates.push_back(diagram_mates(n, halves[i], halves[j]));
                    out.labels.push_back("t" + std::to_string(t));
                    out.i_index.push_back(i);
                    out.j_index.push_back(j);
                }
        }
        if (t < 2)
            break;
    }
    return out;
}

Algebra make_temperley_lieb(std::size_t n, const Scalar& delta, const TLBasis& basis) {
    FieldSpec spec = delta.spec();
    std::size_t dim = basis.mates.size();
    std::vector<Scalar> sc(dim * dim * dim, Scalar::zero(spec));
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) {
            auto [mate, loops] = compose_diagrams(n, basis.mates[i], basis.mates[j]);
            std::size_t k = dim;
            for (std::size_t c = 0; c < dim; ++c)
                if (basis.mates[c] == mate) {
                    k = c;
                    break;
                }
            check(k < dim, Errc::InternalCheck, "composite diagram not found in the basis");
            sc[(i * dim + j) * dim + k] = delta.pow(loops);
        }
    Matrix unit(spec, dim, 1);
    std::size_t id_index = dim;
    for (std::size_t c = 0; c < dim; ++c) {
        bool is_id = true;
        for (std::size_t p = 0; p < n && is_id; ++p)
            is_id = basis.mates[c][p] == n + p;
        if (is_id) {
            id_index = c;
            break;
        }
    }
    check(id_index < dim, Errc::InternalCheck, "identity diagram not found");
    unit.at(id_index, 0) = Scalar::one(spec);
    return Algebra(spec, dim, std::move(sc), std::move(unit));
}

// ---------------------------------------------------------------------------
// builtin entries
// ---------------------------------------------------------------------------

std::vector<std::string> split_dots(const std::string& s) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : s) {
        if (c == '.') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(cur);
    return parts;
}

CellularDatum one_layer_regular_system(const Algebra& A, const Label& label) {
    Layer layer;
    layer.I_size = 1;
    layer.J_size = 1;
    layer.D = A;
    layer.c.push_back(Matrix::identity(A.spec(), A.dim()));
    std::map<Label, Layer> layers;
    layers.emplace(label, std::move(layer));
    return CellularDatum(A, Poset({label}, {}), std::move(layers));
}

CorpusEntry make_matrix_entry(std::size_t n, FieldSpec spec) {
    CorpusEntry e;
    e.name = "matrix." + std::to_string(n) + "." + field_token(spec);
    e.algebra = make_matrix_algebra(n, spec);
    std::vector<LabeledBasisElement> labels;
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c)
            labels.push_back({"m", r, c, 0, e.algebra.basis_element(r * n + c)});
    e.systems.emplace_back("matrix-units",
                           cell::from_cellular_basis(e.algebra, Poset({"m"}, {}), labels));
    e.primary_system = "matrix-units";
    e.stratify_system = "matrix-units";
    e.expected.system_valid["matrix-units"] = true;
    e.expected.qh = true;
    e.expected.stratified = true;
    e.expected.simple_count = 1;
    e.expected.delta_dims["m"] = n;
    return e;
}

CorpusEntry make_upper_triangular_entry(std::size_t n, FieldSpec spec) {
    CorpusEntry e;
    e.name = "upper_triangular." + std::to_string(n) + "." + field_token(spec);
    std::vector<std::pair<std::size_t, std::size_t>> basis;
    e.algebra = make_upper_triangular(n, spec, &basis);
    std::vector<Label> poset_labels;
    std::vector<std::pair<Label, Label>> rels;
    for (std::size_t r = 0; r < n; ++r)
        poset_labels.push_back(padded("r", r + 1));
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b)
            rels.emplace_back(poset_labels[a], poset_labels[b]);
    std::vector<LabeledBasisElement> labels;
    for (std::size_t idx = 0; idx < basis.size(); ++idx) {
        auto [r, c] = basis[idx];
        labels.push_back({poset_labels[r], 0, c - r, 0, e.algebra.basis_element(idx)});
    }
    e.systems.emplace_back("rows",
                           cell::from_cellular_basis(e.algebra, Poset(poset_labels, rels), labels));
    e.primary_system = "rows";
    e.stratify_system = "rows";
    e.expected.system_valid["rows"] = true;
    e.expected.qh = true;
    e.expected.stratified = true;
    e.expected.simple_count = n;
    for (const Label& l : poset_labels)
        e.expected.delta_dims[l] = 1;

    if (n == 2 && spec.kind == FieldKind::Rationals) {
        // deliberately broken variants exercised by the axiom suite
        auto idx_of = [&basis](std::size_t r, std::size_t c) {
            for (std::size_t i = 0; i < basis.size(); ++i)
                if (basis[i] == std::make_pair(r, c))
                    return i;
            throw Error(Errc::InternalCheck, "bad index");
        };
        Matrix e11 = e.algebra.basis_element(idx_of(0, 0)).coords;
        Matrix e12 = e.algebra.basis_element(idx_of(0, 1)).coords;
        Matrix e22 = e.algebra.basis_element(idx_of(1, 1)).coords;
        Algebra k_alg = Algebra::field_as_algebra(spec);
        {
            // duplicate image: the second layer repeats E12
            Layer top, bot;
            top.I_size = 1;
            top.J_size = 2;
            top.D = k_alg;
            top.c = {e11, e12};
            bot.I_size = 1;
            bot.J_size = 1;
            bot.D = k_alg;
            bot.c = {e12};
            std::map<Label, Layer> layers;
            layers.emplace("r01", std::move(top));
            layers.emplace("r02", std::move(bot));
            e.systems.emplace_back("broken-collision",
                                   CellularDatum(e.algebra, Poset({"r01", "r02"}, {{"r01", "r02"}}),
                                                 std::move(layers)));
            e.expected.system_valid["broken-collision"] = false;
        }
        {
            // E11 alone is not an ideal above the lower layer
            Layer top, bot;
            top.I_size = 1;
            top.J_size = 1;
            top.D = k_alg;
            top.c = {e11};
            bot.I_size = 1;
            bot.J_size = 2;
            bot.D = k_alg;
            bot.c = {e12, e22};
            std::map<Label, Layer> layers;
            layers.emplace("r01", std::move(top));
            layers.emplace("r02", std::move(bot));
            e.systems.emplace_back("broken-layer",
                                   CellularDatum(e.algebra, Poset({"r01", "r02"}, {{"r01", "r02"}}),
                                                 std::move(layers)));
            e.expected.system_valid["broken-layer"] = false;
        }
    }
    return e;
}

CorpusEntry make_truncated_poly_entry(std::size_t n, FieldSpec spec) {
    CorpusEntry e;
    e.name = "truncated_poly." + std::to_string(n) + "." + field_token(spec);
    e.algebra = make_truncated_poly(n, spec);
    std::vector<Label> poset_labels;
    std::vector<std::pair<Label, Label>> rels;
    for (std::size_t k = 1; k <= n; ++k)
        poset_labels.push_back(padded("d", k));
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b)
            rels.emplace_back(poset_labels[a], poset_labels[b]);
    std::vector<LabeledBasisElement> labels;
    for (std::size_t m = 0; m < n; ++m)
        labels.push_back({poset_labels[n - 1 - m], 0, 0, 0, e.algebra.basis_element(m)});
    e.systems.emplace_back("divisible",
                           cell::from_cellular_basis(e.algebra, Poset(poset_labels, rels), labels));
    e.systems.emplace_back("local", one_layer_regular_system(e.algebra, "l"));
    e.primary_system = "divisible";
    e.stratify_system = "local";
    e.expected.system_valid["divisible"] = true;
    e.expected.system_valid["local"] = true;
    e.expected.qh = false;
    e.expected.stratified = true;
    e.expected.simple_count = 1;
    for (const Label& l : poset_labels)
        e.expected.delta_dims[l] = 1;
    return e;
}

CorpusEntry make_group_cyclic_entry(std::size_t m, FieldSpec spec) {
    CorpusEntry e;
    e.name = "group_cyclic." + std::to_string(m) + "." + field_token(spec);
    e.algebra = make_group_cyclic(m, spec);
    e.systems.emplace_back("regular", one_layer_regular_system(e.algebra, "g"));
    e.primary_system = "regular";
    e.stratify_system = "regular";
    e.expected.system_valid["regular"] = true;
    if (spec.kind == FieldKind::PrimeField)
        e.expected.qh = (m % spec.characteristic != 0);
    else if (m <= 6 && m != 5)
        e.expected.qh = true; // cyclotomic blocks of degree <= 2 certify
    e.expected.stratified = true;
    e.expected.delta_dims["g"] = m;
    return e;
}

CorpusEntry make_temperley_lieb_entry(std::size_t n, const std::string& delta_token, FieldSpec spec) {
    check(n >= 2 && n <= 4, Errc::Input, "temperley_lieb supports 2 <= n <= 4");
    Scalar delta = Scalar::parse(spec, delta_token);
    CorpusEntry e;
    e.name = "temperley_lieb." + std::to_string(n) + "." + delta_token + "." + field_token(spec);
    TLBasis basis = tl_basis(n);
    e.algebra = make_temperley_lieb(n, delta, basis);
    std::vector<Label> poset_labels;
    for (std::size_t t : basis.through_counts)
        poset_labels.push_back("t" + std::to_string(t));
    std::vector<std::pair<Label, Label>> rels;
    // fewer through-strands sit strictly higher in the order
    for (std::size_t a = 0; a < basis.through_counts.size(); ++a)
        for (std::size_t b = a + 1; b < basis.through_counts.size(); ++b)
            rels.emplace_back("t" + std::to_string(basis.through_counts[b]),
                              "t" + std::to_string(basis.through_counts[a]));
    std::vector<LabeledBasisElement> labels;
    for (std::size_t c = 0; c < basis.mates.size(); ++c)
        labels.push_back({basis.labels[c], basis.i_index[c], basis.j_index[c], 0,
                          e.algebra.basis_element(c)});
    e.systems.emplace_back("diagram-basis",
                           cell::from_cellular_basis(e.algebra, Poset(poset_labels, rels), labels));
    e.primary_system = "diagram-basis";
    e.stratify_system = "diagram-basis";
    e.expected.system_valid["diagram-basis"] = true;
    if (!delta.is_zero()) {
        e.expected.qh = true;
        e.expected.stratified = true;
    }
    if (delta == Scalar::of_int(spec, 2))
        e.expected.simple_count = basis.through_counts.size();
    for (std::size_t t : basis.through_counts)
        e.expected.delta_dims["t" + std::to_string(t)] = basis.half_count.at(t);
    return e;
}

} // namespace

const CellularDatum& CorpusEntry::system(const std::string& sysname) const {
    for (const auto& [n, s] : systems)
        if (n == sysname)
            return s;
    throw Error(Errc::Input, "entry " + name + " has no system named '" + sysname + "'");
}

CorpusEntry builtin(const std::string& name) {
    std::vector<std::string> p = split_dots(name);
    auto num = [&](const std::string& tok) {
        check(!tok.empty() && tok.find_first_not_of("0123456789") == std::string::npos, Errc::Input,
              "bad numeric parameter '" + tok + "' in corpus name");
        return static_cast<std::size_t>(std::stoul(tok));
    };
    if (p.size() == 3 && p[0] == "matrix")
        return make_matrix_entry(num(p[1]), parse_field_token(p[2]));
    if (p.size() == 3 && p[0] == "upper_triangular")
        return make_upper_triangular_entry(num(p[1]), parse_field_token(p[2]));
    if (p.size() == 3 && p[0] == "truncated_poly")
        return make_truncated_poly_entry(num(p[1]), parse_field_token(p[2]));
    if (p.size() == 3 && p[0] == "group_cyclic")
        return make_group_cyclic_entry(num(p[1]), parse_field_token(p[2]));
    if (p.size() == 4 && p[0] == "temperley_lieb")
        return make_temperley_lieb_entry(num(p[1]), p[2], parse_field_token(p[3]));
    throw Error(Errc::Input, "unknown corpus name '" + name +
                                 "' (expect matrix.N.F, upper_triangular.N.F, truncated_poly.N.F, "
                                 "group_cyclic.M.F, temperley_lieb.N.DELTA.F)");
}

std::vector<std::string> builtin_names() {
    return {
        "matrix.2.Q",          "matrix.2.GF3",        "matrix.3.Q",
        "upper_triangular.2.Q", "upper_triangular.2.GF3", "upper_triangular.3.Q",
        "upper_triangular.3.GF3", "truncated_poly.2.Q", "truncated_poly.2.GF2",
        "truncated_poly.3.Q",  "group_cyclic.2.Q",    "group_cyclic.3.Q",
        "group_cyclic.4.Q",    "group_cyclic.6.Q",    "group_cyclic.2.GF2",
        "group_cyclic.3.GF3",  "temperley_lieb.2.2.Q", "temperley_lieb.3.2.Q",
        "temperley_lieb.4.2.Q",
    };
}

std::vector<CorpusEntry> acceptance_corpus() {
    std::vector<CorpusEntry> out;
    for (const char* name :
         {"upper_triangular.2.Q", "upper_triangular.2.GF3", "upper_triangular.3.Q",
          "upper_triangular.3.GF3", "matrix.2.Q", "matrix.2.GF3", "truncated_poly.2.Q",
          "truncated_poly.2.GF2", "temperley_lieb.3.2.Q"})
        out.push_back(builtin(name));
    return out;
}

CorpusEntry random_basis_change(const CorpusEntry& entry, unsigned long seed) {
    const Algebra& A = entry.algebra;
    std::size_t n = A.dim();
    FieldSpec spec = A.spec();
    std::mt19937_64 gen(seed);
    Matrix S(spec, n, n);
    for (int tries = 0;; ++tries) {
        check(tries < 1000, Errc::InternalCheck, "could not draw an invertible change of basis");
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c) {
                unsigned long long x = gen();
                long v = spec.kind == FieldKind::Rationals
                             ? static_cast<long>(x % 5) - 2
                             : static_cast<long>(x % spec.characteristic);
                S.at(r, c) = Scalar::of_int(spec, v);
            }
        if (exact::is_invertible(S))
            break;
    }
    Matrix Sinv = exact::inverse(S);
    std::vector<Scalar> sc(n * n * n, Scalar::zero(spec));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            AlgebraElement prod = alg::multiply(A, A.element(S.col(i)), A.element(S.col(j)));
            Matrix nc = Sinv * prod.coords;
            for (std::size_t k = 0; k < n; ++k)
                sc[(i * n + j) * n + k] = nc.at(k, 0);
        }
    Algebra conj(spec, n, std::move(sc), Sinv * A.unit_coords());

    CorpusEntry out = entry;
    out.algebra = conj;
    out.systems.clear();
    for (const auto& [name, sys] : entry.systems) {
        std::map<Label, Layer> layers;
        for (const auto& [l, layer] : sys.layers()) {
            Layer moved = layer;
            for (Matrix& c : moved.c)
                c = Sinv * c;
            layers.emplace(l, std::move(moved));
        }
        out.systems.emplace_back(name, CellularDatum(conj, sys.poset(), std::move(layers)));
    }
    return out;
}

// ---------------------------------------------------------------------------
// file formats
// ---------------------------------------------------------------------------

namespace {

class LineReader {
public:
    explicit LineReader(const std::string& text) {
        std::istringstream is(text);
        std::string line;
        while (std::getline(is, line))
            lines_.push_back(line);
    }
    bool done() const { return pos_ >= lines_.size(); }
    const std::string& peek() const {
        check(!done(), Errc::Parse, "unexpected end of file");
        return lines_[pos_];
    }
    std::vector<std::string> next() {
        check(!done(), Errc::Parse, "unexpected end of file at line " + std::to_string(pos_ + 1));
        std::istringstream is(lines_[pos_++]);
        std::vector<std::string> toks;
        std::string t;
        while (is >> t)
            toks.push_back(t);
        return toks;
    }
    std::string next_raw() {
        check(!done(), Errc::Parse, "unexpected end of file");
        return lines_[pos_++];
    }
    /// Reports the line most recently consumed (or about to be, at the start).
    [[noreturn]] void fail(const std::string& msg) const {
        std::size_t at = pos_ == 0 ? 1 : pos_;
        throw Error(Errc::Parse, "parse error at line " + std::to_string(at) + ": " + msg);
    }

private:
    std::vector<std::string> lines_;
    std::size_t pos_ = 0;
};

void expect_header(LineReader& r, const std::string& header) {
    auto toks = r.next();
    std::string joined;
    for (const auto& t : toks)
        joined += (joined.empty() ? "" : " ") + t;
    if (joined != header)
        throw Error(Errc::Parse, "expected '" + header + "' on line 1");
}

std::string field_line(const FieldSpec& spec) {
    return spec.kind == FieldKind::Rationals ? "field Q"
                                             : "field GF " + std::to_string(spec.characteristic);
}

FieldSpec parse_field_line(LineReader& r) {
    auto toks = r.next();
    if (toks.size() == 2 && toks[0] == "field" && toks[1] == "Q")
        return FieldSpec::rationals();
    if (toks.size() == 3 && toks[0] == "field" && toks[1] == "GF")
        return FieldSpec::prime(std::stoul(toks[2]));
    r.fail("expected a field line");
}

void write_algebra_body(std::ostream& os, const Algebra& A) {
    os << field_line(A.spec()) << "\n";
    os << "dim " << A.dim() << "\n";
    os << "unit";
    for (std::size_t i = 0; i < A.dim(); ++i)
        os << " " << A.unit_coords().at(i, 0).str();
    os << "\n";
    for (std::size_t i = 0; i < A.dim(); ++i)
        for (std::size_t j = 0; j < A.dim(); ++j)
            for (std::size_t k = 0; k < A.dim(); ++k)
                if (!A.sc(i, j, k).is_zero())
                    os << "sc " << i << " " << j << " " << k << " " << A.sc(i, j, k).str() << "\n";
}

Algebra parse_algebra_body(LineReader& r, bool verify) {
    FieldSpec spec = parse_field_line(r);
    std::size_t n = 0;
    {
        auto toks = r.next();
        if (toks.size() != 2 || toks[0] != "dim")
            r.fail("expected 'dim <n>'");
        n = std::stoul(toks[1]);
    }
    Matrix unit(spec, n, 1);
    {
        auto toks = r.next();
        if (toks.size() != n + 1 || toks[0] != "unit")
            r.fail("expected 'unit' with " + std::to_string(n) + " scalars");
        for (std::size_t i = 0; i < n; ++i)
            unit.at(i, 0) = Scalar::parse(spec, toks[i + 1]);
    }
    std::vector<Scalar> sc(n * n * n, Scalar::zero(spec));
    while (!r.done() && r.peek().rfind("sc ", 0) == 0) {
        auto toks = r.next();
        if (toks.size() != 5)
            r.fail("expected 'sc i j k scalar'");
        std::size_t i = std::stoul(toks[1]), j = std::stoul(toks[2]), k = std::stoul(toks[3]);
        if (i >= n || j >= n || k >= n)
            r.fail("structure constant index out of range");
        sc[(i * n + j) * n + k] = Scalar::parse(spec, toks[4]);
    }
    Algebra A(spec, n, std::move(sc), std::move(unit));
    if (verify) {
        alg::AlgebraReport rep = alg::algebra_verify(A);
        if (!rep.pass)
            throw Error(Errc::Input, "algebra invariant violated: " + rep.violations.front());
    }
    return A;
}

} // namespace

std::string algebra_to_string(const Algebra& A) {
    std::ostringstream os;
    os << "algebra v1\n";
    write_algebra_body(os, A);
    return os.str();
}

Algebra algebra_from_string(const std::string& text) {
    LineReader r(text);
    expect_header(r, "algebra v1");
    Algebra A = parse_algebra_body(r, true);
    if (!r.done())
        r.fail("trailing content after the algebra");
    return A;
}

namespace {

void write_file(const std::string& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);
    check(os.good(), Errc::Input, "cannot open '" + path + "' for writing");
    os << content;
    check(os.good(), Errc::Input, "write to '" + path + "' failed");
}

std::string read_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    check(is.good(), Errc::Input, "cannot open '" + path + "'");
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

} // namespace

void save_algebra(const Algebra& A, const std::string& path) {
    write_file(path, algebra_to_string(A));
}

Algebra load_algebra(const std::string& path) {
    return algebra_from_string(read_file(path));
}

std::string system_to_string(const CellularDatum& S) {
    std::ostringstream os;
    os << "system v1\n";
    os << "poset";
    std::vector<Label> labels = S.poset().elements();
    std::sort(labels.begin(), labels.end());
    for (const Label& l : labels)
        os << " " << l;
    os << "\n";
    for (const auto& [a, b] : S.poset().strict_pairs())
        os << "rel " << a << " > " << b << "\n";
    for (const auto& [l, layer] : S.layers()) {
        os << "layer " << l << "\n";
        os << "D dim " << layer.D.dim() << "\n";
        os << "D unit";
        for (std::size_t i = 0; i < layer.D.dim(); ++i)
            os << " " << layer.D.unit_coords().at(i, 0).str();
        os << "\n";
        for (std::size_t i = 0; i < layer.D.dim(); ++i)
            for (std::size_t j = 0; j < layer.D.dim(); ++j)
                for (std::size_t k = 0; k < layer.D.dim(); ++k)
                    if (!layer.D.sc(i, j, k).is_zero())
                        os << "D sc " << i << " " << j << " " << k << " "
                           << layer.D.sc(i, j, k).str() << "\n";
        os << "I " << layer.I_size << "\n";
        os << "J " << layer.J_size << "\n";
        for (std::size_t i = 0; i < layer.I_size; ++i)
            for (std::size_t j = 0; j < layer.J_size; ++j) {
                os << "c " << i << " " << j << "\n";
                const Matrix& m = layer.cmap(i, j);
                for (std::size_t k = 0; k < m.cols(); ++k) {
                    for (std::size_t rr = 0; rr < m.rows(); ++rr)
                        os << (rr ? " " : "") << m.at(rr, k).str();
                    os << "\n";
                }
            }
    }
    return os.str();
}

CellularDatum system_from_string(const std::string& text, const Algebra& ambient) {
    LineReader r(text);
    expect_header(r, "system v1");
    FieldSpec spec = ambient.spec();
    std::size_t n = ambient.dim();
    auto poset_toks = r.next();
    if (poset_toks.empty() || poset_toks[0] != "poset")
        r.fail("expected a poset line");
    std::vector<Label> labels(poset_toks.begin() + 1, poset_toks.end());
    std::vector<std::pair<Label, Label>> rels;
    while (!r.done() && r.peek().rfind("rel ", 0) == 0) {
        auto toks = r.next();
        if (toks.size() != 4 || toks[2] != ">")
            r.fail("expected 'rel a > b'");
        rels.emplace_back(toks[1], toks[3]);
    }
    std::map<Label, Layer> layers;
    while (!r.done()) {
        auto toks = r.next();
        if (toks.size() != 2 || toks[0] != "layer")
            r.fail("expected 'layer <label>'");
        Label label = toks[1];
        std::size_t d = 0;
        {
            auto dt = r.next();
            if (dt.size() != 3 || dt[0] != "D" || dt[1] != "dim")
                r.fail("expected 'D dim <d>'");
            d = std::stoul(dt[2]);
        }
        Matrix d_unit(spec, d, 1);
        {
            auto dt = r.next();
            if (dt.size() != d + 2 || dt[0] != "D" || dt[1] != "unit")
                r.fail("expected 'D unit' with " + std::to_string(d) + " scalars");
            for (std::size_t i = 0; i < d; ++i)
                d_unit.at(i, 0) = Scalar::parse(spec, dt[i + 2]);
        }
        std::vector<Scalar> dsc(d * d * d, Scalar::zero(spec));
        while (!r.done() && r.peek().rfind("D sc ", 0) == 0) {
            auto dt = r.next();
            if (dt.size() != 6)
                r.fail("expected 'D sc i j k scalar'");
            std::size_t i = std::stoul(dt[2]), j = std::stoul(dt[3]), k = std::stoul(dt[4]);
            if (i >= d || j >= d || k >= d)
                r.fail("D structure constant index out of range");
            dsc[(i * d + j) * d + k] = Scalar::parse(spec, dt[5]);
        }
        Layer layer;
        layer.D = Algebra(spec, d, std::move(dsc), std::move(d_unit));
        {
            auto it = r.next();
            if (it.size() != 2 || it[0] != "I")
                r.fail("expected 'I <m>'");
            layer.I_size = std::stoul(it[1]);
        }
        {
            auto jt = r.next();
            if (jt.size() != 2 || jt[0] != "J")
                r.fail("expected 'J <m>'");
            layer.J_size = std::stoul(jt[1]);
        }
        for (std::size_t i = 0; i < layer.I_size; ++i)
            for (std::size_t j = 0; j < layer.J_size; ++j) {
                auto ct = r.next();
                if (ct.size() != 3 || ct[0] != "c" || std::stoul(ct[1]) != i ||
                    std::stoul(ct[2]) != j)
                    r.fail("expected 'c " + std::to_string(i) + " " + std::to_string(j) + "'");
                Matrix m(spec, n, d);
                for (std::size_t k = 0; k < d; ++k) {
                    auto col = r.next();
                    if (col.size() != n)
                        r.fail("expected a map column with " + std::to_string(n) + " scalars");
                    for (std::size_t rr = 0; rr < n; ++rr)
                        m.at(rr, k) = Scalar::parse(spec, col[rr]);
                }
                layer.c.push_back(std::move(m));
            }
        if (!layers.emplace(label, std::move(layer)).second)
            r.fail("duplicate layer '" + label + "'");
    }
    return CellularDatum(ambient, Poset(labels, rels), std::move(layers));
}

void save_system(const CellularDatum& S, const std::string& path) {
    write_file(path, system_to_string(S));
}

CellularDatum load_system(const std::string& path, const Algebra& ambient) {
    return system_from_string(read_file(path), ambient);
}

std::string chain_to_string(const std::vector<Subspace>& ideals) {
    std::ostringstream os;
    os << "chain v1\n";
    check(!ideals.empty(), Errc::Input, "empty chain");
    os << "dim " << ideals.front().ambient_dim() << "\n";
    os << "ideals " << ideals.size() << "\n";
    for (std::size_t k = 0; k < ideals.size(); ++k) {
        os << "ideal " << k << " dim " << ideals[k].dim() << "\n";
        for (std::size_t rr = 0; rr < ideals[k].dim(); ++rr) {
            os << "row";
            for (std::size_t c = 0; c < ideals[k].ambient_dim(); ++c)
                os << " " << ideals[k].basis().at(rr, c).str();
            os << "\n";
        }
    }
    return os.str();
}

std::vector<Subspace> chain_from_string(const std::string& text, const FieldSpec& spec) {
    LineReader r(text);
    expect_header(r, "chain v1");
    std::size_t n = 0, m = 0;
    {
        auto toks = r.next();
        if (toks.size() != 2 || toks[0] != "dim")
            r.fail("expected 'dim <n>'");
        n = std::stoul(toks[1]);
    }
    {
        auto toks = r.next();
        if (toks.size() != 2 || toks[0] != "ideals")
            r.fail("expected 'ideals <m>'");
        m = std::stoul(toks[1]);
    }
    std::vector<Subspace> out;
    for (std::size_t k = 0; k < m; ++k) {
        auto toks = r.next();
        if (toks.size() != 4 || toks[0] != "ideal" || toks[2] != "dim")
            r.fail("expected 'ideal <k> dim <d>'");
        std::size_t d = std::stoul(toks[3]);
        Matrix rows(spec, d, n);
        for (std::size_t rr = 0; rr < d; ++rr) {
            auto rt = r.next();
            if (rt.size() != n + 1 || rt[0] != "row")
                r.fail("expected 'row' with " + std::to_string(n) + " scalars");
            for (std::size_t c = 0; c < n; ++c)
                rows.at(rr, c) = Scalar::parse(spec, rt[c + 1]);
        }
        Subspace sp = Subspace::from_rows(rows, n);
        if (sp.dim() != d)
            r.fail("ideal rows are not independent");
        out.push_back(sp);
    }
    if (!r.done())
        r.fail("trailing content after the chain");
    return out;
}

void save_chain(const std::vector<Subspace>& ideals, const std::string& path) {
    write_file(path, chain_to_string(ideals));
}

std::vector<Subspace> load_chain(const std::string& path, const FieldSpec& spec) {
    return chain_from_string(read_file(path), spec);
}

std::string certificate_to_string(const Certificate& c) {
    std::ostringstream os;
    os << "certificate v1\n";
    os << "claim " << chains::claim_token(c.claim) << "\n";
    os << "source " << chains::source_token(c.source) << "\n";
    os << "subject-hash " << c.subject_hash << "\n";
    os << "budget " << c.budget << "\n";
    os << "note " << c.note << "\n";
    if (!c.chain.ideals.empty()) {
        os << "chain " << c.chain.ideals.size() << "\n";
        for (std::size_t k = 0; k < c.chain.ideals.size(); ++k) {
            const Subspace& J = c.chain.ideals[k];
            os << "ideal " << k << " dim " << J.dim() << "\n";
            for (std::size_t rr = 0; rr < J.dim(); ++rr) {
                os << "row";
                for (std::size_t col = 0; col < J.ambient_dim(); ++col)
                    os << " " << J.basis().at(rr, col).str();
                os << "\n";
            }
        }
        for (std::size_t k = 0; k < c.chain.witnesses.size(); ++k) {
            const Matrix& w = c.chain.witnesses[k];
            os << "witness " << (k + 1) << " " << w.rows();
            for (std::size_t rr = 0; rr < w.rows(); ++rr)
                os << " " << w.at(rr, 0).str();
            os << "\n";
        }
    }
    if (c.system.has_value()) {
        os << "system-begin\n";
        os << system_to_string(*c.system);
        os << "system-end\n";
    }
    os << "end\n";
    return os.str();
}

Certificate certificate_from_string(const std::string& text, const Algebra& subject) {
    LineReader r(text);
    expect_header(r, "certificate v1");
    const FieldSpec& spec = subject.spec();
    Certificate cert;
    {
        auto toks = r.next();
        if (toks.size() != 2 || toks[0] != "claim")
            r.fail("expected a claim line");
        cert.claim = chains::parse_claim(toks[1]);
    }
    {
        auto toks = r.next();
        if (toks.size() != 2 || toks[0] != "source")
            r.fail("expected a source line");
        cert.source = chains::parse_source(toks[1]);
    }
    {
        auto toks = r.next();
        if (toks.size() != 2 || toks[0] != "subject-hash")
            r.fail("expected a subject-hash line");
        cert.subject_hash = toks[1];
    }
    {
        auto toks = r.next();
        if (toks.size() != 2 || toks[0] != "budget")
            r.fail("expected a budget line");
        cert.budget = std::stoul(toks[1]);
    }
    {
        std::string raw = r.next_raw();
        if (raw.rfind("note", 0) != 0)
            r.fail("expected a note line");
        cert.note = raw.size() > 5 ? raw.substr(5) : "";
    }
    while (!r.done()) {
        if (r.peek() == "end") {
            r.next();
            if (!r.done())
                r.fail("trailing content after 'end'");
            return cert;
        }
        if (r.peek().rfind("chain ", 0) == 0) {
            auto toks = r.next();
            std::size_t count = std::stoul(toks[1]);
            std::size_t amb = subject.dim();
            for (std::size_t k = 0; k < count; ++k) {
                auto it = r.next();
                if (it.size() != 4 || it[0] != "ideal")
                    r.fail("expected 'ideal <k> dim <d>'");
                std::size_t d = std::stoul(it[3]);
                Matrix mat(spec, d, amb);
                for (std::size_t rr = 0; rr < d; ++rr) {
                    auto rt = r.next();
                    if (rt.size() != amb + 1 || rt[0] != "row")
                        r.fail("expected a row line with " + std::to_string(amb) + " scalars");
                    for (std::size_t c = 0; c < amb; ++c)
                        mat.at(rr, c) = Scalar::parse(spec, rt[c + 1]);
                }
                cert.chain.ideals.push_back(Subspace::from_rows(mat, amb));
            }
            continue;
        }
        if (r.peek().rfind("witness ", 0) == 0) {
            auto toks = r.next();
            if (toks.size() < 3)
                r.fail("expected 'witness <k> <len> ...'");
            std::size_t len = std::stoul(toks[2]);
            if (toks.size() != 3 + len)
                r.fail("witness length mismatch");
            Matrix w(spec, len, 1);
            for (std::size_t i = 0; i < len; ++i)
                w.at(i, 0) = Scalar::parse(spec, toks[3 + i]);
            cert.chain.witnesses.push_back(std::move(w));
            continue;
        }
        if (r.peek() == "system-begin") {
            r.next();
            std::ostringstream buf;
            while (r.peek() != "system-end")
                buf << r.next_raw() << "\n";
            r.next(); // system-end
            cert.system = system_from_string(buf.str(), subject);
            continue;
        }
        r.fail("unexpected line '" + r.peek() + "'");
    }
    r.fail("missing 'end'");
}

void save_certificate(const Certificate& c, const std::string& path) {
    write_file(path, certificate_to_string(c));
}

Certificate load_certificate(const std::string& path, const Algebra& subject) {
    return certificate_from_string(read_file(path), subject);
}

} // namespace corpus
} // namespace strata
