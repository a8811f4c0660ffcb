#pragma once

#include "strata/chains.hpp"

#include <iosfwd>

namespace strata {
namespace corpus {

using alg::Algebra;
using cell::CellularDatum;
using cell::Label;
using chains::Certificate;
using exact::FieldSpec;
using exact::Matrix;
using exact::Scalar;
using exact::Subspace;

/// Expected verdicts frozen per entry. Only the fields that were derived
/// independently are set; tests assert exactly what is present.
struct Expected {
    std::map<std::string, bool> system_valid;       // per named system
    std::optional<bool> qh;                          // bounded search outcome positive
    std::optional<bool> stratified;                  // via the stratify system
    std::optional<std::size_t> simple_count;         // |Lambda_irr| of the primary system
    std::map<Label, std::size_t> delta_dims;         // of the primary system
};

struct CorpusEntry {
    std::string name;
    Algebra algebra;
    std::vector<std::pair<std::string, CellularDatum>> systems;
    std::string primary_system;  // divisible / certification subject
    std::string stratify_system; // subject for the stratification route
    Expected expected;

    const CellularDatum& system(const std::string& sysname) const;
};

/// Builds a corpus entry from a dotted name: matrix.N.F, upper_triangular.N.F,
/// truncated_poly.N.F, group_cyclic.M.F, temperley_lieb.N.DELTA.F with
/// F in {Q, GF<p>} (written GF2, GF3, ...). Temperley-Lieb supports n <= 4.
CorpusEntry builtin(const std::string& name);

/// Canonical demonstration set for `corpus list`.
std::vector<std::string> builtin_names();

/// The systems exercised by the acceptance suite.
std::vector<CorpusEntry> acceptance_corpus();

/// Conjugates the algebra by a seeded random invertible matrix and transports
/// every system along; deterministic per seed.
CorpusEntry random_basis_change(const CorpusEntry& entry, unsigned long seed);

// --- file formats (line-oriented, canonical; loading re-validates) ---------

std::string algebra_to_string(const Algebra& A);
Algebra algebra_from_string(const std::string& text);
void save_algebra(const Algebra& A, const std::string& path);
Algebra load_algebra(const std::string& path);

/// System files carry the poset and layers; the ambient algebra comes from
/// its own file and is wired in at load time.
std::string system_to_string(const CellularDatum& S);
CellularDatum system_from_string(const std::string& text, const Algebra& ambient);
void save_system(const CellularDatum& S, const std::string& path);
CellularDatum load_system(const std::string& path, const Algebra& ambient);

std::string chain_to_string(const std::vector<Subspace>& ideals);
std::vector<Subspace> chain_from_string(const std::string& text, const FieldSpec& spec);
void save_chain(const std::vector<Subspace>& ideals, const std::string& path);
std::vector<Subspace> load_chain(const std::string& path, const FieldSpec& spec);

std::string certificate_to_string(const Certificate& c);
Certificate certificate_from_string(const std::string& text, const Algebra& subject);
void save_certificate(const Certificate& c, const std::string& path);
Certificate load_certificate(const std::string& path, const Algebra& subject);

} // namespace corpus
} // namespace strata
