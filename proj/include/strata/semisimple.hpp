#pragma once

#include <optional>

#include "strata/algebra.hpp"

namespace strata {
namespace alg {

struct Config {
    bool char_p_fallback = true;        // small-characteristic radical via module splitting
    unsigned long exhaustion_cap = 1ul << 20; // finite-field element-enumeration bound
    std::size_t sweep_budget = 4000;    // candidate elements per splitting sweep
    std::size_t combo_budget = 10000;   // linear-combination search cap
};

/// Jacobson radical. Characteristic 0 or p > dim: radical of the trace form
/// of the left regular representation. Otherwise: splits the regular module
/// into irreducible constituents and intersects their annihilators; throws
/// Errc::Inapplicable when that fallback is disabled.
Subspace radical(const Algebra& A, const Config& cfg = {});

struct IdempotentSplit {
    std::vector<AlgebraElement> idempotents; // complete orthogonal set summing to 1
    bool certified = true;                   // primitivity certified for every summand
};

/// Complete orthogonal idempotent decomposition, primitive when certified.
/// Never throws for lack of certification; see primitive_idempotents.
IdempotentSplit decompose_idempotents(const Algebra& A, const Config& cfg = {});

/// Error carrying the partial decomposition when certification fails.
class InconclusiveSplit : public Error {
public:
    InconclusiveSplit(std::string what, std::vector<AlgebraElement> partial)
        : Error(Errc::Inconclusive, std::move(what)), partial(std::move(partial)) {}
    std::vector<AlgebraElement> partial;
};

/// A certified complete set of primitive orthogonal idempotents summing to 1.
/// Throws InconclusiveSplit when the splitting sweep is exhausted without
/// certifying primitivity (possible only for non-split semisimple quotients).
std::vector<AlgebraElement> primitive_idempotents(const Algebra& A, const Config& cfg = {});

enum class VerdictStatus { Division, NotDivision, Local, NotLocal, Inconclusive };

struct IdempotentVerdict {
    VerdictStatus status = VerdictStatus::Inconclusive;
    std::optional<AlgebraElement> witness; // zero divisor / nontrivial idempotent
    std::string detail;
};

IdempotentVerdict division_verdict(const Algebra& D, const Config& cfg = {});
IdempotentVerdict local_verdict(const Algebra& D, const Config& cfg = {});

/// Newton lift e <- 3e^2 - 2e^3, iterated until stable. Requires x^2 - x
/// nilpotent.
AlgebraElement lift_idempotent_newton(const Algebra& A, const AlgebraElement& x);

/// Module given by raw action matrices (one per algebra basis element).
struct RawModule {
    FieldSpec spec;
    std::size_t dim = 0;
    std::vector<Matrix> action;
};

/// Irreducible constituents of the left regular module (used by the
/// characteristic-p radical; exposed for its oracle tests).
std::vector<RawModule> regular_constituents(const Algebra& A, const Config& cfg = {});

bool is_commutative(const Algebra& A);

} // namespace alg
} // namespace strata
