#pragma once

#include "strata/repthy.hpp"

namespace strata {
namespace chains {

using alg::Algebra;
using alg::AlgebraElement;
using alg::Config;
using cell::CellularDatum;
using cell::Label;
using cell::System;
using exact::Matrix;
using exact::Subspace;

enum class ChainKind { Heredity, StandardStratification, Unverified };

/// An increasing chain 0 = J_0 c J_1 c ... c J_m = A of two-sided ideals,
/// with the verifying idempotent of each step J_k/J_{k-1} recorded in the
/// canonical coordinates of A/J_{k-1}.
struct IdealChain {
    ChainKind kind = ChainKind::Unverified;
    std::vector<Subspace> ideals; // includes both endpoints
    std::vector<Matrix> witnesses; // one per step; empty when unverified
    std::size_t steps() const { return ideals.empty() ? 0 : ideals.size() - 1; }
};

enum class Claim { QuasiHereditary, StandardlyStratified, CellularSystemValid, NotQhExhausted, Inconclusive };
enum class CertSource { DecideQh, Stratify, VerifySystem, FromChain };

/// A serializable verdict object; the evidence suffices for independent
/// re-verification from the subject algebra alone.
struct Certificate {
    Claim claim = Claim::Inconclusive;
    CertSource source = CertSource::DecideQh;
    std::string subject_hash;
    unsigned long budget = 0; // for search-based claims
    std::string note;
    IdealChain chain;                          // QH / SS evidence
    std::optional<CellularDatum> system;       // CellularSystemValid evidence
};

std::string claim_token(Claim c);
Claim parse_claim(const std::string& tok);
std::string source_token(CertSource s);
CertSource parse_source(const std::string& tok);

/// Deterministic identity hash of an algebra (FNV-1a over the canonical
/// structure-constant listing).
std::string subject_hash(const Algebra& A);

/// Builds J_k along the stored linear extension and verifies each is a
/// two-sided ideal containing A^{>=lambda_k}.
IdealChain chain_from_system(System& S);

struct HeredityVerdict {
    enum class Status { Heredity, NotHeredity, Inconclusive };
    Status status = Status::Inconclusive;
    bool idempotent_generated = false; // J = AeA for some searched e
    bool rad_condition = false;        // J rad(A) J = 0
    bool projective = false;           // J projective as a left module
    std::optional<AlgebraElement> witness;
    std::string detail;
};

/// The three-part heredity test. The idempotent is searched among sums of a
/// complete primitive set (optionally seeded with a hint); left projectivity
/// is decided by comparing against the projective cover of the top.
HeredityVerdict verify_heredity_ideal(const Algebra& A, const Subspace& J, const Config& cfg = {},
                                      const std::optional<AlgebraElement>& hint = std::nullopt);

struct ChainVerification {
    bool ok = false;
    bool inconclusive = false;
    std::string failure; // names the failing step
    IdealChain chain;    // kind set and witnesses filled when ok
};

ChainVerification verify_heredity_chain(const Algebra& A, const std::vector<Subspace>& ideals,
                                        const Config& cfg = {});

/// The constructive direction of the main equivalence: from a verified
/// heredity chain to a full divisible cellular system whose layers realize
/// the chain steps. The result must pass the full axiom suite, fullness and
/// divisibility at every label; any failure is a hard internal error.
CellularDatum system_from_heredity_chain(const Algebra& A, const std::vector<Subspace>& ideals,
                                         const Config& cfg = {});

struct CertifyOutcome {
    enum class Kind { Certified, Refuted, Inconclusive };
    Kind kind = Kind::Refuted;
    Certificate cert;       // set when Certified or Inconclusive
    std::string refutation; // set when Refuted, names the offending label
};

/// Quasi-heredity from a full divisible system: checks divisibility and
/// fullness per label, then re-verifies the induced chain step by step.
CertifyOutcome certify_qh_from_system(System& S, const Config& cfg = {});

struct StratifyingVerdict {
    enum class Status { Stratifying, NotStratifying, Inconclusive };
    Status status = Status::Inconclusive;
    std::optional<AlgebraElement> witness;
    std::string detail;
};

StratifyingVerdict verify_stratifying_ideal(const Algebra& A, const Subspace& J, alg::Side side,
                                            const Config& cfg = {},
                                            const std::optional<AlgebraElement>& hint = std::nullopt);

/// Standard stratification via the invertible-Gram-entry route, with the
/// full-local hypothesis accepted as an equivalent entry point; every chain
/// step is verified stratifying on both sides.
CertifyOutcome stratification_from_local_system(System& S, const Config& cfg = {});

/// Bounded depth-first search for a heredity chain over idempotent-sum
/// candidates; returns QuasiHereditary, NotQH-exhausted or Inconclusive as a
/// certificate value (budget counts heredity-ideal verifications).
Certificate decide_qh_bounded(const Algebra& A, unsigned long budget, const Config& cfg = {});

/// Re-verifies a certificate from the file data and the subject algebra
/// alone. Returns the claim status: 0 verified, 1 refuted, 2 inconclusive.
int replay_certificate(const Certificate& cert, const Algebra& A, const Config& cfg = {});

} // namespace chains
} // namespace strata
