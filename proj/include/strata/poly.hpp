#pragma once

#include "strata/scalar.hpp"

#include <vector>

namespace strata {
namespace exact {

/// Univariate polynomial, coefficient vector with c[i] the x^i coefficient.
/// Normalized: no trailing zeros (the zero polynomial has empty c).
class Poly {
public:
    explicit Poly(FieldSpec spec) : spec_(spec) {}
    Poly(FieldSpec spec, std::vector<Scalar> coeffs);
    static Poly from_ints(FieldSpec spec, std::initializer_list<long> coeffs);
    static Poly x_power(FieldSpec spec, std::size_t k);

    const FieldSpec& spec() const { return spec_; }
    bool is_zero() const { return c_.empty(); }
    std::size_t degree() const; // degree of 0 treated as an error
    const std::vector<Scalar>& coeffs() const { return c_; }
    Scalar coeff(std::size_t i) const;
    Scalar leading() const;

    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator*(const Poly& o) const;
    Poly operator*(const Scalar& s) const;
    bool operator==(const Poly& o) const { return spec_ == o.spec_ && c_ == o.c_; }

    Poly monic() const;
    Poly derivative() const;
    std::string str() const;

private:
    void trim();
    FieldSpec spec_;
    std::vector<Scalar> c_;
};

struct PolyDivMod {
    Poly quot, rem;
};
PolyDivMod divmod(const Poly& a, const Poly& b);
Poly poly_mod(const Poly& a, const Poly& m);
Poly poly_gcd(Poly a, Poly b); // monic gcd
struct PolyEgcd {
    Poly g, u, v; // g = u*a + v*b, g monic
};
PolyEgcd poly_egcd(const Poly& a, const Poly& b);
Poly poly_pow_mod(const Poly& base, const mpz_class& e, const Poly& m);

struct PolyFactor {
    Poly f;
    bool irreducible_certified = false;
};

/// Splits a squarefree polynomial into pairwise-coprime factors.
/// Over GF(p): full Berlekamp factorization, every factor certified.
/// Over Q: rational-root extraction plus gcd refinement; residual factors of
/// degree <= 3 are certified irreducible by the rational-root criterion,
/// higher-degree residuals are returned uncertified.
std::vector<PolyFactor> split_squarefree(const Poly& f);

bool is_squarefree(const Poly& f);

/// All rational roots of f (exact, via divisors of the cleared-denominator
/// extreme coefficients). Over GF(p) roots are found by exhaustion.
std::vector<Scalar> poly_roots_in_field(const Poly& f);

} // namespace exact
} // namespace strata
