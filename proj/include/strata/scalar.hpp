#pragma once

#include <gmpxx.h>

#include <string>

#include "strata/error.hpp"

namespace strata {
namespace exact {

enum class FieldKind { Rationals, PrimeField };

/// The base field: the rationals or a prime field GF(p).
struct FieldSpec {
    FieldKind kind = FieldKind::Rationals;
    unsigned long characteristic = 0; // 0 for Q, prime p for GF(p)

    static FieldSpec rationals() { return {FieldKind::Rationals, 0}; }
    static FieldSpec prime(unsigned long p);

    bool operator==(const FieldSpec&) const = default;
    std::string str() const;
};

/// An exact field element: a reduced fraction over Q, or a residue in [0,p).
class Scalar {
public:
    Scalar() = default; // rational zero
    Scalar(FieldSpec spec, const mpq_class& value);
    static Scalar of_int(FieldSpec spec, long n);
    static Scalar zero(FieldSpec spec) { return of_int(spec, 0); }
    static Scalar one(FieldSpec spec) { return of_int(spec, 1); }

    const FieldSpec& spec() const { return spec_; }
    const mpq_class& value() const { return v_; }
    bool is_zero() const { return v_ == 0; }
    bool is_one() const { return v_ == 1; }

    Scalar operator+(const Scalar& o) const;
    Scalar operator-(const Scalar& o) const;
    Scalar operator*(const Scalar& o) const;
    Scalar operator-() const;
    Scalar inv() const; // throws on zero
    Scalar operator/(const Scalar& o) const { return *this * o.inv(); }
    Scalar pow(unsigned long e) const;

    bool operator==(const Scalar& o) const { return spec_ == o.spec_ && v_ == o.v_; }
    bool operator!=(const Scalar& o) const { return !(*this == o); }

    /// Canonical text form: "p/q" over Q (q > 0, reduced), plain residue over GF(p).
    std::string str() const;
    static Scalar parse(FieldSpec spec, const std::string& tok);

private:
    void reduce_mod_p();
    FieldSpec spec_ = FieldSpec::rationals();
    mpq_class v_ = 0;
};

inline void require_same_field(const FieldSpec& a, const FieldSpec& b) {
    check(a == b, Errc::FieldMismatch, "operands over different fields: " + a.str() + " vs " + b.str());
}

} // namespace exact
} // namespace strata
