#include "strata/scalar.hpp"

namespace strata {
namespace exact {

namespace {

bool is_prime(unsigned long p) {
    if (p < 2)
        return false;
    for (unsigned long d = 2; d * d <= p; ++d)
        if (p % d == 0)
            return false;
    return true;
}

} // namespace

FieldSpec FieldSpec::prime(unsigned long p) {
    check(is_prime(p), Errc::Input, "characteristic must be prime, got " + std::to_string(p));
    return {FieldKind::PrimeField, p};
}

std::string FieldSpec::str() const {
    return kind == FieldKind::Rationals ? "Q" : "GF(" + std::to_string(characteristic) + ")";
}

Scalar::Scalar(FieldSpec spec, const mpq_class& value) : spec_(spec), v_(value) {
    v_.canonicalize();
    if (spec_.kind == FieldKind::PrimeField)
        reduce_mod_p();
}

void Scalar::reduce_mod_p() {
    mpz_class p(static_cast<unsigned long>(spec_.characteristic));
    mpz_class num = v_.get_num(), den = v_.get_den();
    if (den != 1) {
        // fractions entering GF(p) are resolved by modular inversion of the denominator
        mpz_class dinv;
        int ok = mpz_invert(dinv.get_mpz_t(), den.get_mpz_t(), p.get_mpz_t());
        check(ok != 0, Errc::Input, "denominator not invertible mod " + std::to_string(spec_.characteristic));
        num *= dinv;
    }
    mpz_class r;
    mpz_mod(r.get_mpz_t(), num.get_mpz_t(), p.get_mpz_t());
    v_ = mpq_class(r);
}

Scalar Scalar::of_int(FieldSpec spec, long n) {
    return Scalar(spec, mpq_class(n));
}

Scalar Scalar::operator+(const Scalar& o) const {
    require_same_field(spec_, o.spec_);
    return Scalar(spec_, v_ + o.v_);
}

Scalar Scalar::operator-(const Scalar& o) const {
    require_same_field(spec_, o.spec_);
    return Scalar(spec_, v_ - o.v_);
}

Scalar Scalar::operator*(const Scalar& o) const {
    require_same_field(spec_, o.spec_);
    return Scalar(spec_, v_ * o.v_);
}

Scalar Scalar::operator-() const {
    return Scalar(spec_, -v_);
}

Scalar Scalar::inv() const {
    check(!is_zero(), Errc::Input, "division by zero in " + spec_.str());
    if (spec_.kind == FieldKind::Rationals)
        return Scalar(spec_, 1 / v_);
    mpz_class p(static_cast<unsigned long>(spec_.characteristic)), r;
    mpz_class num = v_.get_num();
    int ok = mpz_invert(r.get_mpz_t(), num.get_mpz_t(), p.get_mpz_t());
    check(ok != 0, Errc::Input, "element not invertible in " + spec_.str());
    return Scalar(spec_, mpq_class(r));
}

Scalar Scalar::pow(unsigned long e) const {
    Scalar r = Scalar::one(spec_), b = *this;
    while (e > 0) {
        if (e & 1)
            r = r * b;
        b = b * b;
        e >>= 1;
    }
    return r;
}

std::string Scalar::str() const {
    if (spec_.kind == FieldKind::PrimeField)
        return v_.get_num().get_str();
    return v_.get_num().get_str() + "/" + v_.get_den().get_str();
}

Scalar Scalar::parse(FieldSpec spec, const std::string& tok) {
    try {
        mpq_class q(tok);
        return Scalar(spec, q);
    } catch (const std::invalid_argument&) {
        throw Error(Errc::Parse, "bad scalar token '" + tok + "'");
    }
}

} // namespace exact
} // namespace strata
