#include "strata/poly.hpp"

#include "strata/matrix.hpp"

#include <algorithm>
#include <sstream>

namespace strata {
namespace exact {

Poly::Poly(FieldSpec spec, std::vector<Scalar> coeffs) : spec_(spec), c_(std::move(coeffs)) {
    for (const auto& s : c_)
        require_same_field(spec_, s.spec());
    trim();
}

Poly Poly::from_ints(FieldSpec spec, std::initializer_list<long> coeffs) {
    std::vector<Scalar> c;
    for (long v : coeffs)
        c.push_back(Scalar::of_int(spec, v));
    return Poly(spec, std::move(c));
}

Poly Poly::x_power(FieldSpec spec, std::size_t k) {
    std::vector<Scalar> c(k + 1, Scalar::zero(spec));
    c[k] = Scalar::one(spec);
    return Poly(spec, std::move(c));
}

void Poly::trim() {
    while (!c_.empty() && c_.back().is_zero())
        c_.pop_back();
}

std::size_t Poly::degree() const {
    check(!is_zero(), Errc::Input, "degree of zero polynomial");
    return c_.size() - 1;
}

Scalar Poly::coeff(std::size_t i) const {
    return i < c_.size() ? c_[i] : Scalar::zero(spec_);
}

Scalar Poly::leading() const {
    check(!is_zero(), Errc::Input, "leading coefficient of zero polynomial");
    return c_.back();
}

Poly Poly::operator+(const Poly& o) const {
    require_same_field(spec_, o.spec_);
    std::vector<Scalar> c(std::max(c_.size(), o.c_.size()), Scalar::zero(spec_));
    for (std::size_t i = 0; i < c.size(); ++i)
        c[i] = coeff(i) + o.coeff(i);
    return Poly(spec_, std::move(c));
}

Poly Poly::operator-(const Poly& o) const {
    require_same_field(spec_, o.spec_);
    std::vector<Scalar> c(std::max(c_.size(), o.c_.size()), Scalar::zero(spec_));
    for (std::size_t i = 0; i < c.size(); ++i)
        c[i] = coeff(i) - o.coeff(i);
    return Poly(spec_, std::move(c));
}

Poly Poly::operator*(const Poly& o) const {
    require_same_field(spec_, o.spec_);
    if (is_zero() || o.is_zero())
        return Poly(spec_);
    std::vector<Scalar> c(c_.size() + o.c_.size() - 1, Scalar::zero(spec_));
    for (std::size_t i = 0; i < c_.size(); ++i)
        for (std::size_t j = 0; j < o.c_.size(); ++j)
            c[i + j] = c[i + j] + c_[i] * o.c_[j];
    return Poly(spec_, std::move(c));
}

Poly Poly::operator*(const Scalar& s) const {
    std::vector<Scalar> c = c_;
    for (auto& x : c)
        x = x * s;
    return Poly(spec_, std::move(c));
}

Poly Poly::monic() const {
    check(!is_zero(), Errc::Input, "monic of zero polynomial");
    return *this * leading().inv();
}

Poly Poly::derivative() const {
    if (c_.size() <= 1)
        return Poly(spec_);
    std::vector<Scalar> c(c_.size() - 1, Scalar::zero(spec_));
    for (std::size_t i = 1; i < c_.size(); ++i)
        c[i - 1] = c_[i] * Scalar::of_int(spec_, static_cast<long>(i));
    return Poly(spec_, std::move(c));
}

std::string Poly::str() const {
    if (is_zero())
        return "0";
    std::ostringstream os;
    for (std::size_t i = c_.size(); i-- > 0;) {
        if (c_[i].is_zero())
            continue;
        if (os.tellp() > 0)
            os << " + ";
        os << c_[i].str();
        if (i > 0)
            os << "*x^" << i;
    }
    return os.str();
}

PolyDivMod divmod(const Poly& a, const Poly& b) {
    check(!b.is_zero(), Errc::Input, "polynomial division by zero");
    require_same_field(a.spec(), b.spec());
    FieldSpec spec = a.spec();
    std::vector<Scalar> rem(a.coeffs());
    std::size_t db = b.degree();
    if (rem.size() < db + 1)
        return {Poly(spec), Poly(spec, std::move(rem))};
    std::vector<Scalar> quot(rem.size() - db, Scalar::zero(spec));
    Scalar lb = b.leading().inv();
    for (std::size_t i = rem.size(); i-- > db;) {
        if (rem[i].is_zero())
            continue;
        Scalar q = rem[i] * lb;
        quot[i - db] = q;
        for (std::size_t j = 0; j <= db; ++j)
            rem[i - db + j] = rem[i - db + j] - q * b.coeff(j);
    }
    return {Poly(spec, std::move(quot)), Poly(spec, std::move(rem))};
}

Poly poly_mod(const Poly& a, const Poly& m) {
    return divmod(a, m).rem;
}

Poly poly_gcd(Poly a, Poly b) {
    require_same_field(a.spec(), b.spec());
    while (!b.is_zero()) {
        Poly r = poly_mod(a, b);
        a = b;
        b = r;
    }
    return a.is_zero() ? a : a.monic();
}

PolyEgcd poly_egcd(const Poly& a, const Poly& b) {
    FieldSpec spec = a.spec();
    Poly r0 = a, r1 = b;
    Poly s0 = Poly::from_ints(spec, {1}), s1 = Poly(spec);
    Poly t0 = Poly(spec), t1 = Poly::from_ints(spec, {1});
    while (!r1.is_zero()) {
        PolyDivMod qr = divmod(r0, r1);
        Poly r2 = qr.rem;
        Poly s2 = s0 - qr.quot * s1;
        Poly t2 = t0 - qr.quot * t1;
        r0 = r1;
        r1 = r2;
        s0 = s1;
        s1 = s2;
        t0 = t1;
        t1 = t2;
    }
    check(!r0.is_zero(), Errc::Input, "egcd of two zero polynomials");
    Scalar inv = r0.leading().inv();
    return {r0 * inv, s0 * inv, t0 * inv};
}

Poly poly_pow_mod(const Poly& base, const mpz_class& e, const Poly& m) {
    FieldSpec spec = base.spec();
    Poly result = Poly::from_ints(spec, {1});
    Poly b = poly_mod(base, m);
    mpz_class k = e;
    while (k > 0) {
        if (mpz_odd_p(k.get_mpz_t()))
            result = poly_mod(result * b, m);
        b = poly_mod(b * b, m);
        k >>= 1;
    }
    return result;
}

bool is_squarefree(const Poly& f) {
    if (f.is_zero() || f.degree() == 0)
        return true;
    Poly d = f.derivative();
    if (d.is_zero())
        return false; // p-th power artifacts in characteristic p
    return poly_gcd(f, d).degree() == 0;
}

std::vector<Scalar> poly_roots_in_field(const Poly& f) {
    check(!f.is_zero(), Errc::Input, "roots of zero polynomial");
    FieldSpec spec = f.spec();
    std::vector<Scalar> roots;
    if (spec.kind == FieldKind::PrimeField) {
        for (unsigned long r = 0; r < spec.characteristic; ++r) {
            Scalar x = Scalar::of_int(spec, static_cast<long>(r));
            Scalar val = Scalar::zero(spec);
            for (std::size_t i = f.coeffs().size(); i-- > 0;)
                val = val * x + f.coeff(i);
            if (val.is_zero())
                roots.push_back(x);
        }
        return roots;
    }
    // clear denominators: integer polynomial, candidates num/den with
    // num | constant term and den | leading term
    mpz_class lcm_den = 1;
    for (const auto& c : f.coeffs())
        mpz_lcm(lcm_den.get_mpz_t(), lcm_den.get_mpz_t(), c.value().get_den().get_mpz_t());
    std::vector<mpz_class> ic;
    for (const auto& c : f.coeffs()) {
        mpq_class q = c.value() * mpq_class(lcm_den);
        ic.push_back(q.get_num());
    }
    while (!ic.empty() && ic.front() == 0) {
        // zero constant term: x = 0 is a root; shift down
        if (roots.empty() || !(roots.back() == Scalar::zero(spec)))
            roots.push_back(Scalar::zero(spec));
        ic.erase(ic.begin());
    }
    if (ic.size() <= 1)
        return roots;
    mpz_class a0 = abs(ic.front()), an = abs(ic.back());
    auto divisors = [](const mpz_class& n) {
        std::vector<mpz_class> ds;
        for (mpz_class d = 1; d * d <= n; ++d)
            if (n % d == 0) {
                ds.push_back(d);
                if (d * d != n)
                    ds.push_back(n / d);
            }
        std::sort(ds.begin(), ds.end());
        return ds;
    };
    for (const mpz_class& p : divisors(a0))
        for (const mpz_class& q : divisors(an))
            for (int sign : {1, -1}) {
                mpq_class cand(sign * p, q);
                cand.canonicalize();
                Scalar x(spec, cand);
                Scalar val = Scalar::zero(spec);
                for (std::size_t i = f.coeffs().size(); i-- > 0;)
                    val = val * x + f.coeff(i);
                if (val.is_zero() && std::find(roots.begin(), roots.end(), x) == roots.end())
                    roots.push_back(x);
            }
    return roots;
}

namespace {

/// Berlekamp over GF(p): returns the monic irreducible factors of a
/// squarefree monic f.
std::vector<Poly> berlekamp(const Poly& f) {
    FieldSpec spec = f.spec();
    unsigned long p = spec.characteristic;
    std::vector<Poly> done, work{f.monic()};
    while (!work.empty()) {
        Poly g = work.back();
        work.pop_back();
        std::size_t n = g.degree();
        if (n <= 1) {
            done.push_back(g);
            continue;
        }
        // Q matrix: row i = coefficients of x^{p*i} mod g
        std::vector<std::vector<Scalar>> Q(n, std::vector<Scalar>(n, Scalar::zero(spec)));
        for (std::size_t i = 0; i < n; ++i) {
            Poly xi = poly_pow_mod(Poly::x_power(spec, 1), mpz_class(static_cast<unsigned long>(i)) * p, g);
            for (std::size_t j = 0; j < n; ++j)
                Q[i][j] = xi.coeff(j);
        }
        // kernel of (Q - I)^T: Frobenius-fixed subalgebra
        Matrix M(spec, n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                M.at(j, i) = Q[i][j];
                if (i == j)
                    M.at(j, i) = M.at(j, i) - Scalar::one(spec);
            }
        Matrix K = kernel_basis(M);
        if (K.rows() <= 1) {
            done.push_back(g); // irreducible
            continue;
        }
        bool split = false;
        for (std::size_t r = 0; r < K.rows() && !split; ++r) {
            std::vector<Scalar> vc(n, Scalar::zero(spec));
            for (std::size_t j = 0; j < n; ++j)
                vc[j] = K.at(r, j);
            Poly v(spec, vc);
            if (v.is_zero() || v.degree() == 0)
                continue; // constant kernel vector cannot split
            for (unsigned long c = 0; c < p && !split; ++c) {
                Poly shifted = v - Poly(spec, {Scalar::of_int(spec, static_cast<long>(c))});
                Poly d = poly_gcd(g, shifted);
                if (!d.is_zero() && d.degree() > 0 && d.degree() < g.degree()) {
                    work.push_back(d);
                    work.push_back(divmod(g, d).quot.monic());
                    split = true;
                }
            }
        }
        check(split, Errc::InternalCheck, "Berlekamp found a kernel but no splitting gcd");
    }
    std::sort(done.begin(), done.end(),
              [](const Poly& a, const Poly& b) { return a.str() < b.str(); });
    return done;
}

} // namespace

std::vector<PolyFactor> split_squarefree(const Poly& f) {
    check(!f.is_zero() && f.degree() >= 1, Errc::Input, "split_squarefree expects positive degree");
    check(is_squarefree(f), Errc::Input, "split_squarefree expects a squarefree polynomial");
    FieldSpec spec = f.spec();
    if (spec.kind == FieldKind::PrimeField) {
        std::vector<PolyFactor> out;
        for (const Poly& g : berlekamp(f))
            out.push_back({g, true});
        return out;
    }
    // over Q: peel off rational roots, keep the residual as one factor
    Poly rest = f.monic();
    std::vector<PolyFactor> out;
    for (const Scalar& r : poly_roots_in_field(rest)) {
        Poly lin(spec, {-r, Scalar::one(spec)});
        PolyDivMod qr = divmod(rest, lin);
        check(qr.rem.is_zero(), Errc::InternalCheck, "claimed rational root does not divide");
        out.push_back({lin, true});
        rest = qr.quot;
    }
    if (!rest.is_zero() && rest.degree() >= 1) {
        // degree 2 or 3 with no rational root is irreducible over Q
        bool cert = rest.degree() <= 3;
        out.push_back({rest.monic(), cert});
    }
    return out;
}

} // namespace exact
} // namespace strata
