#pragma once

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "bv/fp.hpp"

namespace bv {

// Dense univariate polynomial over F_p, coefficients normalized to [0,p).
struct Poly {
    std::int64_t p = 0;
    std::vector<std::int64_t> c; // c[i] = coefficient of x^i; trailing zeros trimmed

    Poly() = default;
    explicit Poly(std::int64_t prime) : p(prime) {}
    Poly(std::int64_t prime, std::vector<std::int64_t> coeffs) : p(prime), c(std::move(coeffs)) {
        normalize();
    }
    static Poly constant(std::int64_t prime, std::int64_t value) {
        return Poly(prime, {value});
    }
    static Poly variable(std::int64_t prime) { return Poly(prime, {0, 1}); }

    void normalize() {
        for (auto& x : c) { x %= p; if (x < 0) x += p; }
        while (!c.empty() && c.back() == 0) c.pop_back();
    }
    bool is_zero() const { return c.empty(); }
    int degree() const { return static_cast<int>(c.size()) - 1; } // -1 for zero
    std::int64_t coeff(int i) const {
        return (i >= 0 && i < static_cast<int>(c.size())) ? c[i] : 0;
    }
    std::int64_t lead() const { assert(!is_zero()); return c.back(); }
    std::int64_t eval0() const { return c.empty() ? 0 : c[0]; }
    // order of vanishing at 0; degree+1 convention not used: zero poly -> large sentinel
    int ord() const {
        if (is_zero()) return 1 << 28;
        for (int i = 0; i < static_cast<int>(c.size()); ++i)
            if (c[i] != 0) return i;
        return 1 << 28;
    }

    Poly operator+(const Poly& o) const {
        assert(p == o.p);
        Poly r(p);
        r.c.resize(std::max(c.size(), o.c.size()), 0);
        for (size_t i = 0; i < r.c.size(); ++i) r.c[i] = coeff((int)i) + o.coeff((int)i);
        r.normalize();
        return r;
    }
    Poly operator-() const {
        Poly r(p);
        r.c.resize(c.size());
        for (size_t i = 0; i < c.size(); ++i) r.c[i] = -c[i];
        r.normalize();
        return r;
    }
    Poly operator-(const Poly& o) const { return *this + (-o); }
    Poly operator*(const Poly& o) const {
        assert(p == o.p);
        if (is_zero() || o.is_zero()) return Poly(p);
        Poly r(p);
        r.c.assign(c.size() + o.c.size() - 1, 0);
        for (size_t i = 0; i < c.size(); ++i) {
            if (c[i] == 0) continue;
            for (size_t j = 0; j < o.c.size(); ++j)
                r.c[i + j] = (r.c[i + j] + c[i] * o.c[j]) % p;
        }
        r.normalize();
        return r;
    }
    Poly scaled(std::int64_t s) const {
        Poly r(p);
        r.c.resize(c.size());
        for (size_t i = 0; i < c.size(); ++i) r.c[i] = c[i] * (s % p);
        r.normalize();
        return r;
    }

    // division with remainder
    static void divmod(const Poly& a, const Poly& b, Poly& q, Poly& r) {
        assert(!b.is_zero());
        q = Poly(a.p);
        r = a;
        Fp binv = Fp(b.lead(), a.p).inv();
        while (!r.is_zero() && r.degree() >= b.degree()) {
            int d = r.degree() - b.degree();
            std::int64_t f = (Fp(r.lead(), a.p) * binv).v;
            std::vector<std::int64_t> qc(d + 1, 0);
            qc[d] = f;
            Poly t(a.p, qc);
            q = q + t;
            r = r - t * b;
        }
    }
    Poly operator/(const Poly& o) const { Poly q, r; divmod(*this, o, q, r); return q; }
    Poly operator%(const Poly& o) const { Poly q, r; divmod(*this, o, q, r); return r; }

    static Poly gcd(Poly a, Poly b) {
        while (!b.is_zero()) { Poly r = a % b; a = b; b = r; }
        if (!a.is_zero()) a = a.scaled(Fp(a.lead(), a.p).inv().v); // monic
        return a;
    }

    bool operator==(const Poly& o) const { return p == o.p && c == o.c; }

    std::string str(const std::string& var = "s") const {
        if (is_zero()) return "0";
        std::string out;
        for (int i = degree(); i >= 0; --i) {
            if (c[i] == 0) continue;
            if (!out.empty()) out += "+";
            if (i == 0 || c[i] != 1) out += std::to_string(c[i]);
            if (i > 0) {
                if (c[i] != 1) out += "*";
                out += var;
                if (i > 1) out += "^" + std::to_string(i);
            }
        }
        return out;
    }
};

// Rational function over F_p in one variable, kept reduced with monic denominator.
// Doubles as the model of the DVR k[t]_(t) (elements with valuation >= 0) and its
// fraction field k(t).
struct RatFunc {
    Poly num, den;

    RatFunc() = default;
    RatFunc(Poly n, Poly d) : num(std::move(n)), den(std::move(d)) { reduce(); }
    static RatFunc from_poly(Poly n) {
        std::int64_t p = n.p;
        return RatFunc(std::move(n), Poly::constant(p, 1));
    }
    static RatFunc constant(std::int64_t p, std::int64_t v) {
        return from_poly(Poly::constant(p, v));
    }
    static RatFunc variable(std::int64_t p) { return from_poly(Poly::variable(p)); }

    std::int64_t prime() const { return num.p; }

    void reduce() {
        if (den.is_zero()) throw std::domain_error("RatFunc: zero denominator");
        if (num.is_zero()) { den = Poly::constant(num.p, 1); return; }
        Poly g = Poly::gcd(num, den);
        if (g.degree() > 0) { num = num / g; den = den / g; }
        std::int64_t l = Fp(den.lead(), den.p).inv().v;
        num = num.scaled(l);
        den = den.scaled(l);
    }

    bool is_zero() const { return num.is_zero(); }
    bool is_constant() const { return num.degree() <= 0 && den.degree() == 0; }
    std::int64_t constant_value() const {
        assert(is_constant());
        return num.is_zero() ? 0 : num.c[0];
    }

    RatFunc zero_like() const { return constant(prime(), 0); }
    RatFunc one_like() const { return constant(prime(), 1); }
    RatFunc from_int(std::int64_t n) const { return constant(prime(), n); }

    RatFunc operator+(const RatFunc& o) const {
        return RatFunc(num * o.den + o.num * den, den * o.den);
    }
    RatFunc operator-() const { return RatFunc(-num, den); }
    RatFunc operator-(const RatFunc& o) const { return *this + (-o); }
    RatFunc operator*(const RatFunc& o) const { return RatFunc(num * o.num, den * o.den); }
    RatFunc inv() const {
        if (is_zero()) throw std::domain_error("RatFunc: division by zero");
        return RatFunc(den, num);
    }
    RatFunc operator/(const RatFunc& o) const { return *this * o.inv(); }
    RatFunc& operator+=(const RatFunc& o) { return *this = *this + o; }
    RatFunc& operator-=(const RatFunc& o) { return *this = *this - o; }
    RatFunc& operator*=(const RatFunc& o) { return *this = *this * o; }

    bool operator==(const RatFunc& o) const { return num == o.num && den == o.den; }
    bool operator!=(const RatFunc& o) const { return !(*this == o); }

    // t-adic valuation (order at 0). Reduced form: at most one of num/den vanishes at 0.
    int valuation() const {
        if (is_zero()) return 1 << 28;
        return num.ord() - den.ord();
    }
    bool in_dvr() const { return is_zero() || valuation() >= 0; }
    bool is_dvr_unit() const { return !is_zero() && valuation() == 0; }

    // Evaluate at 0 (residue map t -> 0); requires in_dvr().
    Fp eval0() const {
        if (!in_dvr()) throw std::domain_error("RatFunc: eval0 of negative valuation");
        std::int64_t d = den.eval0();
        assert(d != 0 || num.is_zero());
        if (num.is_zero()) return Fp(0, prime());
        return Fp(num.eval0(), prime()) / Fp(d, prime());
    }

    std::string str(const std::string& var = "s") const {
        if (den.degree() == 0) return num.str(var);
        return "(" + num.str(var) + ")/(" + den.str(var) + ")";
    }
};

// t^k for k possibly negative.
inline RatFunc t_power(std::int64_t p, int k) {
    Poly t = Poly::variable(p);
    Poly one = Poly::constant(p, 1);
    Poly acc = one;
    for (int i = 0; i < std::abs(k); ++i) acc = acc * t;
    return k >= 0 ? RatFunc(acc, one) : RatFunc(one, acc);
}

} // namespace bv
