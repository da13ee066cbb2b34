#pragma once

#include <cassert>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace bv {

// Prime field element. The modulus travels with the value; mixing moduli is a
// programming error and asserts.
struct Fp {
    std::int64_t v = 0;
    std::int64_t p = 0;

    Fp() = default;
    Fp(std::int64_t value, std::int64_t prime) : p(prime) {
        assert(prime > 1);
        v = value % prime;
        if (v < 0) v += prime;
    }

    bool is_zero() const { return v == 0; }
    Fp zero_like() const { return Fp(0, p); }
    Fp one_like() const { return Fp(1, p); }
    Fp from_int(std::int64_t n) const { return Fp(n, p); }

    Fp operator-() const { return Fp(-v, p); }
    Fp operator+(const Fp& o) const { assert(p == o.p); return Fp(v + o.v, p); }
    Fp operator-(const Fp& o) const { assert(p == o.p); return Fp(v - o.v, p); }
    Fp operator*(const Fp& o) const { assert(p == o.p); return Fp(v * o.v, p); }
    Fp& operator+=(const Fp& o) { return *this = *this + o; }
    Fp& operator-=(const Fp& o) { return *this = *this - o; }
    Fp& operator*=(const Fp& o) { return *this = *this * o; }

    Fp inv() const {
        if (v == 0) throw std::domain_error("Fp: division by zero");
        // extended Euclid
        std::int64_t a = v, b = p, x0 = 1, x1 = 0;
        while (b != 0) {
            std::int64_t q = a / b;
            std::int64_t t = a - q * b; a = b; b = t;
            t = x0 - q * x1; x0 = x1; x1 = t;
        }
        return Fp(x0, p);
    }
    Fp operator/(const Fp& o) const { return *this * o.inv(); }

    bool operator==(const Fp& o) const { assert(p == o.p); return v == o.v; }
    bool operator!=(const Fp& o) const { return !(*this == o); }

    std::string str() const { return std::to_string(v); }
};

inline Fp fp_pow(Fp base, std::int64_t e) {
    Fp r = base.one_like();
    while (e > 0) {
        if (e & 1) r *= base;
        base *= base;
        e >>= 1;
    }
    return r;
}

inline Fp fp_factorial(std::int64_t n, std::int64_t p) {
    Fp r(1, p);
    for (std::int64_t i = 2; i <= n; ++i) r *= Fp(i, p);
    return r;
}

} // namespace bv
