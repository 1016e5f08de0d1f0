#ifndef CMFIBER_ARITH_HPP
#define CMFIBER_ARITH_HPP

#include <vector>

#include "cmfiber/base.hpp"

namespace cmfiber {

inline bool is_prime(i64 n)
{
    if (n < 2)
        return false;
    for (i64 p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        if (n == p)
            return true;
        if (n % p == 0)
            return false;
    }
    for (i64 d = 41; d * d <= n; d += 2)
        if (n % d == 0)
            return false;
    return true;
}

struct PrimePower {
    i64 p;
    int e;
};

// Trial division; adequate for desk-scale inputs (|n| <= ~1e14).
inline std::vector<PrimePower> factorize(i64 n)
{
    if (n < 0)
        n = -n;
    std::vector<PrimePower> out;
    for (i64 d = 2; d * d <= n; d += (d == 2 ? 1 : 2)) {
        if (n % d == 0) {
            int e = 0;
            while (n % d == 0) {
                n /= d;
                ++e;
            }
            out.push_back({d, e});
        }
    }
    if (n > 1)
        out.push_back({n, 1});
    return out;
}

inline int ord_p(i64 n, i64 p)
{
    if (n == 0)
        throw usage_error("ord_p(0) undefined");
    if (n < 0)
        n = -n;
    int e = 0;
    while (n % p == 0) {
        n /= p;
        ++e;
    }
    return e;
}

inline i64 ipow(i64 base, int e)
{
    i128 r = 1;
    while (e-- > 0)
        r = chk_mul(r, base);
    return checked_i64(r, "power");
}

inline i64 euler_phi(i64 n)
{
    if (n < 1)
        throw usage_error("phi requires n >= 1");
    i64 r = n;
    for (auto [p, e] : factorize(n))
        r = r / p * (p - 1);
    return r;
}

// psi(l^a) = (l+1) l^(a-1), multiplicative; the degree of X_0(N) -> X(1).
inline i64 psi_degree(i64 n)
{
    if (n < 1)
        throw usage_error("psi requires n >= 1");
    i128 r = n;
    for (auto [p, e] : factorize(n))
        r = chk_mul(r, p + 1) / p;
    return checked_i64(r, "psi");
}

// Kronecker symbol (D/l) for prime l.  For l = 2 this is determined by
// D mod 8 (0 when D is even), matching the usage for (Delta/2).
inline int kronecker(i64 D, i64 ell)
{
    if (!is_prime(ell))
        throw usage_error("kronecker: modulus must be prime");
    if (D % 4 != 0 && fmod(D, 4) != 1)
        throw usage_error("kronecker: D must be 0 or 1 mod 4");
    if (ell == 2) {
        if (D % 2 == 0)
            return 0;
        i64 r = static_cast<i64>(fmod(D, 8));
        return r == 1 ? 1 : -1;
    }
    i64 a = static_cast<i64>(fmod(D, ell));
    if (a == 0)
        return 0;
    // Euler's criterion by repeated squaring.
    i64 result = 1, base = a % ell, e = (ell - 1) / 2;
    while (e) {
        if (e & 1)
            result = checked_i64(chk_mul(result, base) % ell);
        base = checked_i64(chk_mul(base, base) % ell);
        e >>= 1;
    }
    return result == 1 ? 1 : (result == ell - 1 ? -1 : 0);
}

// An imaginary quadratic discriminant Delta = f^2 * Delta_K with Delta_K
// fundamental.
struct Discriminant {
    i64 value;       // Delta < 0, = 0 or 1 mod 4
    i64 fundamental; // Delta_K
    i64 conductor;   // f

    i64 prime_to_part(i64 ell) const { return conductor / ipow(ell, ord_p(conductor, ell)); }
    int level_at(i64 ell) const { return ord_p(conductor, ell); }
    i64 units() const { return value < -4 ? 2 : (value == -4 ? 4 : 6); }
};

inline bool is_valid_discriminant(i64 delta)
{
    return delta < 0 && (fmod(delta, 4) == 0 || fmod(delta, 4) == 1);
}

inline Discriminant split_discriminant(i64 delta)
{
    if (!is_valid_discriminant(delta))
        throw domain_error("not an imaginary quadratic discriminant: " + std::to_string(delta));
    i64 n = -delta;
    i64 square = 1;
    i64 core = 1; // squarefree part of n
    for (auto [p, e] : factorize(n)) {
        square *= ipow(p, e / 2);
        if (e % 2)
            core *= p;
    }
    // -core = 1 mod 4: fundamental is -core, else -4*core.
    if (fmod(-core, 4) == 1)
        return {delta, -core, square};
    if (square % 2 != 0)
        throw internal_error("discriminant split parity failure");
    return {delta, -4 * core, square / 2};
}

inline bool is_fundamental(i64 delta)
{
    return is_valid_discriminant(delta) && split_discriminant(delta).conductor == 1;
}

} // namespace cmfiber

#endif
