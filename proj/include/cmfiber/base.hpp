#ifndef CMFIBER_BASE_HPP
#define CMFIBER_BASE_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace cmfiber {

// Error taxonomy mirrors the CLI exit codes: usage 1, domain 2, internal 3,
// resource 4.
struct usage_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct domain_error : std::domain_error {
    using std::domain_error::domain_error;
};

struct internal_error : std::logic_error {
    using std::logic_error::logic_error;
};

struct resource_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using i64 = std::int64_t;
using i128 = __int128;

inline std::string to_string(i128 v)
{
    if (v == 0)
        return "0";
    bool neg = v < 0;
    unsigned __int128 u = neg ? -static_cast<unsigned __int128>(v)
                              : static_cast<unsigned __int128>(v);
    std::string s;
    while (u) {
        s.push_back(static_cast<char>('0' + static_cast<int>(u % 10)));
        u /= 10;
    }
    if (neg)
        s.push_back('-');
    return {s.rbegin(), s.rend()};
}

// All quadratic-form arithmetic runs through these: overflow raises instead
// of wrapping.
inline i128 chk_add(i128 a, i128 b)
{
    i128 r;
    if (__builtin_add_overflow(a, b, &r))
        throw internal_error("128-bit overflow in addition");
    return r;
}

inline i128 chk_sub(i128 a, i128 b)
{
    i128 r;
    if (__builtin_sub_overflow(a, b, &r))
        throw internal_error("128-bit overflow in subtraction");
    return r;
}

inline i128 chk_mul(i128 a, i128 b)
{
    i128 r;
    if (__builtin_mul_overflow(a, b, &r))
        throw internal_error("128-bit overflow in multiplication");
    return r;
}

inline i128 iabs(i128 v) { return v < 0 ? -v : v; }

inline i128 gcd(i128 a, i128 b)
{
    a = iabs(a);
    b = iabs(b);
    while (b) {
        i128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

inline i128 lcm(i128 a, i128 b)
{
    if (a == 0 || b == 0)
        return 0;
    return chk_mul(a / gcd(a, b), b);
}

// g = xgcd(a,b,u,v) with u*a + v*b = g, g >= 0.
inline i128 xgcd(i128 a, i128 b, i128& u, i128& v)
{
    i128 old_r = a, r = b;
    i128 old_u = 1, cu = 0;
    i128 old_v = 0, cv = 1;
    while (r != 0) {
        i128 q = old_r / r;
        i128 t = old_r - q * r;
        old_r = r;
        r = t;
        t = old_u - chk_mul(q, cu);
        old_u = cu;
        cu = t;
        t = old_v - chk_mul(q, cv);
        old_v = cv;
        cv = t;
    }
    if (old_r < 0) {
        old_r = -old_r;
        old_u = -old_u;
        old_v = -old_v;
    }
    u = old_u;
    v = old_v;
    return old_r;
}

// Floor division / modulo (results independent of sign conventions).
inline i128 fdiv(i128 a, i128 b)
{
    i128 q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0)))
        --q;
    return q;
}

inline i128 fmod(i128 a, i128 b) { return a - fdiv(a, b) * b; }

inline i64 checked_i64(i128 v, const char* what = "value")
{
    if (v > INT64_MAX || v < INT64_MIN)
        throw internal_error(std::string(what) + " exceeds 64 bits");
    return static_cast<i64>(v);
}

} // namespace cmfiber

#endif
