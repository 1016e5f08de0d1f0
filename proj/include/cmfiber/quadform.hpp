#ifndef CMFIBER_QUADFORM_HPP
#define CMFIBER_QUADFORM_HPP

#include <algorithm>
#include <map>
#include <vector>

#include "cmfiber/arith.hpp"

namespace cmfiber {

// Primitive positive-definite binary quadratic form ax^2 + bxy + cy^2.
// Always kept reduced: |b| <= a <= c, with b >= 0 when |b| = a or a = c.
struct QuadForm {
    i128 a = 1, b = 0, c = 0;

    i128 disc() const { return chk_sub(chk_mul(b, b), chk_mul(4, chk_mul(a, c))); }

    bool operator==(const QuadForm& o) const { return a == o.a && b == o.b && c == o.c; }
    bool operator!=(const QuadForm& o) const { return !(*this == o); }
    bool operator<(const QuadForm& o) const
    {
        if (a != o.a)
            return a < o.a;
        if (b != o.b)
            return b < o.b;
        return c < o.c;
    }

    bool is_principal() const { return a == 1; }
    // Ambiguous = 2-torsion class = fixed by conjugation (real j-invariant).
    bool is_ambiguous() const { return b == 0 || b == a || a == c; }

    std::string str() const
    {
        return "(" + to_string(a) + "," + to_string(b) + "," + to_string(c) + ")";
    }
};

inline QuadForm reduce_form(i128 a, i128 b, i128 c)
{
    if (a <= 0 || c <= 0)
        throw domain_error("form is not positive definite");
    while (true) {
        // Normalize: -a < b <= a.
        if (b > a || b <= -a) {
            i128 r = fmod(chk_add(b, a), chk_mul(2, a)); // b+a mod 2a in [0,2a)
            i128 bn = chk_sub(r, a);                     // in (-a, a]
            i128 q = (b - bn) / (2 * a);
            // c -> c - q*b + q^2*a with b old: c' = a q^2 - b q + c
            c = chk_add(chk_sub(chk_mul(chk_mul(q, q), a), chk_mul(q, b)), c);
            b = bn;
        }
        if (a > c) {
            std::swap(a, c);
            b = -b;
            continue;
        }
        break;
    }
    if ((a == c || b == -a) && b < 0)
        b = -b;
    return {a, b, c};
}

inline QuadForm reduce_form(const QuadForm& f) { return reduce_form(f.a, f.b, f.c); }

inline QuadForm principal_form(i64 delta)
{
    if (!is_valid_discriminant(delta))
        throw domain_error("not a discriminant");
    i128 b = fmod(delta, 2); // 0 or 1
    i128 c = (chk_mul(b, b) - delta) / 4;
    return reduce_form(1, b, c);
}

inline QuadForm inverse(const QuadForm& f) { return reduce_form(f.a, -f.b, f.c); }

// Dirichlet/Gauss composition; returns the reduced representative of the
// product class.
inline QuadForm compose(const QuadForm& f1, const QuadForm& f2)
{
    if (f1.disc() != f2.disc())
        throw usage_error("compose: discriminant mismatch");
    i128 s = chk_add(f1.b, f2.b) / 2;
    i128 u0, v0, v1, w;
    i128 g = xgcd(f1.a, f2.a, u0, v0);
    i128 d = xgcd(g, s, v1, w);
    i128 v = chk_mul(v0, v1);
    i128 a2d = f2.a / d;
    i128 ra = chk_mul(f1.a / d, a2d);
    i128 t = chk_sub(s, f2.b);
    t = chk_mul(t, v);
    t = chk_sub(t, chk_mul(w, f2.c));
    t = chk_mul(t, a2d);
    i128 rb = chk_add(f2.b, chk_mul(2, t));
    // Recover c from the discriminant.
    i128 bb = chk_mul(rb, rb);
    i128 num = chk_sub(bb, f1.disc());
    if (num % (4 * ra) != 0)
        throw internal_error("compose: c not integral");
    i128 rc = num / (4 * ra);
    return reduce_form(ra, rb, rc);
}

inline QuadForm power(const QuadForm& f, i64 e)
{
    QuadForm r = principal_form(checked_i64(f.disc()));
    QuadForm base = f;
    if (e < 0) {
        base = inverse(base);
        e = -e;
    }
    while (e) {
        if (e & 1)
            r = compose(r, base);
        base = compose(base, base);
        e >>= 1;
    }
    return r;
}

struct ClassGroup {
    Discriminant discriminant;
    std::vector<QuadForm> classes; // reduced, sorted lexicographically

    i64 h() const { return static_cast<i64>(classes.size()); }
    i64 ambiguous_count() const
    {
        i64 n = 0;
        for (const auto& f : classes)
            n += f.is_ambiguous();
        return n;
    }
};

// Enumerates all reduced primitive forms of discriminant delta.
inline ClassGroup class_group(i64 delta)
{
    Discriminant d = split_discriminant(delta);
    std::vector<QuadForm> forms;
    i64 D = delta;
    for (i64 a = 1; 3 * static_cast<i128>(a) * a <= -static_cast<i128>(D); ++a) {
        for (i64 b = -a + 1; b <= a; ++b) {
            if (fmod(b - D, 2) != 0)
                continue;
            i128 num = chk_sub(chk_mul(static_cast<i128>(b), b), D);
            if (num % (4 * static_cast<i128>(a)) != 0)
                continue;
            i128 c = num / (4 * static_cast<i128>(a));
            if (c < a)
                continue;
            if (a == c && b < 0)
                continue;
            if (gcd(gcd(a, b), c) != 1)
                continue;
            forms.push_back({a, b, c});
        }
    }
    std::sort(forms.begin(), forms.end());
    return {d, std::move(forms)};
}

inline i64 class_number(i64 delta)
{
    static std::map<i64, i64> cache;
    auto it = cache.find(delta);
    if (it != cache.end())
        return it->second;
    i64 h = class_group(delta).h();
    cache.emplace(delta, h);
    return h;
}

// #Pic O(Delta)[2] = 2^nu, the three-branch genus formula.
inline int two_torsion_rank(i64 delta)
{
    if (!is_valid_discriminant(delta))
        throw domain_error("not a discriminant");
    int r = 0;
    for (auto [p, e] : factorize(-delta))
        if (p != 2)
            ++r;
    i64 m4 = static_cast<i64>(fmod(delta, 4));
    i64 m16 = static_cast<i64>(fmod(delta, 16));
    i64 m32 = static_cast<i64>(fmod(delta, 32));
    if (m4 == 1 || m16 == 4)
        return r - 1;
    if (m16 == 8 || m16 == 12 || m32 == 16)
        return r;
    if (m32 == 0)
        return r + 1;
    throw internal_error("two_torsion_rank: unreachable branch");
}

// d(f) = [K(f):K(1)] = f * prod_{l | f} (1 - (Delta_K/l)/l), valid for
// Delta_K < -4 where it is multiplicative.
inline i64 dee(i64 f, i64 delta_k)
{
    if (delta_k >= -4)
        throw domain_error("dee requires Delta_K < -4");
    if (!is_fundamental(delta_k))
        throw domain_error("dee: Delta_K must be fundamental");
    if (f < 1)
        throw usage_error("dee: conductor must be positive");
    i128 r = 1;
    for (auto [p, e] : factorize(f)) {
        r = chk_mul(r, ipow(p, e - 1));
        r = chk_mul(r, p - kronecker(delta_k, p));
    }
    return checked_i64(r, "dee");
}

// h(f^2 Delta_K) computed through the relative class number formula; only
// the fundamental class number needs an enumeration.
inline i64 class_number_via_dee(i64 f, i64 delta_k)
{
    return checked_i64(chk_mul(dee(f, delta_k), class_number(delta_k)));
}

} // namespace cmfiber

#endif
