#ifndef CMFIBER_ISOGTOOLS_HPP
#define CMFIBER_ISOGTOOLS_HPP

#include <optional>

#include "cmfiber/volcano.hpp"

namespace cmfiber {

// Largest a with a Q(f)-rational cyclic l^a-isogeny on a Delta-CM curve
// (Kwon's m_l), via the seven-branch closed form.
inline i64 kwon_m(i64 delta, i64 ell)
{
    Discriminant d = split_discriminant(delta);
    if (d.fundamental >= -4)
        throw domain_error("kwon_m requires Delta_K < -4");
    if (!is_prime(ell))
        throw usage_error("ell must be prime");
    int L = d.level_at(ell);
    int chiK = kronecker(d.fundamental, ell);
    if (ell > 2)
        return chiK != 0 ? 2 * L : 2 * L + 1;
    int chiD = kronecker(delta, 2);
    if (chiD == 1)
        return 1;
    if (chiD == -1)
        return 0;
    if (chiK != 0) // Delta even, 2 unramified in K, so L >= 1
        return L == 1 ? 1 : 2 * L - 2;
    if (ord_p(d.fundamental, 2) == 2)
        return L == 0 ? 1 : 2 * L;
    return L == 0 ? 1 : 2 * L + 1; // ord_2(Delta_K) = 3
}

// Oracle definition: longest real nonbacktracking path from level L whose
// end level L' keeps Q(l^L' f0) embeddable in Q(f).
inline i64 kwon_m_oracle(i64 delta, i64 ell)
{
    Discriminant d = split_discriminant(delta);
    if (d.fundamental >= -4)
        throw domain_error("kwon_m_oracle requires Delta_K < -4");
    int L = d.level_at(ell);
    i64 f0 = d.prime_to_part(ell);
    Volcano V = build_volcano({d.fundamental, ell, f0, L + 1});
    std::int32_t v0 = V.principal_vertex(L);
    int cap = 2 * L + 4;

    i64 best = 0;
    auto embeddable = [&](std::int32_t v) {
        i64 cond = checked_i64(chk_mul(ipow(ell, V.level_of(v)), f0));
        return embeds(rational_rcf(cond), rational_rcf(d.conductor), d.fundamental);
    };
    struct Frame {
        std::int32_t at;
        std::int32_t prev_from;
        Volcano::StepKind prev;
        int len;
    };
    std::vector<Frame> stack{{v0, -1, Volcano::StepAsc, 0}};
    bool first = true;
    while (!stack.empty()) {
        Frame fr = stack.back();
        stack.pop_back();
        if (fr.len > 0 || first) {
            if (fr.len > 0 && embeddable(fr.at))
                best = std::max<i64>(best, fr.len);
        }
        first = false;
        if (fr.len >= cap)
            continue;
        for (const auto& s : V.steps_from(fr.at)) {
            if (fr.len > 0 && Volcano::backtracks(fr.prev_from, fr.prev, V.chi, s))
                continue;
            if (!V.step_real(fr.at, s))
                continue;
            stack.push_back({s.to, fr.at, s.kind, fr.len + 1});
        }
    }
    return best;
}

// I(Delta, N): N-isogeny rational over Q(f) iff N | prod l^(m_l).
inline bool cyclic_over_Qf(i64 delta, i64 N)
{
    if (N < 1)
        throw usage_error("N must be positive");
    for (auto [p, e] : factorize(N))
        if (e > kwon_m(delta, p))
            return false;
    return true;
}

// M(Delta, l): largest a with a K(f)-rational cyclic l^a-isogeny;
// nullopt means unbounded (split case).
inline std::optional<i64> k_rational_max(i64 delta, i64 ell)
{
    Discriminant d = split_discriminant(delta);
    if (d.fundamental >= -4)
        throw domain_error("k_rational_max requires Delta_K < -4");
    int chiK = kronecker(d.fundamental, ell);
    int L = d.level_at(ell);
    if (chiK == 1)
        return std::nullopt;
    return chiK == -1 ? 2 * L : 2 * L + 1;
}

namespace detail {

// x^2 = D (mod p^e)?  Exact prime-power criterion (Hensel).
inline bool square_mod_prime_power(i64 D, i64 p, int e)
{
    i64 pe = ipow(p, e);
    i64 r = static_cast<i64>(fmod(D, pe));
    if (r == 0)
        return true;
    int k = 0;
    i64 u = r;
    while (u % p == 0) {
        u /= p;
        ++k;
    }
    if (k % 2 == 1)
        return false;
    int rem = e - k;
    if (p == 2) {
        if (rem == 1)
            return true;
        if (rem == 2)
            return u % 4 == 1;
        return u % 8 == 1;
    }
    // Euler's criterion on the unit part.
    i64 result = 1, base = u % p, exp = (p - 1) / 2;
    while (exp) {
        if (exp & 1)
            result = checked_i64(chk_mul(result, base) % p);
        base = checked_i64(chk_mul(base, base) % p);
        exp >>= 1;
    }
    return result == 1;
}

} // namespace detail

// Exists x with x^2 = Delta (mod m).
inline bool is_square_mod(i64 delta, i64 m)
{
    if (m < 1)
        throw usage_error("modulus must be positive");
    if (m == 1)
        return true;
    for (auto [p, e] : factorize(m))
        if (!detail::square_mod_prime_power(delta, p, e))
            return false;
    return true;
}

// Brute-force reference used to validate is_square_mod in tests.
inline bool is_square_mod_bruteforce(i64 delta, i64 m)
{
    if (m < 1)
        throw usage_error("modulus must be positive");
    if (m > 2000000)
        throw resource_error("brute-force square test limited to m <= 2e6");
    i64 target = static_cast<i64>(fmod(delta, m));
    for (i64 x = 0; x < m; ++x)
        if (chk_mul(x, x) % m == target)
            return true;
    return false;
}

// P(Delta, N): field generated by the projective N-torsion over Q(f).
inline FieldLabel projective_torsion_field(i64 delta, i64 N)
{
    Discriminant d = split_discriminant(delta);
    if (d.fundamental >= -4)
        throw domain_error("projective_torsion_field requires Delta_K < -4");
    if (N < 2)
        throw domain_error("projective torsion field needs N >= 2");
    if (N == 2 && delta % 2 == 0)
        return rational_rcf(checked_i64(chk_mul(2, d.conductor)));
    return ring_class_field(checked_i64(chk_mul(N, d.conductor)));
}

// Number of real cyclic order-N subgroups of a real elliptic curve with t
// real 2-torsion points.  For N = 4 mod 8 only the two-element range is
// determined.
struct SubgroupCount {
    bool determined = true;
    i64 value = 0;
    std::pair<i64, i64> range{0, 0};
};

inline SubgroupCount real_cyclic_subgroup_count(i64 N, int t)
{
    if (N < 1)
        throw usage_error("N must be positive");
    if (t != 1 && t != 3)
        throw usage_error("t must be 1 or 3");
    int r = 0;
    for (auto [p, e] : factorize(N))
        if (p != 2)
            ++r;
    if (N % 2 == 1)
        return {true, ipow(2, r), {}};
    if (N % 4 == 2)
        return {true, checked_i64(chk_mul(t, ipow(2, r))), {}};
    if (N % 8 == 4)
        return {false, 0, {ipow(2, r + 1), ipow(2, r + 2)}};
    throw domain_error("real cyclic subgroup count undetermined for 8 | N");
}

} // namespace cmfiber

#endif
