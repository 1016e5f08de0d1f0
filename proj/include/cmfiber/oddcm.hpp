#ifndef CMFIBER_ODDCM_HPP
#define CMFIBER_ODDCM_HPP

#include <optional>

#include "cmfiber/primdeg.hpp"

namespace cmfiber {

struct OddCmReport {
    bool exists = false;
    std::optional<i64> primitive_odd_degree;
    std::optional<i64> d_odd_cm;
    std::vector<i64> corresponding_discriminants;
};

namespace oddcm_detail {

// h_Delta is odd iff Delta in {-4,-8,-12,-16} or Delta = -2^e * l^(2L+1)
// with e in {0,2} and l = 3 mod 4 prime.
inline bool h_is_odd(i64 delta)
{
    if (delta == -4 || delta == -8 || delta == -12 || delta == -16)
        return true;
    i64 n = -delta;
    int e2 = ord_p(n, 2);
    if (e2 != 0 && e2 != 2)
        return false;
    n /= ipow(2, e2);
    auto fac = factorize(n);
    if (fac.size() != 1)
        return false;
    auto [p, e] = fac[0];
    return p % 4 == 3 && e % 2 == 1;
}

// Unique primitive odd degree of a Delta-CM point on X_0(M,N) for the
// Delta_K in {-3,-4} families, per the stated classification.
inline std::optional<i64> special_family_degree(i64 delta, i64 M, i64 N)
{
    if (delta == -4 || delta == -16) {
        if (M == 1 && (N == 1 || N == 2 || N == 4))
            return 1;
        if (delta == -4 && M == 2 && N == 2)
            return 1;
        return std::nullopt;
    }
    Discriminant d = split_discriminant(delta);
    if (d.fundamental == -4)
        return std::nullopt; // only -4 and -16 admit odd degree points
    if (d.fundamental != -3)
        throw internal_error("special_family_degree expects Delta_K in {-3,-4}");
    // f = 2^eps 3^Lp with eps in {0,1}; everything else has even h.
    i64 f = d.conductor;
    int eps = ord_p(f, 2);
    int Lp = ord_p(f, 3);
    if (eps > 1 || ipow(2, eps) * ipow(3, Lp) != f)
        return std::nullopt;
    if (M != 1)
        return std::nullopt;
    // N must be 3^a or 2*3^a (N in {1,2} are the a = 0 instances).
    int a2 = ord_p(N, 2);
    int a = ord_p(N, 3);
    if (a2 > 1 || ipow(2, a2) * ipow(3, a) != N)
        return std::nullopt;
    bool twice = a2 == 1;
    if (eps == 1) // Delta = -4 * 3^(2Lp+1)
        return ipow(3, Lp + std::max(a - 2 * Lp - 1, 0));
    if (Lp == 0) // Delta = -3
        return twice ? ipow(3, std::max(a - 1, 0)) : ipow(3, std::max(a - 2, 0));
    // Delta = -3^(2Lp+1), Lp >= 1
    return twice ? ipow(3, Lp + std::max(a - 2 * Lp - 1, 0))
                 : ipow(3, Lp - 1 + std::max(a - 2 * Lp - 1, 0));
}

// Odd entries of the primitive degree list (at most one is odd, since
// ring class fields have even degree).
inline std::optional<i64> general_odd_degree(i64 delta, i64 M, i64 N)
{
    PrimitiveReport r = primitive_compile(delta, M, N);
    std::optional<i64> best;
    for (i64 deg : r.degrees)
        if (deg % 2 == 1) {
            if (best && *best != deg)
                throw internal_error("two distinct odd primitive degrees");
            best = deg;
        }
    return best;
}

} // namespace oddcm_detail

// The unique primitive odd degree of a Delta-CM point on X_0(M,N), if an
// odd degree point exists.
inline std::optional<i64> primitive_odd_degree(i64 delta, i64 M, i64 N)
{
    if (M < 1 || N < 1 || N % M != 0)
        throw usage_error("primitive_odd_degree requires M | N");
    if (!is_valid_discriminant(delta))
        throw domain_error("not a discriminant");
    if (!oddcm_detail::h_is_odd(delta))
        return std::nullopt;
    Discriminant d = split_discriminant(delta);
    if (d.fundamental < -4)
        return oddcm_detail::general_odd_degree(delta, M, N);
    return oddcm_detail::special_family_degree(delta, M, N);
}

inline bool odd_degree_exists(i64 delta, i64 M, i64 N)
{
    return primitive_odd_degree(delta, M, N).has_value();
}

enum class CurveFamily { X0, X1 };

// Least odd degree of a CM point on X_0(M,N) (or X_1(M,N)), minimized over
// all discriminants, with the list of discriminants attaining it.
inline OddCmReport d_odd_cm(i64 M, i64 N, CurveFamily curve = CurveFamily::X0)
{
    if (M < 1 || N < 1 || N % M != 0)
        throw usage_error("d_odd_cm requires M | N");
    OddCmReport rep;
    std::vector<i64> candidates;

    if (M >= 2) {
        if (M == 2 && N == 2)
            candidates = {-4};
    } else if (N == 1 || N == 2) {
        candidates = {-3, -4, -7, -8, -11, -12, -16, -19, -27, -28, -43, -67, -163};
    } else if (N == 4) {
        candidates = {-4, -16};
    } else {
        // N = l^a or 2 l^a with l = 3 mod 4 odd prime; candidate
        // discriminants are -l^(2L+1) and -4 l^(2L+1).
        int a2 = ord_p(N, 2);
        i64 odd = N / ipow(2, a2);
        auto fac = factorize(odd);
        if (a2 <= 1 && fac.size() == 1 && fac[0].p % 4 == 3) {
            i64 ell = fac[0].p;
            int a = fac[0].e;
            for (int L = 0; L <= a + 1; ++L) {
                candidates.push_back(checked_i64(-ipow(ell, 2 * L + 1)));
                candidates.push_back(checked_i64(chk_mul(-4, ipow(ell, 2 * L + 1))));
            }
        }
    }

    std::optional<i64> best;
    std::vector<i64> attaining;
    for (i64 delta : candidates) {
        auto deg = primitive_odd_degree(delta, M, N);
        if (!deg)
            continue;
        if (!best || *deg < *best) {
            best = *deg;
            attaining = {delta};
        } else if (*deg == *best) {
            attaining.push_back(delta);
        }
    }
    if (!best)
        return rep;
    std::sort(attaining.begin(), attaining.end(), std::greater<i64>()); // small |Delta| first
    rep.exists = true;
    i64 factor = (curve == CurveFamily::X1 && N >= 3) ? euler_phi(N) / 2 : 1;
    rep.d_odd_cm = checked_i64(chk_mul(*best, factor));
    rep.corresponding_discriminants = attaining;
    return rep;
}

} // namespace cmfiber

#endif
