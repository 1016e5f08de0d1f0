#ifndef CMFIBER_FIBERENGINE_HPP
#define CMFIBER_FIBERENGINE_HPP

#include "cmfiber/classfields.hpp"
#include "cmfiber/volcano.hpp"

namespace cmfiber {

namespace fiber_detail {

// First edge of the paths in a closed-point class; well defined because
// the Galois orbit fixes the initial segment up to conjugation (and pure
// descents all start descending).
enum class FirstEdge { Desc, Hor, Asc };

// One emission: `count` closed-point classes with residue field of the
// given kind and relative conductor l^exp over Q(f).
struct Emission {
    FieldLabel::Kind kind;
    int exp;
    i64 count;
    FirstEdge first = FirstEdge::Desc;
};

inline void emit(std::vector<Emission>& v, FieldLabel::Kind k, int exp, i64 count,
                 FirstEdge first)
{
    if (count < 0)
        throw internal_error("negative class count in path-type rule");
    if (count > 0)
        v.push_back({k, exp, count, first});
}

// Path-type rules for the fiber of X_0(l^a) over J_Delta.  Parameters:
// chi = (Delta_K/l), L = ord_l(f), and for l = 2 the branch on
// ord_2(Delta_K).  Exponents are relative to f and never negative.
inline std::vector<Emission> path_type_emissions(i64 ell, int chi, int ord2dk, int L, int a)
{
    std::vector<Emission> out;
    const auto Q = FieldLabel::Rational;
    const auto K = FieldLabel::RingClass;
    const auto FD = FirstEdge::Desc;
    const auto FH = FirstEdge::Hor;
    const auto FA = FirstEdge::Asc;
    auto up = [&](int e) { return std::max(e, 0); };

    if (a == 0) {
        emit(out, Q, 0, 1, FD);
        return out;
    }

    // Types common to every prime.
    emit(out, Q, a, 1, FD); // I: pure descent
    if (a <= L)
        emit(out, Q, 0, 1, FA); // II: pure ascent
    if (L == 0 && chi == 0)
        emit(out, Q, a - 1, 1, FH); // III: ramified horizontal then descend
    if (L == 0 && chi == 1)
        for (int h = 1; h <= a; ++h)
            emit(out, K, a - h, 1, FH); // IV: split surface walks
    if (L >= 1 && a - L >= 1 && chi == 1)
        emit(out, K, 0, 1, FA); // X: ascend, then stay on the surface

    if (ell > 2) {
        // V: ascend b < L levels, then descend.
        if (L >= 2)
            for (int b = 1; b <= std::min(a - 1, L - 1); ++b)
                emit(out, K, up(a - 2 * b),
                     (ell - 1) / 2 * ipow(ell, std::min(b, a - b) - 1), FA);
        if (a > L && L >= 1 && chi == -1) { // VI
            emit(out, Q, up(a - 2 * L), 1, FA);
            emit(out, K, up(a - 2 * L), (ipow(ell, std::min(L, a - L)) - 1) / 2, FA);
        }
        if (a >= L + 1 && L >= 1 && chi == 0) { // VII and VIII
            emit(out, K, up(a - 2 * L),
                 (ell - 1) / 2 * ipow(ell, std::min(L, a - L) - 1), FA);
            emit(out, Q, up(a - 2 * L - 1), 1, FA);
            emit(out, K, up(a - 2 * L - 1), (ipow(ell, std::min(L, a - L - 1)) - 1) / 2,
                 FA);
        }
        if (a >= L + 1 && L >= 1 && chi == 1) { // IX
            emit(out, Q, up(a - 2 * L), 1, FA);
            emit(out, K, up(a - 2 * L),
                 ((ell - 2) * ipow(ell, std::min(L, a - L) - 1) - 1) / 2, FA);
        }
        if (L >= 1 && a - L >= 2 && chi == 1) // XI
            for (int h = 1; h <= a - L - 1; ++h)
                emit(out, K, up(a - 2 * L - h),
                     (ell - 1) * ipow(ell, std::min(L, a - L - h) - 1), FA);
        return out;
    }

    // ell == 2.
    if (chi != 0) {
        if (L >= 2 && a >= 2)
            emit(out, Q, a - 2, 1, FA); // V1
        if (L >= a && a >= 3)
            emit(out, Q, 0, 1, FA); // V2
        if (a > L && L >= 3) {  // V3
            emit(out, Q, up(a - 2 * L + 2), 2, FA);
            emit(out, K, up(a - 2 * L + 2),
                 ipow(2, std::min(a - L + 1, L - 1) - 2) - 1, FA);
        }
        for (int b = 2; b <= std::min(L - 2, a - 2); ++b) // V4
            emit(out, K, up(a - 2 * b), ipow(2, std::min(b, a - b) - 2), FA);
        if (a > L && L >= 1 && chi == -1) // VI
            emit(out, K, up(a - 2 * L), ipow(2, std::min(L, a - L) - 1), FA);
        if (a - L >= 2 && L >= 1 && chi == 1) // XI
            for (int h = 1; h <= a - L - 1; ++h)
                emit(out, K, up(a - 2 * L - h), ipow(2, std::min(L, a - L - h) - 1), FA);
        return out;
    }

    // ell == 2 and 2 ramified in K: branch on ord_2(Delta_K).
    if (ord2dk != 2 && ord2dk != 3)
        throw internal_error("ramified l=2 requires ord_2(Delta_K) in {2,3}");
    if (L == 0)
        return out; // covered by the common types I and III
    if (L >= 2 && a >= 2)
        emit(out, Q, a - 2, 1, FA); // V1
    if (L >= a && a >= 3)
        emit(out, Q, 0, 1, FA); // V2
    for (int b = 2; b <= std::min(L - 1, a - 2); ++b) // V3 (ramified numbering)
        emit(out, K, up(a - 2 * b), ipow(2, std::min(b, a - b) - 2), FA);
    if (a > L) {
        if (L == 1) { // VI1
            emit(out, Q, a - 2, 1, FA);
        } else if (a == L + 1) { // VI2
            emit(out, Q, 0, 1, FA);
        } else { // VI3: a >= L+2, L >= 2
            if (ord2dk == 2) {
                emit(out, Q, up(a - 2 * L), 2, FA);
                emit(out, K, up(a - 2 * L), ipow(2, std::min(L, a - L) - 2) - 1, FA);
            } else {
                emit(out, K, up(a - 2 * L), ipow(2, std::min(L, a - L) - 2), FA);
            }
        }
        if (a == L + 1) { // VIII1
            emit(out, Q, 0, 1, FA);
        } else { // VIII2: a >= L+2
            if (ord2dk == 2) {
                emit(out, K, up(a - 2 * L - 1), ipow(2, std::min(L, a - 1 - L) - 1), FA);
            } else {
                emit(out, Q, up(a - 2 * L - 1), 2, FA);
                emit(out, K, up(a - 2 * L - 1), ipow(2, std::min(L, a - 1 - L) - 1) - 1,
                     FA);
            }
        }
    }
    return out;
}

} // namespace fiber_detail

// Fiber of X_0(l^a) -> X(1) over J_Delta.  Labels carry absolute
// conductors.  Matches spectrum_oracle exactly (acceptance criterion 1).
inline Spectrum x0_prime_power(i64 delta, i64 ell, int a)
{
    Discriminant d = split_discriminant(delta);
    if (d.fundamental >= -4)
        throw domain_error("x0_prime_power requires Delta_K < -4");
    if (!is_prime(ell))
        throw usage_error("ell must be prime");
    if (a < 0)
        throw usage_error("a must be >= 0");

    int L = d.level_at(ell);
    int chi = kronecker(d.fundamental, ell);
    int ord2dk = ord_p(d.fundamental, 2);

    Spectrum s;
    for (const auto& e :
         fiber_detail::path_type_emissions(ell, chi, ord2dk, L, a))
        s.add({e.kind, checked_i64(chk_mul(ipow(ell, e.exp), d.conductor))}, e.count);
    s.sort();

    i128 sum = 0;
    for (const auto& [lab, m] : s.entries)
        sum = chk_add(sum, chk_mul(m, rel_degree(lab, d.conductor, d.fundamental)));
    if (sum != psi_degree(ipow(ell, a)))
        throw internal_error("x0_prime_power: degree sum != psi(l^a) for delta=" +
                             std::to_string(delta) + " l=" + std::to_string(ell) +
                             " a=" + std::to_string(a));
    return s;
}

namespace fiber_detail {

// Emissions of x0_prime_power with absolute conductors and the first-edge
// tag, for the X_0(2, 2^a) assembly below.
inline std::vector<std::pair<FieldLabel, std::pair<i64, FirstEdge>>>
tagged_prime_power(i64 delta, i64 ell, int a)
{
    Discriminant d = split_discriminant(delta);
    std::vector<std::pair<FieldLabel, std::pair<i64, FirstEdge>>> out;
    for (const auto& e : path_type_emissions(ell, kronecker(d.fundamental, ell),
                                             ord_p(d.fundamental, 2), d.level_at(ell), a))
        out.push_back({{e.kind, checked_i64(chk_mul(ipow(ell, e.exp), d.conductor))},
                       {e.count, e.first}});
    return out;
}

} // namespace fiber_detail

// Fiber of X_0(l^a', l^a) -> X(1) over J_Delta.
//
// For l^a' >= 3, or l^a' = 2 with Delta odd, the projective torsion field
// T = K(l^a' f) is Galois over Q, so every point above P has residue field
// Q(P) * T with conductors combining by lcm.
//
// For l^a' = 2 with Delta even, T = Q(2f) is not Galois over Q and the
// entrywise compositum is ambiguous.  Instead, X_0(2, 2^a) is isomorphic
// to X_0(2^(a+1)) by [E, C] -> [E/C_2, ...], which carries the Delta-CM
// fiber to the classes of the three 2-isogenous discriminants whose paths
// step onto the Delta level first: ascending classes of 4*Delta,
// horizontal classes of Delta, and the descending class of Delta/4.
inline Spectrum x0_two_level(i64 delta, i64 ell, int ap, int a)
{
    if (ap < 0 || ap > a)
        throw usage_error("x0_two_level requires 0 <= a' <= a");
    if (ap == 0)
        return x0_prime_power(delta, ell, a);

    Discriminant d = split_discriminant(delta);
    if (d.fundamental >= -4)
        throw domain_error("x0_two_level requires Delta_K < -4");
    i64 lap = ipow(ell, ap);
    i64 cover = checked_i64(chk_mul(lap, euler_phi(lap))); // deg over X_0(l^a)
    Spectrum out;

    if (lap == 2 && delta % 2 == 0) {
        using fiber_detail::FirstEdge;
        for (const auto& [lab, cf] : fiber_detail::tagged_prime_power(
                 checked_i64(chk_mul(4, delta)), 2, a + 1))
            if (cf.second == FirstEdge::Asc)
                out.add(lab, cf.first);
        for (const auto& [lab, cf] : fiber_detail::tagged_prime_power(delta, 2, a + 1))
            if (cf.second == FirstEdge::Hor)
                out.add(lab, cf.first);
        if (d.level_at(2) >= 1)
            for (const auto& [lab, cf] :
                 fiber_detail::tagged_prime_power(delta / 4, 2, a + 1))
                if (cf.second == FirstEdge::Desc)
                    out.add(lab, cf.first);
    } else {
        Spectrum base = x0_prime_power(delta, ell, a);
        FieldLabel T = ring_class_field(checked_i64(chk_mul(lap, d.conductor)));
        for (const auto& [lab, m] : base.entries) {
            FieldLabel up{FieldLabel::RingClass,
                          checked_i64(lcm(lab.conductor, T.conductor))};
            i64 dP = rel_degree(lab, d.conductor, d.fundamental);
            i64 dUp = rel_degree(up, d.conductor, d.fundamental);
            i128 num = chk_mul(chk_mul(m, cover), dP);
            if (num % dUp != 0)
                throw internal_error("x0_two_level: non-integral multiplicity");
            out.add(up, checked_i64(num / dUp));
        }
    }
    out.sort();

    i128 sum = 0;
    for (const auto& [lab, m] : out.entries)
        sum = chk_add(sum, chk_mul(m, rel_degree(lab, d.conductor, d.fundamental)));
    if (sum != chk_mul(cover, psi_degree(ipow(ell, a))))
        throw internal_error("x0_two_level: degree sum mismatch");
    return out;
}

struct FiberQuery {
    i64 delta;
    i64 M, N;
};

// Sum of multiplicity * [label : Q(f)] against M phi(M) psi(N); false on
// mismatch (with no throw) so callers can report diagnostics.
inline bool degree_sum_check(const Spectrum& s, i64 delta, i64 M, i64 N, i64* got = nullptr,
                             i64* want = nullptr)
{
    Discriminant d = split_discriminant(delta);
    i128 sum = 0;
    for (const auto& [lab, m] : s.entries)
        sum = chk_add(sum, chk_mul(m, rel_degree(lab, d.conductor, d.fundamental)));
    i128 expect = chk_mul(chk_mul(M, euler_phi(M)), psi_degree(N));
    if (got)
        *got = checked_i64(sum);
    if (want)
        *want = checked_i64(expect);
    return sum == expect;
}

// Fiber of X_0(M,N) -> X(1) over J_Delta by tensoring the per-prime
// fibers; a choice of s >= 1 ring-class factors contributes 2^(s-1)
// copies of the compositum.
inline Spectrum x0_general(i64 delta, i64 M, i64 N)
{
    if (M < 1 || N < 1 || N % M != 0)
        throw usage_error("x0_general requires M | N");
    Discriminant d = split_discriminant(delta);
    if (d.fundamental >= -4)
        throw domain_error("x0_general requires Delta_K < -4");

    Spectrum acc;
    acc.add(rational_rcf(d.conductor), 1);
    for (auto [p, e] : factorize(N)) {
        Spectrum factor = x0_two_level(delta, p, ord_p(M, p), e);
        Spectrum next;
        for (const auto& [la, ma] : acc.entries) {
            for (const auto& [lb, mb] : factor.entries) {
                // Conductors of the two sides share only f, so the lcm is
                // the product divided by f.
                i64 cond = checked_i64(
                    chk_mul(la.conductor, lb.conductor) / d.conductor);
                i64 mult = checked_i64(chk_mul(ma, mb));
                if (la.kind == FieldLabel::RingClass && lb.kind == FieldLabel::RingClass)
                    mult = checked_i64(chk_mul(mult, 2)); // K (x) K doubles
                FieldLabel lab{std::max(la.kind, lb.kind), cond};
                next.add(lab, mult);
            }
        }
        next.sort();
        acc = std::move(next);
    }
    acc.sort();
    i64 got = 0, want = 0;
    if (!degree_sum_check(acc, delta, M, N, &got, &want))
        throw internal_error("x0_general: degree sum " + std::to_string(got) + " != " +
                             std::to_string(want));
    return acc;
}

// Degrees (with multiplicities) of closed Delta-CM points on X_1(M,N):
// every X_0 degree scales by max(phi(N)/2, 1) since X_1 -> X_0 is inert
// over CM points.
inline std::vector<std::pair<i64, i64>> x1_degrees(i64 delta, i64 M, i64 N)
{
    Spectrum s = x0_general(delta, M, N);
    Discriminant d = split_discriminant(delta);
    i64 factor = N >= 3 ? euler_phi(N) / 2 : 1;
    std::map<i64, i64> acc;
    for (const auto& [lab, m] : s.entries)
        acc[checked_i64(chk_mul(abs_degree(lab, d.fundamental), factor))] += m;
    return {acc.begin(), acc.end()};
}

} // namespace cmfiber

#endif
