#ifndef CMFIBER_PRIMDEG_HPP
#define CMFIBER_PRIMDEG_HPP

#include <optional>

#include "cmfiber/fiberengine.hpp"

namespace cmfiber {

// Primitive residue fields and degrees of the Delta-CM locus.  Two degrees
// occur only in the dreaded configuration (l > 2 split, L >= 1, a > 2L,
// a' = 0 at every two-field prime).
struct PrimitiveReport {
    std::vector<FieldLabel> fields; // 1 or 2 entries, absolute conductors
    std::vector<i64> degrees;       // absolute degrees over Q; 1 or 2 entries
    bool dreaded = false;
};

namespace primdeg_detail {

// Per-prime-power case data, exponents relative to f.
struct CaseData {
    std::string id;       // e.g. "1.5b"
    int b = -1;           // rational-field exponent (-1 = absent)
    int c = -1;           // ring-class-field exponent (-1 = absent)
    bool dreaded = false; // exactly Case 1.5b
};

inline CaseData prime_power_case(i64 delta, i64 ell, int a)
{
    Discriminant d = split_discriminant(delta);
    int L = d.level_at(ell);
    int chiD = kronecker(delta, ell);
    int chiK = kronecker(d.fundamental, ell);
    int o2 = ord_p(d.fundamental, 2);

    if (a == 0)
        return {"trivial", 0, -1, false};
    if (ell == 2 && a == 1)
        return chiD != -1 ? CaseData{"1.1a", 0, -1, false} : CaseData{"1.1b", 1, -1, false};
    if (L == 0) {
        if (chiD == 1)
            return {"1.2", a, 0, false};
        if (chiD == -1)
            return {"1.3", a, -1, false};
        return {"1.4", a - 1, -1, false};
    }
    if (ell > 2) {
        if (chiK == 1)
            return a <= 2 * L ? CaseData{"1.5a", 0, -1, false}
                              : CaseData{"1.5b", a - 2 * L, 0, true};
        if (chiK == -1)
            return a <= 2 * L ? CaseData{"1.6a", 0, -1, false}
                              : CaseData{"1.6b", a - 2 * L, -1, false};
        return a <= 2 * L + 1 ? CaseData{"1.7a", 0, -1, false}
                              : CaseData{"1.7b", a - 2 * L - 1, -1, false};
    }
    // ell == 2, a >= 2, L >= 1
    if (chiK == 1) {
        if (L == 1)
            return {"1.8a", a, 0, false};
        return a <= 2 * L - 2 ? CaseData{"1.8b", 0, -1, false}
                              : CaseData{"1.8c", a - 2 * L + 2, 0, false};
    }
    if (chiK == -1) {
        if (L == 1)
            return {"1.9a", a, a - 2, false};
        return a <= 2 * L - 2
                   ? CaseData{"1.9b", 0, -1, false}
                   : CaseData{"1.9c", a - 2 * L + 2, std::max(a - 2 * L, 0), false};
    }
    if (o2 == 2)
        return a <= 2 * L ? CaseData{"1.10a", 0, -1, false}
                          : CaseData{"1.10b", a - 2 * L, a - 2 * L - 1, false};
    return a <= 2 * L + 1 ? CaseData{"1.11a", 0, -1, false}
                          : CaseData{"1.11b", a - 2 * L - 1, -1, false};
}

inline CaseData two_level_case(i64 delta, i64 ell, int ap, int a)
{
    if (ap < 1 || ap > a)
        throw usage_error("two_level_case requires 1 <= a' <= a");
    Discriminant d = split_discriminant(delta);
    int L = d.level_at(ell);
    int chiD = kronecker(delta, ell);
    int chiK = kronecker(d.fundamental, ell);
    int o2 = ord_p(d.fundamental, 2);
    i64 lap = ipow(ell, ap);

    if (lap == 2 && delta % 2 == 0) {
        if (a == 1)
            return {"2.0", 1, -1, false};
        if (L == 0)
            return o2 == 2 ? CaseData{"2.1", a, a - 1, false}
                           : CaseData{"2.2", a - 1, -1, false};
        if (chiK == 1) {
            if (L == 1)
                return {"2.3", a, 1, false};
            return a <= 2 * L - 1 ? CaseData{"2.4", 1, -1, false}
                                  : CaseData{"2.5", a - 2 * L + 2, 1, false};
        }
        if (chiK == -1) {
            if (L == 1)
                return a == 2 ? CaseData{"2.6", 2, 1, false}
                              : CaseData{"2.7", a, a - 2, false};
            if (a <= 2 * L - 1)
                return {"2.8", 1, -1, false};
            return a == 2 * L ? CaseData{"2.9", 2, 1, false}
                              : CaseData{"2.10", a - 2 * L + 2, a - 2 * L, false};
        }
        if (o2 == 2)
            return a <= 2 * L + 1 ? CaseData{"2.11", 1, -1, false}
                                  : CaseData{"2.12", a - 2 * L, a - 2 * L - 1, false};
        return a <= 2 * L + 1 ? CaseData{"2.13", 1, -1, false}
                              : CaseData{"2.14", a - 2 * L - 1, -1, false};
    }
    if (lap == 2) { // Delta odd
        if (a == 1)
            return {"3.1", -1, 1, false};
        return chiD == 1 ? CaseData{"3.2", -1, 1, false} : CaseData{"3.3", -1, a, false};
    }
    // l^a' >= 3: always a single ring class field.
    if (chiK == 1)
        return {"4.1", -1, ap, false};
    if (chiK == -1)
        return {"4.2", -1, std::max(ap, a - 2 * L), false};
    return {"4.3", -1, std::max(ap, a - 2 * L - 1), false};
}

inline PrimitiveReport materialize(const CaseData& cd, i64 delta, i64 ell)
{
    Discriminant d = split_discriminant(delta);
    PrimitiveReport r;
    r.dreaded = cd.dreaded;
    auto push = [&](FieldLabel::Kind k, int exp) {
        FieldLabel lab{k, checked_i64(chk_mul(ipow(ell, exp), d.conductor))};
        r.fields.push_back(lab);
    };
    if (cd.b >= 0)
        push(FieldLabel::Rational, cd.b);
    if (cd.c >= 0)
        push(FieldLabel::RingClass, cd.c);
    if (r.fields.empty())
        throw internal_error("primitive case with no fields");
    if (r.fields.size() == 1) {
        r.degrees.push_back(abs_degree(r.fields[0], d.fundamental));
    } else if (cd.dreaded) {
        r.degrees.push_back(abs_degree(r.fields[0], d.fundamental));
        r.degrees.push_back(abs_degree(r.fields[1], d.fundamental));
    } else {
        // Two fields, one primitive degree: [K(Cf):Q] divides [Q(Bf):Q].
        r.degrees.push_back(abs_degree(r.fields[1], d.fundamental));
    }
    return r;
}

} // namespace primdeg_detail

inline PrimitiveReport primitive_x0_prime_power(i64 delta, i64 ell, int a)
{
    Discriminant d = split_discriminant(delta);
    if (d.fundamental >= -4)
        throw domain_error("primitive_x0_prime_power requires Delta_K < -4");
    return primdeg_detail::materialize(primdeg_detail::prime_power_case(delta, ell, a), delta,
                                       ell);
}

inline PrimitiveReport primitive_x0_two_level(i64 delta, i64 ell, int ap, int a)
{
    Discriminant d = split_discriminant(delta);
    if (d.fundamental >= -4)
        throw domain_error("primitive_x0_two_level requires Delta_K < -4");
    return primdeg_detail::materialize(primdeg_detail::two_level_case(delta, ell, ap, a), delta,
                                       ell);
}

// Primitive residue fields and degrees on X_0(M,N), compiled across the
// prime powers of N.
inline PrimitiveReport primitive_compile(i64 delta, i64 M, i64 N)
{
    if (M < 1 || N < 1 || N % M != 0)
        throw usage_error("primitive_compile requires M | N");
    Discriminant d = split_discriminant(delta);
    if (d.fundamental >= -4)
        throw domain_error("primitive_compile requires Delta_K < -4");

    auto factors = factorize(N);
    if (M == 1 || (M == 2 && delta % 2 == 0)) {
        i64 B = 1, C = 1;
        int s = 0;
        bool all_dreaded = true;
        for (auto [p, e] : factors) {
            int ap = ord_p(M, p);
            primdeg_detail::CaseData cd =
                ap == 0 ? primdeg_detail::prime_power_case(delta, p, e)
                        : primdeg_detail::two_level_case(delta, p, ap, e);
            if (cd.b < 0)
                throw internal_error("expected a rational primitive field");
            B = checked_i64(chk_mul(B, ipow(p, cd.b)));
            if (cd.c >= 0) {
                ++s;
                C = checked_i64(chk_mul(C, ipow(p, cd.c)));
                if (!cd.dreaded)
                    all_dreaded = false;
            } else {
                C = checked_i64(chk_mul(C, ipow(p, cd.b)));
            }
        }
        PrimitiveReport r;
        FieldLabel qb = rational_rcf(checked_i64(chk_mul(B, d.conductor)));
        if (s == 0) {
            r.fields = {qb};
            r.degrees = {abs_degree(qb, d.fundamental)};
            return r;
        }
        FieldLabel kc = ring_class_field(checked_i64(chk_mul(C, d.conductor)));
        r.fields = {qb, kc};
        if (all_dreaded) {
            r.dreaded = true;
            r.degrees = {abs_degree(qb, d.fundamental), abs_degree(kc, d.fundamental)};
        } else {
            r.degrees = {abs_degree(kc, d.fundamental)};
        }
        return r;
    }

    // M >= 3, or M = 2 with Delta odd: a unique ring class field.
    i64 C = 1;
    for (auto [p, e] : factors) {
        int ap = ord_p(M, p);
        primdeg_detail::CaseData cd =
            ap == 0 ? primdeg_detail::prime_power_case(delta, p, e)
                    : primdeg_detail::two_level_case(delta, p, ap, e);
        int ci = cd.c >= 0 ? cd.c : cd.b;
        C = checked_i64(chk_mul(C, ipow(p, ci)));
    }
    PrimitiveReport r;
    FieldLabel kc = ring_class_field(checked_i64(chk_mul(C, d.conductor)));
    r.fields = {kc};
    r.degrees = {abs_degree(kc, d.fundamental)};
    return r;
}

// Primitive degrees of Delta-CM points on X_1(M,N): the X_0 values scaled
// by max(phi(N)/2, 1).
inline std::vector<i64> primitive_x1(i64 delta, i64 M, i64 N)
{
    PrimitiveReport r = primitive_compile(delta, M, N);
    i64 factor = N >= 3 ? euler_phi(N) / 2 : 1;
    std::vector<i64> out;
    for (i64 deg : r.degrees)
        out.push_back(checked_i64(chk_mul(deg, factor)));
    return out;
}

} // namespace cmfiber

#endif
