#ifndef CMFIBER_APPENDIX_HPP
#define CMFIBER_APPENDIX_HPP

#include <functional>
#include <optional>

#include "cmfiber/fiberengine.hpp"

namespace cmfiber {

// Transcription of the 95 printed fiber tables for X_0(l^a), used as golden
// test fixtures.  Values are encoded as printed; entries that violate the
// degree-sum invariant are reported as disputed by the checker rather than
// trusted or silently fixed.  Keyed by parameter tuple, not case number
// (two case numbers are duplicated in print).
struct AppendixTable {
    std::string id;
    std::vector<fiber_detail::Emission> rows;
};

namespace appendix_detail {

using fiber_detail::Emission;
constexpr auto Q = FieldLabel::Rational;
constexpr auto K = FieldLabel::RingClass;

struct Builder {
    i64 ell;
    std::vector<Emission> rows;

    void row(FieldLabel::Kind k, int exp, i64 count)
    {
        if (count != 0)
            rows.push_back({k, exp, count});
    }
    // Geometric ladder: count(e) = unit * base^((hi - e)/step) for
    // e = hi, hi-step, ..., down to lo.
    void ladder(FieldLabel::Kind k, int hi, int lo, i64 unit, i64 base = 0, int step = 2)
    {
        if (base == 0)
            base = ell;
        for (int e = hi, j = 0; e >= lo; e -= step, ++j)
            row(k, e, checked_i64(chk_mul(unit, ipow(base, j))));
    }
    i64 pw(int e) const { return e < 0 ? 0 : ipow(ell, e); }
    // l + l^2 + ... + l^top
    i64 geom(int top) const
    {
        i64 s = 0;
        for (int i = 1; i <= top; ++i)
            s += pw(i);
        return s;
    }
};

} // namespace appendix_detail

// Returns the printed table applicable to (l, chi = (Delta_K/l),
// ord_2(Delta_K), L, a >= 1), or nullopt where no printed case covers the
// parameters.
inline std::optional<AppendixTable> appendix_table(i64 ell, int chi, int o2, int L, int a)
{
    using namespace appendix_detail;
    Builder b{ell, {}};
    std::string id;

    if (L == 0) {
        if (chi == -1) {
            id = "1";
            b.row(Q, a, 1);
        } else if (chi == 0) {
            id = "2";
            b.row(Q, a - 1, 1);
            b.row(Q, a, 1);
        } else {
            id = "3";
            for (int j = 0; j <= a - 1; ++j)
                b.row(K, j, 1);
            b.row(Q, a, 1);
        }
        return AppendixTable{id, b.rows};
    }
    if (a == 1) { // L >= a = 1
        id = "4";
        b.row(Q, 0, 1);
        b.row(Q, 1, 1);
        return AppendixTable{id, b.rows};
    }
    if (L >= a) { // a >= 2
        if (ell > 2) {
            id = "5";
            b.row(Q, 0, 1);
            b.row(K, 0, (b.pw(a / 2) - 1) / 2);
            b.ladder(K, a - 2, 1, (ell - 1) / 2);
            b.row(Q, a, 1);
        } else if (a == 2) {
            id = "6";
            b.row(Q, 0, 2);
            b.row(Q, 2, 1);
        } else if (a == 3) {
            id = "7";
            b.row(Q, 0, 2);
            b.row(Q, 1, 1);
            b.row(Q, 3, 1);
        } else if (a % 2 == 0) {
            id = "8";
            b.row(Q, 0, 2);
            b.row(K, 0, b.pw(a / 2 - 1) - 1);
            b.ladder(K, a - 4, 2, 1);
            b.row(Q, a - 2, 1);
            b.row(Q, a, 1);
        } else {
            id = "9";
            b.row(Q, 0, 2);
            b.row(K, 0, b.pw((a - 1) / 2 - 1) - 1);
            b.ladder(K, a - 4, 1, 1);
            b.row(Q, a - 2, 1);
            b.row(Q, a, 1);
        }
        return AppendixTable{id, b.rows};
    }

    // From here on: a > L >= 1.
    if (ell > 2 && chi == -1) {
        if (L == 1) {
            id = "10";
            b.row(Q, a - 2, 1);
            b.row(K, a - 2, (ell - 1) / 2);
            b.row(Q, a, 1);
        } else if (2 * L <= a) {
            id = "11";
            b.row(Q, a - 2 * L, 1);
            b.row(K, a - 2 * L, (b.pw(L) - 1) / 2);
            b.ladder(K, a - 2, a - 2 * L + 2, (ell - 1) / 2);
            b.row(Q, a, 1);
        } else {
            id = "12";
            b.row(Q, 0, 1);
            b.row(K, 0, (b.pw(a / 2) - 1) / 2);
            b.ladder(K, a - 2, 1, (ell - 1) / 2);
            b.row(Q, a, 1);
        }
        return AppendixTable{id, b.rows};
    }
    if (ell > 2 && chi == 0) {
        if (L == 1 && a == 2) {
            id = "13";
            b.row(Q, 0, 1);
            b.row(K, 0, (ell - 1) / 2);
            b.row(Q, a, 1);
        } else if (L == 1 && a == 3) {
            id = "14";
            b.row(Q, 0, 1);
            b.row(K, 0, (ell - 1) / 2);
            b.row(K, 1, (ell - 1) / 2);
            b.row(Q, a, 1);
        } else if (L == 1) {
            id = "15";
            b.row(Q, a - 3, 1);
            b.row(K, a - 3, (ell - 1) / 2);
            b.row(K, a - 2, (ell - 1) / 2);
            b.row(Q, a, 1);
        } else if (a >= 2 * L + 1) {
            id = "16";
            b.row(Q, a - 2 * L - 1, 1);
            b.row(K, a - 2 * L - 1, (b.pw(L) - 1) / 2);
            b.row(K, a - 2 * L, (ell - 1) / 2 * b.pw(L - 1));
            b.ladder(K, a - 2, a - 2 * L + 2, (ell - 1) / 2);
            b.row(Q, a, 1);
        } else if (a == 2 * L) {
            id = "17";
            b.row(Q, 0, 1);
            b.row(K, 0, (ell - 1) / 2 * b.pw(a / 2 - 1) + (b.pw(a / 2 - 1) - 1) / 2);
            b.ladder(K, a - 2, 2, (ell - 1) / 2);
            b.row(Q, a, 1);
        } else if (a == 2 * L - 1) {
            id = "18";
            b.row(Q, 0, 1);
            b.row(K, 0, (ell - 1) / 2 * b.pw(L - 2));
            b.ladder(K, a - 2, 1, (ell - 1) / 2);
            b.row(Q, a, 1);
        } else if (a % 2 == 0) {
            id = "19";
            b.row(Q, 0, 1);
            i64 mid = 0;
            for (int i = a - L - 1; i <= a / 2 - 1; ++i)
                mid += b.pw(i);
            b.row(K, 0, (ell - 1) / 2 * mid + (b.pw(a - L - 1) - 1) / 2);
            b.ladder(K, a - 2, 2, (ell - 1) / 2);
            b.row(Q, a, 1);
        } else {
            id = "20";
            b.row(Q, 0, 1);
            i64 mid = 0;
            for (int i = a - L - 1; i <= (a - 1) / 2 - 1; ++i)
                mid += b.pw(i);
            b.row(K, 0, (ell - 1) / 2 * mid + (b.pw(a - L - 1) - 1) / 2);
            b.ladder(K, a - 2, 1, (ell - 1) / 2);
            b.row(Q, a, 1);
        }
        return AppendixTable{id, b.rows};
    }
    if (ell > 2 && chi == 1) {
        if (L == 1 && a == 2) {
            id = "21";
            b.row(Q, 0, 1);
            b.row(K, 0, (ell - 3) / 2 + 1);
            b.row(Q, 2, 1);
        } else if (L == 1) {
            id = "22";
            b.row(K, 0, ell);
            for (int e = 1; e <= a - 3; ++e)
                b.row(K, e, ell - 1);
            b.row(Q, a - 2, 1);
            b.row(K, a - 2, (ell - 3) / 2);
            b.row(Q, a, 1);
        } else if (L == 2 && a == 3) {
            id = "23";
            b.row(Q, 0, 1);
            b.row(K, 0, 1 + (ell - 3) / 2);
            b.row(K, 1, (ell - 1) / 2);
            b.row(Q, 3, 1);
        } else if (L == 3 && a == 4) {
            id = "24";
            b.row(Q, 0, 1);
            b.row(K, 0, 1 + (ell - 3) / 2 + (ell - 1) * ell / 2);
            b.row(K, 2, (ell - 1) / 2);
            b.row(Q, 4, 1);
        } else if (L == 4 && a == 5) {
            // Case 25 as printed (the K(l f) count and the final exponent
            // fail the degree sum; reported as disputed by the checker).
            id = "25";
            b.row(Q, 0, 1);
            b.row(K, 0, 1 + (ell - 3) / 2 + (ell - 1) * ell / 2);
            b.row(K, 1, (ell - 1) / 2);
            b.row(K, 3, (ell - 1) / 2);
            b.row(Q, 4, 1);
        } else if (a == L + 1 && L % 2 == 1) {
            id = "26";
            b.row(Q, 0, 1);
            b.row(K, 0, 1 + (ell - 3) / 2 + (ell - 1) / 2 * b.geom(a / 2 - 1));
            b.ladder(K, a - 2, 2, (ell - 1) / 2);
            b.row(Q, a, 1);
        } else if (a == L + 1) {
            id = "27";
            b.row(Q, 0, 1);
            b.row(K, 0, 1 + (ell - 3) / 2 + (ell - 1) / 2 * b.geom(L / 2 - 1));
            b.ladder(K, a - 2, 1, (ell - 1) / 2);
            b.row(Q, a, 1);
        } else if (a >= 2 * L + 2) {
            id = "28";
            b.row(K, 0, b.pw(L));
            for (int e = 1; e <= a - 2 * L - 1; ++e)
                b.row(K, e, (ell - 1) * b.pw(L - 1));
            b.row(Q, a - 2 * L, 1);
            b.row(K, a - 2 * L, ((ell - 2) * b.pw(L - 1) - 1) / 2);
            b.ladder(K, a - 2, a - 2 * L + 2, (ell - 1) / 2);
            b.row(Q, a, 1);
        } else if (a == 2 * L + 1) {
            id = "29";
            b.row(K, 0, b.pw(L));
            b.row(Q, 1, 1);
            b.row(K, 1, ((ell - 2) * b.pw(L - 1) - 1) / 2);
            b.ladder(K, a - 2, 3, (ell - 1) / 2);
            b.row(Q, a, 1);
        } else if (a == 2 * L) {
            id = "30";
            b.row(Q, 0, 1);
            b.row(K, 0, b.pw(L - 1) + ((ell - 2) * b.pw(L - 1) - 1) / 2);
            b.ladder(K, a - 2, 2, (ell - 1) / 2);
            b.row(Q, a, 1);
        } else if (a == 2 * L - 1) {
            id = "31";
            b.row(Q, 0, 1);
            b.row(K, 0, b.pw(L - 2) + ((ell - 2) * b.pw(L - 2) - 1) / 2);
            b.ladder(K, a - 2, 1, (ell - 1) / 2);
            b.row(Q, a, 1);
        } else if (a % 2 == 0) {
            id = "32";
            b.row(Q, 0, 1);
            b.row(K, 0, (b.pw(a / 2) - 1) / 2);
            b.ladder(K, a - 2, 2, (ell - 1) / 2);
            b.row(Q, a, 1);
        } else {
            id = "33";
            b.row(Q, 0, 1);
            b.row(K, 0, (b.pw((a - 1) / 2) - 1) / 2);
            b.ladder(K, a - 2, 1, (ell - 1) / 2);
            b.row(Q, a, 1);
        }
        return AppendixTable{id, b.rows};
    }

    // ell == 2 from here.
    if (chi == -1) {
        if (L == 1) {
            id = "34";
            b.row(K, a - 2, 1);
            b.row(Q, a, 1);
        } else if (L == 2 && a == 3) {
            id = "35";
            b.row(K, 0, 1);
            b.row(Q, 1, 1);
            b.row(Q, 3, 1);
        } else if (L == 2) {
            // Case 36 as printed; the Q(2^(a-2) f) count fails the degree
            // sum and is reported as disputed.
            id = "36";
            b.row(K, a - 4, 2);
            b.row(Q, a - 2, 2);
            b.row(Q, a, 1);
        } else if (L == 3 && a == 4) {
            id = "37";
            b.row(Q, 0, 2);
            b.row(K, 0, 1);
            b.row(Q, 2, 1);
            b.row(Q, 4, 1);
        } else if (L == 3 && a == 5) {
            id = "38";
            b.row(K, 0, 2);
            b.row(Q, 1, 2);
            b.row(Q, 3, 1);
            b.row(Q, 5, 1);
        } else if (L == 3) {
            id = "39";
            b.row(K, a - 6, 4);
            b.row(Q, a - 4, 2);
            b.row(Q, a - 2, 1);
            b.row(Q, a, 1);
        } else if (a <= 2 * L - 6 && a % 2 == 0) {
            // Case 40 as printed (K(f) count).
            id = "40";
            b.row(Q, 0, 2);
            b.row(K, 0, b.pw(a / 2 - 1));
            b.ladder(K, a - 4, 2, 1);
            b.row(Q, a - 2, 1);
            b.row(Q, a, 1);
        } else if (a <= 2 * L - 5 && a % 2 == 1) {
            // Case 41 as printed (K(f) count).
            id = "41";
            b.row(Q, 0, 2);
            b.row(K, 0, b.pw((a - 3) / 2) - 1);
            b.ladder(K, a - 4, 1, 1);
            b.row(Q, a - 2, 1);
            b.row(Q, a, 1);
        } else if (L >= 5 && a == 2 * L - 4) {
            id = "42";
            b.row(Q, 0, 2);
            b.row(K, 0, b.pw(a - L + 1) - 1);
            b.ladder(K, a - 4, 2, 1);
            b.row(Q, a - 2, 1);
            b.row(Q, a, 1);
        } else if (L >= 4 && a >= 2 * L) {
            id = "43";
            b.row(K, a - 2 * L, b.pw(L - 1));
            b.row(Q, a - 2 * L + 2, 2);
            b.row(K, a - 2 * L + 2, b.pw(L - 3) - 1);
            b.ladder(K, a - 4, a - 2 * L + 4, 1);
            b.row(Q, a - 2, 1);
            b.row(Q, a, 1);
        } else {
            return std::nullopt; // a in {2L-3, 2L-2, 2L-1}: no printed case
        }
        return AppendixTable{id, b.rows};
    }
    if (chi == 1) {
        if (L == 1 && a == 2) {
            // Case 44 as printed: the K(f) multiplicity 2 fails the degree
            // sum (the invariant-consistent value is 1); reported disputed.
            id = "44";
            b.row(K, 0, 2);
            b.row(Q, 2, 1);
        } else if (L == 1 && a == 3) {
            id = "45";
            b.row(K, 0, 2);
            b.row(Q, 3, 1);
        } else if (L == 1) {
            id = "46";
            b.row(K, 0, 2);
            for (int e = 1; e <= a - 3; ++e)
                b.row(K, e, 1);
            b.row(Q, a, 1);
        } else if (L == 2 && a == 3) {
            id = "47a";
            b.row(K, 0, 1);
            b.row(Q, 1, 1);
            b.row(Q, 3, 1);
        } else if (L == 2 && a == 4) {
            id = "47b";
            b.row(K, 0, 2);
            b.row(Q, 2, 1);
            b.row(Q, 4, 1);
        } else if (L == 2 && a == 5) {
            id = "48";
            b.row(K, 0, 4);
            b.row(Q, 3, 1);
            b.row(Q, 5, 1);
        } else if (L == 2) {
            id = "49";
            b.row(K, 0, 4);
            for (int e = 1; e <= a - 5; ++e)
                b.row(K, e, 2);
            b.row(Q, a - 2, 1);
            b.row(Q, a, 1);
        } else if (L == 3 && a == 4) {
            id = "50";
            b.row(Q, 0, 2);
            b.row(K, 0, 1);
            b.row(Q, 2, 1);
            b.row(Q, 4, 1);
        } else if (L == 3 && a == 5) {
            id = "51";
            b.row(K, 0, 2);
            b.row(Q, 1, 2);
            b.row(Q, 3, 1);
            b.row(Q, 5, 1);
        } else if (L == 3 && a == 6) {
            id = "52";
            b.row(K, 0, 4);
            b.row(Q, 2, 2);
            b.row(Q, 4, 1);
            b.row(Q, 6, 1);
        } else if (L == 3 && a == 7) {
            id = "53";
            b.row(K, 0, 8);
            b.row(Q, 3, 2);
            b.row(Q, 5, 1);
            b.row(Q, 7, 1);
        } else if (L == 3) {
            id = "54";
            b.row(K, 0, 8);
            for (int e = 1; e <= a - 7; ++e)
                b.row(K, e, 4);
            b.row(Q, a - 4, 2);
            b.row(Q, a - 2, 1);
            b.row(Q, a, 1);
        } else if (a <= 2 * L - 6 && a % 2 == 0) {
            // Case 55 as printed (K(f) count).
            id = "55";
            b.row(Q, 0, 2);
            b.row(K, 0, b.pw(a / 2 - 1) - 1);
            b.ladder(K, a - 4, 2, 1);
            b.row(Q, a - 2, 1);
            b.row(Q, a, 1);
        } else if (a <= 2 * L - 5 && a % 2 == 1) {
            // Case 56 as printed (K(f) count).
            id = "56";
            b.row(Q, 0, 2);
            b.row(K, 0, b.pw((a - 1) / 2 - 1) - 1);
            b.ladder(K, a - 4, 1, 1);
            b.row(Q, a - 2, 1);
            b.row(Q, a, 1);
        } else if (a == 2 * L - 4) {
            id = "57";
            b.row(Q, 0, 2);
            b.row(K, 0, b.pw(L - 3) - 1);
            b.ladder(K, a - 4, 2, 1);
            b.row(Q, a - 2, 1);
            b.row(Q, a, 1);
        } else if (a == 2 * L - 3) {
            id = "58";
            b.row(Q, 0, 2);
            b.row(K, 0, b.pw(L - 3) - 1);
            b.ladder(K, a - 4, 1, 1);
            b.row(Q, a - 2, 1);
            b.row(Q, a, 1);
        } else if (a == 2 * L - 2) {
            id = "59"; // printed twice (Cases 59 and 60 carry this table)
            b.row(Q, 0, 2);
            b.row(K, 0, b.pw(L - 2) - 1);
            b.ladder(K, a - 4, 2, 1);
            b.row(Q, a - 2, 1);
            b.row(Q, a, 1);
        } else if (a == 2 * L - 1) {
            id = "61";
            b.row(K, 0, b.pw(L - 2));
            b.row(Q, 1, 2);
            b.row(K, 1, b.pw(L - 3) - 1);
            b.ladder(K, a - 4, 3, 1);
            b.row(Q, a - 2, 1);
            b.row(Q, a, 1);
        } else if (a == 2 * L) {
            id = "62";
            b.row(K, 0, b.pw(L - 1));
            b.row(Q, 2, 2);
            b.row(K, 2, b.pw(L - 3) - 1);
            b.ladder(K, a - 4, 4, 1);
            b.row(Q, a - 2, 1);
            b.row(Q, a, 1);
        } else if (a == 2 * L + 1) {
            id = "63";
            b.row(K, 0, b.pw(L));
            b.row(Q, 3, 2);
            b.row(K, 3, b.pw(L - 3) - 1);
            b.ladder(K, a - 4, 5, 1);
            b.row(Q, a - 2, 1);
            b.row(Q, a, 1);
        } else {
            id = "64"; // a >= 2L+2
            b.row(K, 0, b.pw(L));
            for (int e = 1; e <= a - 2 * L - 1; ++e)
                b.row(K, e, b.pw(L - 1));
            b.row(Q, a - 2 * L + 2, 2);
            b.row(K, a - 2 * L + 2, b.pw(L - 3) - 1);
            b.ladder(K, a - 4, a - 2 * L + 4, 1);
            b.row(Q, a - 2, 1);
            b.row(Q, a, 1);
        }
        return AppendixTable{id, b.rows};
    }

    // ell == 2, chi == 0: branch on ord_2(Delta_K).
    if (o2 == 2) {
        if (L == 1 && a == 2) {
            id = "65";
            b.row(Q, 0, 2);
            b.row(Q, 2, 1);
        } else if (L == 1) {
            id = "66";
            b.row(K, a - 3, 1);
            b.row(Q, a - 2, 1);
            b.row(Q, a, 1);
        } else if (L == 2 && a == 3) {
            id = "67";
            b.row(Q, 0, 2);
            b.row(Q, 1, 1);
            b.row(Q, 3, 1);
        } else if (L == 2 && a == 4) {
            id = "68";
            b.row(Q, 0, 2);
            b.row(K, 0, 1);
            b.row(Q, 2, 1);
            b.row(Q, 4, 1);
        } else if (L == 2) {
            id = "69";
            b.row(K, a - 5, 2);
            b.row(Q, a - 4, 2);
            b.row(Q, a - 2, 1);
            b.row(Q, a, 1);
        } else if (L == 3 && a == 4) {
            id = "70";
            b.row(Q, 0, 2);
            b.row(K, 0, 1);
            b.row(Q, 2, 1);
            b.row(Q, 4, 1);
        } else if (L == 3 && a == 5) {
            id = "71";
            b.row(Q, 0, 2);
            b.row(K, 0, 1);
            b.row(K, 1, 1);
            b.row(Q, 3, 1);
            b.row(Q, 5, 1);
        } else if (L == 3 && a == 6) {
            id = "72";
            b.row(Q, 0, 2);
            b.row(K, 0, 3);
            b.row(K, 2, 1);
            b.row(Q, 4, 1);
            b.row(Q, 6, 1);
        } else if (a >= 2 * L + 1) {
            // Case 73 as printed; the K(2^(a-2L+4) f) row contradicts the
            // ladder and the degree sum (disputed).
            id = "73";
            b.row(K, a - 2 * L - 1, b.pw(L - 1));
            b.row(Q, a - 2 * L, 2);
            b.row(K, a - 2 * L, b.pw(L - 2) - 1);
            b.row(K, a - 2 * L + 2, b.pw(L - 3));
            b.row(K, a - 2 * L + 4, b.pw(L - 2));
            b.ladder(K, a - 4, a - 2 * L + 6, 1);
            b.row(Q, a - 2, 1);
            b.row(Q, a, 1);
        } else if (a == L + 1 && a % 2 == 1) {
            id = "74";
            b.row(Q, 0, 2);
            b.row(K, 0, b.pw((a - 3) / 2) - 1);
            b.ladder(K, a - 4, 1, 1);
            b.row(Q, a - 2, 1);
            b.row(Q, a, 1);
        } else if (a == L + 1) {
            id = "75";
            b.row(Q, 0, 2);
            b.row(K, 0, b.pw(a / 2 - 1) - 1);
            b.ladder(K, a - 4, 2, 1);
            b.row(Q, a - 2, 1);
            b.row(Q, a, 1);
        } else if (a == 2 * L) {
            id = "76";
            b.row(Q, 0, 2);
            b.row(K, 0, b.pw(L - 1) - 1);
            b.ladder(K, a - 4, 2, 1);
            b.row(Q, a - 2, 1);
            b.row(Q, a, 1);
        } else if (a == 2 * L - 1) {
            id = "77a";
            b.row(Q, 0, 2);
            b.row(K, 0, b.pw(L - 2) - 1);
            b.ladder(K, a - 4, 1, 1);
            b.row(Q, a - 2, 1);
            b.row(Q, a, 1);
        } else if (a == 2 * L - 2) {
            id = "77b";
            b.row(Q, 0, 2);
            b.row(K, 0, b.pw(L - 2) - 1);
            b.ladder(K, a - 4, 2, 1);
            b.row(Q, a - 2, 1);
            b.row(Q, a, 1);
        } else if (a % 2 == 1) {
            id = "78"; // L+2 <= a <= 2L-3 odd
            b.row(Q, 0, 2);
            b.row(K, 0, b.pw((a - 1) / 2 - 1) - 1);
            b.ladder(K, a - 4, 1, 1);
            b.row(Q, a - 2, 1);
            b.row(Q, a, 1);
        } else {
            id = "79"; // L >= 6, L+2 <= a <= 2L-4 even
            b.row(Q, 0, 2);
            b.row(K, 0, b.pw(a / 2 - 1) - 1);
            b.ladder(K, a - 4, 2, 1);
            b.row(Q, a - 2, 1);
            b.row(Q, a, 1);
        }
        return AppendixTable{id, b.rows};
    }

    // o2 == 3
    if (L == 1 && a == 2) {
        id = "80";
        b.row(Q, 0, 2);
        b.row(Q, 2, 1);
    } else if (L == 1) {
        id = "81";
        b.row(Q, a - 3, 2);
        b.row(Q, a - 2, 1);
        b.row(Q, a, 1);
    } else if (L == 2 && a == 3) {
        id = "82";
        b.row(Q, 0, 2);
        b.row(Q, 1, 1);
        b.row(Q, 3, 1);
    } else if (L == 2 && a == 4) {
        id = "83";
        b.row(Q, 0, 2);
        b.row(K, 0, 1);
        b.row(Q, 2, 1);
        b.row(Q, 4, 1);
    } else if (L == 2) {
        id = "84";
        b.row(Q, a - 5, 2);
        b.row(K, a - 5, 1);
        b.row(K, a - 4, 1);
        b.row(Q, a - 2, 1);
        b.row(Q, a, 1);
    } else if (L == 3 && a == 4) {
        id = "85";
        b.row(Q, 0, 2);
        b.row(K, 0, 1);
        b.row(Q, 2, 1);
        b.row(Q, 4, 1);
    } else if (L == 3 && a == 5) {
        id = "86";
        b.row(Q, 0, 2);
        b.row(K, 0, 1);
        b.row(K, 1, 1);
        b.row(Q, 3, 1);
        b.row(Q, 5, 1);
    } else if (L == 3 && a == 6) {
        id = "87";
        b.row(Q, 0, 2);
        b.row(K, 0, 3);
        b.row(K, 2, 1);
        b.row(Q, 4, 1);
        b.row(Q, 6, 1);
    } else if (a >= 2 * L + 1) {
        // Case 88 as printed; same ladder anomaly as Case 73 (disputed).
        id = "88";
        b.row(Q, a - 2 * L - 1, 2);
        b.row(K, a - 2 * L - 1, b.pw(L - 1) - 1);
        b.row(K, a - 2 * L, b.pw(L - 2));
        b.row(K, a - 2 * L + 2, b.pw(L - 3));
        b.row(K, a - 2 * L + 4, b.pw(L - 2));
        b.ladder(K, a - 4, a - 2 * L + 6, 1);
        b.row(Q, a - 2, 1);
        b.row(Q, a, 1);
    } else if (a == L + 1 && a % 2 == 1) {
        id = "89";
        b.row(Q, 0, 2);
        b.row(K, 0, b.pw((a - 3) / 2) - 1);
        b.ladder(K, a - 4, 1, 1);
        b.row(Q, a - 2, 1);
        b.row(Q, a, 1);
    } else if (a == L + 1) {
        id = "90";
        b.row(Q, 0, 2);
        b.row(K, 0, b.pw(a / 2 - 1) - 1);
        b.ladder(K, a - 4, 2, 1);
        b.row(Q, a - 2, 1);
        b.row(Q, a, 1);
    } else if (a == 2 * L) {
        id = "91";
        b.row(Q, 0, 2);
        b.row(K, 0, b.pw(L - 1) - 1);
        b.ladder(K, a - 4, 2, 1);
        b.row(Q, a - 2, 1);
        b.row(Q, a, 1);
    } else if (a == 2 * L - 1) {
        id = "92";
        b.row(Q, 0, 2);
        b.row(K, 0, b.pw(L - 2) - 1);
        b.ladder(K, a - 4, 1, 1);
        b.row(Q, a - 2, 1);
        b.row(Q, a, 1);
    } else if (a == 2 * L - 2) {
        id = "93";
        b.row(Q, 0, 2);
        b.row(K, 0, b.pw(L - 2) - 1);
        b.ladder(K, a - 4, 2, 1);
        b.row(Q, a - 2, 1);
        b.row(Q, a, 1);
    } else if (a % 2 == 1) {
        id = "94"; // L+2 <= a <= 2L-3 odd
        b.row(Q, 0, 2);
        b.row(K, 0, b.pw((a - 1) / 2 - 1) - 1);
        b.ladder(K, a - 4, 1, 1);
        b.row(Q, a - 2, 1);
        b.row(Q, a, 1);
    } else {
        id = "95"; // L >= 6, L+2 <= a <= 2L-4 even
        b.row(Q, 0, 2);
        b.row(K, 0, b.pw(a / 2 - 1) - 1);
        b.ladder(K, a - 4, 2, 1);
        b.row(Q, a - 2, 1);
        b.row(Q, a, 1);
    }
    return AppendixTable{id, b.rows};
}

// Evaluate a printed table into a spectrum with absolute conductors.
inline Spectrum appendix_spectrum(const AppendixTable& t, i64 ell, i64 f)
{
    Spectrum s;
    for (const auto& r : t.rows) {
        if (r.exp < 0)
            throw internal_error("appendix row with negative exponent");
        s.add({r.kind, checked_i64(chk_mul(ipow(ell, r.exp), f))}, r.count);
    }
    s.sort();
    return s;
}

} // namespace cmfiber

#endif
