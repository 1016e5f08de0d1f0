#include <catch2/catch_amalgamated.hpp>

#include "cmfiber/fiberengine.hpp"
#include "cmfiber/isogtools.hpp"

using namespace cmfiber;

TEST_CASE("kwon m closed form")
{
    CHECK(kwon_m(-7, 2) == 1);   // (Delta/2) = 1
    CHECK(kwon_m(-11, 2) == 0);  // (Delta/2) = -1
    CHECK(kwon_m(-63, 3) == 2);  // l = 3 unramified, L = 1
    CHECK(kwon_m(-44, 2) == 1);  // 2 | Delta, Delta_K odd, L = 1
    CHECK(kwon_m(-176, 2) == 2); // same family, L = 2: 2L - 2
    CHECK(kwon_m(-63, 7) == 1);  // ramified, L = 0
    CHECK(kwon_m(-80, 2) == 2);  // ord_2(Delta_K) = 2, L = 1
    CHECK(kwon_m(-32, 2) == 3);  // ord_2(Delta_K) = 3, L = 1
    CHECK_THROWS_AS(kwon_m(-12, 2), domain_error);
}

TEST_CASE("kwon m closed form equals the volcano oracle")
{
    for (i64 dk : {-7, -11, -15, -20, -24, -8, -40}) {
        for (i64 f = 1; f <= 18; ++f) {
            i64 delta = checked_i64(f * f * dk);
            for (i64 ell : {2, 3, 5, 7})
                REQUIRE(kwon_m(delta, ell) == kwon_m_oracle(delta, ell));
        }
    }
}

TEST_CASE("kwon m from the fiber engine (third route)")
{
    // I(Delta, l^a) holds iff the X_0(l^a) fiber has a point whose field
    // embeds into Q(f); m_l is the largest such a.
    for (i64 dk : {-7, -11, -15, -20, -24, -8}) {
        for (i64 f : {1, 2, 3, 4, 6}) {
            i64 delta = checked_i64(f * f * dk);
            for (i64 ell : {2, 3, 5}) {
                i64 m = kwon_m(delta, ell);
                auto has_rational_point = [&](int a) {
                    for (const auto& [lab, mult] : x0_prime_power(delta, ell, a).entries)
                        if (embeds(lab, rational_rcf(f), dk))
                            return true;
                    return false;
                };
                for (int a = 1; a <= m; ++a)
                    REQUIRE(has_rational_point(a));
                REQUIRE_FALSE(has_rational_point(static_cast<int>(m) + 1));
            }
        }
    }
}

TEST_CASE("cyclic isogenies over Q(f)")
{
    CHECK(cyclic_over_Qf(-63, 9));
    CHECK_FALSE(cyclic_over_Qf(-63, 27));
    CHECK(cyclic_over_Qf(-63, 1));
    CHECK(cyclic_over_Qf(-7, 2));
    CHECK_FALSE(cyclic_over_Qf(-7, 4));

    // Multiplicativity: true iff true at every prime power.
    for (i64 delta : {-63, -44, -80, -32})
        for (i64 N = 1; N <= 60; ++N) {
            bool whole = cyclic_over_Qf(delta, N);
            bool per = true;
            for (auto [p, e] : factorize(N))
                per = per && cyclic_over_Qf(delta, ipow(p, e));
            REQUIRE(whole == per);
        }
}

TEST_CASE("K(f)-rational maxima and the square-mod sandwich")
{
    CHECK_FALSE(k_rational_max(-7, 2).has_value()); // split: unbounded
    CHECK(k_rational_max(-63, 3) == 2);
    CHECK(k_rational_max(-63, 7) == 1);

    for (i64 dk : {-7, -11, -15, -20, -24, -8, -40}) {
        for (i64 f : {1, 2, 3, 6, 10}) {
            i64 delta = checked_i64(f * f * dk);
            for (i64 ell : {2, 3, 5, 7}) {
                auto m = k_rational_max(delta, ell);
                if (m) {
                    REQUIRE(is_square_mod(delta, checked_i64(4 * ipow(ell, (int)*m))));
                    REQUIRE_FALSE(
                        is_square_mod(delta, checked_i64(4 * ipow(ell, (int)*m + 1))));
                } else {
                    for (int a = 1; a <= 12; ++a)
                        REQUIRE(is_square_mod(delta, checked_i64(4 * ipow(ell, a))));
                }
            }
        }
    }
}

TEST_CASE("square mod m agrees with brute force")
{
    CHECK(is_square_mod(-63, 36));
    CHECK_FALSE(is_square_mod(-63, 108));
    CHECK(is_square_mod(-63, 1));

    for (i64 delta : {-7, -15, -20, -63, -99, -44})
        for (i64 m = 1; m <= 600; ++m)
            REQUIRE(is_square_mod(delta, m) == is_square_mod_bruteforce(delta, m));
}

TEST_CASE("projective torsion fields")
{
    CHECK(projective_torsion_field(-20, 2) == rational_rcf(2));
    CHECK(projective_torsion_field(-15, 2) == ring_class_field(2));
    CHECK(projective_torsion_field(-15, 3) == ring_class_field(3));
    CHECK_THROWS_AS(projective_torsion_field(-15, 1), domain_error);

    // For N >= 3 the projective torsion field always contains K.
    for (i64 delta : {-15, -20, -63})
        for (i64 N = 3; N <= 20; ++N)
            REQUIRE(projective_torsion_field(delta, N).kind == FieldLabel::RingClass);
}

TEST_CASE("real cyclic subgroup counts")
{
    auto c = real_cyclic_subgroup_count(15, 1);
    REQUIRE(c.determined);
    CHECK(c.value == 4);
    CHECK(real_cyclic_subgroup_count(15, 3).value == 4);
    CHECK(real_cyclic_subgroup_count(2, 3).value == 3);
    CHECK(real_cyclic_subgroup_count(2, 1).value == 1);
    auto p = real_cyclic_subgroup_count(12, 1);
    REQUIRE_FALSE(p.determined);
    CHECK(p.range == std::pair<i64, i64>{4, 8});
    CHECK_THROWS_AS(real_cyclic_subgroup_count(16, 1), domain_error);
    CHECK_THROWS_AS(real_cyclic_subgroup_count(6, 2), usage_error);
}
