#include <catch2/catch_amalgamated.hpp>

#include "cmfiber/oddcm.hpp"

using namespace cmfiber;

TEST_CASE("odd degree existence")
{
    CHECK(odd_degree_exists(-4, 2, 2));
    CHECK_FALSE(odd_degree_exists(-8, 1, 4));
    CHECK(odd_degree_exists(-343, 1, 49));
    CHECK(odd_degree_exists(-8, 1, 2));
    CHECK_FALSE(odd_degree_exists(-8, 1, 3));
    CHECK_FALSE(odd_degree_exists(-15, 1, 2)); // h(-15) = 2 is even
}

TEST_CASE("odd degree points need (M,N) of the classified shape")
{
    // For all M >= 2 except (2,2), no discriminant admits one.
    for (i64 delta = -3; delta >= -400; --delta) {
        if (!is_valid_discriminant(delta))
            continue;
        for (std::pair<i64, i64> mn :
             {std::pair<i64, i64>{2, 4}, {2, 6}, {3, 3}, {3, 9}, {4, 4}, {2, 10}})
            REQUIRE_FALSE(odd_degree_exists(delta, mn.first, mn.second));
        if (odd_degree_exists(delta, 1, 8))
            FAIL("odd degree point on X_0(8) at delta = " << delta);
    }
}

TEST_CASE("primitive odd degrees")
{
    CHECK(primitive_odd_degree(-7, 1, 7) == 1);
    CHECK(primitive_odd_degree(-27, 1, 27) == 1);
    CHECK(primitive_odd_degree(-28, 1, 14) == 1); // (2 - (7/2)) = 1 for 7 = 7 mod 8
    CHECK(primitive_odd_degree(-44, 1, 22) == 3); // 11 = 3 mod 8: factor 3
    CHECK(primitive_odd_degree(-343, 1, 49) == 7);
    CHECK_FALSE(primitive_odd_degree(-8, 1, 4).has_value());
}

TEST_CASE("h parity classification matches class numbers")
{
    for (i64 delta = -3; delta >= -10000; --delta) {
        if (!is_valid_discriminant(delta))
            continue;
        REQUIRE(oddcm_detail::h_is_odd(delta) == (class_number(delta) % 2 == 1));
    }
}

TEST_CASE("class number one scan")
{
    std::vector<i64> ones;
    for (i64 delta = -3; delta >= -200; --delta)
        if (is_valid_discriminant(delta) && class_number(delta) == 1)
            ones.push_back(delta);
    CHECK(ones == std::vector<i64>{-3, -4, -7, -8, -11, -12, -16, -19, -27, -28, -43, -67,
                                   -163});
}

TEST_CASE("least odd CM degrees and corresponding discriminants")
{
    auto r = d_odd_cm(1, 11);
    REQUIRE(r.exists);
    CHECK(*r.d_odd_cm == 1);
    CHECK(r.corresponding_discriminants == std::vector<i64>{-11});

    r = d_odd_cm(1, 49);
    REQUIRE(r.exists);
    CHECK(*r.d_odd_cm == 7);
    CHECK(r.corresponding_discriminants == std::vector<i64>{-7, -28, -343, -1372});

    r = d_odd_cm(1, 14);
    REQUIRE(r.exists);
    CHECK(*r.d_odd_cm == 1);
    CHECK(r.corresponding_discriminants == std::vector<i64>{-7, -28});

    r = d_odd_cm(2, 2);
    REQUIRE(r.exists);
    CHECK(*r.d_odd_cm == 1);
    CHECK(r.corresponding_discriminants == std::vector<i64>{-4});

    r = d_odd_cm(1, 1);
    REQUIRE(r.exists);
    CHECK(*r.d_odd_cm == 1);
    CHECK(r.corresponding_discriminants.size() == 13);

    // X_1 scaling: same discriminants, degree times phi(N)/2.
    auto x1 = d_odd_cm(1, 49, CurveFamily::X1);
    REQUIRE(x1.exists);
    CHECK(*x1.d_odd_cm == 147);
    CHECK(x1.corresponding_discriminants == d_odd_cm(1, 49).corresponding_discriminants);

    CHECK_FALSE(d_odd_cm(1, 5).exists);  // 5 = 1 mod 4
    CHECK_FALSE(d_odd_cm(1, 8).exists);
    CHECK_FALSE(d_odd_cm(2, 4).exists);
}

TEST_CASE("small d_odd_cm values agree with the compiled lists")
{
    // X_0(2): every h = 1 discriminant with a rational point on X_0(2).
    auto r = d_odd_cm(1, 2);
    REQUIRE(r.exists);
    CHECK(*r.d_odd_cm == 1);
    CHECK(r.corresponding_discriminants ==
          std::vector<i64>{-3, -4, -7, -8, -12, -16, -28});

    r = d_odd_cm(1, 3);
    CHECK(r.corresponding_discriminants == std::vector<i64>{-3, -12, -27});

    r = d_odd_cm(1, 4);
    CHECK(r.corresponding_discriminants == std::vector<i64>{-4, -16});

    r = d_odd_cm(1, 9);
    CHECK(*r.d_odd_cm == 1);
    CHECK(r.corresponding_discriminants == std::vector<i64>{-3, -27});

    r = d_odd_cm(1, 27);
    CHECK(*r.d_odd_cm == 1);
    CHECK(r.corresponding_discriminants == std::vector<i64>{-27});
}

TEST_CASE("odd degrees against the general primitive machinery")
{
    // For Delta_K < -4 the odd primitive degree comes from the compiled
    // report; verify parity bookkeeping over a grid.
    for (i64 delta : {-7, -11, -28, -44, -343})
        for (i64 N : {2, 7, 11, 14, 22, 49}) {
            auto deg = primitive_odd_degree(delta, 1, N);
            auto rep_degrees = primitive_compile(delta, 1, N).degrees;
            bool any_odd = false;
            for (i64 d : rep_degrees)
                any_odd = any_odd || d % 2 == 1;
            REQUIRE(deg.has_value() == any_odd);
        }
}
