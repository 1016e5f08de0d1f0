#include <catch2/catch_amalgamated.hpp>

#include "cmfiber/classfields.hpp"

using namespace cmfiber;

TEST_CASE("absolute degrees")
{
    CHECK(abs_degree(rational_rcf(1), -7) == 1);
    CHECK(abs_degree(ring_class_field(1), -15) == 4);
    CHECK(abs_degree(ring_class_field(3), -7) == 8);
    CHECK_THROWS_AS(abs_degree(rational_rcf(1), -4), domain_error);
}

TEST_CASE("embeds")
{
    CHECK(embeds(rational_rcf(2), rational_rcf(6), -7));
    CHECK_FALSE(embeds(ring_class_field(2), rational_rcf(4), -7));
    // d(2) = 1 for Delta_K = -7, so K(1) and K(2) are the same field.
    CHECK(embeds(ring_class_field(1), ring_class_field(2), -7));
    CHECK(embeds(ring_class_field(2), ring_class_field(1), -7));
    CHECK(field_equal(ring_class_field(1), ring_class_field(2), -7));
    CHECK_FALSE(field_equal(ring_class_field(1), ring_class_field(3), -7));

    // Q-labels never contain K.
    for (i64 c1 = 1; c1 <= 12; ++c1)
        for (i64 c2 = 1; c2 <= 12; ++c2)
            CHECK_FALSE(embeds(ring_class_field(c1), rational_rcf(c2), -15));
}

TEST_CASE("embeds is a preorder")
{
    for (i64 dk : {-7, -15}) {
        std::vector<FieldLabel> labels;
        for (i64 c = 1; c <= 20; ++c) {
            labels.push_back(rational_rcf(c));
            labels.push_back(ring_class_field(c));
        }
        for (const auto& f : labels)
            REQUIRE(embeds(f, f, dk));
        for (const auto& f : labels)
            for (const auto& g : labels)
                for (const auto& h : labels)
                    if (embeds(f, g, dk) && embeds(g, h, dk))
                        REQUIRE(embeds(f, h, dk));
    }
}

TEST_CASE("composita")
{
    auto c = compositum(rational_rcf(4), rational_rcf(6), -7);
    CHECK(c.label == rational_rcf(12));
    CHECK(c.copies == 1);
    c = compositum(rational_rcf(2), ring_class_field(3), -7);
    CHECK(c.label == ring_class_field(6));
    CHECK(c.copies == 1);
    c = compositum(ring_class_field(2), ring_class_field(3), -7);
    CHECK(c.label == ring_class_field(6));
    CHECK(c.copies == 2);
}

TEST_CASE("compositum degree identity over gcd meets")
{
    for (i64 dk : {-7, -11, -15, -19, -20, -24}) {
        for (i64 c1 = 1; c1 <= 50; ++c1) {
            for (i64 c2 = 1; c2 <= 50; ++c2) {
                for (int k1 = 0; k1 < 2; ++k1) {
                    for (int k2 = 0; k2 < 2; ++k2) {
                        FieldLabel f1{k1 ? FieldLabel::RingClass : FieldLabel::Rational, c1};
                        FieldLabel f2{k2 ? FieldLabel::RingClass : FieldLabel::Rational, c2};
                        auto comp = compositum(f1, f2, dk);
                        i64 meet = abs_degree(rational_rcf(gcd(c1, c2)), dk);
                        REQUIRE(abs_degree(comp.label, dk) * comp.copies * meet ==
                                abs_degree(f1, dk) * abs_degree(f2, dk));
                    }
                }
            }
        }
    }
}

TEST_CASE("join of j-invariant pairs")
{
    CHECK(join_j_pair(3, 9, true, -7) == rational_rcf(9));
    CHECK(join_j_pair(2, 3, false, -7) == ring_class_field(6));
    CHECK(join_j_pair(1, 1, true, -7) == rational_rcf(1));
}

TEST_CASE("primitive subsets")
{
    Spectrum s;
    s.add(rational_rcf(9), 1);
    s.add(ring_class_field(3), 1);
    s.add(rational_rcf(27), 1);
    s.sort();
    auto prim = primitive_subset(s, -11);
    REQUIRE(prim.size() == 2);
    CHECK(prim[0] == rational_rcf(9));
    CHECK(prim[1] == ring_class_field(3));

    Spectrum t;
    t.add(rational_rcf(3), 1);
    auto pt = primitive_subset(t, -11);
    REQUIRE(pt.size() == 1);
    CHECK(pt[0] == rational_rcf(3));

    // K(2) = K(1) for Delta_K = -7: the duplicate field keeps its least label.
    Spectrum u;
    u.add(ring_class_field(1), 1);
    u.add(ring_class_field(2), 1);
    u.add(rational_rcf(4), 1);
    u.sort();
    auto pu = primitive_subset(u, -7);
    REQUIRE(pu.size() == 2);
    CHECK(pu[0] == rational_rcf(4));
    CHECK(pu[1] == ring_class_field(1));
}

TEST_CASE("spectrum normalization collapses field-equal labels")
{
    Spectrum s;
    s.add(ring_class_field(2), 3); // = K(1) for Delta_K = -7
    Spectrum t;
    t.add(ring_class_field(1), 3);
    CHECK(normalize_spectrum(s, -7) == normalize_spectrum(t, -7));
}
