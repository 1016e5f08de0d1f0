#ifndef CMFIBER_CLASSFIELDS_HPP
#define CMFIBER_CLASSFIELDS_HPP

#include <algorithm>
#include <vector>

#include "cmfiber/quadform.hpp"

namespace cmfiber {

// Symbolic residue field relative to a fixed Delta_K: either the rational
// ring class field Q(c) or the ring class field K(c).  Labels are not
// canonicalized to minimal conductor; field equality is a separate test.
struct FieldLabel {
    enum Kind { Rational = 0, RingClass = 1 };
    Kind kind = Rational;
    i64 conductor = 1;

    bool operator==(const FieldLabel& o) const
    {
        return kind == o.kind && conductor == o.conductor;
    }
    bool operator<(const FieldLabel& o) const
    {
        if (kind != o.kind)
            return kind < o.kind;
        return conductor < o.conductor;
    }

    std::string str() const
    {
        return (kind == Rational ? "Q(" : "K(") + std::to_string(conductor) + ")";
    }
};

inline FieldLabel rational_rcf(i64 c) { return {FieldLabel::Rational, c}; }
inline FieldLabel ring_class_field(i64 c) { return {FieldLabel::RingClass, c}; }

inline void require_deep(i64 delta_k)
{
    if (delta_k >= -4)
        throw domain_error("operation requires Delta_K < -4");
}

// [F : Q]
inline i64 abs_degree(const FieldLabel& f, i64 delta_k)
{
    require_deep(delta_k);
    i64 h = class_number_via_dee(f.conductor, delta_k);
    return f.kind == FieldLabel::Rational ? h : checked_i64(chk_mul(2, h));
}

// [F : Q(f0)] for a base conductor f0 | conductor(F).
inline i64 rel_degree(const FieldLabel& f, i64 base_conductor, i64 delta_k)
{
    require_deep(delta_k);
    if (f.conductor % base_conductor != 0)
        throw usage_error("rel_degree: base conductor does not divide label conductor");
    i64 num = dee(f.conductor, delta_k);
    i64 den = dee(base_conductor, delta_k);
    if (num % den != 0)
        throw internal_error("rel_degree: dee ratio not integral");
    i64 r = num / den;
    return f.kind == FieldLabel::RingClass ? checked_i64(chk_mul(2, r)) : r;
}

// F1 embeds into F2 (as abstract number fields).
inline bool embeds(const FieldLabel& f1, const FieldLabel& f2, i64 delta_k)
{
    require_deep(delta_k);
    if (f1.kind == FieldLabel::RingClass && f2.kind == FieldLabel::Rational)
        return false; // K has no real embedding
    i64 l = checked_i64(lcm(f1.conductor, f2.conductor));
    return dee(l, delta_k) == dee(f2.conductor, delta_k);
}

inline bool field_equal(const FieldLabel& f1, const FieldLabel& f2, i64 delta_k)
{
    return f1.kind == f2.kind &&
           dee(checked_i64(lcm(f1.conductor, f2.conductor)), delta_k) ==
               dee(f1.conductor, delta_k) &&
           dee(f1.conductor, delta_k) == dee(f2.conductor, delta_k);
}

// Smallest-conductor label generating the same field; divisors of c with
// full dee value are closed under gcd, so the minimum is well defined.
inline FieldLabel canonical_label(const FieldLabel& f, i64 delta_k)
{
    require_deep(delta_k);
    i64 c = f.conductor;
    i64 target = dee(c, delta_k);
    for (auto [p, e] : factorize(c)) {
        while (c % p == 0 && dee(c / p, delta_k) == target)
            c /= p;
    }
    return {f.kind, c};
}

struct Compositum {
    FieldLabel label;
    i64 copies; // K (x) K over a rational base splits into two copies
};

// Composita per the tensor rules: Q*Q -> Q(lcm), Q*K -> K(lcm),
// K (x) K -> K(lcm) x K(lcm).
inline Compositum compositum(const FieldLabel& f1, const FieldLabel& f2, i64 delta_k)
{
    require_deep(delta_k);
    i64 l = checked_i64(lcm(f1.conductor, f2.conductor));
    if (f1.kind == FieldLabel::Rational && f2.kind == FieldLabel::Rational)
        return {rational_rcf(l), 1};
    if (f1.kind == FieldLabel::RingClass && f2.kind == FieldLabel::RingClass)
        return {ring_class_field(l), 2};
    return {ring_class_field(l), 1};
}

// Q(j, j') for CM j-invariants of conductors f1, f2.
inline FieldLabel join_j_pair(i64 f1, i64 f2, bool coreal, i64 delta_k)
{
    require_deep(delta_k);
    i64 l = checked_i64(lcm(f1, f2));
    return coreal ? rational_rcf(l) : ring_class_field(l);
}

// Canonical multiset of (label, multiplicity) describing a fiber.
struct Spectrum {
    std::vector<std::pair<FieldLabel, i64>> entries; // sorted by label

    void add(const FieldLabel& f, i64 mult)
    {
        if (mult == 0)
            return;
        if (mult < 0)
            throw internal_error("negative multiplicity");
        for (auto& [lab, m] : entries) {
            if (lab == f) {
                m += mult;
                return;
            }
        }
        entries.emplace_back(f, mult);
    }

    void sort()
    {
        std::sort(entries.begin(), entries.end(),
                  [](const auto& x, const auto& y) { return x.first < y.first; });
    }

    bool operator==(const Spectrum& o) const { return entries == o.entries; }

    std::string str() const
    {
        std::string s = "{";
        for (size_t i = 0; i < entries.size(); ++i) {
            if (i)
                s += ", ";
            s += entries[i].first.str() + ":" + std::to_string(entries[i].second);
        }
        return s + "}";
    }
};

// Rewrites every label to its minimal-conductor representative and merges;
// used where spectra are compared up to field equality.
inline Spectrum normalize_spectrum(const Spectrum& s, i64 delta_k)
{
    Spectrum out;
    for (const auto& [lab, m] : s.entries)
        out.add(canonical_label(lab, delta_k), m);
    out.sort();
    return out;
}

// Minimal elements of the label set under proper embedding; field-equal
// labels are represented once, by the least label.
inline std::vector<FieldLabel> primitive_subset(const Spectrum& s, i64 delta_k)
{
    std::vector<FieldLabel> labels;
    for (const auto& [lab, m] : s.entries)
        labels.push_back(lab);
    std::sort(labels.begin(), labels.end());
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());

    std::vector<FieldLabel> out;
    for (const auto& f : labels) {
        bool keep = true;
        for (const auto& g : labels) {
            if (g == f)
                continue;
            if (embeds(g, f, delta_k)) {
                if (!embeds(f, g, delta_k)) {
                    keep = false; // strictly smaller field inside f
                    break;
                }
                // same field: keep only the least label of the group
                if (g < f) {
                    keep = false;
                    break;
                }
            }
        }
        if (keep)
            out.push_back(f);
    }
    return out;
}

} // namespace cmfiber

#endif
