#ifndef CMFIBER_VOLCANO_HPP
#define CMFIBER_VOLCANO_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "cmfiber/classfields.hpp"
#include "cmfiber/quadform.hpp"

namespace cmfiber {

struct VolcanoParams {
    i64 delta_k; // fundamental
    i64 ell;     // prime
    i64 f0 = 1;  // prime-to-ell conductor
    int depth = 0;
};

// Truncated l-isogeny volcano G_{K,l,f0}.  Vertices at level L are the
// reduced forms of discriminant l^(2L) f0^2 Delta_K; conjugation acts by
// form inversion, so "real" = ambiguous.  Horizontal edges live only at
// the surface.
class Volcano {
public:
    struct Vertex {
        QuadForm form;
        std::int32_t parent = -1; // ascending edge target (-1 at surface)
        std::int32_t child_begin = 0, child_end = 0;
        std::int32_t conj = -1; // vertex of the inverse class
        bool real = false;
    };

    enum StepKind : std::int8_t {
        StepAsc = 0,
        StepDesc = 1,
        StepHorP = 2,    // split: prime p; ramified: the unique prime
        StepHorPbar = 3, // split: conjugate prime
    };

    struct Step {
        std::int32_t to;
        StepKind kind;
    };

    using Path = std::vector<Step>; // edge sequence; start vertex kept separately

    VolcanoParams params;
    std::vector<Vertex> vertices;
    std::vector<std::pair<std::int32_t, std::int32_t>> level_range; // [begin,end) per level
    // Surface horizontal targets per surface vertex: [p, pbar]; -1 if absent.
    std::vector<std::array<std::int32_t, 2>> hor_target;
    int chi = 0; // (Delta_K / ell)

    int level_of(std::int32_t v) const
    {
        for (int L = 0; L < static_cast<int>(level_range.size()); ++L)
            if (v < level_range[L].second)
                return L;
        throw internal_error("vertex out of range");
    }

    i64 level_disc(int L) const
    {
        return checked_i64(chk_mul(chk_mul(ipow(params.ell, 2 * L),
                                           chk_mul(params.f0, params.f0)),
                                   params.delta_k));
    }

    i64 level_size(int L) const { return level_range[L].second - level_range[L].first; }

    std::int32_t find_vertex(int L, const QuadForm& f) const
    {
        auto [b, e] = level_range[L];
        auto it = std::lower_bound(sorted_ids.begin() + b, sorted_ids.begin() + e, f,
                                   [&](std::int32_t id, const QuadForm& g) {
                                       return vertices[id].form < g;
                                   });
        if (it == sorted_ids.begin() + e || !(vertices[*it].form == f))
            return -1;
        return *it;
    }

    std::int32_t principal_vertex(int L) const
    {
        i64 d = level_disc(L);
        std::int32_t v = find_vertex(L, principal_form(d));
        if (v < 0)
            throw internal_error("principal vertex missing");
        return v;
    }

    // Edge reality: vertical edges are real iff the deeper endpoint is real;
    // ramified horizontals iff the endpoint is real; split horizontals never.
    bool step_real(std::int32_t from, const Step& s) const
    {
        switch (s.kind) {
        case StepAsc:
            return vertices[from].real;
        case StepDesc:
            return vertices[s.to].real;
        case StepHorP:
        case StepHorPbar:
            return chi == 0 && vertices[from].real;
        }
        throw internal_error("bad step kind");
    }

    std::vector<Step> steps_from(std::int32_t v) const
    {
        std::vector<Step> out;
        const Vertex& vx = vertices[v];
        if (vx.parent >= 0)
            out.push_back({vx.parent, StepAsc});
        if (level_of(v) == 0) {
            if (hor_target[v][0] >= 0)
                out.push_back({hor_target[v][0], StepHorP});
            if (hor_target[v][1] >= 0)
                out.push_back({hor_target[v][1], StepHorPbar});
        }
        for (std::int32_t c = vx.child_begin; c < vx.child_end; ++c)
            out.push_back({c, StepDesc});
        return out;
    }

    // Nonbacktracking successor test: the inverse of an ascent is the
    // descent back, of a p-edge the pbar-edge, and ramified horizontals
    // are self-inverse.
    static bool backtracks(std::int32_t prev_from, StepKind prev, int chi_, const Step& next)
    {
        switch (prev) {
        case StepAsc:
            return next.kind == StepDesc && next.to == prev_from;
        case StepDesc:
            return next.kind == StepAsc;
        case StepHorP:
            return chi_ == 0 ? (next.kind == StepHorP) : (next.kind == StepHorPbar);
        case StepHorPbar:
            return next.kind == StepHorP;
        }
        return false;
    }

    std::vector<std::int32_t> sorted_ids; // per-level, sorted by form
};

namespace detail {

// Unimodular change of variables making the leading coefficient coprime
// to ell.  A primitive form represents integers coprime to any modulus.
inline QuadForm coprime_representative(const QuadForm& f, i64 ell, int bound = 16)
{
    auto value = [&](i128 x, i128 y) {
        return chk_add(chk_add(chk_mul(f.a, chk_mul(x, x)), chk_mul(f.b, chk_mul(x, y))),
                       chk_mul(f.c, chk_mul(y, y)));
    };
    for (int B = 1; B <= bound; B *= 2) {
        for (i64 x = -B; x <= B; ++x) {
            for (i64 y = -B; y <= B; ++y) {
                if (gcd(x, y) != 1)
                    continue;
                i128 A = value(x, y);
                if (fmod(A, ell) == 0)
                    continue;
                // Extend (x,y) to a unimodular matrix [[x, r],[y, s]].
                i128 r, s;
                xgcd(x, y, s, r);
                r = -r; // x*s - y*r = 1
                i128 B2 = chk_add(chk_mul(2, chk_mul(f.a, chk_mul(x, r))),
                                  chk_add(chk_mul(f.b, chk_add(chk_mul(x, s), chk_mul(y, r))),
                                          chk_mul(2, chk_mul(f.c, chk_mul(y, s)))));
                i128 C = value(r, s);
                QuadForm g{A, B2, C};
                if (g.disc() != f.disc())
                    throw internal_error("coprime representative: disc mismatch");
                return g;
            }
        }
    }
    throw internal_error("no representative coprime to ell found");
}

} // namespace detail

// Pushforward of a class at conductor l^L f0 to conductor l^(L-1) f0,
// computed by an integer HNF of the ideal I*O' rather than by a lifted
// formula; norm preservation is asserted.
inline QuadForm pushforward(const QuadForm& f, i64 ell)
{
    i128 D = f.disc();
    if (fmod(D, chk_mul(ell, ell)) != 0)
        throw usage_error("pushforward: level must be >= 1");
    i64 Dp = checked_i64(D / (static_cast<i128>(ell) * ell));
    if (!is_valid_discriminant(Dp))
        throw usage_error("pushforward: shallower discriminant invalid");

    QuadForm g = detail::coprime_representative(f, ell);
    // I = Z*A + Z*((-B - l*D')/2 + l*w'), w' = (D' + sqrt(D'))/2.
    i128 A = g.a;
    i128 c0 = (-g.b - chk_mul(ell, static_cast<i128>(Dp))) / 2;
    if (fmod(-g.b - chk_mul(ell, static_cast<i128>(Dp)), 2) != 0)
        throw internal_error("pushforward: parity failure");

    // Generators of I*O' in basis (1, w'):
    //   (A, 0), (0, A), (c0, l), (-l*(D'^2-D')/4, c0 + l*D')
    i128 ntau = (chk_mul(static_cast<i128>(Dp), static_cast<i128>(Dp)) - Dp) / 4;
    i128 g4u = -chk_mul(ell, ntau);
    i128 g4v = chk_add(c0, chk_mul(ell, static_cast<i128>(Dp)));

    // Second coordinate gcd is gcd(A, l, g4v) = 1 since gcd(A, l) = 1.
    i128 u, v;
    i128 m = xgcd(A, ell, u, v);
    if (m != 1)
        throw internal_error("pushforward: representative not coprime to ell");
    // Row with second coordinate 1: v*(c0, l) + u*(0, A).  The remaining
    // generators reduce to second coordinate 0 and only their gcd with A
    // matters, so all products can be taken mod A.
    i128 t1 = fmod(chk_mul(fmod(v, A), fmod(c0, A)), A);
    i128 s = A;
    s = gcd(s, fmod(chk_sub(fmod(c0, A), chk_mul(ell, t1)), A));
    s = gcd(s, fmod(chk_sub(fmod(g4u, A), chk_mul(fmod(g4v, A), t1)), A));
    if (s != A)
        throw internal_error("pushforward: norm not preserved");
    i128 t = fmod(t1, s);
    // Ideal [s, t + w'] corresponds to the form (s, -(2t + D'), *).
    i128 Bp = -(chk_add(chk_mul(2, t), static_cast<i128>(Dp)));
    i128 num = chk_sub(chk_mul(Bp, Bp), static_cast<i128>(Dp));
    if (num % (4 * s) != 0)
        throw internal_error("pushforward: c not integral");
    return reduce_form(s, Bp, num / (4 * s));
}

inline Volcano build_volcano(const VolcanoParams& params, i64 vertex_cap = 6000000)
{
    if (!is_prime(params.ell))
        throw usage_error("ell must be prime");
    if (params.f0 < 1 || params.f0 % params.ell == 0)
        throw domain_error("f0 must be positive and prime to ell");
    if (!is_fundamental(params.delta_k))
        throw domain_error("delta_k must be a fundamental discriminant");
    i64 d0 = checked_i64(chk_mul(chk_mul(params.f0, params.f0), params.delta_k));
    if (d0 >= -4)
        throw domain_error("f0^2 Delta_K must be < -4");

    Volcano V;
    V.params = params;
    V.chi = kronecker(params.delta_k, params.ell);

    // Resource estimate before building.
    {
        i128 total = 0, n = class_number(d0);
        for (int L = 0; L <= params.depth; ++L) {
            total = chk_add(total, n);
            n = chk_mul(n, L == 0 ? params.ell - V.chi : params.ell);
        }
        if (total > vertex_cap)
            throw resource_error("volcano exceeds vertex cap (" + to_string(total) + ")");
    }

    // Surface.
    ClassGroup cg = class_group(d0);
    for (const auto& f : cg.classes)
        V.vertices.push_back({f, -1, 0, 0, -1, f.is_ambiguous()});
    V.level_range.emplace_back(0, static_cast<std::int32_t>(V.vertices.size()));

    // Deeper levels by lifting: with gcd(A, l) = 1, the forms of
    // discriminant l^2 D above (A,B,C) are (A, Bl, Cl^2) and
    // (Al^2, l(2At+B), At^2+Bt+C) for the t with l not dividing the last
    // coefficient.
    for (int L = 0; L < params.depth; ++L) {
        auto [lb, le] = V.level_range[L];
        std::int32_t next_begin = le;
        for (std::int32_t vid = lb; vid < le; ++vid) {
            QuadForm g = detail::coprime_representative(V.vertices[vid].form, params.ell);
            std::vector<QuadForm> kids;
            i64 ell = params.ell;
            kids.push_back(reduce_form(g.a, chk_mul(g.b, ell), chk_mul(g.c, chk_mul(ell, ell))));
            for (i64 t = 0; t < ell; ++t) {
                i128 tail = chk_add(chk_add(chk_mul(g.a, chk_mul(t, t)), chk_mul(g.b, t)), g.c);
                if (fmod(tail, ell) == 0)
                    continue;
                kids.push_back(reduce_form(chk_mul(g.a, chk_mul(ell, ell)),
                                           chk_mul(ell, chk_add(chk_mul(2, chk_mul(g.a, t)), g.b)),
                                           tail));
            }
            std::sort(kids.begin(), kids.end());
            if (std::adjacent_find(kids.begin(), kids.end()) != kids.end())
                throw internal_error("duplicate child below surface");
            V.vertices[vid].child_begin = static_cast<std::int32_t>(V.vertices.size());
            for (const auto& k : kids)
                V.vertices.push_back({k, vid, 0, 0, -1, k.is_ambiguous()});
            V.vertices[vid].child_end = static_cast<std::int32_t>(V.vertices.size());
        }
        V.level_range.emplace_back(next_begin, static_cast<std::int32_t>(V.vertices.size()));
        // Level size must match the relative class number ratio.
        i64 expect = checked_i64(chk_mul(static_cast<i64>(le - lb),
                                         L == 0 ? params.ell - V.chi : params.ell));
        if (V.level_size(L + 1) != expect)
            throw internal_error("level size mismatch against class number formula");
    }

    // Per-level sorted index and conjugation map.
    V.sorted_ids.resize(V.vertices.size());
    for (size_t i = 0; i < V.vertices.size(); ++i)
        V.sorted_ids[i] = static_cast<std::int32_t>(i);
    for (auto [b, e] : V.level_range)
        std::sort(V.sorted_ids.begin() + b, V.sorted_ids.begin() + e,
                  [&](std::int32_t x, std::int32_t y) {
                      return V.vertices[x].form < V.vertices[y].form;
                  });
    for (int L = 0; L < static_cast<int>(V.level_range.size()); ++L) {
        auto [b, e] = V.level_range[L];
        for (std::int32_t id = b; id < e; ++id) {
            std::int32_t cj = V.find_vertex(L, inverse(V.vertices[id].form));
            if (cj < 0)
                throw internal_error("conjugate class missing");
            V.vertices[id].conj = cj;
        }
    }

    // Surface horizontal edges from the class of the prime above ell.
    auto [sb, se] = V.level_range[0];
    V.hor_target.assign(V.vertices.size() ? se : 0, {-1, -1});
    if (V.chi != -1) {
        i64 b0 = -1;
        for (i64 b = 0; b < 2 * params.ell; ++b) {
            if (fmod(chk_sub(chk_mul(b, b), d0), 4 * params.ell) == 0) {
                b0 = b;
                break;
            }
        }
        if (b0 < 0)
            throw internal_error("no prime form above ell in the non-inert case");
        i128 pc = (chk_mul(static_cast<i128>(b0), b0) - d0) / (4 * params.ell);
        QuadForm P = reduce_form(params.ell, b0, pc);
        QuadForm Pinv = inverse(P);
        for (std::int32_t v = sb; v < se; ++v) {
            V.hor_target[v][0] = V.find_vertex(0, compose(V.vertices[v].form, Pinv));
            if (V.chi == 1)
                V.hor_target[v][1] = V.find_vertex(0, compose(V.vertices[v].form, P));
            if (V.hor_target[v][0] < 0)
                throw internal_error("horizontal target missing");
        }
    }

    // Independent validation: ascending edges agree with the HNF
    // pushforward.  Exhaustive on small graphs, sampled on large ones
    // (the level-size formula check above is always exhaustive).
    std::int32_t stride = V.vertices.size() <= 20000 ? 1 : 17;
    for (int L = 1; L < static_cast<int>(V.level_range.size()); ++L) {
        auto [b, e] = V.level_range[L];
        for (std::int32_t id = b; id < e; id += stride) {
            QuadForm up = pushforward(V.vertices[id].form, params.ell);
            if (!(up == V.vertices[V.vertices[id].parent].form))
                throw internal_error("lifted child disagrees with pushforward");
        }
    }
    return V;
}

// All nonbacktracking paths of length `len` starting at v0.
inline std::vector<std::pair<std::int32_t, Volcano::Path>>
enumerate_paths(const Volcano& V, std::int32_t v0, int len)
{
    if (V.level_of(v0) + len > V.params.depth)
        throw usage_error("volcano depth insufficient for requested path length");
    std::vector<std::pair<std::int32_t, Volcano::Path>> out;
    Volcano::Path cur;
    auto rec = [&](auto&& self, std::int32_t at, int remaining) -> void {
        if (remaining == 0) {
            out.emplace_back(v0, cur);
            return;
        }
        for (const auto& s : V.steps_from(at)) {
            if (!cur.empty()) {
                std::int32_t prev_from = cur.size() >= 2 ? cur[cur.size() - 2].to : v0;
                if (Volcano::backtracks(prev_from, cur.back().kind, V.chi, s))
                    continue;
            }
            cur.push_back(s);
            self(self, s.to, remaining - 1);
            cur.pop_back();
        }
    };
    rec(rec, v0, len);
    return out;
}

struct PathClass {
    std::int32_t start;
    Volcano::Path representative;
    int epsilon;      // 1 if the non-descending core is real, else 2
    i64 orbit_degree; // d_phi = [Q(phi) : Q(f)]
    FieldLabel field; // absolute conductor
};

namespace detail {

// Split P into P1 + trailing descent below the start level; returns the
// index where the pure descent begins.
inline size_t descent_cut(const Volcano& V, std::int32_t start, const Volcano::Path& p)
{
    int L = V.level_of(start);
    size_t cut = p.size();
    while (cut > 0) {
        const auto& s = p[cut - 1];
        if (s.kind != Volcano::StepDesc)
            break;
        if (V.level_of(s.to) - 1 < L) // edge starts above the start level
            break;
        --cut;
    }
    return cut;
}

inline std::vector<i64> serialize_prefix(const Volcano& V, std::int32_t start,
                                         const Volcano::Path& p, size_t cut, bool conjugate)
{
    std::vector<i64> s;
    std::int32_t at = conjugate ? V.vertices[start].conj : start;
    s.push_back(at);
    for (size_t i = 0; i < cut; ++i) {
        Volcano::Step st = p[i];
        if (conjugate) {
            st.to = V.vertices[st.to].conj;
            if (st.kind == Volcano::StepHorP && V.chi == 1)
                st.kind = Volcano::StepHorPbar;
            else if (st.kind == Volcano::StepHorPbar)
                st.kind = Volcano::StepHorP;
        }
        s.push_back(st.kind);
        s.push_back(st.to);
    }
    return s;
}

} // namespace detail

inline PathClass classify_path(const Volcano& V, std::int32_t start, const Volcano::Path& p)
{
    int L = V.level_of(start);
    int Lp = p.empty() ? L : V.level_of(p.back().to);
    size_t cut = detail::descent_cut(V, start, p);

    bool real = true;
    std::int32_t at = start;
    for (size_t i = 0; i < cut; ++i) {
        if (!V.step_real(at, p[i]))
            real = false;
        at = p[i].to;
    }
    int eps = real ? 1 : 2;

    i64 f = checked_i64(chk_mul(ipow(V.params.ell, L), V.params.f0));
    i64 cond = checked_i64(chk_mul(ipow(V.params.ell, std::max(L, Lp)), V.params.f0));
    FieldLabel lab = eps == 2 ? ring_class_field(cond) : rational_rcf(cond);
    i64 d = rel_degree(lab, f, V.params.delta_k);
    return {start, p, eps, d, lab};
}

// Full fiber of X_0(l^a) over J_Delta computed by path enumeration and
// closed-point grouping (P1 up to global conjugation, descent length).
// The overload taking a prebuilt volcano lets callers share one graph
// across many (L, a) queries.
inline Spectrum spectrum_oracle_on(const Volcano& V, int L, int a)
{
    std::int32_t v0 = V.principal_vertex(L);
    i64 ell = V.params.ell;

    auto paths = enumerate_paths(V, v0, a);
    std::map<std::pair<std::vector<i64>, size_t>, Volcano::Path> groups;
    for (const auto& [start, p] : paths) {
        size_t cut = detail::descent_cut(V, start, p);
        auto s1 = detail::serialize_prefix(V, start, p, cut, false);
        auto s2 = detail::serialize_prefix(V, start, p, cut, true);
        groups.emplace(std::make_pair(std::min(s1, s2), p.size() - cut), p);
    }

    Spectrum spec;
    i128 degree_sum = 0;
    for (const auto& [key, rep] : groups) {
        PathClass pc = classify_path(V, v0, rep);
        spec.add(pc.field, 1);
        degree_sum = chk_add(degree_sum, pc.orbit_degree);
    }
    spec.sort();
    if (degree_sum != psi_degree(ipow(ell, a)))
        throw internal_error("spectrum_oracle: degree sum != psi(l^a)");
    return spec;
}

inline Spectrum spectrum_oracle(i64 delta, i64 ell, int a, i64 vertex_cap = 6000000)
{
    Discriminant d = split_discriminant(delta);
    if (d.fundamental >= -4)
        throw domain_error("spectrum_oracle requires Delta_K < -4");
    int L = d.level_at(ell);
    Volcano V = build_volcano({d.fundamental, ell, d.prime_to_part(ell), L + a}, vertex_cap);
    return spectrum_oracle_on(V, L, a);
}

} // namespace cmfiber

#endif
