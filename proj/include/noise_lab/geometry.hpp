#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "boolalg.hpp"
#include "errors.hpp"
#include "interval_set.hpp"
#include "regopen.hpp"
#include "spectrum.hpp"

namespace noise_lab {

/// Sample points t_0 < ... < t_{n-1} in (0,1), none dyadic. Cell i is
/// attached to t_i, and h(a) = {i : t_i ∈ Int(a)} is a Boolean homomorphism
/// from the dyadic-endpoint regular open sets to B because no t_i can sit
/// on the boundary of such a set.
class Embedding {
public:
    Embedding(std::size_t n_cells, std::vector<Rational> points) : points_(std::move(points)) {
        if (points_.size() != n_cells) {
            throw InputError("embedding has " + std::to_string(points_.size()) + " sample points for " +
                             std::to_string(n_cells) + " cells");
        }
        for (std::size_t i = 0; i < points_.size(); ++i) {
            const Rational& t = points_[i];
            const std::string where = "sample_points[" + std::to_string(i) + "]";
            if (t <= 0 || t >= 1) throw InputError(where + ": " + to_string(t) + " not in (0,1)");
            if (is_dyadic(t)) throw InputError(where + ": sample point on a potential boundary (" + to_string(t) + " is dyadic)");
            if (i > 0 && !(points_[i - 1] < t)) throw InputError(where + ": sample points must be strictly increasing");
        }
    }

    std::size_t n_cells() const { return points_.size(); }
    const std::vector<Rational>& points() const { return points_; }

    BoolElem h(const RegOpen& a) const {
        const IntervalSet in = a.interior();
        std::uint64_t bits = 0;
        for (std::size_t i = 0; i < points_.size(); ++i) {
            if (in.contains(points_[i])) bits |= std::uint64_t{1} << i;
        }
        return {n_cells(), bits};
    }

    /// F(M) = {t_i : i ∈ M}.
    std::vector<Rational> spectral_points(std::uint64_t atom) const {
        std::vector<Rational> pts;
        for (std::size_t i = 0; i < points_.size(); ++i) {
            if ((atom >> i) & 1U) pts.push_back(points_[i]);
        }
        return pts;
    }

private:
    std::vector<Rational> points_;
};

inline Embedding build_embedding(const NoiseModel& model, std::vector<Rational> sample_points) {
    return {model.n_cells(), std::move(sample_points)};
}

// ---------------------------------------------------------------------------
// Dyadic base.

struct BaseElement {
    RegOpen set;
    std::size_t depth = 0;
};

/// Base element (j/2^d, (j+2)/2^d) ∩ [0,1], j = -1 .. 2^d - 1.
inline RegOpen dyadic_base_element(std::size_t depth, std::int64_t j) {
    const auto cells = static_cast<std::int64_t>(std::uint64_t{1} << depth);
    Rational lo(std::max<std::int64_t>(j, 0), cells), hi(std::min<std::int64_t>(j + 2, cells), cells);
    lo.canonicalize();
    hi.canonicalize();
    return make_regopen({{lo, hi}});
}

/// Depth-ordered enumeration of the dyadic base up to `max_depth`
/// (duplicates removed). At depth d the elements have length 2^{1-d}.
inline std::vector<BaseElement> dyadic_base(std::size_t max_depth) {
    if (max_depth > 40) throw InputError("base depth limited to 40");
    std::vector<BaseElement> out;
    std::vector<RegOpen> seen;
    for (std::size_t d = 0; d <= max_depth; ++d) {
        const auto cells = static_cast<std::int64_t>(std::uint64_t{1} << d);
        for (std::int64_t j = -1; j < cells; ++j) {
            RegOpen a = dyadic_base_element(d, j);
            if (std::find(seen.end() - std::min<std::ptrdiff_t>(seen.size(), 4), seen.end(), a) != seen.end()) continue;
            seen.push_back(a);
            out.push_back({std::move(a), d});
        }
    }
    return out;
}

/// All regular open sets that are unions of depth-`depth` dyadic cells.
inline std::vector<RegOpen> dyadic_family(std::size_t depth) {
    if (depth > 4) throw InputError("exhaustive dyadic family limited to depth 4");
    const std::uint64_t count = std::uint64_t{1} << (std::uint64_t{1} << depth);
    std::vector<RegOpen> out;
    out.reserve(count);
    for (std::uint64_t m = 0; m < count; ++m) out.push_back(dyadic_cells(depth, m));
    return out;
}

struct HomomorphismReport {
    std::size_t pairs = 0;
    std::vector<std::string> violations;
    bool passed() const { return violations.empty(); }
};

/// h(a∧b) = h(a)∧h(b), h(a∨b) = h(a)∨h(b), h(a′) = h(a)′ over all pairs of
/// the exhaustive family of depth `depth` plus `random_pairs` random dyadic pairs.
inline HomomorphismReport verify_homomorphism(const Embedding& emb, std::size_t depth, std::size_t random_pairs,
                                              std::uint64_t seed) {
    HomomorphismReport rep;
    auto check = [&](const RegOpen& a, const RegOpen& b) {
        ++rep.pairs;
        const BoolElem ha = emb.h(a), hb = emb.h(b);
        if (emb.h(reg_meet(a, b)) != (ha & hb) || emb.h(reg_join(a, b)) != (ha | hb) ||
            emb.h(reg_complement(a)) != ~ha) {
            if (rep.violations.size() < 8) rep.violations.push_back("a=" + a.to_string() + ", b=" + b.to_string());
        }
    };
    const auto family = dyadic_family(depth);
    for (const auto& a : family) {
        for (const auto& b : family) check(a, b);
    }
    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < random_pairs; ++i) {
        std::uniform_int_distribution<std::size_t> d(1, 6);
        const std::size_t da = d(rng), db = d(rng);
        auto mask = [&](std::size_t dd) {
            return dd == 6 ? rng() : rng() & ((std::uint64_t{1} << (std::uint64_t{1} << dd)) - 1);
        };
        check(dyadic_cells(da, mask(da)), dyadic_cells(db, mask(db)));
    }
    return rep;
}

// ---------------------------------------------------------------------------
// The spectral-set map F.

/// X ∖ ⋃ {Int(a) : a in `base`, M ⊆ h(a′)}.
inline IntervalSet spectral_set_by_union(const Embedding& emb, std::uint64_t atom, const std::vector<BaseElement>& base) {
    IntervalSet covered;
    for (const auto& b : base) {
        const BoolElem outside = emb.h(reg_complement(b.set));
        if ((atom & ~outside.bits()) == 0) covered = covered.unite(b.set.interior());
    }
    return covered.complement();
}

struct SpectralSetMap {
    std::vector<Rational> closed_form;   // F(M)
    IntervalSet approximant;             // F_D(M)
    bool contains_closed_form = false;   // F(M) ⊆ F_D(M)
    Rational hausdorff;                  // sup_{p ∈ F_D} dist(p, F(M)), exact
    bool hausdorff_ok = false;           // ≤ 2^{1-D}
    bool order_independent = false;      // reversed base order yields the same F_D
    /// First depth at which F_d has one component per point of F(M), each
    /// holding exactly one point.
    std::optional<std::size_t> stabilization_depth;
};

namespace detail {

inline Rational distance_to(const Rational& p, const std::vector<Rational>& pts) {
    Rational best = -1;
    for (const auto& t : pts) {
        Rational d = abs(p - t);
        if (best < 0 || d < best) best = d;
    }
    return best;
}

inline Rational hausdorff_excess(const IntervalSet& set, const std::vector<Rational>& pts) {
    Rational worst = 0;
    if (pts.empty()) return worst;
    for (const auto& comp : set.components()) {
        std::vector<Rational> candidates{comp.lo, comp.hi};
        for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
            Rational mid = (pts[i] + pts[i + 1]) / 2;
            if (mid > comp.lo && mid < comp.hi) candidates.push_back(mid);
        }
        for (const auto& c : candidates) {
            Rational d = distance_to(c, pts);
            if (d > worst) worst = d;
        }
    }
    return worst;
}

inline bool separates(const IntervalSet& set, const std::vector<Rational>& pts) {
    if (set.components().size() != pts.size()) return false;
    for (const auto& comp : set.components()) {
        std::size_t inside = 0;
        for (const auto& t : pts) inside += comp.contains(t);
        if (inside != 1) return false;
    }
    return true;
}

} // namespace detail

inline SpectralSetMap spectral_set_map(const Embedding& emb, std::uint64_t atom, std::size_t depth) {
    SpectralSetMap out;
    out.closed_form = emb.spectral_points(atom);
    const auto base = dyadic_base(depth);
    out.approximant = spectral_set_by_union(emb, atom, base);
    auto reversed = base;
    std::reverse(reversed.begin(), reversed.end());
    out.order_independent = spectral_set_by_union(emb, atom, reversed) == out.approximant;
    out.contains_closed_form = std::all_of(out.closed_form.begin(), out.closed_form.end(),
                                           [&](const Rational& t) { return out.approximant.contains(t); });
    if (out.closed_form.empty()) {
        out.hausdorff = 0;
        out.hausdorff_ok = out.approximant.empty();
    } else {
        out.hausdorff = detail::hausdorff_excess(out.approximant, out.closed_form);
        Rational bound(1, static_cast<unsigned long>(std::uint64_t{1} << depth));
        bound *= 2;
        out.hausdorff_ok = out.hausdorff <= bound;
    }
    // Depth-by-depth growth of the covered union.
    IntervalSet covered;
    std::size_t i = 0;
    for (std::size_t d = 0; d <= depth; ++d) {
        for (; i < base.size() && base[i].depth == d; ++i) {
            const BoolElem outside = emb.h(reg_complement(base[i].set));
            if ((atom & ~outside.bits()) == 0) covered = covered.unite(base[i].set.interior());
        }
        if (detail::separates(covered.complement(), out.closed_form)) {
            out.stabilization_depth = d;
            break;
        }
    }
    return out;
}

/// S_{h(a)} = {M : F(M) ⊆ Cl(a)}, exactly.
inline bool verify_closure_identity(const Embedding& emb, const SpectralSpace& space, const RegOpen& a) {
    if (!a.all_endpoints_dyadic()) throw InputError("verify_closure_identity needs a dyadic-endpoint element, got " + a.to_string());
    const SpectralSet lhs = spectral_set(space, emb.h(a));
    const IntervalSet cl = a.closure();
    SpectralSet rhs;
    for (std::size_t s = 0; s < space.atom_count(); ++s) {
        const auto pts = emb.spectral_points(space.atom(s));
        if (std::all_of(pts.begin(), pts.end(), [&](const Rational& t) { return cl.contains(t); })) {
            rhs.members.push_back(s);
        }
    }
    return lhs == rhs;
}

// ---------------------------------------------------------------------------
// Increasing chains, inner approximation, boundaries.

struct MonotoneLimitReport {
    BoolElem supremum;
    bool sup_is_one = false;
    bool every_atom_covered = false;
    std::optional<std::uint64_t> uncovered_atom;
    bool compact = true;  // F(M) is finite
    bool equivalent() const { return sup_is_one == every_atom_covered; }
};

inline MonotoneLimitReport monotone_limit_check(const Embedding& emb, const SpectralSpace& space,
                                                const std::vector<RegOpen>& chain) {
    if (chain.empty()) throw InputError("empty chain");
    for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
        if (reg_meet(chain[i], chain[i + 1]) != chain[i]) {
            throw InputError("chain not increasing at position " + std::to_string(i));
        }
    }
    MonotoneLimitReport rep;
    rep.supremum = BoolElem::zero(emb.n_cells());
    for (const auto& a : chain) rep.supremum = rep.supremum | emb.h(a);
    rep.sup_is_one = rep.supremum.is_one();
    rep.every_atom_covered = true;
    for (std::size_t s = 0; s < space.atom_count(); ++s) {
        const auto pts = emb.spectral_points(space.atom(s));
        bool covered = false;
        for (const auto& a : chain) {
            const IntervalSet cl = a.closure();
            if (std::all_of(pts.begin(), pts.end(), [&](const Rational& t) { return cl.contains(t); })) {
                covered = true;
                break;
            }
        }
        if (!covered) {
            rep.every_atom_covered = false;
            rep.uncovered_atom = space.atom(s);
            break;
        }
    }
    return rep;
}

/// a_n = [0, 1 − 2^{-n}), n = 1..count.
inline std::vector<RegOpen> left_exhausting_chain(std::size_t count) {
    std::vector<RegOpen> chain;
    for (std::size_t k = 1; k <= count; ++k) {
        Rational hi(1, static_cast<unsigned long>(std::uint64_t{1} << k));
        hi = 1 - hi;
        chain.push_back(make_regopen({{Rational(0), hi}}));
    }
    return chain;
}

struct InnerApprox {
    BoolElem value;        // sup{h(a) : a dyadic base element, Cl(a) ⊆ Int(r)}
    BoolElem closed_form;  // {i : t_i ∈ Int(r)}
    std::size_t depth_reached = 0;
    bool agrees() const { return value == closed_form; }
};

/// h_-(r) for arbitrary rational r. Base elements around each sample point
/// are tried depth by depth until the supremum reaches {i : t_i ∈ Int(r)}.
inline InnerApprox inner_approx(const Embedding& emb, const RegOpen& r, std::size_t max_depth = 40) {
    InnerApprox out;
    const std::size_t n = emb.n_cells();
    const IntervalSet in = r.interior();
    out.value = BoolElem::zero(n);
    out.closed_form = BoolElem::zero(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (in.contains(emb.points()[i])) out.closed_form = out.closed_form | BoolElem::singleton(n, i);
    }
    for (std::size_t d = 0; d <= max_depth && out.value != out.closed_form; ++d) {
        const auto cells = static_cast<std::int64_t>(std::uint64_t{1} << d);
        for (const Rational& t : emb.points()) {
            mpz_class cell_index = t.get_num() * cells / t.get_den();
            const std::int64_t j = cell_index.get_si();
            for (std::int64_t start : {j - 1, j}) {
                const RegOpen a = dyadic_base_element(d, start);
                if (in.includes(a.closure())) out.value = out.value | emb.h(a);
            }
        }
        out.depth_reached = d;
    }
    return out;
}

struct BoundaryReport {
    BoolElem inner;             // h_-(r)
    BoolElem inner_complement;  // h_-(r′)
    BoolElem join;
    bool join_is_one = false;
    bool no_sample_on_boundary = false;
    bool all_atoms_avoid = false;
    std::optional<std::uint64_t> witness_atom;
    std::optional<bool> complementarity;  // (h_-(r))′ = h_-(r′), when the join is 1
    bool equivalence_holds() const {
        return join_is_one == no_sample_on_boundary && no_sample_on_boundary == all_atoms_avoid &&
               complementarity.value_or(true);
    }
};

inline BoundaryReport boundary_dichotomy(const Embedding& emb, const SpectralSpace& space, const RegOpen& r) {
    BoundaryReport rep;
    const InnerApprox a = inner_approx(emb, r), b = inner_approx(emb, reg_complement(r));
    rep.inner = a.value;
    rep.inner_complement = b.value;
    rep.join = a.value | b.value;
    rep.join_is_one = rep.join.is_one();
    const IntervalSet bd = IntervalSet::points(r.boundary());
    rep.no_sample_on_boundary = std::none_of(emb.points().begin(), emb.points().end(),
                                             [&](const Rational& t) { return bd.contains(t); });
    rep.all_atoms_avoid = true;
    for (std::size_t s = 0; s < space.atom_count(); ++s) {
        if (sgn(space.canonical_measure(s)) <= 0) continue;
        const auto pts = emb.spectral_points(space.atom(s));
        if (std::any_of(pts.begin(), pts.end(), [&](const Rational& t) { return bd.contains(t); })) {
            rep.all_atoms_avoid = false;
            rep.witness_atom = space.atom(s);
            break;
        }
    }
    if (rep.join_is_one) rep.complementarity = ~rep.inner == rep.inner_complement;
    return rep;
}

struct ShrinkChainReport {
    bool closures_inside = true;  // Cl(a_n) ⊆ Int(a)
    bool increasing = true;
    bool complements_decrease = true;  // h(a′_n) decreasing
    std::optional<std::size_t> stabilizes_at;  // first n with h(a′_n) = h(a′)
    bool passed() const { return closures_inside && increasing && complements_decrease && stabilizes_at.has_value(); }
};

/// Chain a_n inside a dyadic a: every component (lo, hi) is shrunk by 2^{-n}
/// at ends away from the space edges.
inline ShrinkChainReport verify_shrink_chain(const Embedding& emb, const RegOpen& a, std::size_t max_n = 40) {
    ShrinkChainReport rep;
    const BoolElem target = emb.h(reg_complement(a));
    std::optional<RegOpen> prev;
    std::optional<BoolElem> prev_h;
    for (std::size_t k = 1; k <= max_n; ++k) {
        Rational eps(1, static_cast<unsigned long>(std::uint64_t{1} << k));
        std::vector<RegOpen::Piece> raw;
        for (const auto& [lo, hi] : a.pieces()) {
            Rational l = lo == 0 ? lo : Rational(lo + eps);
            Rational h = hi == 1 ? hi : Rational(hi - eps);
            if (l < h) raw.emplace_back(l, h);
        }
        const RegOpen an = make_regopen(std::move(raw));
        if (!a.interior().includes(an.closure())) rep.closures_inside = false;
        if (prev && reg_meet(*prev, an) != *prev) rep.increasing = false;
        const BoolElem hc = emb.h(reg_complement(an));
        if (prev_h && !hc.is_subset_of(*prev_h)) rep.complements_decrease = false;
        if (hc == target && !rep.stabilizes_at) rep.stabilizes_at = k;
        prev = an;
        prev_h = hc;
    }
    return rep;
}

} // namespace noise_lab
