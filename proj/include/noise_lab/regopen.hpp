#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "interval_set.hpp"
#include "rational.hpp"

namespace noise_lab {

/// Regular open subset of X = [0,1] in canonical form: sorted pairs (a, b),
/// a < b, with b_i < a_{i+1} (no shared or touching endpoints). A pair stands
/// for the open interval (a, b), taken half-closed at the space edge when
/// a = 0 or b = 1.
class RegOpen {
public:
    using Piece = std::pair<Rational, Rational>;

    RegOpen() = default;

    static RegOpen zero() { return {}; }
    static RegOpen one() { return from_canonical({{Rational(0), Rational(1)}}); }

    const std::vector<Piece>& pieces() const { return pieces_; }
    bool empty() const { return pieces_.empty(); }
    bool is_one() const { return pieces_.size() == 1 && pieces_[0].first == 0 && pieces_[0].second == 1; }

    IntervalSet interior() const {
        std::vector<Interval> parts;
        for (const auto& [a, b] : pieces_) parts.push_back({a, b, a == 0, b == 1});
        return IntervalSet(std::move(parts));
    }
    IntervalSet closure() const {
        std::vector<Interval> parts;
        for (const auto& [a, b] : pieces_) parts.push_back({a, b, true, true});
        return IntervalSet(std::move(parts));
    }
    /// Cl ∖ Int: the finite set of endpoints away from the space edges.
    std::vector<Rational> boundary() const {
        std::vector<Rational> pts;
        for (const auto& [a, b] : pieces_) {
            if (a != 0) pts.push_back(a);
            if (b != 1) pts.push_back(b);
        }
        return pts;
    }

    bool all_endpoints_dyadic() const {
        return std::all_of(pieces_.begin(), pieces_.end(),
                           [](const Piece& p) { return is_dyadic(p.first) && is_dyadic(p.second); });
    }

    friend bool operator==(const RegOpen&, const RegOpen&) = default;

    std::string to_string() const {
        if (pieces_.empty()) return "0";
        return interior().to_string();
    }

    /// Trusts that `pieces` is already canonical.
    static RegOpen from_canonical(std::vector<Piece> pieces) {
        RegOpen r;
        r.pieces_ = std::move(pieces);
        return r;
    }

private:
    std::vector<Piece> pieces_;
};

/// Int(Cl(⋃ raw)): drops empty intervals, merges overlapping and touching ones.
inline RegOpen make_regopen(std::vector<RegOpen::Piece> raw) {
    for (const auto& [a, b] : raw) {
        if (a < 0 || a > 1 || b < 0 || b > 1) {
            throw InputError("interval endpoint out of [0,1]: (" + to_string(a) + "," + to_string(b) + ")");
        }
    }
    std::erase_if(raw, [](const RegOpen::Piece& p) { return p.first >= p.second; });
    std::sort(raw.begin(), raw.end());
    std::vector<RegOpen::Piece> out;
    for (auto& p : raw) {
        if (!out.empty() && p.first <= out.back().second) {
            if (p.second > out.back().second) out.back().second = p.second;
        } else {
            out.push_back(std::move(p));
        }
    }
    return RegOpen::from_canonical(std::move(out));
}

inline RegOpen reg_complement(const RegOpen& r) {
    if (r.empty()) return RegOpen::one();
    std::vector<RegOpen::Piece> out;
    Rational cur = 0;
    for (const auto& [a, b] : r.pieces()) {
        if (a > cur) out.emplace_back(cur, a);
        cur = b;
    }
    if (cur < 1) out.emplace_back(cur, Rational(1));
    return RegOpen::from_canonical(std::move(out));
}

inline RegOpen reg_meet(const RegOpen& r, const RegOpen& s) {
    std::vector<RegOpen::Piece> out;
    for (const auto& [a, b] : r.pieces()) {
        for (const auto& [c, d] : s.pieces()) {
            Rational lo = std::max(a, c), hi = std::min(b, d);
            if (lo < hi) out.emplace_back(std::move(lo), std::move(hi));
        }
    }
    return make_regopen(std::move(out));
}

inline RegOpen reg_join(const RegOpen& r, const RegOpen& s) {
    auto all = r.pieces();
    all.insert(all.end(), s.pieces().begin(), s.pieces().end());
    return make_regopen(std::move(all));
}

struct RegOps {
    RegOpen meet;
    RegOpen join;
    RegOpen complement_of_r;
};

inline RegOps reg_ops(const RegOpen& r, const RegOpen& s) { return {reg_meet(r, s), reg_join(r, s), reg_complement(r)}; }

struct IntClBd {
    IntervalSet interior;
    IntervalSet closure;
    std::vector<Rational> boundary;
};

inline IntClBd interior_closure_boundary(const RegOpen& r) { return {r.interior(), r.closure(), r.boundary()}; }

/// r ≤ s, read through interiors and through closures.
inline bool reg_le_by_interior(const RegOpen& r, const RegOpen& s) { return s.interior().includes(r.interior()); }
inline bool reg_le_by_closure(const RegOpen& r, const RegOpen& s) { return s.closure().includes(r.closure()); }

/// Regular open set made of the selected cells of the depth-`depth` dyadic grid.
inline RegOpen dyadic_cells(std::size_t depth, std::uint64_t cell_mask) {
    const std::uint64_t cells = std::uint64_t{1} << depth;
    const Rational width(1, static_cast<unsigned long>(cells));
    std::vector<RegOpen::Piece> raw;
    for (std::uint64_t j = 0; j < cells; ++j) {
        if ((cell_mask >> j) & 1U) {
            raw.emplace_back(Rational(width * static_cast<unsigned long>(j)),
                             Rational(width * static_cast<unsigned long>(j + 1)));
        }
    }
    return make_regopen(std::move(raw));
}

/// Random canonical element: half of the time a random union of dyadic
/// cells (depth 1..6), otherwise up to three random intervals with small
/// denominators.
template <class Rng>
RegOpen random_regopen(Rng& rng) {
    std::uniform_int_distribution<int> coin(0, 1);
    if (coin(rng) == 0) {
        std::uniform_int_distribution<std::size_t> depth(1, 6);
        const std::size_t d = depth(rng);
        std::uniform_int_distribution<std::uint64_t> mask(0, (std::uint64_t{1} << (std::uint64_t{1} << d)) - 1);
        return dyadic_cells(d, d == 6 ? rng() : mask(rng));
    }
    std::uniform_int_distribution<int> count(1, 3), den(1, 12);
    std::vector<RegOpen::Piece> raw;
    const int c = count(rng);
    for (int i = 0; i < c; ++i) {
        const int q = den(rng);
        std::uniform_int_distribution<int> num(0, q);
        Rational a(num(rng), q), b(num(rng), q);
        a.canonicalize();
        b.canonicalize();
        if (a > b) std::swap(a, b);
        raw.emplace_back(a, b);
    }
    return make_regopen(std::move(raw));
}

struct RegLawsReport {
    std::size_t cases = 0;
    std::size_t checks = 0;
    std::vector<std::string> violations;
    /// Pairs where Cl(r∧s) ⊊ Cl(r)∩Cl(s), resp. Int(r∨s) ⊋ Int(r)∪Int(s).
    std::size_t strict_meet_closure = 0;
    std::size_t strict_join_interior = 0;
    std::optional<std::string> join_strictness_witness;

    bool passed() const { return violations.empty(); }
};

namespace detail {

inline void check_reg_triple(const RegOpen& r, const RegOpen& s, const RegOpen& t, RegLawsReport& rep) {
    auto expect = [&](bool ok, const char* law) {
        ++rep.checks;
        if (!ok && rep.violations.size() < 16) {
            rep.violations.push_back(std::string(law) + " fails for r=" + r.to_string() + ", s=" + s.to_string() +
                                     ", t=" + t.to_string());
        }
    };
    const RegOpen zero = RegOpen::zero(), one = RegOpen::one();
    const RegOpen rs_meet = reg_meet(r, s), rs_join = reg_join(r, s), rc = reg_complement(r),
                  sc = reg_complement(s);
    expect(rs_meet == reg_meet(s, r), "meet commutativity");
    expect(rs_join == reg_join(s, r), "join commutativity");
    expect(reg_meet(rs_meet, t) == reg_meet(r, reg_meet(s, t)), "meet associativity");
    expect(reg_join(rs_join, t) == reg_join(r, reg_join(s, t)), "join associativity");
    expect(reg_meet(r, reg_join(s, t)) == reg_join(rs_meet, reg_meet(r, t)), "meet distributivity");
    expect(reg_join(r, reg_meet(s, t)) == reg_meet(rs_join, reg_join(r, t)), "join distributivity");
    expect(reg_meet(r, rs_join) == r && reg_join(r, rs_meet) == r, "absorption");
    expect(reg_meet(r, rc).empty() && reg_join(r, rc).is_one(), "complement laws");
    expect(reg_complement(rs_meet) == reg_join(rc, sc), "De Morgan (meet)");
    expect(reg_complement(rs_join) == reg_meet(rc, sc), "De Morgan (join)");
    expect(reg_complement(rc) == r, "double complement");
    expect(reg_meet(r, one) == r && reg_join(r, zero) == r, "identities");
    expect(make_regopen(r.pieces()) == r, "canonical idempotence");
    expect(r.closure().interior() == r.interior(), "regularity Int(Cl(r)) = r");
    expect(rs_meet.interior() == r.interior().intersect(s.interior()), "Int(r∧s) = Int(r)∩Int(s)");
    expect(rs_join.closure() == r.closure().unite(s.closure()), "Cl(r∨s) = Cl(r)∪Cl(s)");
    expect(rc.interior() == r.closure().complement(), "Int(r′) = X∖Cl(r)");
    expect(rc.closure() == r.interior().complement(), "Cl(r′) = X∖Int(r)");
    expect(rs_meet.closure() == r.interior().intersect(s.interior()).closure(), "Cl(r∧s) = Cl(Int r ∩ Int s)");
    expect(rs_join.interior() == r.closure().unite(s.closure()).interior(), "Int(r∨s) = Int(Cl r ∪ Cl s)");

    const IntervalSet cl_meet = rs_meet.closure(), cl_both = r.closure().intersect(s.closure());
    expect(cl_both.includes(cl_meet), "Cl(r∧s) ⊆ Cl(r)∩Cl(s)");
    if (cl_meet != cl_both) ++rep.strict_meet_closure;
    const IntervalSet int_join = rs_join.interior(), int_either = r.interior().unite(s.interior());
    expect(int_join.includes(int_either), "Int(r∨s) ⊇ Int(r)∪Int(s)");
    if (int_join != int_either) {
        ++rep.strict_join_interior;
        if (!rep.join_strictness_witness) {
            rep.join_strictness_witness = "r=" + r.to_string() + ", s=" + s.to_string() + ", point " +
                                          to_string(*int_join.minus(int_either).some_point());
        }
    }
    const bool le_int = reg_le_by_interior(r, s), le_cl = reg_le_by_closure(r, s);
    expect(le_int == le_cl, "Int(r)⊆Int(s) ⟺ Cl(r)⊆Cl(s)");
    expect(le_int == (rs_meet == r), "order agrees with meet");
}

} // namespace detail

/// Boolean-algebra laws and the closure/interior identities of Reg([0,1]):
/// exhaustively over all triples of depth-`grid_depth` dyadic elements, then
/// over `iterations` random triples.
inline RegLawsReport verify_reg_laws(std::uint64_t seed, std::size_t iterations, std::size_t grid_depth = 2) {
    RegLawsReport rep;
    const std::uint64_t grid = std::uint64_t{1} << (std::uint64_t{1} << grid_depth);
    std::vector<RegOpen> elems;
    for (std::uint64_t m = 0; m < grid; ++m) elems.push_back(dyadic_cells(grid_depth, m));
    for (const auto& r : elems) {
        for (const auto& s : elems) {
            for (const auto& t : elems) {
                detail::check_reg_triple(r, s, t, rep);
                ++rep.cases;
            }
        }
    }
    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < iterations; ++i) {
        const RegOpen r = random_regopen(rng), s = random_regopen(rng), t = random_regopen(rng);
        detail::check_reg_triple(r, s, t, rep);
        ++rep.cases;
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Regular open sets of a finite topological space, by brute force.

/// Points 0..size-1; open sets as bit masks.
struct FiniteSpace {
    std::size_t size = 0;
    std::vector<std::uint32_t> opens;
};

class FiniteRegAlgebra {
public:
    explicit FiniteRegAlgebra(FiniteSpace space) : space_(std::move(space)) {
        if (space_.size > 24) throw InputError("finite spaces are limited to 24 points");
        full_ = (std::uint32_t{1} << space_.size) - 1;
        std::sort(space_.opens.begin(), space_.opens.end());
        space_.opens.erase(std::unique(space_.opens.begin(), space_.opens.end()), space_.opens.end());
        auto is_open = [&](std::uint32_t s) {
            return std::binary_search(space_.opens.begin(), space_.opens.end(), s);
        };
        for (std::uint32_t o : space_.opens) {
            if ((o & ~full_) != 0) throw InputError("open set has points outside the space");
        }
        if (!is_open(0) || !is_open(full_)) throw InputError("topology must contain ∅ and X");
        for (std::uint32_t a : space_.opens) {
            for (std::uint32_t b : space_.opens) {
                if (!is_open(a | b) || !is_open(a & b)) throw InputError("opens not closed under ∪ and ∩");
            }
        }
        // Smallest open neighbourhood of each point; Int(s) = {p : U_p ⊆ s}.
        neighbourhood_.assign(space_.size, full_);
        for (std::uint32_t o : space_.opens) {
            for (std::size_t p = 0; p < space_.size; ++p) {
                if ((o >> p) & 1U) neighbourhood_[p] &= o;
            }
        }
        for (std::uint32_t g : space_.opens) {
            if (interior(closure(g)) == g) elements_.push_back(g);
        }
    }

    std::uint32_t full() const { return full_; }
    const std::vector<std::uint32_t>& elements() const { return elements_; }

    std::uint32_t interior(std::uint32_t s) const {
        std::uint32_t r = 0;
        for (std::size_t p = 0; p < space_.size; ++p) {
            if ((neighbourhood_[p] & ~s) == 0) r |= std::uint32_t{1} << p;
        }
        return r;
    }
    std::uint32_t closure(std::uint32_t s) const { return full_ & ~interior(full_ & ~s); }

    std::uint32_t meet(std::uint32_t g, std::uint32_t h) const { return g & h; }
    std::uint32_t join(std::uint32_t g, std::uint32_t h) const { return interior(closure(g) | closure(h)); }
    std::uint32_t complement(std::uint32_t g) const { return full_ & ~closure(g); }

    /// Boolean laws over all pairs and triples of elements.
    bool verify_laws() const {
        const std::size_t count = elements_.size();
        auto index = [&](std::uint32_t g) -> std::optional<std::size_t> {
            auto it = std::lower_bound(elements_.begin(), elements_.end(), g);
            if (it == elements_.end() || *it != g) return std::nullopt;
            return static_cast<std::size_t>(it - elements_.begin());
        };
        // Operation tables over element indices, so the triple loop is lookups only.
        std::vector<std::size_t> meet_t(count * count), join_t(count * count), comp_t(count);
        for (std::size_t a = 0; a < count; ++a) {
            const auto ac = index(complement(elements_[a]));
            if (!ac) return false;
            comp_t[a] = *ac;
            for (std::size_t b = 0; b < count; ++b) {
                const auto m = index(meet(elements_[a], elements_[b]));
                const auto j = index(join(elements_[a], elements_[b]));
                if (!m || !j) return false;
                meet_t[a * count + b] = *m;
                join_t[a * count + b] = *j;
            }
        }
        const std::size_t zero = *index(0), one = *index(full_);
        for (std::size_t a = 0; a < count; ++a) {
            if (meet_t[a * count + comp_t[a]] != zero || join_t[a * count + comp_t[a]] != one) return false;
            if (comp_t[comp_t[a]] != a) return false;
            for (std::size_t b = 0; b < count; ++b) {
                if (comp_t[meet_t[a * count + b]] != join_t[comp_t[a] * count + comp_t[b]]) return false;
                if (meet_t[a * count + b] != meet_t[b * count + a] || join_t[a * count + b] != join_t[b * count + a]) {
                    return false;
                }
                for (std::size_t c = 0; c < count; ++c) {
                    if (meet_t[a * count + join_t[b * count + c]] !=
                        join_t[meet_t[a * count + b] * count + meet_t[a * count + c]]) {
                        return false;
                    }
                    if (join_t[a * count + meet_t[b * count + c]] !=
                        meet_t[join_t[a * count + b] * count + join_t[a * count + c]]) {
                        return false;
                    }
                }
            }
        }
        return true;
    }

private:
    FiniteSpace space_;
    std::uint32_t full_ = 0;
    std::vector<std::uint32_t> neighbourhood_;
    std::vector<std::uint32_t> elements_;
};

inline FiniteRegAlgebra finite_space_regopen(FiniteSpace space) { return FiniteRegAlgebra(std::move(space)); }

/// Quotient of [0,1] by the depth-`depth` dyadic grid: points 0..2^d-1 are
/// the open cells, points 2^d..2^{d+1} the grid points 0, 1/2^d, ..., 1. A
/// set is open iff its preimage is open, i.e. every grid point it contains
/// has its neighbouring cells in it too.
inline FiniteSpace dyadic_quotient_space(std::size_t depth) {
    if (depth > 3) throw InputError("dyadic quotient supported up to depth 3");
    const std::uint32_t cells = std::uint32_t{1} << depth;
    FiniteSpace fs;
    fs.size = 2 * cells + 1;
    for (std::uint32_t c = 0; c < (std::uint32_t{1} << cells); ++c) {
        std::vector<std::uint32_t> allowed;
        for (std::uint32_t g = 0; g <= cells; ++g) {
            const bool left = g == 0 || ((c >> (g - 1)) & 1U);
            const bool right = g == cells || ((c >> g) & 1U);
            if (left && right) allowed.push_back(g);
        }
        for (std::uint32_t sub = 0; sub < (std::uint32_t{1} << allowed.size()); ++sub) {
            std::uint32_t set = c;
            for (std::size_t i = 0; i < allowed.size(); ++i) {
                if ((sub >> i) & 1U) set |= std::uint32_t{1} << (cells + allowed[i]);
            }
            fs.opens.push_back(set);
        }
    }
    return fs;
}

/// Image in Reg([0,1]) of a quotient-space set (its cells determine it).
inline RegOpen quotient_to_regopen(std::size_t depth, std::uint32_t set) {
    const std::uint32_t cells = std::uint32_t{1} << depth;
    return dyadic_cells(depth, set & ((std::uint32_t{1} << cells) - 1));
}

/// The brute-force Reg of the quotient space matches the interval algebra of
/// depth-`depth` dyadic elements: same elements (grid points included exactly
/// when they lie in the interior) and the same operations.
inline bool verify_quotient_agreement(std::size_t depth) {
    const FiniteRegAlgebra alg(dyadic_quotient_space(depth));
    const std::uint32_t cells = std::uint32_t{1} << depth;
    if (alg.elements().size() != (std::size_t{1} << cells)) return false;
    auto grid_matches = [&](std::uint32_t g, const RegOpen& r) {
        const IntervalSet in = r.interior();
        for (std::uint32_t j = 0; j <= cells; ++j) {
            Rational pt(j, cells);
            pt.canonicalize();
            if ((((g >> (cells + j)) & 1U) != 0) != in.contains(pt)) return false;
        }
        return true;
    };
    for (std::uint32_t g : alg.elements()) {
        const RegOpen r = quotient_to_regopen(depth, g);
        if (!grid_matches(g, r)) return false;
        if (quotient_to_regopen(depth, alg.complement(g)) != reg_complement(r)) return false;
        for (std::uint32_t h : alg.elements()) {
            const RegOpen s = quotient_to_regopen(depth, h);
            if (quotient_to_regopen(depth, alg.meet(g, h)) != reg_meet(r, s)) return false;
            if (quotient_to_regopen(depth, alg.join(g, h)) != reg_join(r, s)) return false;
        }
    }
    return true;
}

} // namespace noise_lab
