#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "boolalg.hpp"
#include "chaos.hpp"
#include "linalg.hpp"
#include "model.hpp"
#include "partition.hpp"

namespace noise_lab {

/// Spectral space of the commutative algebra generated by {Q_x}: its atoms
/// are the Walsh supports M, each carrying the eigenspace of Walsh vectors
/// with that support. The canonical measure is μ(M) = dim/N.
class SpectralSpace {
public:
    SpectralSpace() = default;

    explicit SpectralSpace(const NoiseModel& model) : n_(model.n_cells()) {
        std::map<std::uint64_t, std::uint64_t> dims;
        for (std::size_t m = 0; m < model.size(); ++m) ++dims[model.support_bits(m)];
        for (auto [mask, d] : dims) {
            index_.emplace(mask, atoms_.size());
            atoms_.push_back(mask);
            dims_.push_back(d);
            Rational mu(static_cast<unsigned long>(d), static_cast<unsigned long>(model.size()));
            mu.canonicalize();
            measure_.push_back(mu);
        }
        for (std::size_t i = 0; i < n_; ++i) radices_.push_back(model.radix(i));
    }

    std::size_t n_cells() const { return n_; }
    std::size_t atom_count() const { return atoms_.size(); }
    std::uint64_t atom(std::size_t a) const { return atoms_[a]; }
    BoolElem atom_elem(std::size_t a) const { return {n_, atoms_[a]}; }
    const std::vector<std::uint64_t>& atoms() const { return atoms_; }
    std::uint64_t multiplicity(std::size_t a) const { return dims_[a]; }
    const Rational& canonical_measure(std::size_t a) const { return measure_[a]; }
    const std::vector<Rational>& canonical_measure() const { return measure_; }
    std::size_t radix(std::size_t i) const { return radices_[i]; }

    std::optional<std::size_t> index_of(std::uint64_t mask) const {
        auto it = index_.find(mask);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    void check_elem(const BoolElem& x) const {
        if (x.n_cells() != n_) throw InputError("element belongs to an algebra of a different size");
    }

private:
    std::size_t n_ = 0;
    std::vector<std::uint64_t> atoms_;
    std::vector<std::uint64_t> dims_;
    std::vector<Rational> measure_;
    std::vector<std::size_t> radices_;
    std::map<std::uint64_t, std::size_t> index_;
};

inline SpectralSpace build_spectral_space(const NoiseModel& model) { return SpectralSpace(model); }

/// A set of atoms, as sorted atom indices.
struct SpectralSet {
    std::vector<std::size_t> members;
    bool contains(std::size_t a) const { return std::binary_search(members.begin(), members.end(), a); }
    friend bool operator==(const SpectralSet&, const SpectralSet&) = default;
};

inline SpectralSet set_intersection(const SpectralSet& a, const SpectralSet& b) {
    SpectralSet out;
    std::set_intersection(a.members.begin(), a.members.end(), b.members.begin(), b.members.end(),
                          std::back_inserter(out.members));
    return out;
}

inline SpectralSet set_union(const SpectralSet& a, const SpectralSet& b) {
    SpectralSet out;
    std::set_union(a.members.begin(), a.members.end(), b.members.begin(), b.members.end(),
                   std::back_inserter(out.members));
    return out;
}

inline bool is_subset(const SpectralSet& a, const SpectralSet& b) {
    return std::includes(b.members.begin(), b.members.end(), a.members.begin(), a.members.end());
}

/// S_x = {M : M ⊆ x}, the event on which Q_x acts as the identity.
inline SpectralSet spectral_set(const SpectralSpace& space, const BoolElem& x) {
    space.check_elem(x);
    SpectralSet s;
    for (std::size_t a = 0; a < space.atom_count(); ++a) {
        if ((space.atom(a) & ~x.bits()) == 0) s.members.push_back(a);
    }
    return s;
}

struct SpectralSetRelations {
    bool meet_identity = false;    // S_x ∩ S_y = S_{x∧y}
    bool union_included = false;   // S_x ∪ S_y ⊆ S_{x∨y}
    bool union_strict = false;
    std::optional<std::size_t> missing_atom;  // in S_{x∨y} but not in S_x ∪ S_y
};

inline SpectralSetRelations spectral_set_relations(const SpectralSpace& space, const BoolElem& x, const BoolElem& y) {
    const SpectralSet sx = spectral_set(space, x), sy = spectral_set(space, y);
    const SpectralSet joined = spectral_set(space, x | y);
    SpectralSetRelations r;
    r.meet_identity = set_intersection(sx, sy) == spectral_set(space, x & y);
    const SpectralSet u = set_union(sx, sy);
    r.union_included = is_subset(u, joined);
    r.union_strict = r.union_included && u.members.size() < joined.members.size();
    for (std::size_t a : joined.members) {
        if (!u.contains(a)) {
            r.missing_atom = a;
            break;
        }
    }
    return r;
}

/// μ_ψ(M) = Σ_{support(m)=M} c_m² ‖e_m‖², per atom index.
struct SpectralMeasure {
    std::vector<Rational> mass;

    Rational total() const {
        Rational t = 0;
        for (const auto& m : mass) t += m;
        return t;
    }
    Rational of(const SpectralSet& e) const {
        Rational t = 0;
        for (std::size_t a : e.members) t += mass[a];
        return t;
    }
};

inline SpectralMeasure spectral_measure(const NoiseModel& model, const SpectralSpace& space, const RandomVariable& psi) {
    const WalshCoeffs c = model.coefficients(psi);
    SpectralMeasure mu;
    mu.mass.assign(space.atom_count(), Rational(0));
    for (std::size_t m = 0; m < model.size(); ++m) {
        if (sgn(c[m]) == 0) continue;
        const std::size_t a = *space.index_of(model.support_bits(m));
        mu.mass[a] += c[m] * c[m] * model.walsh_norm2(m);
    }
    return mu;
}

// ---------------------------------------------------------------------------
// H(E) and its lattice identities.

/// H(E): span of the Walsh vectors whose support lies in E.
inline Subspace subspace_of_event(const NoiseModel& model, const SpectralSpace& space, const SpectralSet& e) {
    return walsh_span(model, [&](std::uint64_t s) { return e.contains(*space.index_of(s)); });
}

/// H_x = L2(F_x), as the span of the indicators of the blocks of F_x.
inline Subspace field_subspace(const NoiseModel& model, const BoolElem& x) {
    const Partition p = model.sigma_field_of(x);
    std::vector<RationalVector> ind(p.block_count(), RationalVector(model.size(), Rational(0)));
    for (std::size_t w = 0; w < model.size(); ++w) ind[p.label(w)][w] = 1;
    return Subspace::span(model.size(), std::move(ind));
}

inline bool weighted_orthogonal(const NoiseModel& model, const Subspace& a, const Subspace& b) {
    for (const auto& u : a.basis()) {
        for (const auto& v : b.basis()) {
            if (sgn(model.inner_product(RandomVariable(u), RandomVariable(v))) != 0) return false;
        }
    }
    return true;
}

struct EventLatticeReport {
    bool intersection = false;  // H(E1∩E2) = H(E1) ∩ H(E2)
    bool sum = false;           // H(E1∪E2) = H(E1) + H(E2)
    bool disjoint_orthogonal = true;  // only meaningful when E1 ∩ E2 = ∅
    bool passed() const { return intersection && sum && disjoint_orthogonal; }
};

inline EventLatticeReport check_event_lattice(const NoiseModel& model, const SpectralSpace& space,
                                              const SpectralSet& e1, const SpectralSet& e2) {
    const Subspace h1 = subspace_of_event(model, space, e1);
    const Subspace h2 = subspace_of_event(model, space, e2);
    EventLatticeReport r;
    r.intersection = subspace_of_event(model, space, set_intersection(e1, e2)) == h1.intersect(h2);
    r.sum = subspace_of_event(model, space, set_union(e1, e2)) == h1 + h2;
    if (set_intersection(e1, e2).members.empty()) r.disjoint_orthogonal = weighted_orthogonal(model, h1, h2);
    return r;
}

// ---------------------------------------------------------------------------
// Σ_x, joins, independence.

/// Σ_x: the partition of atoms generated by the events S_y with x ∨ y = 1.
inline Partition sigma_x(const SpectralSpace& space, const BoolElem& x) {
    space.check_elem(x);
    const std::uint64_t base = x.complement().bits();
    std::vector<std::uint64_t> generators;
    for (std::uint64_t sub = x.bits();; sub = (sub - 1) & x.bits()) {
        generators.push_back(base | sub);
        if (sub == 0) break;
    }
    return Partition::by_key(space.atom_count(), [&](std::size_t a) {
        std::vector<bool> pattern;
        pattern.reserve(generators.size());
        for (std::uint64_t y : generators) pattern.push_back((space.atom(a) & ~y) == 0);
        return pattern;
    });
}

/// Partition of atoms by their trace M ∩ x.
inline Partition sigma_x_by_trace(const SpectralSpace& space, const BoolElem& x) {
    return Partition::by_key(space.atom_count(), [&](std::size_t a) { return space.atom(a) & x.bits(); });
}

/// Σ_x ∨ Σ_y = Σ_{x∨y}.
inline bool verify_sigma_join(const SpectralSpace& space, const BoolElem& x, const BoolElem& y) {
    return sigma_x(space, x).refine(sigma_x(space, y)) == sigma_x(space, x | y);
}

/// Product measure Π_i (i ∈ M ? (k_i−1)/k_i : 1/k_i).
inline std::vector<Rational> product_measure(const SpectralSpace& space) {
    std::vector<Rational> mu;
    for (std::size_t a = 0; a < space.atom_count(); ++a) {
        Rational p = 1;
        for (std::size_t i = 0; i < space.n_cells(); ++i) {
            const auto k = static_cast<unsigned long>(space.radix(i));
            Rational f = ((space.atom(a) >> i) & 1U) ? Rational(k - 1, k) : Rational(1, k);
            f.canonicalize();
            p *= f;
        }
        mu.push_back(p);
    }
    return mu;
}

struct IndependenceReport {
    bool witness_is_canonical = false;  // the product measure equals dims/N
    bool independent = false;           // μ(A∩B) = μ(A)μ(B) on all blocks
    std::optional<bool> generates_all;  // y = x′: Σ_x ∨ Σ_y is discrete
    std::vector<Rational> witness;
    bool passed() const { return witness_is_canonical && independent && generates_all.value_or(true); }
};

inline IndependenceReport verify_independence(const SpectralSpace& space, const BoolElem& x, const BoolElem& y) {
    if (!(x & y).empty()) throw InputError("independence needs x ∧ y = 0, got " + (x & y).to_string());
    IndependenceReport r;
    r.witness = product_measure(space);
    r.witness_is_canonical = r.witness == space.canonical_measure();
    const Partition px = sigma_x(space, x), py = sigma_x(space, y);
    std::vector<Rational> ma(px.block_count(), Rational(0)), mb(py.block_count(), Rational(0));
    std::map<std::pair<std::size_t, std::size_t>, Rational> mab;
    for (std::size_t a = 0; a < space.atom_count(); ++a) {
        ma[px.label(a)] += r.witness[a];
        mb[py.label(a)] += r.witness[a];
        mab[{px.label(a), py.label(a)}] += r.witness[a];
    }
    r.independent = true;
    for (std::size_t i = 0; i < ma.size() && r.independent; ++i) {
        for (std::size_t j = 0; j < mb.size(); ++j) {
            auto it = mab.find({i, j});
            const Rational joint = it == mab.end() ? Rational(0) : it->second;
            if (joint != ma[i] * mb[j]) {
                r.independent = false;
                break;
            }
        }
    }
    if (y == x.complement()) r.generates_all = px.refine(py).is_discrete();
    return r;
}

/// S_{x′} is exactly one block of Σ_x.
inline bool check_atom_of_sigma_x(const SpectralSpace& space, const BoolElem& x) {
    return sigma_x(space, x).has_block(spectral_set(space, x.complement()).members);
}

// ---------------------------------------------------------------------------
// Spectral filters.

/// Φ_s = {x : s ∈ S_x}; for the atom M this is the principal filter at M.
inline Filter spectral_filter(const SpectralSpace& space, std::uint64_t atom_mask) {
    if (!space.index_of(atom_mask)) throw InputError("not an atom of the spectral space");
    return Filter(BoolElem(space.n_cells(), atom_mask));
}

/// (x, y ∈ Φ_s) ⟺ (x ∧ y ∈ Φ_s), read off S_x membership directly.
inline bool spectral_filter_law(const SpectralSpace& space, std::size_t atom_index, std::uint64_t limit = 1024) {
    const std::size_t n = space.n_cells();
    const std::uint64_t count = std::uint64_t{1} << n;
    if (count > limit) throw ResourceError("filter law is checked exhaustively only for 2^n ≤ limit");
    std::vector<bool> in(count);
    for (std::uint64_t x = 0; x < count; ++x) in[x] = spectral_set(space, BoolElem(n, x)).contains(atom_index);
    for (std::uint64_t x = 0; x < count; ++x) {
        for (std::uint64_t y = 0; y < count; ++y) {
            if ((in[x] && in[y]) != in[x & y]) return false;
        }
    }
    return true;
}

/// Same null sets.
inline bool mutually_absolutely_continuous(const std::vector<Rational>& a, const std::vector<Rational>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if ((sgn(a[i]) == 0) != (sgn(b[i]) == 0)) return false;
    }
    return true;
}

} // namespace noise_lab
