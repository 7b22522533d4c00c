#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

#include "errors.hpp"

namespace noise_lab {

inline constexpr std::size_t max_cells = 63;

/// Element of the power-set algebra on n cell indices.
class BoolElem {
public:
    BoolElem() = default;
    BoolElem(std::size_t n_cells, std::uint64_t bits) : n_(n_cells), bits_(bits) {
        if (n_cells > max_cells) throw InputError("at most 63 cells are supported");
        if ((bits & ~full_mask(n_cells)) != 0) {
            throw InputError("element has bits outside {0.." + std::to_string(n_cells) + "-1}");
        }
    }

    static BoolElem zero(std::size_t n) { return {n, 0}; }
    static BoolElem one(std::size_t n) { return {n, full_mask(n)}; }
    static BoolElem singleton(std::size_t n, std::size_t i) {
        if (i >= n) throw InputError("cell index out of range");
        return {n, std::uint64_t{1} << i};
    }
    static BoolElem of(std::size_t n, std::initializer_list<std::size_t> members) {
        return of(n, std::vector<std::size_t>(members));
    }
    static BoolElem of(std::size_t n, const std::vector<std::size_t>& members) {
        std::uint64_t bits = 0;
        for (std::size_t i : members) {
            if (i >= n) throw InputError("cell index " + std::to_string(i) + " out of range");
            bits |= std::uint64_t{1} << i;
        }
        return {n, bits};
    }

    static constexpr std::uint64_t full_mask(std::size_t n) {
        return n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
    }

    std::size_t n_cells() const { return n_; }
    std::uint64_t bits() const { return bits_; }
    bool empty() const { return bits_ == 0; }
    bool is_one() const { return bits_ == full_mask(n_); }
    std::size_t count() const { return static_cast<std::size_t>(std::popcount(bits_)); }
    bool contains(std::size_t i) const { return i < n_ && ((bits_ >> i) & 1U) != 0; }
    bool is_subset_of(const BoolElem& other) const {
        check_same(other);
        return (bits_ & ~other.bits_) == 0;
    }

    std::vector<std::size_t> members() const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < n_; ++i) {
            if (contains(i)) out.push_back(i);
        }
        return out;
    }

    BoolElem meet(const BoolElem& o) const { check_same(o); return {n_, bits_ & o.bits_}; }
    BoolElem join(const BoolElem& o) const { check_same(o); return {n_, bits_ | o.bits_}; }
    BoolElem complement() const { return {n_, ~bits_ & full_mask(n_)}; }

    friend BoolElem operator&(const BoolElem& a, const BoolElem& b) { return a.meet(b); }
    friend BoolElem operator|(const BoolElem& a, const BoolElem& b) { return a.join(b); }
    BoolElem operator~() const { return complement(); }

    friend bool operator==(const BoolElem&, const BoolElem&) = default;
    friend auto operator<=>(const BoolElem&, const BoolElem&) = default;

    /// "{0,2}" with 0-based cell indices.
    std::string to_string() const {
        std::string s = "{";
        bool first = true;
        for (std::size_t i : members()) {
            if (!first) s += ",";
            s += std::to_string(i);
            first = false;
        }
        return s + "}";
    }

private:
    void check_same(const BoolElem& o) const {
        if (o.n_ != n_) {
            throw InputError("mismatched algebra sizes: " + std::to_string(n_) + " vs " +
                             std::to_string(o.n_));
        }
    }

    std::size_t n_ = 0;
    std::uint64_t bits_ = 0;
};

struct ElementOps {
    BoolElem meet;
    BoolElem join;
    BoolElem complement_of_x;
};

inline ElementOps element_ops(const BoolElem& x, const BoolElem& y) {
    return {x.meet(y), x.join(y), x.complement()};
}

/// B = all subsets of {0..n_cells-1}.
class FinitePowerAlgebra {
public:
    explicit FinitePowerAlgebra(std::size_t n_cells) : n_(n_cells) {
        if (n_cells > max_cells) throw InputError("at most 63 cells are supported");
    }

    std::size_t n_cells() const { return n_; }
    std::uint64_t size() const { return std::uint64_t{1} << n_; }
    BoolElem zero() const { return BoolElem::zero(n_); }
    BoolElem one() const { return BoolElem::one(n_); }
    BoolElem element(std::uint64_t bits) const { return {n_, bits}; }

    std::vector<BoolElem> elements() const {
        if (n_ > 24) throw ResourceError("refusing to enumerate 2^" + std::to_string(n_) + " elements");
        std::vector<BoolElem> out;
        out.reserve(size());
        for (std::uint64_t b = 0; b < size(); ++b) out.emplace_back(n_, b);
        return out;
    }

    std::vector<BoolElem> atoms() const {
        std::vector<BoolElem> out;
        for (std::size_t i = 0; i < n_; ++i) out.push_back(BoolElem::singleton(n_, i));
        return out;
    }

private:
    std::size_t n_;
};

inline FinitePowerAlgebra build_power_algebra(std::size_t n_cells) { return FinitePowerAlgebra(n_cells); }

/// Boolean subalgebra of B given by a block partition of the cells; its
/// elements are the unions of blocks.
class Subalgebra {
public:
    Subalgebra(const FinitePowerAlgebra& alg, std::vector<BoolElem> blocks)
        : n_(alg.n_cells()), blocks_(std::move(blocks)) {
        std::uint64_t seen = 0;
        for (const BoolElem& b : blocks_) {
            if (b.n_cells() != n_) throw InputError("block belongs to an algebra of a different size");
            if (b.empty()) throw InputError("empty block " + b.to_string());
            if ((seen & b.bits()) != 0) throw InputError("blocks overlap at " + b.to_string());
            seen |= b.bits();
        }
        if (seen != BoolElem::full_mask(n_)) {
            throw InputError("blocks leave a gap: " + BoolElem(n_, ~seen & BoolElem::full_mask(n_)).to_string());
        }
        if (n_ == 0 && !blocks_.empty()) throw InputError("degenerate algebra has no blocks");
        if (blocks_.size() > 24) throw ResourceError("too many blocks");
    }

    static Subalgebra full(const FinitePowerAlgebra& alg) { return {alg, alg.atoms()}; }
    static Subalgebra trivial(const FinitePowerAlgebra& alg) {
        if (alg.n_cells() == 0) return {alg, {}};
        return {alg, {alg.one()}};
    }

    std::size_t n_cells() const { return n_; }
    const std::vector<BoolElem>& blocks() const { return blocks_; }
    std::size_t block_count() const { return blocks_.size(); }
    std::uint64_t element_count() const { return std::uint64_t{1} << blocks_.size(); }

    /// Union of the blocks selected by `block_mask`.
    BoolElem element(std::uint64_t block_mask) const {
        std::uint64_t bits = 0;
        for (std::size_t j = 0; j < blocks_.size(); ++j) {
            if ((block_mask >> j) & 1U) bits |= blocks_[j].bits();
        }
        return {n_, bits};
    }

    std::vector<BoolElem> elements() const {
        std::vector<BoolElem> out;
        for (std::uint64_t m = 0; m < element_count(); ++m) out.push_back(element(m));
        return out;
    }

    bool contains(const BoolElem& x) const {
        if (x.n_cells() != n_) throw InputError("mismatched algebra sizes");
        for (const BoolElem& b : blocks_) {
            const std::uint64_t common = b.bits() & x.bits();
            if (common != 0 && common != b.bits()) return false;
        }
        return true;
    }

private:
    std::size_t n_;
    std::vector<BoolElem> blocks_;
};

inline Subalgebra build_subalgebra(const FinitePowerAlgebra& alg, std::vector<BoolElem> blocks) {
    return {alg, std::move(blocks)};
}

/// The atoms of b: the finest partition of unity inside b.
inline std::vector<BoolElem> enumerate_partition_atoms(const Subalgebra& b) { return b.blocks(); }

/// Partition of unity: nonzero members, pairwise disjoint, joining to 1.
inline bool is_partition_of_unity(const std::vector<BoolElem>& parts, std::size_t n_cells) {
    std::uint64_t seen = 0;
    for (const BoolElem& p : parts) {
        if (p.n_cells() != n_cells || p.empty() || (seen & p.bits()) != 0) return false;
        seen |= p.bits();
    }
    return seen == BoolElem::full_mask(n_cells);
}

/// Principal filter {x : generator ⊆ x}. Every filter on a finite Boolean
/// algebra has this form; generator 0 gives the improper filter B.
class Filter {
public:
    explicit Filter(BoolElem generator) : generator_(generator) {}
    const BoolElem& generator() const { return generator_; }
    bool member(const BoolElem& x) const { return generator_.is_subset_of(x); }
    bool is_improper() const { return generator_.empty(); }

private:
    BoolElem generator_;
};

/// The Stone space of B is the discrete set of atoms (cell indices). A clopen
/// set is a subset of atoms; a filter corresponds to the closed set of atoms
/// contained in its generator.
inline std::vector<std::size_t> clopen(const BoolElem& x) { return x.members(); }
inline std::vector<std::size_t> filter_to_closed_set(const Filter& f) { return f.generator().members(); }

} // namespace noise_lab
