#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "rational.hpp"

namespace noise_lab {

using RationalVector = std::vector<Rational>;

namespace linalg {

inline bool is_zero(const RationalVector& v) {
    for (const Rational& e : v) {
        if (sgn(e) != 0) return false;
    }
    return true;
}

inline Rational dot(const RationalVector& a, const RationalVector& b) {
    Rational s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (sgn(a[i]) != 0 && sgn(b[i]) != 0) s += a[i] * b[i];
    }
    return s;
}

/// Reduced row echelon form in place. Zero rows are dropped. Returns the
/// pivot column of each remaining row.
inline std::vector<std::size_t> rref(std::vector<RationalVector>& rows, std::size_t cols) {
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows.size(); ++c) {
        std::size_t sel = r;
        while (sel < rows.size() && sgn(rows[sel][c]) == 0) ++sel;
        if (sel == rows.size()) continue;
        std::swap(rows[r], rows[sel]);
        if (rows[r][c] != 1) {
            const Rational inv = 1 / rows[r][c];
            for (std::size_t j = c; j < cols; ++j) {
                if (sgn(rows[r][j]) != 0) rows[r][j] *= inv;
            }
        }
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (i == r || sgn(rows[i][c]) == 0) continue;
            const Rational f = rows[i][c];
            for (std::size_t j = c; j < cols; ++j) {
                if (sgn(rows[r][j]) != 0) rows[i][j] -= f * rows[r][j];
            }
        }
        pivots.push_back(c);
        ++r;
    }
    rows.resize(r);
    return pivots;
}

/// Basis of {v : rows · v = 0}.
inline std::vector<RationalVector> nullspace(std::vector<RationalVector> rows, std::size_t cols) {
    const auto pivots = rref(rows, cols);
    std::vector<bool> is_pivot(cols, false);
    for (std::size_t p : pivots) is_pivot[p] = true;
    std::vector<RationalVector> basis;
    for (std::size_t free = 0; free < cols; ++free) {
        if (is_pivot[free]) continue;
        RationalVector v(cols, Rational(0));
        v[free] = 1;
        for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -rows[r][free];
        basis.push_back(std::move(v));
    }
    return basis;
}

inline std::size_t rank(std::vector<RationalVector> rows, std::size_t cols) {
    return rref(rows, cols).size();
}

} // namespace linalg

/// A linear subspace of Q^ambient with a canonical (RREF) basis, so that two
/// subspaces are equal iff their bases are equal.
class Subspace {
public:
    explicit Subspace(std::size_t ambient = 0) : ambient_(ambient) {}

    static Subspace span(std::size_t ambient, std::vector<RationalVector> vectors) {
        for (const auto& v : vectors) {
            if (v.size() != ambient) throw std::invalid_argument("Subspace::span: dimension mismatch");
        }
        Subspace s(ambient);
        s.pivots_ = linalg::rref(vectors, ambient);
        s.basis_ = std::move(vectors);
        return s;
    }

    static Subspace whole(std::size_t ambient) {
        std::vector<RationalVector> id(ambient, RationalVector(ambient, Rational(0)));
        for (std::size_t i = 0; i < ambient; ++i) id[i][i] = 1;
        return span(ambient, std::move(id));
    }

    std::size_t ambient() const { return ambient_; }
    std::size_t dim() const { return basis_.size(); }
    const std::vector<RationalVector>& basis() const { return basis_; }

    bool contains(const RationalVector& v) const {
        RationalVector w = v;
        for (std::size_t r = 0; r < basis_.size(); ++r) {
            const std::size_t c = pivots_[r];
            if (sgn(w[c]) == 0) continue;
            const Rational f = w[c];
            for (std::size_t j = c; j < ambient_; ++j) {
                if (sgn(basis_[r][j]) != 0) w[j] -= f * basis_[r][j];
            }
        }
        return linalg::is_zero(w);
    }

    bool contains(const Subspace& other) const {
        for (const auto& v : other.basis_) {
            if (!contains(v)) return false;
        }
        return true;
    }

    Subspace operator+(const Subspace& other) const {
        auto all = basis_;
        all.insert(all.end(), other.basis_.begin(), other.basis_.end());
        return span(ambient_, std::move(all));
    }

    /// Orthogonal complement w.r.t. the standard dot product.
    Subspace perp() const { return span(ambient_, linalg::nullspace(basis_, ambient_)); }

    Subspace intersect(const Subspace& other) const { return (perp() + other.perp()).perp(); }

    friend bool operator==(const Subspace& a, const Subspace& b) {
        return a.ambient_ == b.ambient_ && a.basis_ == b.basis_;
    }

private:
    std::size_t ambient_ = 0;
    std::vector<RationalVector> basis_;
    std::vector<std::size_t> pivots_;
};

/// Given a basis of a subspace K and a linear map `op`, returns a basis of
/// {v ∈ K : op(v) = 0}. Cost is dominated by dim(K), so repeated
/// restriction by many constraints stays cheap once K is small.
inline std::vector<RationalVector> restrict_kernel(
    const std::vector<RationalVector>& kernel,
    const std::function<RationalVector(const RationalVector&)>& op) {
    if (kernel.empty()) return {};
    std::vector<RationalVector> images;
    images.reserve(kernel.size());
    for (const auto& v : kernel) images.push_back(op(v));
    const std::size_t rows = images.front().size();
    const std::size_t d = kernel.size();
    std::vector<RationalVector> m(rows, RationalVector(d, Rational(0)));
    for (std::size_t c = 0; c < d; ++c) {
        for (std::size_t r = 0; r < rows; ++r) m[r][c] = images[c][r];
    }
    const auto coeffs = linalg::nullspace(std::move(m), d);
    const std::size_t ambient = kernel.front().size();
    std::vector<RationalVector> out;
    out.reserve(coeffs.size());
    for (const auto& y : coeffs) {
        RationalVector v(ambient, Rational(0));
        for (std::size_t c = 0; c < d; ++c) {
            if (sgn(y[c]) == 0) continue;
            for (std::size_t j = 0; j < ambient; ++j) {
                if (sgn(kernel[c][j]) != 0) v[j] += y[c] * kernel[c][j];
            }
        }
        out.push_back(std::move(v));
    }
    return out;
}

} // namespace noise_lab
