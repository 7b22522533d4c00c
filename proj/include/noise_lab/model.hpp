#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "boolalg.hpp"
#include "errors.hpp"
#include "partition.hpp"
#include "rational.hpp"

namespace noise_lab {

/// One independent factor of the product space: k outcomes with exact masses.
struct Cell {
    std::vector<Rational> probs;
    std::size_t k() const { return probs.size(); }
    friend bool operator==(const Cell&, const Cell&) = default;
};

inline Cell uniform_cell(std::size_t k) {
    return Cell{std::vector<Rational>(k, Rational(1, static_cast<unsigned long>(k)))};
}

inline void validate_cell(const Cell& cell, std::size_t index) {
    const std::string where = "cells[" + std::to_string(index) + "]";
    if (cell.k() < 2) throw InputError(where + ": a cell needs at least 2 outcomes");
    Rational total = 0;
    for (std::size_t o = 0; o < cell.k(); ++o) {
        const Rational& p = cell.probs[o];
        if (sgn(p) <= 0 || p >= 1) {
            throw InputError(where + ".probs[" + std::to_string(o) + "]: probability " + to_string(p) +
                             " not in (0,1)");
        }
        total += p;
    }
    if (total != 1) throw InputError(where + ": probabilities sum to " + to_string(total) + " ≠ 1");
}

/// Real-valued function on Ω, indexed in mixed-radix order (cell 0 slowest).
template <class Scalar>
struct BasicRandomVariable {
    std::vector<Scalar> values;

    BasicRandomVariable() = default;
    explicit BasicRandomVariable(std::vector<Scalar> v) : values(std::move(v)) {}
    BasicRandomVariable(std::size_t size, const Scalar& fill) : values(size, fill) {}

    std::size_t size() const { return values.size(); }
    const Scalar& operator[](std::size_t i) const { return values[i]; }
    Scalar& operator[](std::size_t i) { return values[i]; }

    BasicRandomVariable& operator+=(const BasicRandomVariable& o) {
        check(o);
        for (std::size_t i = 0; i < values.size(); ++i) values[i] += o.values[i];
        return *this;
    }
    BasicRandomVariable& operator-=(const BasicRandomVariable& o) {
        check(o);
        for (std::size_t i = 0; i < values.size(); ++i) values[i] -= o.values[i];
        return *this;
    }
    BasicRandomVariable& operator*=(const Scalar& s) {
        for (auto& v : values) v *= s;
        return *this;
    }
    friend BasicRandomVariable operator+(BasicRandomVariable a, const BasicRandomVariable& b) { return a += b; }
    friend BasicRandomVariable operator-(BasicRandomVariable a, const BasicRandomVariable& b) { return a -= b; }
    friend BasicRandomVariable operator*(const Scalar& s, BasicRandomVariable a) { return a *= s; }
    /// Pointwise product.
    friend BasicRandomVariable operator*(BasicRandomVariable a, const BasicRandomVariable& b) {
        a.check(b);
        for (std::size_t i = 0; i < a.values.size(); ++i) a.values[i] *= b.values[i];
        return a;
    }

    bool is_zero() const {
        return std::all_of(values.begin(), values.end(),
                           [](const Scalar& v) { return scalar_traits<Scalar>::is_zero(v); });
    }
    friend bool operator==(const BasicRandomVariable&, const BasicRandomVariable&) = default;

private:
    void check(const BasicRandomVariable& o) const {
        if (o.values.size() != values.size()) throw InputError("random variables of different lengths");
    }
};

template <class Scalar>
bool approx_equal(const BasicRandomVariable<Scalar>& a, const BasicRandomVariable<Scalar>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!scalar_traits<Scalar>::equal(a[i], b[i])) return false;
    }
    return true;
}

/// Coefficients c_m w.r.t. the unnormalized Walsh basis, indexed by the
/// flat mixed-radix multi-index m.
template <class Scalar>
using BasicWalshCoeffs = std::vector<Scalar>;

/// Finite product probability space Ω = ∏ cells with its tensor Walsh basis.
///
/// Per cell, basis vector 0 is the constant 1 and vectors 1..k-1 come from
/// orthogonalizing the outcome indicators 1..k-1 (in order) against the
/// earlier vectors, without normalization. The tensor basis vector e_m is the
/// product of the per-cell vectors m_i; its support is {i : m_i ≠ 0}.
template <class Scalar>
class BasicNoiseModel {
public:
    using RandomVariable = BasicRandomVariable<Scalar>;
    using WalshCoeffs = BasicWalshCoeffs<Scalar>;
    using traits = scalar_traits<Scalar>;

    explicit BasicNoiseModel(std::vector<Cell> cells, std::size_t size_cap = std::size_t{1} << 22)
        : cells_(std::move(cells)) {
        if (cells_.size() > max_cells) throw InputError("at most 63 cells are supported");
        for (std::size_t i = 0; i < cells_.size(); ++i) validate_cell(cells_[i], i);
        size_ = 1;
        for (const Cell& c : cells_) {
            if (size_ > size_cap / c.k()) {
                throw ResourceError("product space exceeds " + std::to_string(size_cap) + " points");
            }
            size_ *= c.k();
        }
        strides_.assign(cells_.size(), 1);
        for (std::size_t i = cells_.size(); i-- > 1;) strides_[i - 1] = strides_[i] * cells_[i].k();
        build_cell_bases();
        build_tables();
    }

    std::size_t n_cells() const { return cells_.size(); }
    std::size_t size() const { return size_; }
    const std::vector<Cell>& cells() const { return cells_; }
    std::size_t radix(std::size_t i) const { return cells_[i].k(); }
    std::size_t coordinate(std::size_t point, std::size_t i) const { return (point / strides_[i]) % radix(i); }
    const Scalar& point_mass(std::size_t point) const { return mass_[point]; }
    const std::vector<Scalar>& point_masses() const { return mass_; }
    FinitePowerAlgebra algebra() const { return FinitePowerAlgebra(n_cells()); }

    /// Value of cell basis vector j of cell i at outcome o.
    const Scalar& cell_basis(std::size_t i, std::size_t j, std::size_t o) const { return basis_[i][j][o]; }
    const Scalar& cell_norm2(std::size_t i, std::size_t j) const { return basis_norm2_[i][j]; }

    std::uint64_t support_bits(std::size_t m) const { return support_[m]; }
    BoolElem support(std::size_t m) const { return {n_cells(), support_[m]}; }
    const Scalar& walsh_norm2(std::size_t m) const { return walsh_norm2_[m]; }

    RandomVariable walsh_vector(std::size_t m) const {
        RandomVariable v(size_, Scalar(1));
        for (std::size_t w = 0; w < size_; ++w) {
            for (std::size_t i = 0; i < n_cells(); ++i) {
                const std::size_t mi = coordinate(m, i);
                if (mi != 0) v[w] *= basis_[i][mi][coordinate(w, i)];
            }
        }
        return v;
    }

    RandomVariable constant(const Scalar& c) const { return RandomVariable(size_, c); }
    RandomVariable zero_vector() const { return RandomVariable(size_, Scalar(0)); }
    RandomVariable from_values(std::vector<Scalar> values) const {
        if (values.size() != size_) {
            throw InputError("random variable has " + std::to_string(values.size()) + " values, expected " +
                             std::to_string(size_));
        }
        return RandomVariable(std::move(values));
    }

    Scalar inner_product(const RandomVariable& f, const RandomVariable& g) const {
        check(f);
        check(g);
        Scalar s(0);
        for (std::size_t w = 0; w < size_; ++w) s += f[w] * g[w] * mass_[w];
        return s;
    }
    Scalar norm2(const RandomVariable& f) const { return inner_product(f, f); }
    Scalar expectation(const RandomVariable& f) const {
        check(f);
        Scalar s(0);
        for (std::size_t w = 0; w < size_; ++w) s += f[w] * mass_[w];
        return s;
    }

    /// c_m = ⟨ψ, e_m⟩ / ‖e_m‖², by separable per-axis transforms.
    WalshCoeffs coefficients(const RandomVariable& psi) const {
        check(psi);
        WalshCoeffs c = psi.values;
        for (std::size_t i = 0; i < n_cells(); ++i) apply_axis(c, i, analysis_[i]);
        return c;
    }

    RandomVariable reconstruct(const WalshCoeffs& c) const {
        if (c.size() != size_) throw InputError("coefficient vector has wrong length");
        std::vector<Scalar> v = c;
        for (std::size_t i = 0; i < n_cells(); ++i) apply_axis(v, i, synthesis_[i]);
        return RandomVariable(std::move(v));
    }

    /// Q_x ψ: zero every Walsh coefficient whose support is not inside x.
    RandomVariable project(const BoolElem& x, const RandomVariable& psi) const {
        check_elem(x);
        WalshCoeffs c = coefficients(psi);
        for (std::size_t m = 0; m < size_; ++m) {
            if ((support_[m] & ~x.bits()) != 0) c[m] = Scalar(0);
        }
        return reconstruct(c);
    }

    /// F_x: points grouped by their coordinates in x.
    Partition sigma_field_of(const BoolElem& x) const {
        check_elem(x);
        return Partition::by_key(size_, [&](std::size_t w) {
            std::size_t key = 0;
            for (std::size_t i = 0; i < n_cells(); ++i) {
                if (x.contains(i)) key += coordinate(w, i) * strides_[i];
            }
            return key;
        });
    }

    /// Conditional expectation given F_x by direct block averaging.
    RandomVariable project_oracle(const BoolElem& x, const RandomVariable& psi) const {
        check(psi);
        const Partition blocks = sigma_field_of(x);
        std::vector<Scalar> weighted(blocks.block_count(), Scalar(0));
        std::vector<Scalar> block_mass(blocks.block_count(), Scalar(0));
        for (std::size_t w = 0; w < size_; ++w) {
            weighted[blocks.label(w)] += psi[w] * mass_[w];
            block_mass[blocks.label(w)] += mass_[w];
        }
        for (std::size_t b = 0; b < weighted.size(); ++b) weighted[b] /= block_mass[b];
        RandomVariable out(size_, Scalar(0));
        for (std::size_t w = 0; w < size_; ++w) out[w] = weighted[blocks.label(w)];
        return out;
    }

    void check(const RandomVariable& f) const {
        if (f.size() != size_) {
            throw InputError("random variable has " + std::to_string(f.size()) + " values, model has " +
                             std::to_string(size_) + " points");
        }
    }
    void check_elem(const BoolElem& x) const {
        if (x.n_cells() != n_cells()) throw InputError("element belongs to an algebra of a different size");
    }

private:
    using Matrix = std::vector<std::vector<Scalar>>;

    void build_cell_bases() {
        basis_.resize(n_cells());
        basis_norm2_.resize(n_cells());
        analysis_.resize(n_cells());
        synthesis_.resize(n_cells());
        for (std::size_t i = 0; i < n_cells(); ++i) {
            const std::size_t k = radix(i);
            std::vector<Scalar> p(k);
            for (std::size_t o = 0; o < k; ++o) p[o] = traits::from_rational(cells_[i].probs[o]);
            auto weighted_dot = [&](const std::vector<Scalar>& a, const std::vector<Scalar>& b) {
                Scalar s(0);
                for (std::size_t o = 0; o < k; ++o) s += a[o] * b[o] * p[o];
                return s;
            };
            Matrix& v = basis_[i];
            v.assign(k, std::vector<Scalar>(k, Scalar(0)));
            std::vector<Scalar>& nu = basis_norm2_[i];
            nu.assign(k, Scalar(0));
            std::fill(v[0].begin(), v[0].end(), Scalar(1));
            nu[0] = Scalar(1);
            for (std::size_t j = 1; j < k; ++j) {
                std::vector<Scalar> u(k, Scalar(0));
                u[j] = Scalar(1);
                for (std::size_t l = 0; l < j; ++l) {
                    const Scalar f = weighted_dot(u, v[l]) / nu[l];
                    for (std::size_t o = 0; o < k; ++o) u[o] -= f * v[l][o];
                }
                v[j] = u;
                nu[j] = weighted_dot(u, u);
            }
            analysis_[i].assign(k, std::vector<Scalar>(k, Scalar(0)));
            synthesis_[i].assign(k, std::vector<Scalar>(k, Scalar(0)));
            for (std::size_t j = 0; j < k; ++j) {
                for (std::size_t o = 0; o < k; ++o) {
                    analysis_[i][j][o] = p[o] * v[j][o] / nu[j];
                    synthesis_[i][o][j] = v[j][o];
                }
            }
        }
    }

    void build_tables() {
        mass_.assign(size_, Scalar(1));
        support_.assign(size_, 0);
        walsh_norm2_.assign(size_, Scalar(1));
        for (std::size_t w = 0; w < size_; ++w) {
            for (std::size_t i = 0; i < n_cells(); ++i) {
                const std::size_t o = coordinate(w, i);
                mass_[w] *= traits::from_rational(cells_[i].probs[o]);
                if (o != 0) {
                    support_[w] |= std::uint64_t{1} << i;
                    walsh_norm2_[w] *= basis_norm2_[i][o];
                }
            }
        }
    }

    void apply_axis(std::vector<Scalar>& data, std::size_t i, const Matrix& t) const {
        const std::size_t k = radix(i);
        const std::size_t stride = strides_[i];
        const std::size_t outer = size_ / (k * stride);
        std::vector<Scalar> in(k), out(k);
        for (std::size_t o = 0; o < outer; ++o) {
            for (std::size_t s = 0; s < stride; ++s) {
                const std::size_t base = o * k * stride + s;
                for (std::size_t j = 0; j < k; ++j) in[j] = data[base + j * stride];
                for (std::size_t r = 0; r < k; ++r) {
                    Scalar acc(0);
                    for (std::size_t j = 0; j < k; ++j) {
                        if (!traits::is_zero(in[j])) acc += t[r][j] * in[j];
                    }
                    out[r] = acc;
                }
                for (std::size_t j = 0; j < k; ++j) data[base + j * stride] = out[j];
            }
        }
    }

    std::vector<Cell> cells_;
    std::size_t size_ = 1;
    std::vector<std::size_t> strides_;
    std::vector<Matrix> basis_;
    std::vector<std::vector<Scalar>> basis_norm2_;
    std::vector<Matrix> analysis_;
    std::vector<Matrix> synthesis_;
    std::vector<Scalar> mass_;
    std::vector<std::uint64_t> support_;
    std::vector<Scalar> walsh_norm2_;
};

using NoiseModel = BasicNoiseModel<Rational>;
using FloatNoiseModel = BasicNoiseModel<double>;
using RandomVariable = BasicRandomVariable<Rational>;
using FloatRandomVariable = BasicRandomVariable<double>;
using WalshCoeffs = BasicWalshCoeffs<Rational>;

inline constexpr std::size_t default_exact_cap = 4096;

inline NoiseModel build_cell_model(std::vector<Cell> cells) { return NoiseModel(std::move(cells)); }

template <class Scalar>
Scalar inner_product(const BasicNoiseModel<Scalar>& model, const BasicRandomVariable<Scalar>& f,
                     const BasicRandomVariable<Scalar>& g) {
    return model.inner_product(f, g);
}

template <class Scalar>
Partition sigma_field_of(const BasicNoiseModel<Scalar>& model, const BoolElem& x) {
    return model.sigma_field_of(x);
}

template <class Scalar>
BasicRandomVariable<Scalar> project(const BasicNoiseModel<Scalar>& model, const BoolElem& x,
                                    const BasicRandomVariable<Scalar>& psi) {
    return model.project(x, psi);
}

template <class Scalar>
BasicRandomVariable<Scalar> project_oracle(const BasicNoiseModel<Scalar>& model, const BoolElem& x,
                                           const BasicRandomVariable<Scalar>& psi) {
    return model.project_oracle(x, psi);
}

/// Random cell with integer weights in [1, max_weight], normalized.
template <class Rng>
Cell random_cell(Rng& rng, std::size_t k, unsigned max_weight = 9) {
    std::uniform_int_distribution<unsigned> weight(1, max_weight);
    std::vector<unsigned> w(k);
    unsigned total = 0;
    for (auto& x : w) total += (x = weight(rng));
    Cell c;
    for (unsigned x : w) {
        Rational p(x, total);
        p.canonicalize();
        c.probs.push_back(p);
    }
    return c;
}

/// Random vector with small integer entries.
template <class Scalar, class Rng>
BasicRandomVariable<Scalar> random_vector(const BasicNoiseModel<Scalar>& model, Rng& rng, int bound = 5) {
    std::uniform_int_distribution<int> entry(-bound, bound);
    BasicRandomVariable<Scalar> v(model.size(), Scalar(0));
    for (std::size_t w = 0; w < model.size(); ++w) v[w] = Scalar(entry(rng));
    return v;
}

} // namespace noise_lab
