#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <tuple>
#include <utility>
#include <string>
#include <vector>

#include "boolalg.hpp"
#include "linalg.hpp"
#include "model.hpp"
#include "partition.hpp"

namespace noise_lab {

// ---------------------------------------------------------------------------
// Subspace helpers shared by the chaos and spectrum modules.

inline Subspace span_of(std::size_t ambient, const std::vector<RandomVariable>& vectors) {
    std::vector<RationalVector> rows;
    rows.reserve(vectors.size());
    for (const auto& v : vectors) rows.push_back(v.values);
    return Subspace::span(ambient, std::move(rows));
}

/// Span of the Walsh vectors whose support satisfies `keep`.
inline Subspace walsh_span(const NoiseModel& model, const std::function<bool(std::uint64_t)>& keep) {
    std::vector<RandomVariable> vs;
    for (std::size_t m = 0; m < model.size(); ++m) {
        if (keep(model.support_bits(m))) vs.push_back(model.walsh_vector(m));
    }
    return span_of(model.size(), vs);
}

/// {ψ : op_j(ψ) = 0 for all j}, by successive restriction starting from H.
inline Subspace common_kernel(const NoiseModel& model,
                              const std::vector<std::function<RandomVariable(const RandomVariable&)>>& ops) {
    std::vector<RationalVector> kernel = Subspace::whole(model.size()).basis();
    for (const auto& op : ops) {
        kernel = restrict_kernel(kernel, [&](const RationalVector& v) { return op(RandomVariable(v)).values; });
        if (kernel.empty()) break;
    }
    return Subspace::span(model.size(), std::move(kernel));
}

inline std::vector<RandomVariable> as_vectors(const Subspace& s) {
    std::vector<RandomVariable> out;
    for (const auto& v : s.basis()) out.emplace_back(v);
    return out;
}

// ---------------------------------------------------------------------------
// First chaos.

struct ChaosSubspace {
    std::vector<RandomVariable> basis;
    std::size_t dimension = 0;
    /// The solved space equals the span of Walsh vectors with |support| = 1.
    bool matches_first_level_walsh = false;
};

/// Operator ψ ↦ ψ − Q_xψ − Q_{x′}ψ.
inline std::function<RandomVariable(const RandomVariable&)> split_defect_op(const NoiseModel& model, BoolElem x) {
    return [&model, x](const RandomVariable& psi) {
        return psi - model.project(x, psi) - model.project(x.complement(), psi);
    };
}

/// Solution space of ψ = Q_xψ + Q_{x′}ψ over the given elements.
inline Subspace split_solution_space(const NoiseModel& model, const std::vector<BoolElem>& xs) {
    std::vector<std::function<RandomVariable(const RandomVariable&)>> ops;
    for (const BoolElem& x : xs) ops.push_back(split_defect_op(model, x));
    return common_kernel(model, ops);
}

/// H^(1) by exact elimination. The complement-split constraint is imposed for
/// x = 0 and every singleton; in the power-set algebra these already force
/// every Walsh coefficient off the first level to vanish.
inline ChaosSubspace first_chaos_basis(const NoiseModel& model) {
    const std::size_t n = model.n_cells();
    std::vector<BoolElem> xs{BoolElem::zero(n)};
    for (std::size_t i = 0; i < n; ++i) xs.push_back(BoolElem::singleton(n, i));
    const Subspace solved = split_solution_space(model, xs);
    const Subspace level_one =
        walsh_span(model, [](std::uint64_t s) { return std::popcount(s) == 1; });
    return {as_vectors(solved), solved.dim(), solved == level_one};
}

/// H^(1) straight from the definition: Q_{x∨y}ψ = Q_xψ + Q_yψ for every
/// disjoint pair, with Q_x computed by block averaging. Quadratic in 3^n;
/// meant as an oracle for small models.
inline Subspace first_chaos_pairwise_oracle(const NoiseModel& model) {
    const std::size_t n = model.n_cells();
    const std::uint64_t count = std::uint64_t{1} << n;
    std::vector<std::function<RandomVariable(const RandomVariable&)>> ops;
    const std::uint64_t full = BoolElem::full_mask(n);
    for (std::uint64_t x = 0; x < count; ++x) {
        const std::uint64_t rest = full & ~x;
        for (std::uint64_t y = rest;; y = (y - 1) & rest) {
            if (x <= y) {
                const BoolElem ex(n, x), ey(n, y), ej(n, x | y);
                ops.push_back([&model, ex, ey, ej](const RandomVariable& psi) {
                    return model.project_oracle(ej, psi) - model.project_oracle(ex, psi) -
                           model.project_oracle(ey, psi);
                });
            }
            if (y == 0) break;
        }
    }
    return common_kernel(model, ops);
}

// ---------------------------------------------------------------------------
// Additivity on a subalgebra and the atomless defect.

struct AdditivityCheck {
    bool mean_zero = false;
    /// Disjoint form: Q_{x∨y}ψ = Q_xψ + Q_yψ for all disjoint x, y ∈ b.
    bool disjoint_form = false;
    /// Lattice form: Q_0ψ = 0 and Q_{x∨y}ψ + Q_{x∧y}ψ = Q_xψ + Q_yψ for all x, y ∈ b.
    bool lattice_form = false;

    bool holds() const { return mean_zero && disjoint_form && lattice_form; }
    bool forms_agree() const { return disjoint_form == lattice_form; }
};

inline AdditivityCheck check_additivity(const NoiseModel& model, const RandomVariable& psi, const Subalgebra& b) {
    model.check(psi);
    if (b.n_cells() != model.n_cells()) throw InputError("subalgebra belongs to a different algebra");
    const std::uint64_t count = b.element_count();
    std::vector<RandomVariable> q;
    q.reserve(count);
    for (std::uint64_t e = 0; e < count; ++e) q.push_back(model.project(b.element(e), psi));
    AdditivityCheck r;
    r.mean_zero = q[0].is_zero();
    r.disjoint_form = true;
    for (std::uint64_t x = 0; x < count && r.disjoint_form; ++x) {
        for (std::uint64_t y = 0; y < count; ++y) {
            if ((x & y) != 0) continue;
            if (q[x | y] != q[x] + q[y]) {
                r.disjoint_form = false;
                break;
            }
        }
    }
    r.lattice_form = r.mean_zero;
    for (std::uint64_t x = 0; x < count && r.lattice_form; ++x) {
        for (std::uint64_t y = x + 1; y < count; ++y) {
            if (q[x | y] + q[x & y] != q[x] + q[y]) {
                r.lattice_form = false;
                break;
            }
        }
    }
    return r;
}

/// Q_0ψ = 0 and Q_{x∨y}ψ = Q_xψ + Q_yψ on disjoint x, y ∈ b.
inline bool satisfies_additivity(const NoiseModel& model, const RandomVariable& psi, const Subalgebra& b) {
    return check_additivity(model, psi, b).holds();
}

/// Random block partition of the cells.
template <class Rng>
Subalgebra random_subalgebra(std::size_t n, Rng& rng) {
    if (n == 0) return Subalgebra::trivial(FinitePowerAlgebra(0));
    std::vector<std::uint64_t> masks(n, 0);
    for (std::size_t i = 0; i < n; ++i) masks[rng() % n] |= std::uint64_t{1} << i;
    std::vector<BoolElem> blocks;
    for (std::uint64_t m : masks) {
        if (m != 0) blocks.emplace_back(n, m);
    }
    std::sort(blocks.begin(), blocks.end());
    return Subalgebra(FinitePowerAlgebra(n), std::move(blocks));
}

/// ψ = Σ_j φ_j with φ_j ∈ H_{B_j} ⊖ H_0 over the atoms B_j of b, each term
/// dropped with probability 1/3. Every such ψ is additive on b.
template <class Rng>
RandomVariable random_block_vector(const NoiseModel& model, const Subalgebra& b, Rng& rng) {
    const BoolElem zero = BoolElem::zero(model.n_cells());
    RandomVariable psi = model.zero_vector();
    for (const BoolElem& block : b.blocks()) {
        if (rng() % 3 == 0) continue;
        const RandomVariable r = random_vector(model, rng);
        psi += model.project(block, r) - model.project(zero, r);
    }
    return psi;
}

struct DefectWitness {
    BoolElem atom;
    Rational norm2;
    double attained = 0.0;
};

struct DefectCertificate {
    Rational delta2;
    double delta = 0.0;
    std::vector<DefectWitness> witnesses;
    /// Brute-force minimum of max_i ‖Q_{x_i}ψ‖² over all partitions of unity in b
    /// (only when b has at most 5 atoms).
    std::optional<Rational> brute_force_min;
};

namespace detail {

/// Calls `visit` with every set partition of {0..m-1}, as restricted growth strings.
inline void for_each_set_partition(std::size_t m, const std::function<void(const std::vector<std::size_t>&)>& visit) {
    std::vector<std::size_t> a(m, 0);
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t used) {
        if (i == m) {
            visit(a);
            return;
        }
        for (std::size_t c = 0; c <= used && c < m; ++c) {
            a[i] = c;
            rec(i + 1, std::max(used, c + 1));
        }
    };
    rec(0, 0);
}

} // namespace detail

inline DefectCertificate atomless_defect(const NoiseModel& model, const RandomVariable& psi, const Subalgebra& b) {
    if (!satisfies_additivity(model, psi, b)) throw InputError("additivity on b fails");
    DefectCertificate cert;
    cert.delta2 = 0;
    for (const BoolElem& atom : enumerate_partition_atoms(b)) {
        const Rational n2 = model.norm2(model.project(atom, psi));
        cert.witnesses.push_back({atom, n2, std::sqrt(to_double(n2))});
        if (n2 > cert.delta2) cert.delta2 = n2;
    }
    cert.delta = std::sqrt(to_double(cert.delta2));
    const auto& blocks = b.blocks();
    if (blocks.size() <= 5) {
        std::optional<Rational> best;
        detail::for_each_set_partition(blocks.size(), [&](const std::vector<std::size_t>& labels) {
            std::vector<std::uint64_t> parts;
            for (std::size_t j = 0; j < labels.size(); ++j) {
                if (labels[j] >= parts.size()) parts.resize(labels[j] + 1, 0);
                parts[labels[j]] |= blocks[j].bits();
            }
            Rational worst = 0;
            for (std::uint64_t p : parts) {
                const Rational n2 = model.norm2(model.project(BoolElem(model.n_cells(), p), psi));
                if (n2 > worst) worst = n2;
            }
            if (!best || worst < *best) best = worst;
        });
        if (blocks.empty()) best = Rational(0);
        cert.brute_force_min = best;
    }
    return cert;
}

// ---------------------------------------------------------------------------
// The quantitative bound |E(ψξη)| ≤ δ‖ξ‖‖η‖.

inline Rational expect_triple(const NoiseModel& model, const RandomVariable& psi, const RandomVariable& xi,
                              const RandomVariable& eta) {
    return model.expectation(psi * xi * eta);
}

struct DefectBoundReport {
    Rational delta2;
    /// Largest squared entry of C (normalized Walsh pair coefficients).
    Rational max_entry2;
    bool entrywise_ok = true;
    double sigma_max = 0.0;
    bool spectral_ok = true;
    /// The entrywise maximum reaches δ exactly.
    bool tight = false;
    /// Flat Walsh indices (part in x, part in x′) of the largest entry.
    std::size_t row_index = 0;
    std::size_t col_index = 0;
    /// First entry exceeding δ, same labelling.
    std::optional<std::pair<std::size_t, std::size_t>> counterexample;

    bool passed() const { return entrywise_ok && spectral_ok; }
};

inline constexpr double defect_tolerance = 1e-9;

namespace detail {

inline double power_iteration(const std::vector<std::vector<double>>& c, std::vector<double> v) {
    const std::size_t rows = c.size(), cols = c.front().size();
    std::vector<double> w(rows);
    double sigma = 0.0;
    for (int iter = 0; iter < 10000; ++iter) {
        double nv = 0;
        for (double e : v) nv += e * e;
        nv = std::sqrt(nv);
        if (nv == 0) return 0.0;
        for (double& e : v) e /= nv;
        for (std::size_t i = 0; i < rows; ++i) {
            w[i] = 0;
            for (std::size_t j = 0; j < cols; ++j) w[i] += c[i][j] * v[j];
        }
        double nw = 0;
        for (double e : w) nw += e * e;
        const double next = std::sqrt(nw);
        for (std::size_t j = 0; j < cols; ++j) {
            v[j] = 0;
            for (std::size_t i = 0; i < rows; ++i) v[j] += c[i][j] * w[i];
        }
        const bool converged = std::abs(next - sigma) <= 1e-15 * std::max(1.0, next);
        sigma = next;
        if (converged) break;
    }
    return sigma;
}

/// Largest singular value by power iteration on CᵀC, maximized over a few
/// fixed start vectors.
inline double largest_singular_value(const std::vector<std::vector<double>>& c) {
    if (c.empty() || c.front().empty()) return 0.0;
    const std::size_t cols = c.front().size();
    double best = 0.0;
    std::mt19937_64 rng(0x5eed);
    std::normal_distribution<double> gauss;
    for (int start = 0; start < 4; ++start) {
        std::vector<double> v(cols);
        for (std::size_t j = 0; j < cols; ++j) {
            v[j] = start == 0 ? 1.0 + 0.01 * static_cast<double>(j % 7) : gauss(rng);
        }
        best = std::max(best, power_iteration(c, std::move(v)));
    }
    return best;
}

} // namespace detail

/// For unit ξ ∈ H_x ⊖ H_0 and η ∈ H_{x′} ⊖ H_0, E(ψξη) is the bilinear form
/// of the matrix C_{jk} = c_m‖e_m‖ over Walsh indices m splitting as a
/// nonconstant part j in x and a nonconstant part k in x′. The bound
/// requires σ_max(C) ≤ δ; the entrywise consequence |C_{jk}| ≤ δ is checked
/// exactly.
inline DefectBoundReport defect_bound_check(const NoiseModel& model, const RandomVariable& psi, const Subalgebra& b,
                                            const BoolElem& x) {
    if (!model.project(BoolElem::zero(model.n_cells()), psi).is_zero()) throw InputError("Q_0ψ ≠ 0");
    const DefectCertificate cert = atomless_defect(model, psi, b);
    model.check_elem(x);
    DefectBoundReport rep;
    rep.delta2 = cert.delta2;
    rep.max_entry2 = 0;
    const WalshCoeffs c = model.coefficients(psi);
    const std::uint64_t xb = x.bits(), xcb = x.complement().bits();

    // Row / column label of m: the flat index of m restricted to x (resp. x′).
    std::vector<std::size_t> stride(model.n_cells(), 1);
    for (std::size_t i = model.n_cells(); i-- > 1;) stride[i - 1] = stride[i] * model.radix(i);
    auto restrict_index = [&](std::size_t m, std::uint64_t mask) {
        std::size_t r = 0;
        for (std::size_t i = 0; i < model.n_cells(); ++i) {
            if ((mask >> i) & 1U) r += model.coordinate(m, i) * stride[i];
        }
        return r;
    };
    std::map<std::size_t, std::size_t> row_of, col_of;
    std::vector<std::tuple<std::size_t, std::size_t, double>> entries;
    bool have_max = false;
    for (std::size_t m = 0; m < model.size(); ++m) {
        const std::uint64_t s = model.support_bits(m);
        if ((s & xb) == 0 || (s & xcb) == 0) continue;
        const std::size_t j = restrict_index(m, xb), k = restrict_index(m, xcb);
        const Rational e2 = c[m] * c[m] * model.walsh_norm2(m);
        if (!have_max || e2 > rep.max_entry2) {
            rep.max_entry2 = e2;
            rep.row_index = j;
            rep.col_index = k;
            have_max = true;
        }
        if (e2 > rep.delta2 && rep.entrywise_ok) {
            rep.entrywise_ok = false;
            rep.counterexample = std::pair{j, k};
        }
        const double value = (sgn(c[m]) < 0 ? -1.0 : 1.0) * std::sqrt(to_double(e2));
        const std::size_t r = row_of.try_emplace(j, row_of.size()).first->second;
        const std::size_t q = col_of.try_emplace(k, col_of.size()).first->second;
        entries.emplace_back(r, q, value);
    }
    std::vector<std::vector<double>> mat(row_of.size(), std::vector<double>(col_of.size(), 0.0));
    for (auto [r, q, v] : entries) mat[r][q] = v;
    rep.sigma_max = detail::largest_singular_value(mat);
    rep.spectral_ok = rep.sigma_max <= cert.delta + defect_tolerance;
    rep.tight = have_max && rep.max_entry2 == rep.delta2 && sgn(rep.delta2) > 0;
    return rep;
}

// ---------------------------------------------------------------------------
// Complement splitting and the product test.

inline bool split_check(const NoiseModel& model, const RandomVariable& psi, const BoolElem& x) {
    return psi == model.project(x, psi) + model.project(x.complement(), psi);
}

/// {ψ : ψ = Q_xψ + Q_{x′}ψ}, solved by elimination, compared with the span of
/// Walsh vectors whose support is a nonempty subset of x or of x′.
inline bool verify_split_subspace(const NoiseModel& model, const BoolElem& x) {
    const Subspace solved = split_solution_space(model, {x});
    const std::uint64_t xb = x.bits(), xcb = x.complement().bits();
    const Subspace expected = walsh_span(model, [&](std::uint64_t s) {
        return s != 0 && ((s & ~xb) == 0 || (s & ~xcb) == 0);
    });
    return solved == expected;
}

/// Eψ = 0 and E(ψ e f) = 0 for every nonconstant Walsh vector e of H_x and f
/// of H_{x′}; computed by direct sums over Ω.
/// `walsh` is the full Walsh basis in flat order, as from all_walsh_vectors.
inline bool product_test(const NoiseModel& model, const RandomVariable& psi, const BoolElem& x,
                         const std::vector<RandomVariable>& walsh) {
    model.check_elem(x);
    if (walsh.size() != model.size()) throw InputError("Walsh table does not match the model");
    if (sgn(model.expectation(psi)) != 0) return false;
    const std::uint64_t xb = x.bits(), xcb = x.complement().bits();
    std::vector<const RandomVariable*> left, right;
    for (std::size_t m = 0; m < model.size(); ++m) {
        const std::uint64_t s = model.support_bits(m);
        if (s == 0) continue;
        if ((s & ~xb) == 0) left.push_back(&walsh[m]);
        if ((s & ~xcb) == 0) right.push_back(&walsh[m]);
    }
    // E(ψef) = Σ_w P(w) ψ(w) e(w) f(w); the weighted product is formed once per e.
    std::vector<Rational> weighted(model.size());
    Rational acc, term;
    for (const RandomVariable* e : left) {
        for (std::size_t w = 0; w < model.size(); ++w) weighted[w] = psi[w] * (*e)[w] * model.point_mass(w);
        for (const RandomVariable* f : right) {
            acc = 0;
            for (std::size_t w = 0; w < model.size(); ++w) {
                if (sgn(weighted[w]) == 0) continue;
                mpq_mul(term.get_mpq_t(), weighted[w].get_mpq_t(), (*f)[w].get_mpq_t());
                acc += term;
            }
            if (sgn(acc) != 0) return false;
        }
    }
    return true;
}

inline std::vector<RandomVariable> all_walsh_vectors(const NoiseModel& model) {
    std::vector<RandomVariable> out;
    out.reserve(model.size());
    for (std::size_t m = 0; m < model.size(); ++m) out.push_back(model.walsh_vector(m));
    return out;
}

inline bool product_test(const NoiseModel& model, const RandomVariable& psi, const BoolElem& x) {
    return product_test(model, psi, x, all_walsh_vectors(model));
}

// ---------------------------------------------------------------------------
// Classification.

/// Common refinement of the level-set partitions of the given vectors.
inline Partition sigma_field_generated(std::size_t size, const std::vector<RandomVariable>& vectors) {
    return Partition::by_key(size, [&](std::size_t w) {
        std::vector<Rational> key;
        key.reserve(vectors.size());
        for (const auto& v : vectors) key.push_back(v[w]);
        return key;
    });
}

inline Partition sigma_field_generated(const NoiseModel& model, const std::vector<RandomVariable>& vectors) {
    for (const auto& v : vectors) model.check(v);
    return sigma_field_generated(model.size(), vectors);
}

enum class ChaosClass { Classical, Black, Intermediate };

inline const char* to_string(ChaosClass c) {
    switch (c) {
    case ChaosClass::Classical: return "classical";
    case ChaosClass::Black: return "black";
    case ChaosClass::Intermediate: return "intermediate";
    }
    return "?";
}

struct Classification {
    ChaosClass kind = ChaosClass::Black;
    /// The noise itself is trivial (no cells); "black" is then only the
    /// letter of the definition.
    bool degenerate = false;
    std::size_t first_chaos_dim = 0;
    Partition generated;
};

inline Classification classify(const NoiseModel& model) {
    const ChaosSubspace h1 = first_chaos_basis(model);
    Classification c;
    c.first_chaos_dim = h1.dimension;
    c.generated = sigma_field_generated(model, h1.basis);
    c.degenerate = model.n_cells() == 0;
    if (h1.dimension == 0) {
        c.kind = ChaosClass::Black;
    } else if (c.generated.is_discrete()) {
        c.kind = ChaosClass::Classical;
    } else {
        c.kind = ChaosClass::Intermediate;
    }
    return c;
}

/// x ↦ ‖Q_xψ‖² is additive on disjoint pairs, over all of B.
inline bool norm_additive(const NoiseModel& model, const RandomVariable& psi) {
    const std::size_t n = model.n_cells();
    const std::uint64_t count = std::uint64_t{1} << n;
    std::vector<Rational> n2(count);
    for (std::uint64_t x = 0; x < count; ++x) n2[x] = model.norm2(model.project(BoolElem(n, x), psi));
    for (std::uint64_t x = 0; x < count; ++x) {
        for (std::uint64_t y = 0; y < count; ++y) {
            if ((x & y) == 0 && n2[x | y] != n2[x] + n2[y]) return false;
        }
    }
    return true;
}

} // namespace noise_lab
