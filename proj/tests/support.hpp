#pragma once

#include <cstdint>
#include <vector>

#include "noise_lab/model.hpp"

namespace noise_lab::testing {

inline Rational q(long p, long d = 1) {
    Rational r(p, d);
    r.canonicalize();
    return r;
}

inline NoiseModel fair_coins(std::size_t n) { return NoiseModel(std::vector<Cell>(n, uniform_cell(2))); }

/// r_i(ω) = +1 when coordinate i is outcome 0, −1 otherwise.
inline RandomVariable sign(const NoiseModel& model, std::size_t i) {
    RandomVariable r = model.zero_vector();
    for (std::size_t w = 0; w < model.size(); ++w) r[w] = model.coordinate(w, i) == 0 ? 1 : -1;
    return r;
}

inline BoolElem elem(std::size_t n, std::initializer_list<std::size_t> members) { return BoolElem::of(n, members); }

/// Every model shape (k_0, ..., k_{n-1}) with k_i ∈ ks and n ≤ max_n.
inline std::vector<std::vector<std::size_t>> shapes(std::size_t max_n, const std::vector<std::size_t>& ks) {
    std::vector<std::vector<std::size_t>> out{{}};
    std::vector<std::vector<std::size_t>> layer{{}};
    for (std::size_t n = 1; n <= max_n; ++n) {
        std::vector<std::vector<std::size_t>> next;
        for (const auto& s : layer) {
            for (std::size_t k : ks) {
                auto t = s;
                t.push_back(k);
                next.push_back(t);
            }
        }
        out.insert(out.end(), next.begin(), next.end());
        layer = std::move(next);
    }
    return out;
}

template <class Rng>
NoiseModel random_model(Rng& rng, const std::vector<std::size_t>& shape) {
    std::vector<Cell> cells;
    for (std::size_t k : shape) cells.push_back(random_cell(rng, k));
    return NoiseModel(std::move(cells));
}

} // namespace noise_lab::testing
