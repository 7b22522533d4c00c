#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "model.hpp"

namespace noise_lab {

struct ProjectionLawOptions {
    /// Pairs are enumerated exhaustively when 2^n is at most this.
    std::uint64_t exhaustive_limit = 64;
    std::size_t sample_pairs = 256;
    std::size_t psi_samples = 2;
    std::uint64_t seed = 0;
};

template <class Scalar>
struct ProjectionLawViolation {
    std::string law;
    BoolElem x;
    BoolElem y;
    std::optional<BasicRandomVariable<Scalar>> psi;
    std::string detail;
};

template <class Scalar>
struct ProjectionLawReport {
    bool exhaustive = false;
    std::size_t pairs_checked = 0;
    std::size_t superadditivity_checks = 0;
    /// Disjoint pairs where ‖Q_xψ‖²+‖Q_yψ‖² < ‖Q_{x∨y}ψ‖² strictly.
    std::size_t strict_superadditive = 0;
    std::vector<ProjectionLawViolation<Scalar>> violations;

    bool passed() const { return violations.empty(); }
};

namespace detail {

template <class Rng>
std::vector<std::pair<std::uint64_t, std::uint64_t>> law_pairs(std::size_t n, const ProjectionLawOptions& opt,
                                                               Rng& rng, bool& exhaustive) {
    const std::uint64_t count = std::uint64_t{1} << n;
    std::vector<std::pair<std::uint64_t, std::uint64_t>> pairs;
    exhaustive = count <= opt.exhaustive_limit;
    if (exhaustive) {
        for (std::uint64_t x = 0; x < count; ++x) {
            for (std::uint64_t y = 0; y < count; ++y) pairs.emplace_back(x, y);
        }
    } else {
        std::uniform_int_distribution<std::uint64_t> pick(0, count - 1);
        for (std::size_t s = 0; s < opt.sample_pairs; ++s) {
            const std::uint64_t x = pick(rng);
            // Half the samples are forced disjoint so the superadditivity check sees them.
            std::uint64_t y = pick(rng);
            if (s % 2 == 0) y &= ~x;
            pairs.emplace_back(x, y);
        }
    }
    return pairs;
}

} // namespace detail

/// Checks, over pairs (x, y):
///   (i)   Q_x Q_y = Q_{x∧y};
///   (ii)  Q_{x∨y} + Q_{x∧y} − Q_x − Q_y ≥ 0, as a diagonal {0,1} operator in the Walsh basis;
///   (iii) ‖Q_xψ‖² + ‖Q_yψ‖² ≤ ‖Q_{x∨y}ψ‖² for x∧y = 0 and random ψ with Q_0ψ = 0.
/// The exact backend reads off each Q_x in the Walsh basis through the
/// conditional-expectation oracle; the float backend works with random
/// unit vectors at tolerance 1e-9.
template <class Scalar>
ProjectionLawReport<Scalar> verify_projection_laws(const BasicNoiseModel<Scalar>& model,
                                                   const ProjectionLawOptions& opt = {}) {
    using RV = BasicRandomVariable<Scalar>;
    using traits = scalar_traits<Scalar>;
    const std::size_t n = model.n_cells();
    const std::size_t N = model.size();
    std::mt19937_64 rng(opt.seed);
    ProjectionLawReport<Scalar> report;
    const auto pairs = detail::law_pairs(n, opt, rng, report.exhaustive);
    report.pairs_checked = pairs.size();
    auto elem = [&](std::uint64_t b) { return BoolElem(n, b); };
    auto fail = [&](std::string law, std::uint64_t x, std::uint64_t y, std::optional<RV> psi, std::string detail) {
        report.violations.push_back({std::move(law), elem(x), elem(y), std::move(psi), std::move(detail)});
    };

    if constexpr (traits::exact) {
        std::vector<RV> walsh;
        walsh.reserve(N);
        for (std::size_t m = 0; m < N; ++m) walsh.push_back(model.walsh_vector(m));
        std::map<std::uint64_t, std::vector<int>> diag;
        auto diagonal = [&](std::uint64_t x) -> const std::vector<int>& {
            auto it = diag.find(x);
            if (it != diag.end()) return it->second;
            std::vector<int> d(N, -1);
            for (std::size_t m = 0; m < N; ++m) {
                const RV q = model.project_oracle(elem(x), walsh[m]);
                if (q == walsh[m]) {
                    d[m] = 1;
                } else if (q.is_zero()) {
                    d[m] = 0;
                } else {
                    fail("walsh-diagonal", x, x, walsh[m], "Q_x e_m is neither e_m nor 0 for m=" + std::to_string(m));
                }
            }
            return diag.emplace(x, std::move(d)).first->second;
        };
        for (auto [x, y] : pairs) {
            const auto& dx = diagonal(x);
            const auto& dy = diagonal(y);
            const auto& dmeet = diagonal(x & y);
            const auto& djoin = diagonal(x | y);
            for (std::size_t m = 0; m < N; ++m) {
                if (dx[m] * dy[m] != dmeet[m]) {
                    fail("QxQy=Qxy", x, y, walsh[m], "differs on Walsh index " + std::to_string(m));
                    break;
                }
                const int diff = djoin[m] + dmeet[m] - dx[m] - dy[m];
                if (diff != 0 && diff != 1) {
                    fail("Qx+Qy<=Qxvy+Qxy", x, y, walsh[m], "diagonal entry " + std::to_string(diff));
                    break;
                }
            }
        }
    } else {
        (void)N;
    }

    for (std::size_t s = 0; s < opt.psi_samples; ++s) {
        RV psi = random_vector(model, rng);
        if constexpr (traits::exact) {
            psi -= model.constant(model.expectation(psi));
        } else {
            psi -= model.constant(model.expectation(psi));
            const double norm = std::sqrt(model.norm2(psi));
            if (norm > 0) psi *= 1.0 / norm;
        }
        std::map<std::uint64_t, RV> proj;
        auto q = [&](std::uint64_t x) -> const RV& {
            auto it = proj.find(x);
            if (it == proj.end()) it = proj.emplace(x, model.project(elem(x), psi)).first;
            return it->second;
        };
        for (auto [x, y] : pairs) {
            const RV lhs = model.project(elem(x), q(y));
            if (!approx_equal(lhs, q(x & y))) {
                fail("QxQy=Qxy", x, y, psi, "operator identity fails on ψ");
            }
            if constexpr (!traits::exact) {
                const RV d = q(x | y) + q(x & y) - q(x) - q(y);
                if (model.inner_product(d, psi) < -traits::tolerance) {
                    fail("Qx+Qy<=Qxvy+Qxy", x, y, psi, "negative quadratic form");
                }
                const auto cd = model.coefficients(d);
                const auto cp = model.coefficients(psi);
                for (std::size_t m = 0; m < cd.size(); ++m) {
                    if (!traits::is_zero(cd[m]) && !traits::equal(cd[m], cp[m])) {
                        fail("Qx+Qy<=Qxvy+Qxy", x, y, psi,
                             "not a {0,1} diagonal operator at Walsh index " + std::to_string(m));
                        break;
                    }
                }
            }
            if ((x & y) == 0) {
                ++report.superadditivity_checks;
                const Scalar left = model.norm2(q(x)) + model.norm2(q(y));
                const Scalar right = model.norm2(q(x | y));
                if (!traits::less_equal(left, right)) {
                    fail("superadditivity", x, y, psi, "‖Q_xψ‖²+‖Q_yψ‖² > ‖Q_{x∨y}ψ‖²");
                } else if (!traits::equal(left, right)) {
                    ++report.strict_superadditive;
                }
            }
        }
    }
    return report;
}

} // namespace noise_lab
