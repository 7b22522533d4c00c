#pragma once

#include <optional>
#include <string>

#include "../chaos.hpp"
#include "config.hpp"

namespace noise_lab::harness {

struct ChaosSummary {
    std::size_t first_chaos_dim = 0;
    Classification classification;
    std::optional<std::string> subalgebra;
    std::optional<std::string> vector;
    std::optional<AdditivityCheck> additivity;
    std::optional<DefectCertificate> defect;
    /// Over every x ∈ B: all bounds hold / some x attains equality.
    std::optional<bool> bound_holds;
    std::optional<bool> bound_tight;
    std::optional<BoolElem> tight_at;
    double sigma_max = 0.0;
};

inline ChaosSummary summarize_chaos(const ModelConfig& cfg, const std::optional<std::string>& sub,
                                    const std::optional<std::string>& vec) {
    const NoiseModel model = build_model(cfg);
    ChaosSummary s;
    s.classification = classify(model);
    s.first_chaos_dim = s.classification.first_chaos_dim;
    s.subalgebra = sub;
    s.vector = vec;
    if (!vec) return s;
    const RandomVariable psi = config_vector(cfg, *vec);
    const Subalgebra b = sub ? config_subalgebra(cfg, *sub) : Subalgebra::full(model.algebra());
    if (!sub) s.subalgebra = "full";
    s.additivity = check_additivity(model, psi, b);
    if (!s.additivity->holds()) return s;
    s.defect = atomless_defect(model, psi, b);
    s.bound_holds = true;
    s.bound_tight = false;
    for (const auto& x : model.algebra().elements()) {
        const DefectBoundReport rep = defect_bound_check(model, psi, b, x);
        s.sigma_max = std::max(s.sigma_max, rep.sigma_max);
        if (!rep.passed()) s.bound_holds = false;
        if (rep.tight && !*s.bound_tight) {
            s.bound_tight = true;
            s.tight_at = x;
        }
    }
    return s;
}

inline std::string render_chaos_text(const ChaosSummary& s) {
    std::string out = "first chaos dimension: " + std::to_string(s.first_chaos_dim) + "\n";
    out += std::string("classification: ") + to_string(s.classification.kind) +
           (s.classification.degenerate ? " (degenerate: no cells)" : "") + "\n";
    if (!s.vector) return out;
    out += "vector: " + *s.vector + ", subalgebra: " + *s.subalgebra + "\n";
    const AdditivityCheck& a = *s.additivity;
    out += std::string("additivity: ") + (a.holds() ? "holds" : "fails") +
           (a.mean_zero ? "" : " (mean is not zero)") + (a.forms_agree() ? "" : " (forms disagree)") + "\n";
    if (!s.defect) return out;
    out += "delta^2: " + to_string(s.defect->delta2) + "\n";
    out += "delta: " + to_decimal(s.defect->delta) + "\n";
    out += std::string("defect bound: ") + (*s.bound_holds ? "holds" : "VIOLATED") + " for every x";
    if (*s.bound_tight) out += ", tight at x=" + s.tight_at->to_string();
    out += " (largest sigma_max " + to_decimal(s.sigma_max) + ")\n";
    return out;
}

} // namespace noise_lab::harness
