#pragma once

#include <string>
#include <vector>

#include "../spectrum.hpp"
#include "config.hpp"

namespace noise_lab::harness {

struct SpectrumRow {
    BoolElem atom;
    std::uint64_t multiplicity = 0;
    Rational canonical;
    Rational mass;
};

struct SpectrumTable {
    std::string vector_name;
    std::vector<SpectrumRow> rows;
    Rational total;
};

inline SpectrumTable emit_spectrum_report(const ModelConfig& cfg, const std::string& vector_name) {
    const RandomVariable psi = config_vector(cfg, vector_name);
    const NoiseModel model = build_model(cfg);
    const SpectralSpace space(model);
    const SpectralMeasure mu = spectral_measure(model, space, psi);
    SpectrumTable t{vector_name, {}, mu.total()};
    for (std::size_t a = 0; a < space.atom_count(); ++a) {
        t.rows.push_back({space.atom_elem(a), space.multiplicity(a), space.canonical_measure(a), mu.mass[a]});
    }
    return t;
}

inline std::string render_spectrum_text(const SpectrumTable& t) {
    const std::vector<std::string> head{"atom", "multiplicity", "mu", "mu_decimal", "mass", "mass_decimal"};
    std::vector<std::vector<std::string>> cells{head};
    for (const auto& r : t.rows) {
        cells.push_back({r.atom.to_string(), std::to_string(r.multiplicity), to_string(r.canonical), to_decimal(r.canonical),
                         to_string(r.mass), to_decimal(r.mass)});
    }
    std::vector<std::size_t> width(head.size(), 0);
    for (const auto& row : cells) {
        for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
    }
    std::string out = "spectral measure of " + t.vector_name + " (total " + to_string(t.total) + ")\n";
    for (const auto& row : cells) {
        std::string line;
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) line += "  ";
            const std::string& v = row[c];
            const std::string pad(width[c] - v.size(), ' ');
            line += c == 0 ? v + pad : pad + v;
        }
        while (!line.empty() && line.back() == ' ') line.pop_back();
        out += line + "\n";
    }
    return out;
}

/// Exact fraction columns plus 12-significant-digit decimals.
inline std::string render_spectrum_csv(const SpectrumTable& t) {
    std::string out = "atom,multiplicity,mu,mu_decimal,mass,mass_decimal\n";
    for (const auto& r : t.rows) {
        out += "\"" + r.atom.to_string() + "\"," + std::to_string(r.multiplicity) + "," + to_string(r.canonical) + "," +
               to_decimal(r.canonical) + "," + to_string(r.mass) + "," + to_decimal(r.mass) + "\n";
    }
    return out;
}

} // namespace noise_lab::harness
