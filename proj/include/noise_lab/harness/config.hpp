#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "../boolalg.hpp"
#include "../errors.hpp"
#include "../geometry.hpp"
#include "../model.hpp"
#include "../rational.hpp"

namespace noise_lab::harness {

enum class Backend { Exact, Float };

inline const char* to_string(Backend b) { return b == Backend::Exact ? "exact" : "float"; }
using noise_lab::to_string;

inline Backend parse_backend(const std::string& s) {
    if (s == "exact") return Backend::Exact;
    if (s == "float") return Backend::Float;
    throw InputError("backend must be \"exact\" or \"float\", got \"" + s + "\"");
}

struct ModelConfig {
    std::vector<Cell> cells;
    std::map<std::string, std::vector<BoolElem>> subalgebras;
    std::map<std::string, std::vector<Rational>> vectors;
    std::optional<std::vector<Rational>> sample_points;
    Backend backend = Backend::Exact;
    std::uint64_t seed = 0;
    std::size_t depth = 6;
    std::uint64_t exhaustive_limit = 64;
    std::size_t exact_cap = default_exact_cap;

    std::size_t n_cells() const { return cells.size(); }

    friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

namespace detail {

using json = nlohmann::json;

inline void reject_unknown(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
    for (const auto& [key, _] : obj.items()) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || key == a;
        if (!ok) throw InputError(path + (path.empty() ? "" : ".") + key + ": unknown key");
    }
}

inline const json& require(const json& obj, const char* key, const std::string& path) {
    if (!obj.contains(key)) throw InputError(path + (path.empty() ? "" : ".") + key + ": missing");
    return obj.at(key);
}

inline Rational fraction_at(const json& v, const std::string& path) {
    if (!v.is_string()) throw InputError(path + ": expected a fraction string like \"1/3\"");
    try {
        return parse_rational(v.get<std::string>());
    } catch (const InputError& e) {
        throw InputError(path + ": " + e.what());
    }
}

inline std::uint64_t unsigned_at(const json& v, const std::string& path) {
    if (!v.is_number_unsigned()) throw InputError(path + ": expected a non-negative integer");
    return v.get<std::uint64_t>();
}

inline std::vector<Rational> fractions_at(const json& v, const std::string& path) {
    if (!v.is_array()) throw InputError(path + ": expected an array of fraction strings");
    std::vector<Rational> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(fraction_at(v[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

/// 1-based line and column of a byte offset.
inline std::pair<std::size_t, std::size_t> line_col(const std::string& text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

} // namespace detail

/// Parses and validates a config. `source` names the input in error messages.
inline ModelConfig parse_model_config(const std::string& text, const std::string& source = "<config>") {
    using detail::json;
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        // nlohmann reports the byte just past the offending token.
        const auto [line, col] = detail::line_col(text, e.byte == 0 ? 0 : e.byte - 1);
        // Keep nlohmann's reason, drop its own position prefix.
        std::string reason = e.what();
        if (const auto at = reason.find("syntax error"); at != std::string::npos) {
            reason = reason.substr(at);
        } else {
            reason = "JSON parse error";
        }
        throw InputError(source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + reason);
    }
    if (!root.is_object()) throw InputError(source + ": top level must be an object");
    detail::reject_unknown(root, "", {"cells", "subalgebras", "vectors", "embedding", "backend", "seed", "depth",
                                      "exhaustive_limit", "exact_cap"});

    ModelConfig cfg;
    const json& cells = detail::require(root, "cells", "");
    if (!cells.is_array()) throw InputError("cells: expected an array");
    for (std::size_t i = 0; i < cells.size(); ++i) {
        const std::string path = "cells[" + std::to_string(i) + "]";
        const json& c = cells[i];
        if (!c.is_object()) throw InputError(path + ": expected an object");
        detail::reject_unknown(c, path, {"k", "probs"});
        Cell cell{detail::fractions_at(detail::require(c, "probs", path), path + ".probs")};
        if (c.contains("k") && detail::unsigned_at(c.at("k"), path + ".k") != cell.k()) {
            throw InputError(path + ".k: " + std::to_string(c.at("k").get<std::uint64_t>()) + " does not match " +
                             std::to_string(cell.k()) + " probabilities");
        }
        validate_cell(cell, i);
        cfg.cells.push_back(std::move(cell));
    }
    if (cfg.cells.size() > max_cells) throw InputError("cells: at most 63 cells are supported");
    const std::size_t n = cfg.cells.size();

    if (root.contains("backend")) {
        if (!root["backend"].is_string()) throw InputError("backend: expected a string");
        try {
            cfg.backend = parse_backend(root["backend"].get<std::string>());
        } catch (const InputError& e) {
            throw InputError(std::string("backend: ") + e.what());
        }
    }
    if (root.contains("seed")) cfg.seed = detail::unsigned_at(root["seed"], "seed");
    if (root.contains("depth")) {
        cfg.depth = detail::unsigned_at(root["depth"], "depth");
        if (cfg.depth > 20) throw InputError("depth: at most 20");
    }
    if (root.contains("exhaustive_limit")) cfg.exhaustive_limit = detail::unsigned_at(root["exhaustive_limit"], "exhaustive_limit");
    if (root.contains("exact_cap")) cfg.exact_cap = detail::unsigned_at(root["exact_cap"], "exact_cap");

    // Size in saturating arithmetic; vectors are checked against it below.
    std::uint64_t size = 1;
    for (const Cell& c : cfg.cells) size = size > (std::uint64_t{1} << 40) / c.k() ? (std::uint64_t{1} << 40) : size * c.k();

    if (root.contains("subalgebras")) {
        const json& subs = root["subalgebras"];
        if (!subs.is_object()) throw InputError("subalgebras: expected an object of named block lists");
        for (const auto& [name, blocks] : subs.items()) {
            const std::string path = "subalgebras." + name;
            if (!blocks.is_array()) throw InputError(path + ": expected an array of blocks");
            std::vector<BoolElem> parsed;
            for (std::size_t b = 0; b < blocks.size(); ++b) {
                const std::string bpath = path + "[" + std::to_string(b) + "]";
                if (!blocks[b].is_array()) throw InputError(bpath + ": expected an array of cell indices");
                std::vector<std::size_t> members;
                for (std::size_t j = 0; j < blocks[b].size(); ++j) {
                    const auto idx = detail::unsigned_at(blocks[b][j], bpath + "[" + std::to_string(j) + "]");
                    if (idx >= n) throw InputError(bpath + ": cell index " + std::to_string(idx) + " out of range");
                    members.push_back(static_cast<std::size_t>(idx));
                }
                parsed.push_back(BoolElem::of(n, members));
            }
            try {
                Subalgebra(FinitePowerAlgebra(n), parsed);
            } catch (const InputError& e) {
                throw InputError(path + ": " + e.what());
            }
            cfg.subalgebras.emplace(name, std::move(parsed));
        }
    }

    if (root.contains("vectors")) {
        const json& vecs = root["vectors"];
        if (!vecs.is_object()) throw InputError("vectors: expected an object of named value lists");
        for (const auto& [name, values] : vecs.items()) {
            const std::string path = "vectors." + name;
            auto parsed = detail::fractions_at(values, path);
            if (parsed.size() != size) {
                throw InputError(path + ": has " + std::to_string(parsed.size()) + " entries, the model has " +
                                 std::to_string(size) + " points");
            }
            cfg.vectors.emplace(name, std::move(parsed));
        }
    }

    if (root.contains("embedding")) {
        const json& emb = root["embedding"];
        if (!emb.is_object()) throw InputError("embedding: expected an object");
        detail::reject_unknown(emb, "embedding", {"sample_points"});
        auto pts = detail::fractions_at(detail::require(emb, "sample_points", "embedding"), "embedding.sample_points");
        try {
            Embedding(n, pts);
        } catch (const InputError& e) {
            throw InputError(std::string("embedding.") + e.what());
        }
        cfg.sample_points = std::move(pts);
    }
    return cfg;
}

inline ModelConfig load_model_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError(path + ": cannot open");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_model_config(buf.str(), path);
}

/// Canonical JSON rendering; parse_model_config(emit_model_config(c)) == c.
inline std::string emit_model_config(const ModelConfig& cfg) {
    using detail::json;
    json root = json::object();
    json cells = json::array();
    for (const Cell& c : cfg.cells) {
        json probs = json::array();
        for (const auto& p : c.probs) probs.push_back(to_string(p));
        cells.push_back({{"k", c.k()}, {"probs", probs}});
    }
    root["cells"] = cells;
    if (!cfg.subalgebras.empty()) {
        json subs = json::object();
        for (const auto& [name, blocks] : cfg.subalgebras) {
            json bl = json::array();
            for (const auto& b : blocks) bl.push_back(b.members());
            subs[name] = bl;
        }
        root["subalgebras"] = subs;
    }
    if (!cfg.vectors.empty()) {
        json vecs = json::object();
        for (const auto& [name, values] : cfg.vectors) {
            json vs = json::array();
            for (const auto& v : values) vs.push_back(to_string(v));
            vecs[name] = vs;
        }
        root["vectors"] = vecs;
    }
    if (cfg.sample_points) {
        json pts = json::array();
        for (const auto& t : *cfg.sample_points) pts.push_back(to_string(t));
        root["embedding"] = {{"sample_points", pts}};
    }
    root["backend"] = to_string(cfg.backend);
    root["seed"] = cfg.seed;
    root["depth"] = cfg.depth;
    root["exhaustive_limit"] = cfg.exhaustive_limit;
    root["exact_cap"] = cfg.exact_cap;
    return root.dump(2) + "\n";
}

inline NoiseModel build_model(const ModelConfig& cfg) { return NoiseModel(cfg.cells, cfg.exact_cap); }

inline RandomVariable config_vector(const ModelConfig& cfg, const std::string& name) {
    auto it = cfg.vectors.find(name);
    if (it == cfg.vectors.end()) throw InputError("unknown vector \"" + name + "\"");
    return RandomVariable(it->second);
}

inline Subalgebra config_subalgebra(const ModelConfig& cfg, const std::string& name) {
    auto it = cfg.subalgebras.find(name);
    if (it == cfg.subalgebras.end()) throw InputError("unknown subalgebra \"" + name + "\"");
    return Subalgebra(FinitePowerAlgebra(cfg.n_cells()), it->second);
}

} // namespace noise_lab::harness
