#pragma once

#include <algorithm>
#include <cstdio>
#include <string>
#include <vector>

#include <json.hpp>

namespace noise_lab::harness {

enum class Status { Pass, Fail, Skip };

inline const char* to_string(Status s) {
    switch (s) {
    case Status::Pass: return "pass";
    case Status::Fail: return "fail";
    case Status::Skip: return "skip";
    }
    return "?";
}

struct CheckResult {
    std::string group;
    std::string name;
    Status status = Status::Pass;
    std::string detail;
    std::vector<std::string> witnesses;
    double millis = 0.0;
    /// Skipped for size reasons (as opposed to not applicable).
    bool resource_skip = false;
};

struct Report {
    std::string config;
    std::uint64_t seed = 0;
    std::string backend;
    std::size_t depth = 0;
    std::vector<std::string> groups;
    std::vector<CheckResult> checks;

    std::size_t count(Status s) const {
        return static_cast<std::size_t>(std::count_if(checks.begin(), checks.end(), [&](const auto& c) { return c.status == s; }));
    }
    bool any_resource_skip() const {
        return std::any_of(checks.begin(), checks.end(), [](const auto& c) { return c.status == Status::Skip && c.resource_skip; });
    }

    /// 0 all pass, 1 any failure, 3 resource skip under --strict.
    int exit_code(bool strict) const {
        if (count(Status::Fail) > 0) return 1;
        if (strict && any_resource_skip()) return 3;
        return 0;
    }
};

inline std::string format_millis(double ms) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f ms", ms);
    return buf;
}

// Code points, not bytes; the check names carry ∧, ‖ and friends.
inline std::size_t display_width(const std::string& s) {
    return static_cast<std::size_t>(std::count_if(s.begin(), s.end(), [](char c) { return (c & 0xC0) != 0x80; }));
}

inline std::string render_text(const Report& r, bool timings = false) {
    std::string out = "noise-lab verify: " + r.config + " (seed " + std::to_string(r.seed) + ", backend " + r.backend +
                      ", depth " + std::to_string(r.depth) + ")\n";
    std::size_t width = 0;
    for (const auto& c : r.checks) width = std::max(width, display_width(c.group) + display_width(c.name) + 3);
    for (const auto& c : r.checks) {
        std::string label = "[" + c.group + "] " + c.name;
        label.append(width - display_width(label), ' ');
        std::string status = to_string(c.status);
        std::transform(status.begin(), status.end(), status.begin(), ::toupper);
        out += status + "  " + label;
        if (!c.detail.empty()) out += "  " + c.detail;
        if (timings) out += "  (" + format_millis(c.millis) + ")";
        out += "\n";
        for (const auto& w : c.witnesses) out += "      witness: " + w + "\n";
    }
    out += "summary: " + std::to_string(r.count(Status::Pass)) + " pass, " + std::to_string(r.count(Status::Fail)) +
           " fail, " + std::to_string(r.count(Status::Skip)) + " skip\n";
    return out;
}

inline std::string render_json(const Report& r, bool timings = false) {
    using json = nlohmann::ordered_json;
    json checks = json::array();
    for (const auto& c : r.checks) {
        json j = {{"group", c.group}, {"name", c.name}, {"status", to_string(c.status)}, {"detail", c.detail},
                  {"witnesses", c.witnesses}};
        if (c.status == Status::Skip) j["resource_skip"] = c.resource_skip;
        if (timings) j["millis"] = c.millis;
        checks.push_back(std::move(j));
    }
    json root = {{"config", r.config},
                 {"seed", r.seed},
                 {"backend", r.backend},
                 {"depth", r.depth},
                 {"groups", r.groups},
                 {"checks", checks},
                 {"summary",
                  {{"pass", r.count(Status::Pass)}, {"fail", r.count(Status::Fail)}, {"skip", r.count(Status::Skip)}}}};
    return root.dump(2) + "\n";
}

} // namespace noise_lab::harness
