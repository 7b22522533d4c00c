#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "rational.hpp"

namespace noise_lab {

/// Interval of [0,1] with rational endpoints; lo == hi with both ends closed
/// is a single point.
struct Interval {
    Rational lo;
    Rational hi;
    bool lo_closed = false;
    bool hi_closed = false;

    bool empty() const { return lo > hi || (lo == hi && !(lo_closed && hi_closed)); }
    bool contains(const Rational& p) const {
        if (p < lo || p > hi) return false;
        if (p == lo && !lo_closed) return false;
        if (p == hi && !hi_closed) return false;
        return true;
    }
    friend bool operator==(const Interval&, const Interval&) = default;

    std::string to_string() const {
        if (lo == hi) return "{" + noise_lab::to_string(lo) + "}";
        return std::string(lo_closed ? "[" : "(") + noise_lab::to_string(lo) + "," + noise_lab::to_string(hi) +
               (hi_closed ? "]" : ")");
    }
};

/// Finite union of intervals inside X = [0,1], kept in a normal form
/// (sorted, pairwise separated components) so that equal sets compare equal.
class IntervalSet {
public:
    IntervalSet() = default;
    explicit IntervalSet(std::vector<Interval> parts) : parts_(std::move(parts)) { normalize(); }

    static IntervalSet whole() { return IntervalSet({{Rational(0), Rational(1), true, true}}); }
    static IntervalSet point(const Rational& p) { return IntervalSet({{p, p, true, true}}); }
    static IntervalSet points(const std::vector<Rational>& ps) {
        std::vector<Interval> parts;
        for (const auto& p : ps) parts.push_back({p, p, true, true});
        return IntervalSet(std::move(parts));
    }

    const std::vector<Interval>& components() const { return parts_; }
    bool empty() const { return parts_.empty(); }

    bool contains(const Rational& p) const {
        return std::any_of(parts_.begin(), parts_.end(), [&](const Interval& i) { return i.contains(p); });
    }

    IntervalSet unite(const IntervalSet& o) const {
        auto all = parts_;
        all.insert(all.end(), o.parts_.begin(), o.parts_.end());
        return IntervalSet(std::move(all));
    }

    IntervalSet intersect(const IntervalSet& o) const {
        std::vector<Interval> out;
        for (const auto& a : parts_) {
            for (const auto& b : o.parts_) {
                Interval c;
                if (a.lo > b.lo) {
                    c.lo = a.lo, c.lo_closed = a.lo_closed;
                } else if (b.lo > a.lo) {
                    c.lo = b.lo, c.lo_closed = b.lo_closed;
                } else {
                    c.lo = a.lo, c.lo_closed = a.lo_closed && b.lo_closed;
                }
                if (a.hi < b.hi) {
                    c.hi = a.hi, c.hi_closed = a.hi_closed;
                } else if (b.hi < a.hi) {
                    c.hi = b.hi, c.hi_closed = b.hi_closed;
                } else {
                    c.hi = a.hi, c.hi_closed = a.hi_closed && b.hi_closed;
                }
                if (!c.empty()) out.push_back(c);
            }
        }
        return IntervalSet(std::move(out));
    }

    /// X ∖ *this.
    IntervalSet complement() const {
        std::vector<Interval> out;
        Rational cur = 0;
        bool cur_closed = true;
        for (const auto& p : parts_) {
            out.push_back({cur, p.lo, cur_closed, !p.lo_closed});
            cur = p.hi;
            cur_closed = !p.hi_closed;
        }
        out.push_back({cur, Rational(1), cur_closed, true});
        return IntervalSet(std::move(out));
    }

    IntervalSet minus(const IntervalSet& o) const { return intersect(o.complement()); }
    bool includes(const IntervalSet& o) const { return o.minus(*this).empty(); }

    IntervalSet closure() const {
        auto parts = parts_;
        for (auto& p : parts) p.lo_closed = p.hi_closed = true;
        return IntervalSet(std::move(parts));
    }

    /// Interior in the subspace topology of [0,1]: the space edges 0 and 1
    /// stay inside when present.
    IntervalSet interior() const {
        auto parts = parts_;
        for (auto& p : parts) {
            p.lo_closed = p.lo_closed && p.lo == 0;
            p.hi_closed = p.hi_closed && p.hi == 1;
        }
        return IntervalSet(std::move(parts));
    }

    /// Some member, for use as a witness.
    std::optional<Rational> some_point() const {
        if (parts_.empty()) return std::nullopt;
        const Interval& p = parts_.front();
        if (p.lo == p.hi) return p.lo;
        Rational mid = (p.lo + p.hi) / 2;
        return mid;
    }

    friend bool operator==(const IntervalSet&, const IntervalSet&) = default;

    std::string to_string() const {
        if (parts_.empty()) return "∅";
        std::string s;
        for (std::size_t i = 0; i < parts_.size(); ++i) {
            if (i) s += " ∪ ";
            s += parts_[i].to_string();
        }
        return s;
    }

private:
    void normalize() {
        std::vector<Interval> in;
        for (auto& p : parts_) {
            if (!p.empty()) in.push_back(std::move(p));
        }
        std::sort(in.begin(), in.end(), [](const Interval& a, const Interval& b) {
            if (a.lo != b.lo) return a.lo < b.lo;
            return a.lo_closed && !b.lo_closed;
        });
        std::vector<Interval> out;
        for (auto& p : in) {
            if (!out.empty()) {
                Interval& last = out.back();
                const bool joins = p.lo < last.hi || (p.lo == last.hi && (last.hi_closed || p.lo_closed));
                if (joins) {
                    if (p.hi > last.hi) {
                        last.hi = p.hi;
                        last.hi_closed = p.hi_closed;
                    } else if (p.hi == last.hi) {
                        last.hi_closed = last.hi_closed || p.hi_closed;
                    }
                    continue;
                }
            }
            out.push_back(std::move(p));
        }
        parts_ = std::move(out);
    }

    std::vector<Interval> parts_;
};

} // namespace noise_lab
