#pragma once

#include <chrono>
#include <functional>
#include <future>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "../chaos.hpp"
#include "../geometry.hpp"
#include "../projection_laws.hpp"
#include "../regopen.hpp"
#include "../spectrum.hpp"
#include "config.hpp"
#include "report.hpp"

namespace noise_lab::harness {

inline const std::vector<std::string>& all_groups() {
    static const std::vector<std::string> groups{"laws", "chaos", "spectrum", "regopen", "geometry"};
    return groups;
}

struct SuiteOptions {
    std::vector<std::string> groups = all_groups();
    std::uint64_t seed = 0;
    Backend backend = Backend::Exact;
    std::size_t depth = 6;
    std::string config_name = "<config>";
};

/// Checks that compare full bases of H are run up to this many points.
inline constexpr std::size_t basis_check_limit = 64;
/// Exact subspace elimination is run up to this many points.
inline constexpr std::size_t elimination_limit = 256;

struct Outcome {
    bool ok = true;
    std::string detail;
    std::vector<std::string> witnesses;

    void require(bool cond, const std::string& witness) {
        if (!cond) {
            ok = false;
            if (witnesses.size() < 5) witnesses.push_back(witness);
        }
    }
};

class GroupRunner {
public:
    explicit GroupRunner(std::string group) : group_(std::move(group)) {}

    void check(const std::string& name, const std::function<Outcome()>& body) {
        CheckResult r;
        r.group = group_;
        r.name = name;
        const auto start = std::chrono::steady_clock::now();
        try {
            Outcome o = body();
            r.status = o.ok ? Status::Pass : Status::Fail;
            r.detail = std::move(o.detail);
            r.witnesses = std::move(o.witnesses);
        } catch (const std::exception& e) {
            r.status = Status::Fail;
            r.detail = std::string("error: ") + e.what();
        }
        r.millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        results_.push_back(std::move(r));
    }

    void skip(const std::string& name, const std::string& reason, bool resource) {
        CheckResult r;
        r.group = group_;
        r.name = name;
        r.status = Status::Skip;
        r.detail = reason;
        r.resource_skip = resource;
        results_.push_back(std::move(r));
    }

    std::vector<CheckResult> take() { return std::move(results_); }

private:
    std::string group_;
    std::vector<CheckResult> results_;
};

namespace suite_detail {

/// Elements of B to sweep: all of them when 2^n ≤ limit, else a seeded
/// sample that always includes 0 and 1.
template <class Rng>
std::vector<BoolElem> sweep_elements(std::size_t n, std::uint64_t limit, Rng& rng, std::size_t sample = 64) {
    if (n < 63 && (std::uint64_t{1} << n) <= limit) return FinitePowerAlgebra(n).elements();
    std::set<BoolElem> picked{BoolElem::zero(n), BoolElem::one(n)};
    while (picked.size() < sample) picked.insert(BoolElem(n, rng() & BoolElem::full_mask(n)));
    return {picked.begin(), picked.end()};
}

inline std::string sweep_label(std::size_t count, std::size_t n, std::uint64_t limit) {
    const bool exhaustive = n < 63 && (std::uint64_t{1} << n) <= limit;
    return (exhaustive ? "all " : "sampled ") + std::to_string(count) + " elements";
}

/// Independent stream per group, derived from the user seed.
inline std::uint64_t group_seed(std::uint64_t seed, std::uint32_t tag) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), tag};
    std::uint32_t words[2];
    seq.generate(words, words + 2);
    return (std::uint64_t{words[0]} << 32) | words[1];
}

inline std::string cap_reason(std::size_t N, std::size_t cap) {
    return "N=" + std::to_string(N) + " exceeds the exact cap " + std::to_string(cap);
}

// ---------------------------------------------------------------------------

inline void run_boolean_checks(GroupRunner& g, std::size_t n, std::mt19937_64& rng) {
    g.check("Boolean algebra laws on B", [&] {
        Outcome o;
        std::vector<BoolElem> els;
        if (n <= 4) {
            els = FinitePowerAlgebra(n).elements();
        } else {
            for (int i = 0; i < 24; ++i) els.emplace_back(n, rng() & BoolElem::full_mask(n));
        }
        const BoolElem zero = BoolElem::zero(n), one = BoolElem::one(n);
        for (const auto& x : els) {
            o.require((x & ~x) == zero && (x | ~x) == one, "complement " + x.to_string());
            for (const auto& y : els) {
                o.require(~(x & y) == (~x | ~y) && (x & y) == (y & x) && (x | y) == (y | x), "De Morgan/commutativity " + x.to_string() + "," + y.to_string());
                for (const auto& z : els) {
                    o.require((x & (y | z)) == ((x & y) | (x & z)) && ((x & y) & z) == (x & (y & z)),
                              "distributivity/associativity " + x.to_string() + "," + y.to_string() + "," + z.to_string());
                }
            }
        }
        o.detail = (n <= 4 ? "exhaustive, " : "random, ") + std::to_string(els.size()) + " elements";
        return o;
    });
    g.check("Stone duality for principal filters", [&] {
        Outcome o;
        std::vector<BoolElem> els;
        if (n <= 4) {
            els = FinitePowerAlgebra(n).elements();
        } else {
            for (int i = 0; i < 64; ++i) els.emplace_back(n, rng() & BoolElem::full_mask(n));
        }
        for (const auto& gen : els) {
            const Filter f(gen);
            const auto closed = filter_to_closed_set(f);
            for (const auto& x : els) {
                const auto open = clopen(x);
                const bool inside = std::includes(open.begin(), open.end(), closed.begin(), closed.end());
                o.require(inside == f.member(x), "filter " + gen.to_string() + ", x=" + x.to_string());
            }
        }
        o.detail = std::to_string(els.size()) + " generators";
        return o;
    });
}

inline void run_laws(GroupRunner& g, const ModelConfig& cfg, const SuiteOptions& opt) {
    std::mt19937_64 rng(group_seed(opt.seed, 1));
    const std::size_t n = cfg.n_cells();
    run_boolean_checks(g, n, rng);
    g.check("subalgebra atoms are partitions of unity", [&] {
        Outcome o;
        const FinitePowerAlgebra alg(n);
        std::vector<std::pair<std::string, Subalgebra>> subs{{"full", Subalgebra::full(alg)}, {"trivial", Subalgebra::trivial(alg)}};
        for (const auto& [name, blocks] : cfg.subalgebras) subs.emplace_back(name, Subalgebra(alg, blocks));
        for (const auto& [name, b] : subs) {
            o.require(n == 0 || is_partition_of_unity(enumerate_partition_atoms(b), n), name);
        }
        o.detail = std::to_string(subs.size()) + " subalgebras";
        return o;
    });

    std::optional<NoiseModel> model;
    std::string build_error;
    try {
        model.emplace(cfg.cells, cfg.exact_cap);
    } catch (const ResourceError& e) {
        build_error = e.what();
    }

    if (!model) {
        for (const char* name : {"Walsh basis orthogonal and complete", "projection equals conditional expectation",
                                 "projections idempotent and self-adjoint", "disjoint Walsh products"}) {
            g.skip(name, build_error, true);
        }
    } else {
        const NoiseModel& m = *model;
        const std::size_t N = m.size();
        g.check("Walsh basis orthogonal and complete", [&] {
            Outcome o;
            std::vector<std::size_t> idx;
            for (std::size_t k = 0; k < N; ++k) {
                if (N <= elimination_limit || rng() % (N / 64) == 0) idx.push_back(k);
            }
            for (std::size_t a : idx) {
                const WalshCoeffs c = m.coefficients(m.walsh_vector(a));
                for (std::size_t b = 0; b < N; ++b) {
                    o.require(c[b] == (a == b ? 1 : 0), "coefficient " + std::to_string(b) + " of e_" + std::to_string(a));
                }
                o.require(m.walsh_norm2(a) == m.norm2(m.walsh_vector(a)) && m.walsh_norm2(a) > 0, "norm of e_" + std::to_string(a));
            }
            for (int i = 0; i < 4; ++i) {
                const RandomVariable psi = random_vector(m, rng);
                o.require(m.reconstruct(m.coefficients(psi)) == psi, "round trip");
            }
            for (const auto& [name, values] : cfg.vectors) {
                const RandomVariable psi(values);
                o.require(m.reconstruct(m.coefficients(psi)) == psi, "round trip " + name);
            }
            o.detail = std::to_string(idx.size()) + " of " + std::to_string(N) + " basis vectors";
            return o;
        });
        g.check("projection equals conditional expectation", [&] {
            Outcome o;
            const auto xs = sweep_elements(n, cfg.exhaustive_limit, rng);
            std::size_t vectors = 0;
            for (const auto& x : xs) {
                if (N <= basis_check_limit) {
                    for (std::size_t k = 0; k < N; ++k) {
                        RandomVariable e = m.zero_vector();
                        e[k] = 1;
                        o.require(m.project(x, e) == m.project_oracle(x, e), "x=" + x.to_string() + ", point " + std::to_string(k));
                    }
                    vectors = N;
                } else {
                    for (int i = 0; i < 2; ++i) {
                        const RandomVariable psi = random_vector(m, rng);
                        o.require(m.project(x, psi) == m.project_oracle(x, psi), "x=" + x.to_string());
                    }
                    vectors = 2;
                }
            }
            o.detail = sweep_label(xs.size(), n, cfg.exhaustive_limit) + " x " +
                       (N <= basis_check_limit ? "full point basis" : "2 random vectors") + " (" + std::to_string(vectors) + ")";
            return o;
        });
        g.check("projections idempotent and self-adjoint", [&] {
            Outcome o;
            const auto xs = sweep_elements(n, cfg.exhaustive_limit, rng);
            for (const auto& x : xs) {
                const RandomVariable f = random_vector(m, rng), h = random_vector(m, rng);
                const RandomVariable qf = m.project(x, f);
                o.require(m.project(x, qf) == qf, "idempotence at x=" + x.to_string());
                o.require(m.inner_product(qf, h) == m.inner_product(f, m.project(x, h)), "self-adjointness at x=" + x.to_string());
            }
            o.detail = sweep_label(xs.size(), n, cfg.exhaustive_limit);
            return o;
        });
        g.check("disjoint Walsh products", [&] {
            Outcome o;
            std::size_t pairs = 0;
            auto test = [&](std::size_t a, std::size_t b) {
                if ((m.support_bits(a) & m.support_bits(b)) != 0) return;
                ++pairs;
                o.require(m.walsh_vector(a) * m.walsh_vector(b) == m.walsh_vector(a + b),
                          "e_" + std::to_string(a) + " e_" + std::to_string(b));
            };
            if (N <= basis_check_limit) {
                for (std::size_t a = 0; a < N; ++a) {
                    for (std::size_t b = 0; b < N; ++b) test(a, b);
                }
            } else {
                for (int i = 0; i < 256; ++i) test(rng() % N, rng() % N);
            }
            o.detail = std::to_string(pairs) + " disjoint pairs";
            return o;
        });
    }

    // The three lattice laws, in the selected backend.
    auto law_lines = [&](const auto& rep, const std::string& suffix) {
        const std::string scope = (rep.exhaustive ? "all " : "sampled ") + std::to_string(rep.pairs_checked) + " pairs" + suffix;
        for (const auto& [law, name] : std::vector<std::pair<std::string, std::string>>{
                 {"QxQy=Qxy", "Q_x Q_y = Q_{x∧y}"},
                 {"Qx+Qy<=Qxvy+Qxy", "Q_x + Q_y ≤ Q_{x∨y} + Q_{x∧y}"},
                 {"superadditivity", "superadditivity on disjoint pairs"}}) {
            g.check(name, [&] {
                Outcome o;
                for (const auto& v : rep.violations) {
                    if (v.law == law || (law == "QxQy=Qxy" && v.law == "walsh-diagonal")) {
                        o.require(false, "x=" + v.x.to_string() + ", y=" + v.y.to_string() + ": " + v.detail);
                    }
                }
                o.detail = scope;
                if (law == "superadditivity") {
                    o.detail += ", " + std::to_string(rep.superadditivity_checks) + " checks, " +
                                std::to_string(rep.strict_superadditive) + " strict";
                }
                return o;
            });
        }
    };
    const ProjectionLawOptions lopt{cfg.exhaustive_limit, 256, 2, group_seed(opt.seed, 11)};
    if (opt.backend == Backend::Float) {
        try {
            const FloatNoiseModel fm(cfg.cells);
            law_lines(verify_projection_laws(fm, lopt), ", float backend");
        } catch (const ResourceError& e) {
            for (const char* name : {"Q_x Q_y = Q_{x∧y}", "Q_x + Q_y ≤ Q_{x∨y} + Q_{x∧y}", "superadditivity on disjoint pairs"}) {
                g.skip(name, e.what(), true);
            }
        }
    } else if (model) {
        law_lines(verify_projection_laws(*model, lopt), ", exact");
    } else {
        for (const char* name : {"Q_x Q_y = Q_{x∧y}", "Q_x + Q_y ≤ Q_{x∨y} + Q_{x∧y}", "superadditivity on disjoint pairs"}) {
            g.skip(name, build_error + "; use --backend float", true);
        }
    }
}

// ---------------------------------------------------------------------------

inline void run_chaos(GroupRunner& g, const ModelConfig& cfg, const SuiteOptions& opt) {
    std::mt19937_64 rng(group_seed(opt.seed, 2));
    const std::vector<std::string> names{
        "first chaos dimension and Walsh level one", "first chaos against pairwise definition",
        "first chaos equals split-for-all-x space", "classification",
        "split test iff product test", "split subspace equals direct sum",
        "norm is additive on the first chaos", "additivity, defect and bound on configured pairs",
        "defect bound on random additive vectors", "zero defect forces zero"};
    const std::size_t n = cfg.n_cells();
    std::uint64_t N = 1;
    for (const Cell& c : cfg.cells) N = N > cfg.exact_cap ? N : N * c.k();
    if (N > cfg.exact_cap) {
        for (const auto& name : names) g.skip(name, cap_reason(N, cfg.exact_cap), true);
        return;
    }
    const NoiseModel m(cfg.cells, cfg.exact_cap);
    const bool small = N <= basis_check_limit;
    const bool solvable = N <= elimination_limit;
    const std::string elim_reason = "exact elimination limited to N ≤ " + std::to_string(elimination_limit) + " (N=" + std::to_string(N) + ")";

    std::optional<ChaosSubspace> h1;
    if (solvable) h1 = first_chaos_basis(m);

    if (h1) {
        g.check(names[0], [&] {
            Outcome o;
            std::size_t expected = 0;
            for (const Cell& c : cfg.cells) expected += c.k() - 1;
            o.require(h1->dimension == expected, "dimension " + std::to_string(h1->dimension) + " ≠ Σ(k_i−1) = " + std::to_string(expected));
            o.require(h1->matches_first_level_walsh, "solved space differs from the |support| = 1 Walsh span");
            for (const auto& v : h1->basis) o.require(m.project(BoolElem::zero(n), v).is_zero(), "basis vector with nonzero mean");
            o.detail = "dimension " + std::to_string(h1->dimension);
            return o;
        });
    } else {
        g.skip(names[0], elim_reason, true);
    }

    if (h1 && small) {
        g.check(names[1], [&] {
            Outcome o;
            o.require(span_of(N, h1->basis) == first_chaos_pairwise_oracle(m), "spaces differ");
            o.detail = "all disjoint pairs, conditional-expectation oracle";
            return o;
        });
    } else {
        g.skip(names[1], "pairwise oracle limited to N ≤ " + std::to_string(basis_check_limit), true);
    }

    if (h1 && (std::uint64_t{1} << n) <= std::max<std::uint64_t>(cfg.exhaustive_limit, 64)) {
        g.check(names[2], [&] {
            Outcome o;
            o.require(span_of(N, h1->basis) == split_solution_space(m, m.algebra().elements()), "spaces differ");
            o.detail = "all " + std::to_string(std::uint64_t{1} << n) + " elements";
            return o;
        });
    } else {
        g.skip(names[2], h1 ? "2^n exceeds the exhaustive limit" : elim_reason, true);
    }

    if (h1) {
        g.check(names[3], [&] {
            Outcome o;
            const Classification c = classify(m);
            if (c.degenerate) {
                o.require(c.kind == ChaosClass::Black, "degenerate model not black");
                o.detail = "black (degenerate: no cells)";
            } else {
                o.require(c.kind == ChaosClass::Classical, std::string("classified ") + to_string(c.kind));
                o.detail = to_string(c.kind);
            }
            return o;
        });
    } else {
        g.skip(names[3], elim_reason, true);
    }

    if (!solvable) {
        g.skip(names[4], "product test is quadratic in N; limited to N ≤ " + std::to_string(elimination_limit), true);
    } else g.check(names[4], [&] {
        Outcome o;
        const auto xs = sweep_elements(n, cfg.exhaustive_limit, rng);
        const std::vector<RandomVariable> walsh = all_walsh_vectors(m);
        std::size_t vectors = 0;
        for (const auto& x : xs) {
            std::vector<RandomVariable> family;
            if (small) {
                family = walsh;
            }
            family.push_back(random_vector(m, rng));
            for (const auto& [name, values] : cfg.vectors) family.emplace_back(values);
            vectors = family.size();
            for (const auto& v : family) {
                o.require(split_check(m, v, x) == product_test(m, v, x, walsh), "x=" + x.to_string());
            }
        }
        o.detail = sweep_label(xs.size(), n, cfg.exhaustive_limit) + ", " + std::to_string(vectors) + " vectors each";
        return o;
    });

    if (small) {
        g.check(names[5], [&] {
            Outcome o;
            for (const auto& x : m.algebra().elements()) o.require(verify_split_subspace(m, x), "x=" + x.to_string());
            o.detail = "all " + std::to_string(std::uint64_t{1} << n) + " elements";
            return o;
        });
    } else {
        g.skip(names[5], "subspace comparison limited to N ≤ " + std::to_string(basis_check_limit), true);
    }

    if (h1 && n <= 12) {
        g.check(names[6], [&] {
            Outcome o;
            std::vector<RandomVariable> family = h1->basis;
            RandomVariable mix = m.zero_vector();
            for (const auto& v : h1->basis) mix += Rational(static_cast<long>(rng() % 7) - 3) * v;
            family.push_back(mix);
            for (const auto& v : family) o.require(norm_additive(m, v), "basis vector");
            o.detail = std::to_string(family.size()) + " vectors, all disjoint pairs";
            return o;
        });
    } else {
        g.skip(names[6], h1 ? "pair enumeration limited to n ≤ 12" : elim_reason, true);
    }

    if (cfg.subalgebras.empty() || cfg.vectors.empty()) {
        g.skip(names[7], "config names no subalgebra/vector pair", false);
    } else {
        g.check(names[7], [&] {
            Outcome o;
            std::vector<std::string> lines;
            for (const auto& [bname, blocks] : cfg.subalgebras) {
                const Subalgebra b(FinitePowerAlgebra(n), blocks);
                for (const auto& [vname, values] : cfg.vectors) {
                    const RandomVariable psi(values);
                    const std::string pair = vname + " on " + bname;
                    const AdditivityCheck add = check_additivity(m, psi, b);
                    o.require(add.forms_agree(), pair + ": disjoint and lattice forms disagree");
                    if (!add.holds()) {
                        lines.push_back(pair + ": not additive");
                        continue;
                    }
                    const DefectCertificate cert = atomless_defect(m, psi, b);
                    if (cert.brute_force_min) {
                        o.require(*cert.brute_force_min == cert.delta2, pair + ": finest partition not minimal");
                    }
                    o.require(sgn(cert.delta2) != 0 || psi.is_zero(), pair + ": δ = 0 but ψ ≠ 0");
                    std::size_t tight = 0, checked = 0;
                    for (const auto& x : sweep_elements(n, cfg.exhaustive_limit, rng)) {
                        const DefectBoundReport rep = defect_bound_check(m, psi, b, x);
                        ++checked;
                        tight += rep.tight;
                        o.require(rep.passed(), pair + ": bound fails at x=" + x.to_string());
                    }
                    lines.push_back(pair + ": δ² = " + to_string(cert.delta2) + ", bound holds at " + std::to_string(checked) +
                                    " x, tight at " + std::to_string(tight));
                }
            }
            for (std::size_t i = 0; i < lines.size(); ++i) o.detail += (i ? "; " : "") + lines[i];
            return o;
        });
    }

    const std::size_t sweep = N <= 16 ? 200 : (N <= 64 ? 50 : 10);
    g.check(names[8], [&] {
        Outcome o;
        std::size_t tight = 0;
        for (std::size_t i = 0; i < sweep; ++i) {
            const Subalgebra b = random_subalgebra(n, rng);
            const RandomVariable psi = random_block_vector(m, b, rng);
            const BoolElem x(n, rng() & BoolElem::full_mask(n));
            const DefectBoundReport rep = defect_bound_check(m, psi, b, x);
            tight += rep.tight;
            o.require(rep.passed(), "case " + std::to_string(i) + ", x=" + x.to_string());
        }
        o.detail = std::to_string(sweep) + " cases, " + std::to_string(tight) + " tight";
        return o;
    });
    g.check(names[9], [&] {
        Outcome o;
        std::size_t zeros = 0;
        for (std::size_t i = 0; i < sweep; ++i) {
            const Subalgebra b = random_subalgebra(n, rng);
            const RandomVariable psi = random_block_vector(m, b, rng);
            o.require(satisfies_additivity(m, psi, b), "constructed vector not additive, case " + std::to_string(i));
            const DefectCertificate cert = atomless_defect(m, psi, b);
            if (sgn(cert.delta2) == 0) {
                ++zeros;
                o.require(psi.is_zero(), "case " + std::to_string(i));
            } else {
                o.require(!psi.is_zero(), "case " + std::to_string(i) + ": ψ = 0 with δ > 0");
            }
        }
        o.detail = std::to_string(sweep) + " cases, " + std::to_string(zeros) + " with δ = 0";
        return o;
    });
}

// ---------------------------------------------------------------------------

inline void run_spectrum(GroupRunner& g, const ModelConfig& cfg, const SuiteOptions& opt) {
    std::mt19937_64 rng(group_seed(opt.seed, 3));
    const std::vector<std::string> names{
        "spectral space and canonical measure", "S_x ∩ S_y = S_{x∧y}", "spectral filter law",
        "μ_ψ(S_x) = ‖Q_x ψ‖²", "H(S_x) = H_x and event lattice", "Σ_x is generated by M ∩ x",
        "Σ_x ∨ Σ_y = Σ_{x∨y} and monotonicity", "independence with product witness", "S_{x′} is a block of Σ_x",
        "measure class is unique"};
    const std::size_t n = cfg.n_cells();
    std::uint64_t N = 1;
    for (const Cell& c : cfg.cells) N = N > cfg.exact_cap ? N : N * c.k();
    if (N > cfg.exact_cap) {
        for (const auto& name : names) g.skip(name, cap_reason(N, cfg.exact_cap), true);
        return;
    }
    const NoiseModel m(cfg.cells, cfg.exact_cap);
    const SpectralSpace s(m);
    const auto xs = sweep_elements(n, cfg.exhaustive_limit, rng);
    const std::string scope = sweep_label(xs.size(), n, cfg.exhaustive_limit);

    g.check(names[0], [&] {
        Outcome o;
        Rational total = 0;
        for (const auto& mu : s.canonical_measure()) {
            total += mu;
            o.require(mu > 0, "zero-mass atom");
        }
        o.require(total == 1, "total mass " + to_string(total));
        o.require(s.atom_count() == (std::size_t{1} << n), "atoms are not all subsets");
        o.require(product_measure(s) == s.canonical_measure(), "dims/N is not the product measure");
        o.require(spectral_set(s, BoolElem::zero(n)).members == std::vector<std::size_t>{0}, "S_0 ≠ {∅}");
        o.detail = std::to_string(s.atom_count()) + " atoms";
        return o;
    });
    g.check(names[1], [&] {
        Outcome o;
        std::size_t strict = 0;
        for (const auto& x : xs) {
            for (const auto& y : xs) {
                const auto rel = spectral_set_relations(s, x, y);
                o.require(rel.meet_identity && rel.union_included, "x=" + x.to_string() + ", y=" + y.to_string());
                strict += rel.union_strict;
            }
        }
        o.detail = scope + ", S_x ∪ S_y ⊊ S_{x∨y} in " + std::to_string(strict) + " pairs";
        return o;
    });
    if (n <= 10) {
        g.check(names[2], [&] {
            Outcome o;
            for (std::size_t a = 0; a < s.atom_count(); ++a) {
                o.require(spectral_filter_law(s, a), "atom " + s.atom_elem(a).to_string());
                o.require(filter_to_closed_set(spectral_filter(s, s.atom(a))) == s.atom_elem(a).members(), "closed set of " + s.atom_elem(a).to_string());
            }
            o.detail = "all atoms, all pairs";
            return o;
        });
    } else {
        g.skip(names[2], "filter law enumerates 4^n pairs; limited to n ≤ 10", true);
    }
    g.check(names[3], [&] {
        Outcome o;
        std::vector<std::pair<std::string, RandomVariable>> family;
        for (const auto& [name, values] : cfg.vectors) family.emplace_back(name, RandomVariable(values));
        const int randoms = N <= 256 ? 100 : 10;
        for (int i = 0; i < randoms; ++i) family.emplace_back("random #" + std::to_string(i), random_vector(m, rng));
        for (const auto& [name, psi] : family) {
            const SpectralMeasure mu = spectral_measure(m, s, psi);
            o.require(mu.total() == m.norm2(psi), name + ": total mass");
            for (const auto& x : xs) o.require(mu.of(spectral_set(s, x)) == m.norm2(m.project(x, psi)), name + ", x=" + x.to_string());
        }
        o.detail = std::to_string(family.size()) + " vectors, " + scope;
        return o;
    });
    if (N <= basis_check_limit) {
        g.check(names[4], [&] {
            Outcome o;
            for (const auto& x : xs) {
                o.require(subspace_of_event(m, s, spectral_set(s, x)) == field_subspace(m, x), "x=" + x.to_string());
            }
            const std::size_t atoms = s.atom_count();
            for (int i = 0; i < 32; ++i) {
                SpectralSet e1, e2;
                for (std::size_t a = 0; a < atoms; ++a) {
                    if (rng() & 1U) e1.members.push_back(a);
                    if (rng() & 1U) e2.members.push_back(a);
                }
                o.require(check_event_lattice(m, s, e1, e2).passed(), "random event pair " + std::to_string(i));
                SpectralSet c1;
                for (std::size_t a = 0; a < atoms; ++a) {
                    if (!e1.contains(a)) c1.members.push_back(a);
                }
                o.require(check_event_lattice(m, s, e1, c1).passed(), "complementary pair " + std::to_string(i));
            }
            o.detail = scope + ", 64 event pairs";
            return o;
        });
    } else {
        g.skip(names[4], "subspace comparison limited to N ≤ " + std::to_string(basis_check_limit), true);
    }
    if (n > 8) {
        for (std::size_t i = 5; i <= 8; ++i) g.skip(names[i], "Σ_x enumerates 2^|x| generators per atom; limited to n ≤ 8", true);
    } else {
        g.check(names[5], [&] {
            Outcome o;
            for (const auto& x : xs) o.require(sigma_x(s, x) == sigma_x_by_trace(s, x), "x=" + x.to_string());
            o.detail = scope;
            return o;
        });
        g.check(names[6], [&] {
            Outcome o;
            for (const auto& x : xs) {
                for (const auto& y : xs) {
                    o.require(verify_sigma_join(s, x, y), "join at x=" + x.to_string() + ", y=" + y.to_string());
                    if (x.is_subset_of(y)) {
                        o.require(sigma_x(s, y).refines(sigma_x(s, x)), "monotone at x=" + x.to_string() + ", y=" + y.to_string());
                    }
                }
            }
            o.detail = scope + " squared";
            return o;
        });
        g.check(names[7], [&] {
            Outcome o;
            std::size_t pairs = 0;
            for (const auto& x : xs) {
                for (const auto& y : xs) {
                    if (!(x & y).empty()) continue;
                    ++pairs;
                    o.require(verify_independence(s, x, y).passed(), "x=" + x.to_string() + ", y=" + y.to_string());
                }
                o.require(verify_independence(s, x, ~x).passed(), "complement x=" + x.to_string());
            }
            o.detail = std::to_string(pairs) + " disjoint pairs plus every complement";
            return o;
        });
        g.check(names[8], [&] {
            Outcome o;
            for (const auto& x : xs) o.require(check_atom_of_sigma_x(s, x), "x=" + x.to_string());
            o.detail = scope;
            return o;
        });
    }
    g.check(names[9], [&] {
        Outcome o;
        o.require(mutually_absolutely_continuous(s.canonical_measure(), product_measure(s)), "product measure");
        for (const auto& [name, values] : cfg.vectors) {
            const auto mass = spectral_measure(m, s, RandomVariable(values)).mass;
            // Every spectral measure is absolutely continuous with respect to the canonical one.
            for (std::size_t a = 0; a < mass.size(); ++a) {
                o.require(sgn(mass[a]) == 0 || sgn(s.canonical_measure(a)) > 0, name);
            }
        }
        o.detail = "every atom has positive canonical mass";
        return o;
    });
}

// ---------------------------------------------------------------------------

inline void run_regopen(GroupRunner& g, const SuiteOptions& opt) {
    // Filled by the first check so that its time is attributed there.
    RegLawsReport rep;
    g.check("Boolean laws, regularity and order on Reg([0,1])", [&] {
        rep = verify_reg_laws(group_seed(opt.seed, 4), 1000, 1);
        Outcome o;
        for (const auto& v : rep.violations) o.require(false, v);
        o.detail = std::to_string(rep.cases) + " cases, " + std::to_string(rep.checks) + " checks";
        return o;
    });
    g.check("closure and interior inclusions", [&] {
        Outcome o;
        o.require(rep.join_strictness_witness.has_value(), "no strict Int(r∨s) ⊋ Int(r) ∪ Int(s) seen");
        o.detail = "Cl(r∧s) ⊊ Cl(r)∩Cl(s) strict in " + std::to_string(rep.strict_meet_closure) +
                   ", Int(r∨s) ⊋ Int(r)∪Int(s) strict in " + std::to_string(rep.strict_join_interior);
        return o;
    });
    g.check("strictness witness [0,1/2), (1/2,1]", [&] {
        Outcome o;
        const RegOpen r = make_regopen({{Rational(0), Rational(1, 2)}}), s = make_regopen({{Rational(1, 2), Rational(1)}});
        const RegOpen j = reg_join(r, s);
        const IntervalSet u = r.interior().unite(s.interior());
        o.require(j.is_one(), "join is " + j.to_string());
        o.require(!u.contains(Rational(1, 2)), "union contains 1/2");
        o.detail = "r ∨ s = " + j.to_string() + ", Int(r) ∪ Int(s) = " + u.to_string();
        return o;
    });
    g.check("finite spaces", [&] {
        Outcome o;
        FiniteSpace discrete{3, {}};
        for (std::uint32_t k = 0; k < 8; ++k) discrete.opens.push_back(k);
        const FiniteRegAlgebra d(discrete), sierpinski({2, {0b00, 0b01, 0b11}}), indiscrete({2, {0b00, 0b11}});
        o.require(d.elements().size() == 8 && d.verify_laws(), "discrete");
        o.require(sierpinski.elements() == std::vector<std::uint32_t>{0b00, 0b11} && sierpinski.verify_laws(), "Sierpiński");
        o.require(indiscrete.elements() == std::vector<std::uint32_t>{0b00, 0b11}, "indiscrete");
        o.detail = "discrete: 8 regular opens, Sierpiński: 2, indiscrete: 2";
        return o;
    });
    g.check("dyadic quotients agree with intervals", [&] {
        Outcome o;
        for (std::size_t d = 0; d <= 2; ++d) {
            o.require(FiniteRegAlgebra(dyadic_quotient_space(d)).verify_laws(), "laws at depth " + std::to_string(d));
            o.require(verify_quotient_agreement(d), "agreement at depth " + std::to_string(d));
        }
        o.detail = "grid depths 0..2";
        return o;
    });
}

// ---------------------------------------------------------------------------

inline void run_geometry(GroupRunner& g, const ModelConfig& cfg, const SuiteOptions& opt) {
    const std::vector<std::string> names{
        "h is a Boolean homomorphism", "S_{h(a)} = {M : F(M) ⊆ Cl(a)}", "spectral-set approximants",
        "increasing chains", "inner approximation", "boundary dichotomy", "shrinking chains inside dyadic a"};
    if (!cfg.sample_points) {
        for (const auto& name : names) g.skip(name, "config has no embedding", false);
        return;
    }
    const std::size_t n = cfg.n_cells();
    if (n > 16) {
        for (const auto& name : names) g.skip(name, "spectral space enumeration limited to n ≤ 16", true);
        return;
    }
    std::uint64_t N = 1;
    for (const Cell& c : cfg.cells) N = N > cfg.exact_cap ? N : N * c.k();
    if (N > cfg.exact_cap) {
        for (const auto& name : names) g.skip(name, cap_reason(N, cfg.exact_cap), true);
        return;
    }
    std::mt19937_64 rng(group_seed(opt.seed, 5));
    const NoiseModel m(cfg.cells, cfg.exact_cap);
    const SpectralSpace s(m);
    const Embedding emb(n, *cfg.sample_points);
    const std::size_t depth = opt.depth;
    const std::size_t family_depth = std::min<std::size_t>(depth, 3);

    g.check(names[0], [&] {
        Outcome o;
        const auto rep = verify_homomorphism(emb, family_depth, 1000, rng());
        for (const auto& v : rep.violations) o.require(false, v);
        o.detail = std::to_string(rep.pairs) + " pairs";
        return o;
    });
    g.check(names[1], [&] {
        Outcome o;
        std::size_t count = 0;
        for (const auto& a : dyadic_family(family_depth)) {
            ++count;
            o.require(verify_closure_identity(emb, s, a), a.to_string());
        }
        for (const auto& b : dyadic_base(depth)) {
            count += 2;
            o.require(verify_closure_identity(emb, s, b.set), b.set.to_string());
            o.require(verify_closure_identity(emb, s, reg_complement(b.set)), "complement of " + b.set.to_string());
        }
        for (int i = 0; i < 200; ++i) {
            ++count;
            const RegOpen a = dyadic_cells(depth, depth >= 6 ? rng() : rng() & ((std::uint64_t{1} << (std::uint64_t{1} << depth)) - 1));
            o.require(verify_closure_identity(emb, s, a), a.to_string());
        }
        o.detail = std::to_string(count) + " dyadic elements up to depth " + std::to_string(depth);
        return o;
    });
    g.check(names[2], [&] {
        Outcome o;
        std::size_t stabilized = 0;
        std::optional<std::size_t> worst;
        for (std::size_t a = 0; a < s.atom_count(); ++a) {
            const auto f = spectral_set_map(emb, s.atom(a), depth);
            const std::string label = s.atom_elem(a).to_string();
            o.require(f.contains_closed_form, label + ": F(M) ⊄ F_D(M)");
            o.require(f.hausdorff_ok, label + ": Hausdorff excess " + to_string(f.hausdorff));
            o.require(f.order_independent, label + ": depends on base order");
            if (f.stabilization_depth) {
                ++stabilized;
                worst = std::max(worst.value_or(0), *f.stabilization_depth);
            }
        }
        o.detail = std::to_string(s.atom_count()) + " atoms at depth " + std::to_string(depth) + ", " + std::to_string(stabilized) +
                   " separated" + (worst ? " (by depth " + std::to_string(*worst) + ")" : "");
        return o;
    });
    g.check(names[3], [&] {
        Outcome o;
        const auto exhausting = monotone_limit_check(emb, s, left_exhausting_chain(40));
        o.require(exhausting.equivalent() && exhausting.sup_is_one, "Cl(a_n) = [0,1−2^{−n}]");
        const RegOpen half = make_regopen({{Rational(0), Rational(1, 2)}});
        const auto stuck = monotone_limit_check(emb, s, {half, half});
        o.require(stuck.equivalent(), "constant chain [0,1/2)");
        o.detail = "exhausting chain: sup h = 1; constant [0,1/2): sup h = " + stuck.supremum.to_string();
        return o;
    });
    g.check(names[4], [&] {
        Outcome o;
        std::size_t deepest = 0;
        for (int i = 0; i < 1000; ++i) {
            const RegOpen r = random_regopen(rng);
            const InnerApprox a = inner_approx(emb, r), b = inner_approx(emb, reg_complement(r));
            o.require(a.agrees(), r.to_string());
            o.require((a.value & b.value).empty(), "h_-(r) ∧ h_-(r′) ≠ 0 at " + r.to_string());
            deepest = std::max(deepest, a.depth_reached);
        }
        o.detail = "1000 random r, supremum reached by depth " + std::to_string(deepest);
        return o;
    });
    g.check(names[5], [&] {
        Outcome o;
        std::size_t hitting = 0;
        for (int i = 0; i < 1000; ++i) {
            const RegOpen r = random_regopen(rng);
            const BoundaryReport rep = boundary_dichotomy(emb, s, r);
            o.require(rep.equivalence_holds(), r.to_string());
            hitting += !rep.no_sample_on_boundary;
        }
        o.detail = "1000 random r, " + std::to_string(hitting) + " with a sample point on the boundary";
        return o;
    });
    g.check(names[6], [&] {
        Outcome o;
        std::size_t count = 0;
        for (const auto& a : dyadic_family(family_depth)) {
            ++count;
            o.require(verify_shrink_chain(emb, a).passed(), a.to_string());
        }
        for (const auto& b : dyadic_base(depth)) {
            ++count;
            o.require(verify_shrink_chain(emb, b.set).passed(), b.set.to_string());
        }
        o.detail = std::to_string(count) + " dyadic elements";
        return o;
    });
}

} // namespace suite_detail

inline std::vector<std::string> parse_selection(const std::string& only) {
    if (only == "all") return all_groups();
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= only.size()) {
        const std::size_t end = std::min(only.find(',', start), only.size());
        const std::string g = only.substr(start, end - start);
        if (std::find(all_groups().begin(), all_groups().end(), g) == all_groups().end()) {
            throw InputError("unknown check group \"" + g + "\" (expected laws, chaos, spectrum, regopen, geometry or all)");
        }
        if (std::find(out.begin(), out.end(), g) == out.end()) out.push_back(g);
        start = end + 1;
    }
    // Fixed order regardless of how the selection was spelled.
    std::vector<std::string> ordered;
    for (const auto& g : all_groups()) {
        if (std::find(out.begin(), out.end(), g) != out.end()) ordered.push_back(g);
    }
    return ordered;
}

/// Runs the selected groups on worker threads and assembles the report in
/// the fixed group order.
inline Report run_verification_suite(const ModelConfig& cfg, const SuiteOptions& opt) {
    std::vector<std::future<std::vector<CheckResult>>> futures;
    for (const auto& group : opt.groups) {
        futures.push_back(std::async(std::launch::async, [&cfg, &opt, group] {
            GroupRunner g(group);
            if (group == "laws") suite_detail::run_laws(g, cfg, opt);
            else if (group == "chaos") suite_detail::run_chaos(g, cfg, opt);
            else if (group == "spectrum") suite_detail::run_spectrum(g, cfg, opt);
            else if (group == "regopen") suite_detail::run_regopen(g, opt);
            else if (group == "geometry") suite_detail::run_geometry(g, cfg, opt);
            return g.take();
        }));
    }
    Report r;
    r.config = opt.config_name;
    r.seed = opt.seed;
    r.backend = to_string(opt.backend);
    r.depth = opt.depth;
    r.groups = opt.groups;
    for (auto& f : futures) {
        auto part = f.get();
        r.checks.insert(r.checks.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
    }
    return r;
}

} // namespace noise_lab::harness
