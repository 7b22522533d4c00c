// Acceptance run: one PASS/FAIL line per criterion, exit 1 if any fails.
#include <array>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "noise_lab.hpp"
#include "support.hpp"

using namespace noise_lab;
using namespace noise_lab::testing;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Verdict {
    bool ok = true;
    std::string detail;
    std::string first_failure;
    void require(bool cond, const std::string& what) {
        if (!cond && ok) first_failure = what;
        ok = ok && cond;
    }
};

int failures = 0;

void criterion(int number, const std::string& title, const std::function<Verdict()>& body) {
    const auto t0 = Clock::now();
    Verdict v;
    try {
        v = body();
    } catch (const std::exception& e) {
        v.ok = false;
        v.first_failure = std::string("exception: ") + e.what();
    }
    char time[32];
    std::snprintf(time, sizeof time, "%.2f s", seconds_since(t0));
    std::cout << (v.ok ? "PASS" : "FAIL") << "  " << number << ". " << title << ": " << v.detail << " (" << time << ")";
    if (!v.ok) std::cout << "; first failure: " << v.first_failure;
    std::cout << std::endl;
    failures += !v.ok;
}

std::string shape_name(const std::vector<std::size_t>& shape) {
    std::string s = "(";
    for (std::size_t i = 0; i < shape.size(); ++i) s += (i ? "," : "") + std::to_string(shape[i]);
    return s + ")";
}

/// Every ordered shape with k_i ≥ 2 and N ≤ cap.
void shapes_up_to(std::uint64_t cap, std::vector<std::size_t>& prefix, std::uint64_t size,
                  std::vector<std::vector<std::size_t>>& out) {
    out.push_back(prefix);
    for (std::size_t k = 2; size * k <= cap; ++k) {
        prefix.push_back(k);
        shapes_up_to(cap, prefix, size * k, out);
        prefix.pop_back();
    }
}

std::vector<std::vector<std::size_t>> shapes_up_to(std::uint64_t cap) {
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t> prefix;
    shapes_up_to(cap, prefix, 1, out);
    return out;
}

std::vector<std::vector<std::size_t>> nonempty(std::vector<std::vector<std::size_t>> shapes) {
    shapes.erase(shapes.begin());
    return shapes;
}

template <class Rng>
std::vector<std::size_t> random_shape(Rng& rng, std::size_t min_n, std::size_t max_n, std::size_t max_k) {
    std::uniform_int_distribution<std::size_t> n_dist(min_n, max_n), k_dist(2, max_k);
    std::vector<std::size_t> shape(n_dist(rng));
    for (auto& k : shape) k = k_dist(rng);
    return shape;
}

std::string run_capture(const std::string& command, int& status) {
    std::string out;
    FILE* pipe = popen(command.c_str(), "r");
    if (!pipe) {
        status = -1;
        return out;
    }
    std::array<char, 4096> buf{};
    std::size_t got = 0;
    while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), got);
    const int raw = pclose(pipe);
    status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    return out;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

} // namespace

int main() {
    criterion(1, "projection lattice laws", [] {
        Verdict v;
        const auto t0 = Clock::now();
        std::mt19937_64 rng(1);
        std::size_t models = 0, pairs = 0;
        for (const auto& shape : nonempty(shapes(4, {2, 3}))) {
            std::vector<Cell> uniform;
            for (std::size_t k : shape) uniform.push_back(uniform_cell(k));
            for (const NoiseModel& m : {NoiseModel(uniform), random_model(rng, shape)}) {
                const auto rep = verify_projection_laws(m, {.exhaustive_limit = 16, .seed = rng()});
                v.require(rep.exhaustive && rep.passed(), "exact " + shape_name(shape));
                ++models;
                pairs += rep.pairs_checked;
            }
        }
        std::size_t float_models = 0;
        for (int i = 0; i < 100; ++i) {
            const auto shape = random_shape(rng, 5, 7, 3);
            std::vector<Cell> cells;
            for (std::size_t k : shape) cells.push_back(random_cell(rng, k));
            const FloatNoiseModel fm(cells);
            const auto rep = verify_projection_laws(fm, {.exhaustive_limit = 16, .sample_pairs = 48, .psi_samples = 1, .seed = rng()});
            v.require(rep.passed(), "float " + shape_name(shape));
            ++float_models;
        }
        const double took = seconds_since(t0);
        v.require(took < 10.0, "runtime " + std::to_string(took) + " s ≥ 10 s");
        v.detail = std::to_string(models) + " exact models with n ≤ 4, k ≤ 3 (" + std::to_string(pairs) +
                   " pairs, zero tolerance); " + std::to_string(float_models) + " random float models with n = 5..7 at 1e-9";
        return v;
    });

    criterion(2, "Walsh projection equals conditional expectation", [] {
        Verdict v;
        std::mt19937_64 rng(2);
        std::size_t models = 0;
        for (const auto& shape : shapes_up_to(64)) {
            const NoiseModel m = random_model(rng, shape);
            for (const auto& x : m.algebra().elements()) {
                for (std::size_t k = 0; k < m.size(); ++k) {
                    RandomVariable e = m.zero_vector();
                    e[k] = 1;
                    v.require(m.project(x, e) == m.project_oracle(x, e), shape_name(shape) + " x=" + x.to_string());
                }
            }
            ++models;
        }
        v.detail = std::to_string(models) + " shapes with N ≤ 64, every x, point basis";
        return v;
    });

    criterion(3, "first chaos", [] {
        Verdict v;
        std::mt19937_64 rng(3);
        std::size_t models = 0;
        for (const auto& shape : nonempty(shapes(4, {2, 3, 4}))) {
            const NoiseModel m = random_model(rng, shape);
            const ChaosSubspace h1 = first_chaos_basis(m);
            std::size_t expected = 0;
            for (std::size_t k : shape) expected += k - 1;
            v.require(h1.dimension == expected, "dimension at " + shape_name(shape));
            // Exact subspace equality with the span of |support| = 1 Walsh vectors.
            v.require(h1.matches_first_level_walsh, "Walsh level one at " + shape_name(shape));
            v.require(classify(m).kind == ChaosClass::Classical, "classification at " + shape_name(shape));
            ++models;
        }
        v.detail = std::to_string(models) + " models with n ≤ 4, k ≤ 4: dimension Σ(k_i−1), level-one span, classical";
        return v;
    });

    criterion(4, "split test and product test", [] {
        Verdict v;
        std::mt19937_64 rng(4);
        std::size_t models = 0, tests = 0;
        for (const auto& shape : nonempty(shapes_up_to(64))) {
            const NoiseModel m = random_model(rng, shape);
            const std::vector<RandomVariable> walsh = all_walsh_vectors(m);
            std::vector<RandomVariable> family = walsh;
            family.push_back(random_vector(m, rng));
            for (const auto& x : m.algebra().elements()) {
                for (const auto& psi : family) {
                    v.require(split_check(m, psi, x) == product_test(m, psi, x, walsh), shape_name(shape) + " x=" + x.to_string());
                    ++tests;
                }
                v.require(verify_split_subspace(m, x), "split subspace " + shape_name(shape) + " x=" + x.to_string());
            }
            ++models;
        }
        v.detail = std::to_string(models) + " shapes with N ≤ 64, " + std::to_string(tests) + " equivalences, split subspace for all x";
        return v;
    });

    criterion(5, "defect bound", [] {
        Verdict v;
        const NoiseModel m = fair_coins(4);
        const RandomVariable psi = sign(m, 0) * sign(m, 1) + sign(m, 2) * sign(m, 3);
        const Subalgebra b(m.algebra(), {elem(4, {0, 1}), elem(4, {2, 3})});
        v.require(satisfies_additivity(m, psi, b), "ψ not additive");
        const DefectCertificate cert = atomless_defect(m, psi, b);
        v.require(cert.delta2 == 1, "δ² = " + to_string(cert.delta2));
        const BoolElem x = elem(4, {0, 2});
        const DefectBoundReport rep = defect_bound_check(m, psi, b, x);
        v.require(rep.passed() && rep.tight, "bound at x={0,2}");
        const RandomVariable xi = sign(m, 0), eta = sign(m, 1);
        v.require(m.project(x, xi) == xi && m.project(~x, eta) == eta, "ξ, η not in H_x, H_{x′}");
        v.require(expect_triple(m, psi, xi, eta) == 1 && m.norm2(xi) == 1 && m.norm2(eta) == 1, "E(ψ r_0 r_1) ≠ δ‖ξ‖‖η‖");

        std::mt19937_64 rng(0);
        std::size_t violations = 0, tight = 0;
        for (int i = 0; i < 1000; ++i) {
            const auto shape = random_shape(rng, 2, 4, 3);
            const NoiseModel rm = random_model(rng, shape);
            const Subalgebra rb = random_subalgebra(shape.size(), rng);
            const RandomVariable rpsi = random_block_vector(rm, rb, rng);
            const BoolElem rx(shape.size(), rng() & BoolElem::full_mask(shape.size()));
            const DefectBoundReport r = defect_bound_check(rm, rpsi, rb, rx);
            violations += !r.passed();
            tight += r.tight;
        }
        v.require(violations == 0, std::to_string(violations) + " violations in the sweep");
        v.detail = "δ = 1, equality at x={0,2} with ξ=r_0, η=r_1; 1000-case sweep (seed 0): " + std::to_string(violations) +
                   " violations, " + std::to_string(tight) + " tight";
        return v;
    });

    criterion(6, "zero defect forces zero", [] {
        Verdict v;
        std::mt19937_64 rng(6);
        std::size_t zeros = 0, cases = 0;
        for (int i = 0; i < 1000; ++i) {
            const auto shape = random_shape(rng, 1, 4, 3);
            const NoiseModel m = random_model(rng, shape);
            const Subalgebra b = random_subalgebra(shape.size(), rng);
            const RandomVariable psi = random_block_vector(m, b, rng);
            if (!satisfies_additivity(m, psi, b)) {
                v.require(false, "constructed vector not additive at " + shape_name(shape));
                continue;
            }
            ++cases;
            const DefectCertificate cert = atomless_defect(m, psi, b);
            if (sgn(cert.delta2) == 0) {
                ++zeros;
                v.require(psi.is_zero(), "δ = 0 with ψ ≠ 0 at " + shape_name(shape));
            }
        }
        v.require(zeros > 0, "sweep produced no δ = 0 case");
        v.detail = std::to_string(cases) + " additive vectors, " + std::to_string(zeros) + " with δ = 0, all of them zero";
        return v;
    });

    criterion(7, "spectral space", [] {
        Verdict v;
        std::mt19937_64 rng(7);
        std::size_t models = 0;
        for (const auto& shape : nonempty(shapes(4, {2, 3}))) {
            const NoiseModel m = random_model(rng, shape);
            const SpectralSpace s(m);
            const auto xs = m.algebra().elements();
            for (const auto& x : xs) {
                for (const auto& y : xs) {
                    const auto rel = spectral_set_relations(s, x, y);
                    v.require(rel.meet_identity && rel.union_included, "S_x relations at " + shape_name(shape));
                    v.require(verify_sigma_join(s, x, y), "Σ join at " + shape_name(shape));
                    if ((x & y).empty()) v.require(verify_independence(s, x, y).passed(), "independence at " + shape_name(shape));
                }
                v.require(check_atom_of_sigma_x(s, x), "S_{x′} block at " + shape_name(shape));
            }
            ++models;
        }
        const NoiseModel m = random_model(rng, {3, 2, 3, 2});
        const SpectralSpace s(m);
        for (int i = 0; i < 100; ++i) {
            const RandomVariable psi = random_vector(m, rng);
            const SpectralMeasure mu = spectral_measure(m, s, psi);
            for (const auto& x : m.algebra().elements()) {
                v.require(mu.of(spectral_set(s, x)) == m.norm2(m.project(x, psi)), "μ_ψ(S_x) for vector " + std::to_string(i));
            }
        }
        v.detail = std::to_string(models) + " models with n ≤ 4 exhaustively; μ_ψ(S_x) = ‖Q_xψ‖² for 100 random ψ on (3,2,3,2)";
        return v;
    });

    criterion(8, "regular open sets of [0,1]", [] {
        Verdict v;
        const RegLawsReport rep = verify_reg_laws(0, 1000);
        v.require(rep.violations.empty(), rep.violations.empty() ? "" : rep.violations.front());
        const RegOpen r = make_regopen({{Rational(0), Rational(1, 2)}}), s = make_regopen({{Rational(1, 2), Rational(1)}});
        const IntervalSet u = r.interior().unite(s.interior());
        v.require(reg_join(r, s).is_one(), "[0,1/2) ∨ (1/2,1] ≠ 1");
        v.require(!u.contains(Rational(1, 2)), "union contains 1/2");
        v.detail = std::to_string(rep.cases) + " triples (1000 random), " + std::to_string(rep.checks) +
                   " checks; [0,1/2) ∨ (1/2,1] = 1 while the union misses 1/2";
        return v;
    });

    criterion(9, "geometry with t = (1/5, 1/3, 2/3)", [] {
        Verdict v;
        std::mt19937_64 rng(9);
        const NoiseModel m = fair_coins(3);
        const SpectralSpace s(m);
        const Embedding emb(3, {q(1, 5), q(1, 3), q(2, 3)});
        std::size_t count = 0;
        for (const auto& a : dyadic_family(3)) {
            v.require(verify_closure_identity(emb, s, a), a.to_string());
            ++count;
        }
        for (const auto& b : dyadic_base(6)) {
            v.require(verify_closure_identity(emb, s, b.set) && verify_closure_identity(emb, s, reg_complement(b.set)), b.set.to_string());
            count += 2;
        }
        // At depth 6 only the cells holding the sample points matter; cover all of their patterns.
        std::vector<std::uint64_t> point_cells;
        for (const auto& t : emb.points()) {
            const Rational scaled = t * 64;
            point_cells.push_back(mpz_class(scaled.get_num() / scaled.get_den()).get_ui());
        }
        for (std::uint64_t pattern = 0; pattern < 8; ++pattern) {
            for (int i = 0; i < 64; ++i) {
                std::uint64_t mask = rng();
                for (std::size_t j = 0; j < 3; ++j) {
                    mask = (pattern >> j) & 1U ? mask | (std::uint64_t{1} << point_cells[j]) : mask & ~(std::uint64_t{1} << point_cells[j]);
                }
                const RegOpen a = dyadic_cells(6, mask);
                v.require(verify_closure_identity(emb, s, a), a.to_string());
                ++count;
            }
        }
        const auto f = spectral_set_map(emb, 0b101, 6);
        v.require(f.closed_form == std::vector<Rational>{q(1, 5), q(2, 3)}, "F({0,2})");

        const auto chain = monotone_limit_check(emb, s, left_exhausting_chain(40));
        v.require(chain.equivalent() && chain.sup_is_one && chain.every_atom_covered, "exhausting chain");
        const RegOpen half = make_regopen({{Rational(0), Rational(1, 2)}});
        const auto stuck = monotone_limit_check(emb, s, {half, half});
        v.require(stuck.equivalent() && !stuck.sup_is_one, "constant chain");

        const RegOpen third = make_regopen({{Rational(0), q(1, 3)}});
        const BoundaryReport hit = boundary_dichotomy(emb, s, third);
        v.require(hit.join == elem(3, {0, 2}) && !hit.join_is_one, "[0,1/3): join " + hit.join.to_string());
        v.require(hit.witness_atom == std::optional<std::uint64_t>{0b010}, "[0,1/3): witness atom");
        v.require(hit.equivalence_holds(), "[0,1/3): equivalence");
        std::size_t hitting = 0;
        for (int i = 0; i < 1000; ++i) {
            const RegOpen r = random_regopen(rng);
            const BoundaryReport rep = boundary_dichotomy(emb, s, r);
            v.require(rep.equivalence_holds(), r.to_string());
            hitting += !rep.no_sample_on_boundary;
        }
        v.require(hitting > 0, "no boundary-hitting case in the sweep");
        v.detail = std::to_string(count) + " dyadic a to depth 6 exact; F({0,2}) = {1/5,2/3}; chain [0,1−2^{−n}] equivalence; " +
                   "dichotomy on 1000 random r (" + std::to_string(hitting) + " boundary-hitting), [0,1/3) gives join {0,2}, witness {1}";
        return v;
    });

    criterion(10, "reproducible CLI report", [] {
        Verdict v;
        const auto t0 = Clock::now();
        const std::string cli = NOISE_LAB_CLI, config = std::string(NOISE_LAB_CONFIGS) + "/two-coins.json";
        const std::string json_a = "acceptance-report-a.json", json_b = "acceptance-report-b.json";
        int status_a = 0, status_b = 0;
        const std::string a = run_capture(cli + " verify " + config + " --seed 0 --json " + json_a, status_a);
        const std::string b = run_capture(cli + " verify " + config + " --seed 0 --json " + json_b, status_b);
        const double took = seconds_since(t0);
        v.require(status_a == 0 && status_b == 0, "exit codes " + std::to_string(status_a) + ", " + std::to_string(status_b));
        v.require(!a.empty() && a == b, "text reports differ");
        v.require(slurp(json_a) == slurp(json_b) && !slurp(json_a).empty(), "JSON reports differ");
        v.require(took < 60.0, "runtime");
        std::remove(json_a.c_str());
        std::remove(json_b.c_str());
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.2f s for both runs", took);
        v.detail = "two runs on two-coins.json, exit 0, text and JSON byte-identical, " + std::string(buf);
        return v;
    });

    std::cout << (failures == 0 ? "all criteria pass" : std::to_string(failures) + " criteria fail") << std::endl;
    return failures == 0 ? 0 : 1;
}
