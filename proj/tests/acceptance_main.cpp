// Acceptance suite: one pass/fail line per criterion, nonzero exit on failure.
#include "anisotl/io.hpp"
#include "anisotl/norms.hpp"
#include "anisotl/orbit.hpp"
#include "anisotl/witness.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <vector>

using namespace anisotl;

namespace {

int failures = 0;

void run_criterion(int number, const std::string& name,
                   const std::function<std::pair<bool, std::string>()>& body) {
    auto start = std::chrono::steady_clock::now();
    bool pass = false;
    std::string detail;
    try {
        auto [ok, msg] = body();
        pass = ok;
        detail = msg;
    } catch (const std::exception& e) {
        pass = false;
        detail = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] criterion %2d: %s (%s) [%.1fs]\n", pass ? "PASS" : "FAIL", number,
                name.c_str(), detail.c_str(), secs);
    std::fflush(stdout);
    if (!pass) ++failures;
}

expansive_matrix rat2(const char* a00, const char* a01, const char* a10, const char* a11) {
    return expansive_matrix::from_rational(2, {parse_rational(a00), parse_rational(a01),
                                               parse_rational(a10), parse_rational(a11)});
}

expansive_matrix diag22() { return rat2("2", "0", "0", "2"); }
expansive_matrix diag2m2() { return rat2("2", "0", "0", "-2"); }
expansive_matrix antidiag() { return rat2("0", "2", "2", "0"); }
expansive_matrix rot2(double phi = 1.0) {
    dmatrix m = scaled_rotation(2.0, phi);
    return expansive_matrix::from_float(2, m.entries());
}

space_params space_of(expansive_matrix m, double alpha, const char* p, const char* q) {
    return space_params{std::move(m), alpha, exponent::parse(p), exponent::parse(q)};
}

coefficient_sequence random_explicit(std::mt19937_64& rng, int dim, long j_lo, long j_hi,
                                     int span, int atoms) {
    std::uniform_int_distribution<long> jd(j_lo, j_hi);
    std::uniform_int_distribution<long long> kd(-span, span);
    std::uniform_real_distribution<double> vd(0.5, 2.5);
    std::vector<seq_atom> out;
    for (int i = 0; i < atoms; ++i) {
        kvec k(dim);
        for (int t = 0; t < dim; ++t) k[t] = kd(rng);
        out.push_back({jd(rng), k, vd(rng)});
    }
    return coefficient_sequence::from_atoms(dim, std::move(out));
}

bool close_abs(double a, double b, double tol) { return std::abs(a - b) <= tol; }

// --- criterion 1 -------------------------------------------------------------

std::pair<bool, std::string> criterion_delta_closed_form() {
    auto start = std::chrono::steady_clock::now();
    std::vector<expansive_matrix> mats{diag22(), diag2m2(), antidiag()};
    const double alphas[] = {0.0, 0.5};
    const char* ps[] = {"1/2", "1", "2"};
    mc_config mc;
    mc.samples = 1'000'000;
    mc.seed = 0;
    double worst_exact = 0, worst_mc = 0;
    int checks = 0;
    for (const auto& m : mats)
        for (double alpha : alphas)
            for (const char* p : ps)
                for (long j0 = -2; j0 <= 2; ++j0) {
                    space_params s = space_of(m, alpha, p, "2");
                    double expected =
                        m.det_abs_pow(-static_cast<double>(j0) * (alpha + 0.5 - s.p.reciprocal()));
                    auto seq = coefficient_sequence::from_atoms(2, {{j0, {0, 0}, 1.0}});
                    norm_result exact = norm_lp(seq, s, eval_method::exact);
                    worst_exact = std::max(worst_exact, std::abs(exact.value - expected));
                    if (std::abs(exact.value - expected) > 1e-9)
                        return {false, "exact delta norm off at j0=" + std::to_string(j0)};
                    norm_result sampled = norm_lp(seq, s, eval_method::monte_carlo, mc);
                    double margin = 3 * sampled.error_bound + 1e-12;
                    worst_mc = std::max(worst_mc, std::abs(sampled.value - expected) - margin);
                    if (std::abs(sampled.value - expected) > margin)
                        return {false, "MC delta norm outside 3 s.e."};
                    ++checks;
                }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs >= 10.0) return {false, "runtime exceeded 10 s"};
    std::ostringstream os;
    os << checks << " combos, max exact err " << worst_exact;
    return {true, os.str()};
}

// --- criterion 2 -------------------------------------------------------------

std::pair<bool, std::string> criterion_single_scale() {
    std::mt19937_64 rng(1002);
    const char* ps[] = {"1/2", "1", "2"};
    double worst = 0;
    for (int trial = 0; trial < 50; ++trial) {
        int dim = trial % 2 ? 1 : 2;
        std::uniform_int_distribution<int> na(2, 8);
        auto c = random_explicit(rng, dim, 0, 0, 6, na(rng));
        std::uniform_real_distribution<double> ad(-0.5, 0.5);
        double alpha = ad(rng);
        for (const char* p : ps) {
            space_params s = space_of(diag22(), alpha, p, trial % 3 ? "2" : "1");
            if (dim == 1) s.matrix = expansive_matrix::from_rational(1, {parse_rational("2")});
            double pp = s.p.to_double();
            double expect = 0;
            for (const auto& a : c.atoms()) expect += std::pow(a.value, pp);
            expect = std::pow(expect, 1.0 / pp);
            double got = norm_lp(c, s, eval_method::exact).value;
            worst = std::max(worst, std::abs(got - expect));
            if (!close_abs(got, expect, 1e-9 * std::max(1.0, expect)))
                return {false, "l^p identity failed"};
        }
        // p = infinity through the averaged-cube evaluator
        space_params sinf = space_of(diag22(), alpha, "inf", "2");
        if (dim == 1) sinf.matrix = expansive_matrix::from_rational(1, {parse_rational("2")});
        double expect_inf = 0;
        for (const auto& a : c.atoms()) expect_inf = std::max(expect_inf, a.value);
        double got_inf = norm_infty_q(c, sinf, eval_method::exact).value;
        worst = std::max(worst, std::abs(got_inf - expect_inf));
        if (!close_abs(got_inf, expect_inf, 1e-9)) return {false, "l^inf identity failed"};
    }
    std::ostringstream os;
    os << "50 sequences, max err " << worst;
    return {true, os.str()};
}

// --- criterion 3 -------------------------------------------------------------

std::pair<bool, std::string> criterion_pq_closed_form() {
    std::mt19937_64 rng(1003);
    const char* ps[] = {"1/2", "1", "2"};
    double worst = 0;
    for (int trial = 0; trial < 50; ++trial) {
        int dim = trial % 2 ? 1 : 2;
        std::uniform_int_distribution<int> na(3, 12);
        std::uniform_real_distribution<double> ad(-0.5, 0.75);
        auto c = random_explicit(rng, dim, -2, 2, 2, na(rng));
        double alpha = ad(rng);
        const char* p = ps[trial % 3];
        auto m = trial % 4 == 0 ? diag2m2() : diag22();
        space_params s = space_of(m, alpha, p, p);
        if (dim == 1) s.matrix = expansive_matrix::from_rational(1, {parse_rational("-2")});
        double cf = norm_closed_form_pq(c, s).value;
        double geo = norm_lp(c, s, eval_method::exact).value;
        double err = std::abs(cf - geo) / std::max(1.0, std::abs(cf));
        worst = std::max(worst, err);
        if (err > 1e-9) return {false, "closed form disagrees with the geometric path"};
    }
    std::ostringstream os;
    os << "50 sequences, max rel err " << worst;
    return {true, os.str()};
}

// --- criterion 4 -------------------------------------------------------------

std::pair<bool, std::string> criterion_orbit_oracle() {
    auto start = std::chrono::steady_clock::now();
    std::vector<std::pair<expansive_matrix, expansive_matrix>> pairs;
    // ten constructed finite pairs: B = P D' P^-1 with D'^m = D^m
    std::vector<std::array<const char*, 4>> pmats{{"1", "1", "0", "1"},  {"2", "1", "1", "1"},
                                                  {"1", "0", "2", "1"},  {"3", "1", "2", "1"},
                                                  {"1", "-1", "1", "1"}};
    std::vector<std::pair<std::array<const char*, 4>, std::array<const char*, 4>>> dpairs{
        {{"2", "0", "0", "2"}, {"2", "0", "0", "-2"}},   // period 2
        {{"2", "0", "0", "2"}, {"0", "-2", "2", "0"}},   // rotation by 90: period 4
    };
    for (const auto& pm : pmats)
        for (const auto& dp : dpairs) {
            qmatrix p(2, {parse_rational(pm[0]), parse_rational(pm[1]), parse_rational(pm[2]),
                          parse_rational(pm[3])});
            auto conj = [&](const std::array<const char*, 4>& d) {
                qmatrix dm(2, {parse_rational(d[0]), parse_rational(d[1]), parse_rational(d[2]),
                               parse_rational(d[3])});
                qmatrix res = p * dm * p.inverse();
                return expansive_matrix::from_rational(2, res.entries());
            };
            pairs.emplace_back(conj(dp.first), conj(dp.second));
        }
    // ten generic rational pairs (orbit infinite)
    std::mt19937_64 rng(1004);
    std::uniform_int_distribution<int> off(-1, 1);
    while (pairs.size() < 20) {
        try {
            auto a = rat2("2", "1", "0", "3");
            qmatrix b(2, {mpq_class(3 + off(rng)), mpq_class(off(rng)), mpq_class(1),
                          mpq_class(2 + off(rng))});
            auto bm = expansive_matrix::from_rational(2, b.entries());
            pairs.emplace_back(a, bm);
        } catch (const std::exception&) {
            continue; // rejected draw (singular or not expansive)
        }
    }

    int finite_seen = 0;
    for (auto& [a, b] : pairs) {
        orbit_verdict v = orbit_is_finite(a, b, 64);
        long n128 = brute_force_orbit_count(a, b, 128);
        long n256 = brute_force_orbit_count(a, b, 256);
        bool saturated = n128 == n256;
        if (v.finite != saturated) return {false, "verdict disagrees with oracle saturation"};
        if (v.finite) {
            ++finite_seen;
            auto dec = decompose_orbit(a, b, 64);
            if (static_cast<long>(dec.size()) != n256)
                return {false, "class count disagrees with the oracle"};
            if (static_cast<long>(dec.size()) > v.period) return {false, "N > period"};
            if (std::abs(a.abs_det() - b.abs_det()) > 1e-12)
                return {false, "finite orbit with mismatched determinants"};
        }
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs >= 30.0) return {false, "runtime exceeded 30 s"};
    std::ostringstream os;
    os << "20 pairs (" << finite_seen << " finite), saturation matched";
    return {true, os.str()};
}

// --- criterion 5 -------------------------------------------------------------

std::pair<bool, std::string> criterion_boundedness() {
    std::mt19937_64 rng(1005);
    auto a = diag22();
    auto b = diag2m2();
    const char* combos[3][2] = {{"1", "2"}, {"2", "1"}, {"1/2", "inf"}};
    std::uniform_int_distribution<int> na(10, 40);
    std::vector<coefficient_sequence> corpus;
    for (int i = 0; i < 100; ++i) corpus.push_back(random_explicit(rng, 2, -3, 3, 2, na(rng)));
    double spread_worst = 0;
    for (auto& pq : combos) {
        double rmin = std::numeric_limits<double>::infinity(), rmax = 0;
        for (const auto& c : corpus) {
            space_params sa = space_of(a, 0.0, pq[0], pq[1]);
            space_params sb = space_of(b, 0.0, pq[0], pq[1]);
            double norm_a = norm_lp(c, sa, eval_method::exact).value;
            double norm_b = norm_lp(c, sb, eval_method::exact).value;
            double ratio = norm_b / norm_a;
            rmin = std::min(rmin, ratio);
            rmax = std::max(rmax, ratio);
        }
        spread_worst = std::max(spread_worst, rmax / rmin);
        if (rmax / rmin > 8.0) return {false, "equivalence spread exceeds 8"};
    }
    // determinant-matched p = q pair: exact ratio 1 through the closed form
    space_params sa = space_of(diag22(), 1.0, "2", "2");
    space_params sb = space_of(rat2("4", "0", "0", "4"), 0.5, "2", "2");
    for (int i = 0; i < 20; ++i) {
        auto c = random_explicit(rng, 2, -3, 3, 2, 15);
        double va = norm_closed_form_pq(c, sa).value;
        double vb = norm_closed_form_pq(c, sb).value;
        if (std::abs(va / vb - 1.0) > 1e-9) return {false, "determinant-matched ratio not 1"};
    }
    std::ostringstream os;
    os << "max spread " << spread_worst << " over 3 regimes x 100 sequences";
    return {true, os.str()};
}

// --- criterion 6 -------------------------------------------------------------

std::pair<bool, std::string> criterion_case1_slope() {
    auto start = std::chrono::steady_clock::now();
    mc_config mc;
    mc.samples = 1'000'000;
    mc.seed = 0;
    law_report rep = verify_case1_ratio(diag22(), rot2(), exponent::of(1), exponent::of(2), 0.0,
                                        0.0, exponent::of(2), {2, 3, 4, 5}, mc);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::ostringstream os;
    os << "slope " << rep.slope << " (theory 0.5)";
    if (rep.inconclusive) return {false, os.str() + ", MC inconclusive"};
    if (secs >= 300.0) return {false, "runtime exceeded 5 min"};
    if (rep.slope < 0.35 || rep.slope > 0.65) return {false, os.str()};
    return {true, os.str()};
}

// --- criterion 7 -------------------------------------------------------------

std::pair<bool, std::string> criterion_case2_gap() {
    auto a = diag22();
    auto b = rot2();
    search_config cfg;
    separation_data sep = find_separating_points(a, b, 3, cfg);
    std::vector<double> tau(3, 1.0);
    case2_result cw = case2_witness(a, b, sep, tau, 0.0, 0.1);
    space_params sa = space_of(a, 0.0, "inf", "1");
    space_params sb = space_of(b, 0.0, "inf", "1");
    double norm_a = norm_infty_q(cw.for_a.seq, sa, eval_method::exact).value;
    double norm_b = norm_infty_q(cw.for_b.seq, sb, eval_method::exact).value;
    double tau_l1 = 3.0, tau_linf = 1.0;
    double lower = cw.volume_ratio * tau_l1 * (1.0 - 1e-6);
    std::ostringstream os;
    os << "A-norm " << norm_a << " >= " << lower << ", B-norm " << norm_b << " <= "
       << tau_linf + 1e-9 << ", gap " << norm_a / norm_b;
    if (norm_a < lower) return {false, os.str()};
    if (norm_b > tau_linf + 1e-9) return {false, os.str()};
    return {true, os.str()};
}

// --- criterion 8 -------------------------------------------------------------

std::pair<bool, std::string> criterion_multiscale_slope() {
    mc_config mc;
    mc.samples = 250'000;
    mc.seed = 0;
    mc.candidate_samples = 50'000;
    std::ostringstream os;
    for (const char* p : {"1", "inf"})
        for (const char* q : {"1", "2"}) {
            space_params s = space_of(diag22(), 0.0, p, q);
            law_report rep =
                verify_multiscale_law(s, {2, 4, 8, 16}, eval_method::monte_carlo, mc);
            double expect = 1.0 / s.q.to_double();
            os << "p=" << p << ",q=" << q << ": " << rep.slope << " ";
            if (std::abs(rep.slope - expect) > 0.1) {
                os << "(outside 1/q +- 0.1)";
                return {false, os.str()};
            }
        }
    return {true, os.str()};
}

// --- criterion 9 -------------------------------------------------------------

std::pair<bool, std::string> criterion_property_suites() {
    std::mt19937_64 rng(1009);
    const char* regimes[4][2] = {{"1", "2"}, {"2", "inf"}, {"inf", "2"}, {"inf", "inf"}};

    // homogeneity
    std::uniform_real_distribution<double> lam(0.2, 4.0);
    for (auto& pq : regimes)
        for (int i = 0; i < 10; ++i) {
            space_params s = space_of(i % 2 ? diag22() : diag2m2(), 0.0, pq[0], pq[1]);
            auto c = random_explicit(rng, 2, -2, 2, 2, 8);
            double l = lam(rng);
            double base = evaluate_norm(c, s).value;
            double scaled = evaluate_norm(c.scaled(l), s).value;
            if (std::abs(scaled - l * base) > 1e-9 * std::max(1.0, l * base))
                return {false, "homogeneity violated"};
        }

    // solidity on 100 masked pairs
    std::uniform_real_distribution<double> mask(0.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        auto& pq = regimes[i % 4];
        space_params s = space_of(diag22(), 0.2, pq[0], pq[1]);
        auto c = random_explicit(rng, 2, -2, 2, 2, 8);
        auto atoms = c.atoms();
        for (auto& at : atoms) at.value *= mask(rng);
        auto cp = coefficient_sequence::from_atoms(2, std::move(atoms));
        if (evaluate_norm(cp, s).value > evaluate_norm(c, s).value + 1e-12)
            return {false, "solidity violated"};
    }

    // r-triangle defect on 200 pairs across regimes
    for (int i = 0; i < 200; ++i) {
        auto& pq = regimes[i % 4];
        space_params s = space_of(diag22(), 0.0, pq[0], pq[1]);
        auto x = random_explicit(rng, 2, -1, 1, 2, 6);
        auto y = random_explicit(rng, 2, -1, 1, 2, 6);
        if (r_triangle_defect(x, y, s) > 1e-9) return {false, "r-triangle defect positive"};
    }

    // overlay vs MC on 25 instances within 4 sigma
    mc_config mc;
    mc.samples = 200'000;
    for (int i = 0; i < 25; ++i) {
        space_params s = space_of(i % 2 ? diag2m2() : diag22(), 0.0, "1", "2");
        auto c = random_explicit(rng, 2, -2, 2, 2, 12);
        double exact = norm_lp(c, s, eval_method::exact).value;
        mc.seed = 100 + i;
        norm_result sampled = norm_lp(c, s, eval_method::monte_carlo, mc);
        if (std::abs(exact - sampled.value) > 4 * sampled.error_bound + 1e-9)
            return {false, "overlay vs MC beyond 4 sigma"};
    }

    // partition and volume-law invariants
    std::uniform_real_distribution<double> xs(-8.0, 8.0);
    std::uniform_int_distribution<long> js(-3, 3);
    auto rot = rot2();
    for (int i = 0; i < 10000; ++i) {
        const expansive_matrix& m = i % 2 ? diag2m2() : rot;
        long j = js(rng);
        vecd x{xs(rng), xs(rng)};
        kvec k = geom::cube_of_point(m, j, x);
        dmatrix inv = m.power(-j);
        for (int t = 0; t < 2; ++t) {
            double y = inv.at(t, 0) * x[0] + inv.at(t, 1) * x[1] - static_cast<double>(k[t]);
            if (!(y >= 0.0 && y < 1.0)) return {false, "partition property violated"};
        }
    }
    for (long j = -4; j <= 4; ++j) {
        for (const auto& m : {diag22(), antidiag()}) {
            double vol = geom::cube_polygon(m, j, {1, -2}).area();
            if (std::abs(vol - m.det_abs_pow(static_cast<double>(j))) >
                1e-9 * std::max(1.0, vol))
                return {false, "volume law violated"};
        }
    }
    return {true, "homogeneity, solidity, 200 r-triangle pairs, 25 MC checks, invariants"};
}

// --- criterion 10 ------------------------------------------------------------

std::pair<bool, std::string> criterion_stacked_sup_window() {
    std::mt19937_64 rng(1010);
    std::vector<std::pair<coefficient_sequence, space_params>> corpus;
    for (long j0 : {-1L, 0L, 1L})
        corpus.emplace_back(coefficient_sequence::from_atoms(2, {{j0, {0, 0}, 1.0}}),
                            space_of(diag22(), 0.0, "inf", "1"));
    corpus.emplace_back(
        coefficient_sequence::from_atoms(2, {{0, {0, 0}, 3.0}, {0, {4, 0}, 4.0}, {0, {0, 4}, 2.0}}),
        space_of(diag22(), 0.0, "inf", "2"));
    corpus.emplace_back(coefficient_sequence::from_atoms(1, {{0, {0}, 1.0}, {1, {0}, 1.0}}),
                        space_params{expansive_matrix::from_rational(1, {parse_rational("2")}),
                                     0.0, exponent::infinity(), exponent::of(1)});
    {
        // materialized case-2 witness at N = 2
        auto a = diag22();
        auto b = rot2();
        separation_data sep = find_separating_points(a, b, 2);
        case2_result cw = case2_witness(a, b, sep, {1.0, 1.0}, 0.0, 0.1);
        corpus.emplace_back(cw.for_a.seq, space_of(a, 0.0, "inf", "1"));
    }
    for (int i = 0; i < 5; ++i)
        corpus.emplace_back(random_explicit(rng, 2, -2, 2, 2, 8),
                            space_of(diag22(), 0.0, "inf", i % 2 ? "1" : "2"));

    shrink_family shrink;
    shrink.min_fraction = 0.5;
    shrink.sub_box = [](long, const kvec& k, vecd& lo, vecd& hi) {
        const int d = static_cast<int>(k.size());
        double h = 0.5 * std::pow(0.6, 1.0 / d); // centered box of volume 0.6
        lo.assign(d, 0.5 - h);
        hi.assign(d, 0.5 + h);
    };

    double worst_margin = std::numeric_limits<double>::infinity();
    for (auto& [c, s] : corpus) {
        double averaged = norm_infty_q(c, s, eval_method::exact).value;
        double full = stacked_sup_norm(c, s);
        double shrunk = stacked_sup_norm(c, s, &shrink);
        if (averaged > full + 1e-12) return {false, "averaged norm exceeds the stacked sup"};
        if (shrunk > full + 1e-12) return {false, "shrunken sup exceeds the full sup"};
        if (shrunk < averaged / 10.0 - 1e-12) return {false, "shrunken sup below norm/10"};
        worst_margin = std::min(worst_margin, full - averaged);
    }
    std::ostringstream os;
    os << corpus.size() << " corpus instances, min (sup - avg) margin " << worst_margin;
    return {true, os.str()};
}

} // namespace

int main() {
    std::printf("anisotl acceptance suite\n");
    run_criterion(1, "delta closed form, exact and MC", criterion_delta_closed_form);
    run_criterion(2, "single-scale l^p identity", criterion_single_scale);
    run_criterion(3, "p = q closed form vs geometric path", criterion_pq_closed_form);
    run_criterion(4, "orbit criterion vs brute-force oracle", criterion_orbit_oracle);
    run_criterion(5, "bounded equivalence for the period-2 pair", criterion_boundedness);
    run_criterion(6, "case 1 divergence slope", criterion_case1_slope);
    run_criterion(7, "case 2 q-dependence gap at p = infinity", criterion_case2_gap);
    run_criterion(8, "multiscale slope 1/q", criterion_multiscale_slope);
    run_criterion(9, "property suites", criterion_property_suites);
    run_criterion(10, "stacked sup window", criterion_stacked_sup_window);
    if (failures == 0)
        std::printf("all criteria passed\n");
    else
        std::printf("%d criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
