#include "anisotl/norms.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>

namespace anisotl {

using geom::region;

std::string norm_method_name(norm_method_tag t) {
    switch (t) {
    case norm_method_tag::exact_1d: return "exact-1d";
    case norm_method_tag::exact_2d_overlay: return "exact-2d-overlay";
    case norm_method_tag::monte_carlo: return "monte-carlo";
    case norm_method_tag::closed_form: return "closed-form";
    case norm_method_tag::sup_formula: return "sup-formula";
    }
    return "?";
}

namespace {

double scale_weight(const space_params& s, long j) {
    return s.matrix.det_abs_pow(-static_cast<double>(j) * (s.alpha + 0.5));
}

// Precomputed per-scale data for fast pointwise stack evaluation. Scales with
// few explicit atoms are flattened into plain arrays so the Monte Carlo inner
// loop avoids hashing.
struct stack_evaluator {
    struct flat_entry {
        long long k[2];
        double wv;  // weight * |c|
        double wvq; // (weight * |c|)^q, = wv when q = inf
    };
    const coefficient_sequence* c;
    const space_params* s;
    std::vector<long> scales;
    std::vector<dmatrix> inv;   // M^-j per scale
    std::vector<double> weight; // |det|^{-j(alpha+1/2)}
    std::vector<std::vector<flat_entry>> flat; // per scale; empty => generic path
    double q = 2;
    bool q_inf = false;
    mutable kvec scratch;

    stack_evaluator(const coefficient_sequence& cc, const space_params& ss) : c(&cc), s(&ss) {
        scales = cc.scales();
        flat.resize(scales.size());
        for (size_t t = 0; t < scales.size(); ++t) {
            inv.push_back(ss.matrix.power(-scales[t]));
            weight.push_back(scale_weight(ss, scales[t]));
        }
        q_inf = ss.q.is_inf();
        if (!q_inf) q = ss.q.to_double();
        if (cc.is_explicit() && cc.dim() <= 2) {
            std::map<long, size_t> index;
            for (size_t t = 0; t < scales.size(); ++t) index[scales[t]] = t;
            std::map<long, long> counts;
            for (const auto& a : cc.atoms()) ++counts[a.j];
            for (const auto& a : cc.atoms()) {
                if (counts[a.j] > 48) continue;
                double wv = weight[index[a.j]] * a.value;
                flat_entry e{{a.k[0], cc.dim() > 1 ? a.k[1] : 0}, wv,
                             q_inf ? wv : std::pow(wv, q)};
                flat[index[a.j]].push_back(e);
            }
        }
        scratch.resize(cc.dim());
    }

    // sum_{j <= cap} (w_j |c_{j,k(x,j)}|)^q, no outer root (q < inf)
    double qsum(const vecd& x, long cap) const {
        double acc = 0;
        for (size_t t = 0; t < scales.size(); ++t) {
            if (scales[t] > cap) break;
            if (!flat[t].empty()) {
                acc += flat_term(t, x, true);
            } else {
                double v = generic_lookup(t, x);
                if (v > 0) acc += std::pow(weight[t] * v, q);
            }
        }
        return acc;
    }

    double sup_term(const vecd& x, long cap) const {
        double best = 0;
        for (size_t t = 0; t < scales.size(); ++t) {
            if (scales[t] > cap) break;
            if (!flat[t].empty()) {
                best = std::max(best, flat_term(t, x, false));
            } else {
                double v = generic_lookup(t, x);
                if (v > 0) best = std::max(best, weight[t] * v);
            }
        }
        return best;
    }

    double value(const vecd& x, long cap) const {
        if (q_inf) return sup_term(x, cap);
        double acc = qsum(x, cap);
        return acc > 0 ? std::pow(acc, 1.0 / q) : 0.0;
    }

private:
    void locate(size_t t, const vecd& x) const {
        const dmatrix& m = inv[t];
        const int d = m.dim();
        for (int i = 0; i < d; ++i) {
            double y = 0;
            for (int cdim = 0; cdim < d; ++cdim) y += m.at(i, cdim) * x[cdim];
            scratch[i] = static_cast<long long>(std::floor(y));
        }
    }

    // flattened scales exist only for d <= 2
    double flat_term(size_t t, const vecd& x, bool powered) const {
        locate(t, x);
        const long long k1 = c->dim() > 1 ? scratch[1] : 0;
        for (const auto& e : flat[t])
            if (e.k[0] == scratch[0] && e.k[1] == k1) return powered ? e.wvq : e.wv;
        return 0.0;
    }

    double generic_lookup(size_t t, const vecd& x) const {
        locate(t, x);
        return c->value_at(scales[t], scratch);
    }
};

constexpr long no_cap = std::numeric_limits<long>::max();

} // namespace

double stack_value(const coefficient_sequence& c, const space_params& s, const vecd& x,
                   std::optional<long> j_cap) {
    if (c.empty()) return 0;
    stack_evaluator ev(c, s);
    return ev.value(x, j_cap.value_or(no_cap));
}

region support_region(const coefficient_sequence& c, const space_params& s) {
    const int d = c.dim();
    if (c.empty()) return region::box(vecd(d, 0.0), vecd(d, 0.0));
    // one box per scale: scattered supports (rotated dilations) would waste
    // most of a single box around everything
    std::vector<region> parts;
    for (long j : c.scales()) {
        kvec klo, khi;
        c.scale_k_box(j, klo, khi);
        dmatrix p = s.matrix.power(j);
        vecd lo(d, 0), hi(d, 0);
        bool first = true;
        for (int corner = 0; corner < (1 << d); ++corner) {
            vecd pt(d);
            for (int i = 0; i < d; ++i)
                pt[i] = (corner >> i) & 1 ? static_cast<double>(khi[i] + 1)
                                          : static_cast<double>(klo[i]);
            for (int i = 0; i < d; ++i) {
                double y = 0;
                for (int cdim = 0; cdim < d; ++cdim) y += p.at(i, cdim) * pt[cdim];
                if (first) {
                    lo[i] = y;
                    hi[i] = y;
                } else {
                    lo[i] = std::min(lo[i], y);
                    hi[i] = std::max(hi[i], y);
                }
            }
            first = false;
        }
        parts.push_back(region::box(std::move(lo), std::move(hi)));
    }
    if (parts.size() == 1) return parts.front();
    return region::join(std::move(parts));
}

namespace {

// ---- exact L^p paths ------------------------------------------------------

struct cube_term {
    long j;
    kvec k;
    double qterm;  // (w |c|)^q, or w |c| when q = inf
};

double cell_stack(const std::vector<cube_term>& terms, const std::vector<uint32_t>& mask,
                  bool q_inf, double q) {
    double acc = 0;
    for (uint32_t idx : mask) {
        if (q_inf)
            acc = std::max(acc, terms[idx].qterm);
        else
            acc += terms[idx].qterm;
    }
    if (q_inf) return acc;
    return acc > 0 ? std::pow(acc, 1.0 / q) : 0.0;
}

std::vector<cube_term> explicit_terms(const coefficient_sequence& c, const space_params& s) {
    std::vector<cube_term> terms;
    const bool q_inf = s.q.is_inf();
    const double q = q_inf ? 1.0 : s.q.to_double();
    for (const auto& a : c.atoms()) {
        double w = scale_weight(s, a.j) * a.value;
        terms.push_back({a.j, a.k, q_inf ? w : std::pow(w, q)});
    }
    return terms;
}

// Piecewise-constant integral over R of stack^p for d = 1: breakpoints are
// the cube endpoints; the stack is constant between consecutive ones.
double integral_1d(const coefficient_sequence& c, const space_params& s, double p) {
    std::vector<double> cuts;
    for (const auto& a : c.atoms()) {
        double lo, hi;
        geom::cube_interval(s.matrix, a.j, a.k[0], lo, hi);
        cuts.push_back(lo);
        cuts.push_back(hi);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    stack_evaluator ev(c, s);
    double total = 0;
    for (size_t i = 0; i + 1 < cuts.size(); ++i) {
        double len = cuts[i + 1] - cuts[i];
        if (len <= 0) continue;
        vecd mid{0.5 * (cuts[i] + cuts[i + 1])};
        double v = ev.value(mid, no_cap);
        if (v > 0) total += len * std::pow(v, p);
    }
    return total;
}

// d = 2 overlay of all support cubes; returns sum of |cell| * stack(cell)^p.
template <class T>
double integral_2d(const coefficient_sequence& c, const space_params& s, double p,
                   size_t budget, long* pieces_out) {
    std::vector<cube_term> terms = explicit_terms(c, s);
    std::vector<geom::polygon<T>> polys;
    polys.reserve(terms.size());
    for (const auto& t : terms) {
        if constexpr (std::is_same_v<T, mpq_class>)
            polys.push_back(geom::cube_polygon_exact(s.matrix, t.j, t.k));
        else
            polys.push_back(geom::cube_polygon(s.matrix, t.j, t.k));
    }
    geom::overlay<T> ov = geom::overlay_polygons(polys, budget);
    if (pieces_out) *pieces_out = static_cast<long>(ov.pieces.size());
    const bool q_inf = s.q.is_inf();
    const double q = q_inf ? 1.0 : s.q.to_double();
    double total = 0;
    for (const auto& piece : ov.pieces) {
        double v = cell_stack(terms, piece.mask, q_inf, q);
        if (v > 0) total += piece.poly.area() * std::pow(v, p);
    }
    return total;
}

norm_result norm_lp_exact(const coefficient_sequence& c, const space_params& s,
                          size_t budget) {
    const double p = s.p.to_double();
    norm_result r;
    r.diag.support_cubes = static_cast<long>(c.atoms().size());
    double integral = 0;
    if (c.dim() == 1) {
        r.method = norm_method_tag::exact_1d;
        integral = integral_1d(c, s, p);
    } else {
        r.method = norm_method_tag::exact_2d_overlay;
        if (s.matrix.is_rational())
            integral = integral_2d<mpq_class>(c, s, p, budget, &r.diag.overlay_pieces);
        else
            integral = integral_2d<double>(c, s, p, budget, &r.diag.overlay_pieces);
    }
    r.value = integral > 0 ? std::pow(integral, 1.0 / p) : 0.0;
    r.error_bound = 0;
    return r;
}

norm_result norm_lp_mc(const coefficient_sequence& c, const space_params& s,
                       const mc_config& mc) {
    const double p = s.p.to_double();
    stack_evaluator ev(c, s);
    // sample the plain bounding box; the stack vanishes off the support
    region sup = support_region(c, s);
    vecd lo, hi;
    sup.bounds(lo, hi);
    region box = region::box(std::move(lo), std::move(hi));
    const bool q_inf = s.q.is_inf();
    const double p_over_q = q_inf ? 0.0 : p / s.q.to_double();
    auto f = [&](const vecd& x) {
        if (q_inf) {
            double v = ev.sup_term(x, no_cap);
            return v > 0 ? std::pow(v, p) : 0.0;
        }
        double qs = ev.qsum(x, no_cap);
        return qs > 0 ? std::pow(qs, p_over_q) : 0.0;
    };
    geom::mc_result est = geom::integrate_mc(f, box, mc.samples, mc.seed);
    norm_result r;
    r.method = norm_method_tag::monte_carlo;
    if (est.estimate <= 0) {
        r.value = 0;
        r.error_bound = est.std_error > 0 ? std::pow(est.std_error, 1.0 / p) : 0.0;
    } else {
        r.value = std::pow(est.estimate, 1.0 / p);
        r.error_bound = est.std_error * (1.0 / p) * std::pow(est.estimate, 1.0 / p - 1.0);
    }
    return r;
}

} // namespace

norm_result norm_lp(const coefficient_sequence& c, const space_params& s, eval_method method,
                    const mc_config& mc) {
    if (s.p.is_inf()) throw std::invalid_argument("norm_lp needs p < infinity");
    if (c.empty()) return {0.0, norm_method_tag::closed_form, 0.0, {}};
    if (method == eval_method::exact) {
        if (!c.is_explicit())
            throw std::invalid_argument("exact method needs an explicit sequence");
        if (c.dim() > 2) throw std::invalid_argument("exact path supports d <= 2");
        try {
            return norm_lp_exact(c, s, mc.overlay_budget);
        } catch (const geom::overlay_capacity_error& e) {
            norm_result r = norm_lp_mc(c, s, mc);
            r.diag.note = std::string("overlay capacity exceeded, fell back to MC: ") + e.what();
            return r;
        }
    }
    return norm_lp_mc(c, s, mc);
}

namespace {

// ---- p = infinity, q < infinity sweep --------------------------------------

// Exact per-candidate integration context: support cube polygons are built
// once; each candidate clips the few atoms whose boxes overlap it.
template <class T>
struct exact_sweep {
    const coefficient_sequence* c;
    const space_params* s;
    double q;
    struct entry {
        long j;
        double qterm;
        geom::polygon<T> poly;
        T x0, y0, x1, y1;
        double lo, hi; // d = 1
    };
    std::vector<entry> entries;

    exact_sweep(const coefficient_sequence& cc, const space_params& ss, double qq)
        : c(&cc), s(&ss), q(qq) {
        for (const auto& a : cc.atoms()) {
            entry e;
            e.j = a.j;
            e.qterm = std::pow(scale_weight(ss, a.j) * a.value, q);
            if (cc.dim() == 1) {
                geom::cube_interval(ss.matrix, a.j, a.k[0], e.lo, e.hi);
            } else {
                if constexpr (std::is_same_v<T, mpq_class>)
                    e.poly = geom::cube_polygon_exact(ss.matrix, a.j, a.k);
                else
                    e.poly = geom::cube_polygon(ss.matrix, a.j, a.k);
                e.poly.bbox(e.x0, e.y0, e.x1, e.y1);
            }
            entries.push_back(std::move(e));
        }
    }

    // integral over the candidate cube (jp, kp) of the q-power sum capped at jp
    double integrate(long jp, const kvec& kp) const {
        if (c->dim() == 1) {
            double plo, phi;
            geom::cube_interval(s->matrix, jp, kp[0], plo, phi);
            std::vector<double> cuts{plo, phi};
            for (const auto& e : entries) {
                if (e.j > jp || e.hi <= plo || e.lo >= phi) continue;
                cuts.push_back(std::clamp(e.lo, plo, phi));
                cuts.push_back(std::clamp(e.hi, plo, phi));
            }
            std::sort(cuts.begin(), cuts.end());
            cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
            double total = 0;
            for (size_t i = 0; i + 1 < cuts.size(); ++i) {
                double len = cuts[i + 1] - cuts[i];
                if (len <= 0) continue;
                double mid = 0.5 * (cuts[i] + cuts[i + 1]);
                double acc = 0;
                for (const auto& e : entries)
                    if (e.j <= jp && mid > e.lo && mid < e.hi) acc += e.qterm;
                total += len * acc;
            }
            return total;
        }
        geom::polygon<T> pcube;
        if constexpr (std::is_same_v<T, mpq_class>)
            pcube = geom::cube_polygon_exact(s->matrix, jp, kp);
        else
            pcube = geom::cube_polygon(s->matrix, jp, kp);
        T px0, py0, px1, py1;
        pcube.bbox(px0, py0, px1, py1);
        std::vector<double> qterms;
        std::vector<geom::polygon<T>> polys;
        for (const auto& e : entries) {
            if (e.j > jp) continue;
            if (e.x1 < px0 || px1 < e.x0 || e.y1 < py0 || py1 < e.y0) continue;
            geom::polygon<T> clipped = geom::clip_to_convex(e.poly, pcube);
            if (clipped.empty()) continue;
            qterms.push_back(e.qterm);
            polys.push_back(std::move(clipped));
        }
        if (polys.empty()) return 0;
        geom::overlay<T> ov = geom::overlay_polygons(polys);
        double total = 0;
        for (const auto& piece : ov.pieces) {
            double acc = 0;
            for (uint32_t idx : piece.mask) acc += qterms[idx];
            total += piece.poly.area() * acc;
        }
        return total;
    }
};

} // namespace

namespace {

norm_result norm_infty_q_sweep(const coefficient_sequence& c, const space_params& s,
                               eval_method method, const mc_config& mc) {
    norm_result r;
    r.method = method == eval_method::exact
                   ? (c.dim() == 1 ? norm_method_tag::exact_1d : norm_method_tag::exact_2d_overlay)
                   : norm_method_tag::monte_carlo;
    if (c.empty()) return r;

    const double q = s.q.to_double();
    const long j_lo = c.scale_min();
    const long j_hi = c.scale_max();
    const double abs_det = s.matrix.abs_det();

    // I_total upper bound: sum over support of (w|c|)^q |Q| ; exact for
    // explicit sequences, index-box bound for implicit ones.
    double i_upper = 0;
    if (c.is_explicit()) {
        for (const auto& a : c.atoms())
            i_upper += std::pow(scale_weight(s, a.j) * a.value, q) *
                       s.matrix.det_abs_pow(static_cast<double>(a.j));
    } else {
        for (long j : c.scales())
            i_upper += std::pow(scale_weight(s, j) * c.max_abs(j), q) *
                       s.matrix.det_abs_pow(static_cast<double>(j)) * c.support_count_bound(j);
    }
    r.diag.pruning_bound = i_upper;

    region support = support_region(c, s);
    stack_evaluator ev(c, s);

    double best_q = 0, best_err = 0;
    long best_scale = 0;

    std::unique_ptr<exact_sweep<mpq_class>> sweep_q;
    std::unique_ptr<exact_sweep<double>> sweep_d;
    if (method == eval_method::exact) {
        if (s.matrix.is_rational())
            sweep_q = std::make_unique<exact_sweep<mpq_class>>(c, s, q);
        else
            sweep_d = std::make_unique<exact_sweep<double>>(c, s, q);
    }
    auto eval_candidate = [&](long jp, const kvec& kp) {
        double avg = 0, err = 0;
        if (method == eval_method::exact) {
            double integral = sweep_q ? sweep_q->integrate(jp, kp) : sweep_d->integrate(jp, kp);
            avg = integral / s.matrix.det_abs_pow(static_cast<double>(jp));
        } else {
            uint64_t cand_seed = geom::mix64(mc.seed ^ geom::mix64(static_cast<uint64_t>(jp) *
                                                                   0x9e3779b97f4a7c15ULL));
            for (long long kv : kp) cand_seed = geom::mix64(cand_seed ^ static_cast<uint64_t>(kv));
            auto f = [&](const vecd& x) { return ev.qsum(x, jp); };
            geom::mc_result est =
                geom::cube_average_mc(f, s.matrix, jp, kp, mc.candidate_samples, cand_seed);
            avg = est.estimate;
            err = est.std_error;
        }
        ++r.diag.candidates;
        if (avg > best_q) {
            best_q = avg;
            best_err = err;
            best_scale = jp;
        }
    };

    auto scan_scale = [&](long jp) {
        for (const auto& kp : geom::cubes_meeting_region(s.matrix, jp, support, true))
            eval_candidate(jp, kp);
    };

    // Pointwise bound on the capped q-sum: at most one cube per scale covers
    // any point.
    auto pointwise_bound = [&](long jp) {
        double u = 0;
        for (long j : c.scales()) {
            if (j > jp) break;
            u += std::pow(scale_weight(s, j) * c.max_abs(j), q);
        }
        return u;
    };

    scan_scale(j_hi); // bootstrap at the top support scale
    for (long jp = j_lo; jp < j_hi + 4096; ++jp) {
        if (jp == j_hi) continue;
        if (best_q > 0 && std::pow(abs_det, static_cast<double>(jp)) * best_q >= i_upper) break;
        if (pointwise_bound(jp) <= best_q) continue;
        scan_scale(jp);
    }

    r.diag.best_scale = best_scale;
    r.diag.support_cubes =
        c.is_explicit() ? static_cast<long>(c.atoms().size()) : static_cast<long>(c.scales().size());
    if (best_q > 0) {
        r.value = std::pow(best_q, 1.0 / q);
        r.error_bound = best_err > 0 ? best_err * (1.0 / q) * std::pow(best_q, 1.0 / q - 1.0) : 0.0;
    }
    return r;
}

} // namespace

norm_result norm_infty_q(const coefficient_sequence& c, const space_params& s, eval_method method,
                         const mc_config& mc) {
    if (!s.p.is_inf()) throw std::invalid_argument("norm_infty_q needs p = infinity");
    if (s.q.is_inf())
        throw std::invalid_argument("norm_infty_q needs q < infinity; use norm_sup_sup");
    if (method == eval_method::exact) {
        if (!c.is_explicit())
            throw std::invalid_argument("exact method needs an explicit sequence");
        if (c.dim() > 2) throw std::invalid_argument("exact path supports d <= 2");
        try {
            return norm_infty_q_sweep(c, s, eval_method::exact, mc);
        } catch (const geom::overlay_capacity_error& e) {
            norm_result r = norm_infty_q_sweep(c, s, eval_method::monte_carlo, mc);
            r.diag.note = std::string("overlay capacity exceeded, fell back to MC: ") + e.what();
            return r;
        }
    }
    return norm_infty_q_sweep(c, s, method, mc);
}

norm_result norm_sup_sup(const coefficient_sequence& c, const space_params& s) {
    norm_result r;
    r.method = norm_method_tag::sup_formula;
    if (c.empty()) return r;
    double best = 0;
    if (c.is_explicit()) {
        for (const auto& a : c.atoms()) best = std::max(best, scale_weight(s, a.j) * a.value);
    } else {
        for (const auto& sc : c.implicit_scales()) {
            kvec k = sc.k_lo;
            // enumerate the declared index box
            while (true) {
                if (sc.contains(k))
                    best = std::max(best, scale_weight(s, sc.j) * std::abs(sc.coeff(k)));
                int axis = 0;
                while (axis < c.dim()) {
                    if (++k[axis] <= sc.k_hi[axis]) break;
                    k[axis] = sc.k_lo[axis];
                    ++axis;
                }
                if (axis == c.dim()) break;
            }
        }
    }
    r.value = best;
    return r;
}

norm_result evaluate_norm(const coefficient_sequence& c, const space_params& s,
                          eval_method method, const mc_config& mc) {
    if (!s.p.is_inf()) return norm_lp(c, s, method, mc);
    if (!s.q.is_inf()) return norm_infty_q(c, s, method, mc);
    return norm_sup_sup(c, s);
}

double stacked_sup_norm(const coefficient_sequence& c, const space_params& s,
                        const shrink_family* shrink) {
    if (!c.is_explicit())
        throw std::invalid_argument("stacked_sup_norm needs an explicit sequence");
    if (c.empty()) return 0;
    if (c.dim() > 2) throw std::invalid_argument("stacked_sup_norm supports d <= 2");
    const int d = c.dim();
    const bool q_inf = s.q.is_inf();
    const double q = q_inf ? 1.0 : s.q.to_double();

    // gather the sub-box of each atom in local coordinates
    std::vector<cube_term> terms = explicit_terms(c, s);
    std::vector<std::pair<vecd, vecd>> boxes(terms.size());
    for (size_t i = 0; i < terms.size(); ++i) {
        vecd lo(d, 0.0), hi(d, 1.0);
        if (shrink) {
            shrink->sub_box(terms[i].j, terms[i].k, lo, hi);
            double frac = 1;
            for (int a = 0; a < d; ++a) {
                if (!(0.0 <= lo[a] && lo[a] < hi[a] && hi[a] <= 1.0))
                    throw std::invalid_argument("sub-box outside the unit cube");
                frac *= hi[a] - lo[a];
            }
            if (frac <= shrink->min_fraction)
                throw std::invalid_argument("sub-box volume fraction below the configured floor");
        }
        boxes[i] = {std::move(lo), std::move(hi)};
    }

    if (q_inf) {
        // any E_{j,k} has positive measure, so the ess-sup is the largest term
        double best = 0;
        for (const auto& t : terms) best = std::max(best, t.qterm);
        return best;
    }

    if (d == 1) {
        std::vector<double> cuts;
        std::vector<std::pair<double, double>> ivals(terms.size());
        for (size_t i = 0; i < terms.size(); ++i) {
            double a = s.matrix.power(terms[i].j).at(0, 0);
            double base = static_cast<double>(terms[i].k[0]);
            double e0 = a * (base + boxes[i].first[0]);
            double e1 = a * (base + boxes[i].second[0]);
            ivals[i] = {std::min(e0, e1), std::max(e0, e1)};
            cuts.push_back(ivals[i].first);
            cuts.push_back(ivals[i].second);
        }
        std::sort(cuts.begin(), cuts.end());
        cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
        double best = 0;
        for (size_t i = 0; i + 1 < cuts.size(); ++i) {
            if (cuts[i + 1] - cuts[i] <= 0) continue;
            double mid = 0.5 * (cuts[i] + cuts[i + 1]);
            double acc = 0;
            for (size_t t = 0; t < terms.size(); ++t)
                if (mid > ivals[t].first && mid < ivals[t].second) acc += terms[t].qterm;
            best = std::max(best, acc);
        }
        return best > 0 ? std::pow(best, 1.0 / q) : 0.0;
    }

    // d = 2: overlay of the shrunk parallelograms
    std::vector<geom::dpolygon> polys(terms.size());
    for (size_t i = 0; i < terms.size(); ++i) {
        dmatrix p = s.matrix.power(terms[i].j);
        const vecd& lo = boxes[i].first;
        const vecd& hi = boxes[i].second;
        const double corners[4][2] = {{lo[0], lo[1]}, {hi[0], lo[1]}, {hi[0], hi[1]}, {lo[0], hi[1]}};
        geom::dpolygon poly;
        for (const auto& corner : corners) {
            double x = corner[0] + static_cast<double>(terms[i].k[0]);
            double y = corner[1] + static_cast<double>(terms[i].k[1]);
            poly.v.push_back({p.at(0, 0) * x + p.at(0, 1) * y, p.at(1, 0) * x + p.at(1, 1) * y});
        }
        poly.normalize_ccw();
        polys[i] = std::move(poly);
    }
    geom::overlay<double> ov = geom::overlay_polygons(polys);
    double best = 0;
    for (const auto& piece : ov.pieces) {
        if (piece.poly.area() <= 0) continue;
        double acc = 0;
        for (uint32_t idx : piece.mask) acc += terms[idx].qterm;
        best = std::max(best, acc);
    }
    return best > 0 ? std::pow(best, 1.0 / q) : 0.0;
}

norm_result norm_closed_form_pq(const coefficient_sequence& c, const space_params& s) {
    if (s.p.is_inf() || s.p != s.q)
        throw std::invalid_argument("norm_closed_form_pq needs p = q < infinity");
    if (!c.is_explicit())
        throw std::invalid_argument("norm_closed_form_pq needs an explicit sequence");
    const double p = s.p.to_double();
    const double dpow = s.alpha + 0.5 - 1.0 / p;
    double total = 0;
    for (const auto& a : c.atoms())
        total += s.matrix.det_abs_pow(-static_cast<double>(a.j) * p * dpow) * std::pow(a.value, p);
    norm_result r;
    r.method = norm_method_tag::closed_form;
    r.value = total > 0 ? std::pow(total, 1.0 / p) : 0.0;
    r.diag.support_cubes = static_cast<long>(c.atoms().size());
    return r;
}

double r_triangle_defect(const coefficient_sequence& a, const coefficient_sequence& b,
                         const space_params& s, eval_method method, const mc_config& mc) {
    double r = 1.0;
    if (!s.p.is_inf()) r = std::min(r, s.p.to_double());
    if (!s.q.is_inf()) r = std::min(r, s.q.to_double());
    coefficient_sequence ab = sum_sequences(a, b);
    double nab = evaluate_norm(ab, s, method, mc).value;
    double na = evaluate_norm(a, s, method, mc).value;
    double nb = evaluate_norm(b, s, method, mc).value;
    return std::pow(nab, r) - std::pow(na, r) - std::pow(nb, r);
}

} // namespace anisotl
