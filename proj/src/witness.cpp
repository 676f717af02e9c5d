#include "anisotl/witness.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace anisotl {

using geom::region;

namespace {

vecd transport(const expansive_matrix& a, const expansive_matrix& b, long j, const vecd& x) {
    // B^j A^-j x
    dmatrix bj = b.power(j);
    dmatrix aj = a.power(-j);
    vecd y(x.size(), 0.0);
    const int d = static_cast<int>(x.size());
    vecd t(d, 0.0);
    for (int i = 0; i < d; ++i)
        for (int c = 0; c < d; ++c) t[i] += aj.at(i, c) * x[c];
    for (int i = 0; i < d; ++i)
        for (int c = 0; c < d; ++c) y[i] += bj.at(i, c) * t[c];
    return y;
}

double transport_norm(const expansive_matrix& a, const expansive_matrix& b, long j) {
    dmatrix m = b.power(j) * a.power(-j);
    return operator_norm(m);
}

double dist(const vecd& x, const vecd& y) {
    double s = 0;
    for (size_t i = 0; i < x.size(); ++i) s += (x[i] - y[i]) * (x[i] - y[i]);
    return std::sqrt(s);
}

std::string format_double(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

std::string format_vec(const std::vector<double>& v) {
    std::ostringstream os;
    os.precision(17);
    for (size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
    return os.str();
}

std::string format_longs(const std::vector<long>& v) {
    std::ostringstream os;
    for (size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
    return os.str();
}

} // namespace

double weight_norm(const std::vector<double>& w, const exponent& q) {
    double best = 0;
    if (q.is_inf()) {
        for (double v : w) best = std::max(best, std::abs(v));
        return best;
    }
    double qq = q.to_double();
    double s = 0;
    for (double v : w) s += std::pow(std::abs(v), qq);
    return s > 0 ? std::pow(s, 1.0 / qq) : 0.0;
}

separation_data find_separating_points(const expansive_matrix& a, const expansive_matrix& b,
                                       int n, const search_config& cfg) {
    if (n < 2) throw std::invalid_argument("need N >= 2 separated indices");
    if (a.dim() != b.dim()) throw std::invalid_argument("dimension mismatch");
    const int d = a.dim();

    std::vector<vecd> candidates;
    for (int i = 0; i < d; ++i) {
        vecd e(d, 0.0);
        e[i] = 1.0;
        candidates.push_back(e);
    }
    for (int r = 0; r < cfg.random_candidates; ++r) {
        vecd v(d);
        double norm = 0;
        for (int i = 0; i < d; ++i) {
            // symmetric in [-1, 1]
            v[i] = 2.0 * geom::mc_uniform(cfg.seed, static_cast<uint64_t>(r),
                                          static_cast<uint64_t>(i)) -
                   1.0;
            norm += v[i] * v[i];
        }
        norm = std::sqrt(norm);
        if (norm < 1e-6) continue;
        for (double& x : v) x /= norm;
        candidates.push_back(v);
    }

    std::vector<long> scan;
    for (long j = 1; j <= cfg.j_window; ++j) scan.push_back(j);
    for (long j = 1; j <= cfg.j_window; ++j) scan.push_back(-j);

    for (const vecd& x0 : candidates) {
        std::vector<long> chosen;
        std::vector<vecd> images;
        for (long j : scan) {
            vecd img = transport(a, b, j, x0);
            bool ok = true;
            for (const auto& other : images)
                if (dist(img, other) < cfg.distance_floor) {
                    ok = false;
                    break;
                }
            if (!ok) continue;
            chosen.push_back(j);
            images.push_back(std::move(img));
            if (static_cast<int>(chosen.size()) == n) break;
        }
        if (static_cast<int>(chosen.size()) < n) continue;

        separation_data sep;
        sep.j = std::move(chosen);
        sep.x0 = x0;
        double min_pd = std::numeric_limits<double>::infinity();
        for (size_t i = 0; i < images.size(); ++i)
            for (size_t k = i + 1; k < images.size(); ++k)
                min_pd = std::min(min_pd, dist(images[i], images[k]));
        sep.delta = 0.5 * (1.0 - 1e-9) * min_pd;
        double max_norm = 0;
        for (long j : sep.j) max_norm = std::max(max_norm, transport_norm(a, b, j));
        sep.r_prime = std::max(1.0 + 1e-6, max_norm);
        sep.eps = 0.99 * sep.delta / (sep.r_prime * std::sqrt(static_cast<double>(d)));
        return sep;
    }
    throw witness_not_found("no separated images for N = " + std::to_string(n) +
                            " within j-window [-" + std::to_string(cfg.j_window) + ", " +
                            std::to_string(cfg.j_window) +
                            "]; the orbit may be finite or the window too small");
}

void check_separation(const expansive_matrix& a, const expansive_matrix& b,
                      const separation_data& sep) {
    const int d = a.dim();
    std::vector<vecd> images;
    for (long j : sep.j) images.push_back(transport(a, b, j, sep.x0));
    double min_pd = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < images.size(); ++i)
        for (size_t k = i + 1; k < images.size(); ++k)
            min_pd = std::min(min_pd, dist(images[i], images[k]));
    if (!(min_pd > 0)) throw std::logic_error("transported images not pairwise distinct");
    if (!(sep.delta < 0.5 * min_pd)) throw std::logic_error("delta >= half min pairwise distance");
    for (long j : sep.j)
        if (transport_norm(a, b, j) > sep.r_prime * (1 + 1e-12))
            throw std::logic_error("transport norm exceeds R'");
    if (!(sep.eps < sep.delta / (sep.r_prime * std::sqrt(static_cast<double>(d)))))
        throw std::logic_error("eps >= delta / (R' sqrt(d))");
    // transported balls pairwise disjoint for sampled R, by the norm bound
    for (double r : {1.0, 10.0, 100.0}) {
        for (size_t i = 0; i < sep.j.size(); ++i)
            for (size_t k = i + 1; k < sep.j.size(); ++k) {
                double ci = r * dist(images[i], images[k]);
                double radii = r * sep.eps * (transport_norm(a, b, sep.j[i]) +
                                              transport_norm(a, b, sep.j[k]));
                if (!(ci > radii))
                    throw std::logic_error("transported balls not separably disjoint");
            }
    }
}

witness_family delta_witness(long j0, const space_params& s) {
    witness_family f;
    f.tag = witness_tag::delta_atom;
    f.seq = coefficient_sequence::from_atoms(s.matrix.dim(),
                                             {{j0, kvec(s.matrix.dim(), 0), 1.0}});
    double recip = s.p.reciprocal();
    f.predicted = s.matrix.det_abs_pow(-static_cast<double>(j0) * (s.alpha + 0.5 - recip));
    f.law = "||delta_{(j0,0)}|| = |det A|^{-j0 (alpha + 1/2 - 1/p)}";
    f.params["family"] = "delta";
    f.params["j0"] = std::to_string(j0);
    return f;
}

witness_family single_scale_witness(const std::vector<std::pair<kvec, double>>& a,
                                    const space_params& s) {
    witness_family f;
    f.tag = witness_tag::single_scale;
    std::vector<seq_atom> atoms;
    std::vector<double> values;
    for (const auto& [k, v] : a) {
        atoms.push_back({0, k, v});
        values.push_back(std::abs(v));
    }
    f.seq = coefficient_sequence::from_atoms(s.matrix.dim(), std::move(atoms));
    f.weights = values;
    f.predicted = weight_norm(values, s.p);
    f.law = "||c|| = ||a||_{l^p} (l^inf for p = inf), any q";
    f.params["family"] = "single-scale";
    return f;
}

case1_result case1_witness(const expansive_matrix& a, const expansive_matrix& b,
                           const separation_data& sep, const std::vector<double>& sigma,
                           const exponent& p, double alpha1) {
    if (p.is_inf()) throw std::invalid_argument("case 1 targets p < infinity");
    if (sigma.size() != sep.j.size())
        throw std::invalid_argument("sigma length must match the separation indices");
    const int d = a.dim();
    check_separation(a, b, sep);

    // R' of Case 1 (cube diameter bound) is distinct from the separation R'.
    double r1 = 0;
    for (long j : sep.j) r1 = std::max(r1, std::sqrt(static_cast<double>(d)) * a.power_norm(j));
    double radius = (1.0 + 1e-6) * 2.0 * r1 / sep.eps;

    vecd center(sep.x0);
    for (double& c : center) c *= radius;
    region p_r = region::ball(center, radius * sep.eps / 2.0);

    std::vector<coefficient_sequence::implicit_scale> scales;
    std::vector<long> counts;
    for (size_t t = 0; t < sep.j.size(); ++t) {
        long j = sep.j[t];
        coefficient_sequence::implicit_scale sc;
        sc.j = j;
        double coeff = std::abs(sigma[t]) * a.det_abs_pow(static_cast<double>(j) * (alpha1 + 0.5));
        sc.coeff = [coeff](const kvec&) { return coeff; };
        expansive_matrix am = a;
        region ball_copy = p_r;
        sc.member = [am, j, ball_copy](const kvec& k) {
            return geom::cube_meets_region(am, j, k, ball_copy, true);
        };
        sc.max_abs = coeff;
        geom::cube_index_box(a, j, p_r, sc.k_lo, sc.k_hi);
        double box_count = 1;
        for (int i = 0; i < d; ++i)
            box_count *= static_cast<double>(sc.k_hi[i] - sc.k_lo[i] + 1);
        if (box_count <= 250'000) {
            long cnt = 0;
            kvec k = sc.k_lo;
            while (true) {
                if (sc.member(k)) ++cnt;
                int axis = 0;
                while (axis < d) {
                    if (++k[axis] <= sc.k_hi[axis]) break;
                    k[axis] = sc.k_lo[axis];
                    ++axis;
                }
                if (axis == d) break;
            }
            sc.count_hint = static_cast<double>(cnt);
            counts.push_back(cnt);
            if (cnt == 0) throw std::logic_error("empty index set I_{t,R}");
        }
        scales.push_back(std::move(sc));
    }

    case1_result out;
    out.radius = radius;
    out.eps = sep.eps;
    out.prefactor = std::pow(radius * sep.eps, static_cast<double>(d) * p.reciprocal());
    out.index_counts = std::move(counts);

    coefficient_sequence seq = coefficient_sequence::implicit(d, std::move(scales));
    auto fill = [&](witness_family& f, const std::string& which, const exponent& law_exp) {
        f.tag = witness_tag::case1;
        f.seq = seq;
        f.weights = sigma;
        f.predicted = out.prefactor * weight_norm(sigma, law_exp);
        f.params["family"] = "case1";
        f.params["space"] = which;
        f.params["j"] = format_longs(sep.j);
        f.params["x0"] = format_vec(sep.x0);
        f.params["eps"] = format_double(sep.eps);
        f.params["R"] = format_double(radius);
        f.params["alpha1"] = format_double(alpha1);
        f.params["p"] = p.str();
        f.params["sigma"] = format_vec(sigma);
    };
    fill(out.for_a, "A", exponent::infinity()); // placeholder; q1 known at verify time
    out.for_a.law = "||c||_A ~ (R eps)^{d/p} ||sigma||_{l^q1}";
    out.for_a.predicted = out.prefactor; // prefactor; multiply by ||sigma||_{q1}
    fill(out.for_b, "B", p);
    out.for_b.law = "||c||_B ~ (R eps)^{d/p} ||sigma||_{l^p}";

    // the transported index regions must stay pairwise disjoint: ball-bound check
    for (size_t i = 0; i < sep.j.size(); ++i)
        for (size_t k2 = i + 1; k2 < sep.j.size(); ++k2) {
            vecd ci = transport(a, b, sep.j[i], center);
            vecd ck = transport(a, b, sep.j[k2], center);
            double radii = radius * sep.eps * (transport_norm(a, b, sep.j[i]) +
                                               transport_norm(a, b, sep.j[k2]));
            if (!(dist(ci, ck) > radii))
                throw std::logic_error("case 1 transported regions not separably disjoint");
        }
    return out;
}

case2_result case2_witness(const expansive_matrix& a, const expansive_matrix& b,
                           const separation_data& sep, const std::vector<double>& tau,
                           double alpha1, double delta) {
    if (!(delta > 0 && delta < 1.0 / 6.0)) throw std::invalid_argument("delta must be in (0, 1/6)");
    if (tau.size() != sep.j.size())
        throw std::invalid_argument("tau length must match the separation indices");
    const int d = a.dim();
    check_separation(a, b, sep);

    // l0: minimal l with A^-l [0,1]^d inside [-delta, delta]^d
    auto contracts = [&](long l) {
        dmatrix m = a.power(-l);
        for (int corner = 0; corner < (1 << d); ++corner) {
            for (int i = 0; i < d; ++i) {
                double y = 0;
                for (int c = 0; c < d; ++c) y += m.at(i, c) * (((corner >> c) & 1) ? 1.0 : 0.0);
                if (std::abs(y) > delta) return false;
            }
        }
        return true;
    };
    long l0 = 1;
    while (l0 < 4096 && !contracts(l0)) ++l0;
    if (l0 >= 4096) throw std::logic_error("no contraction exponent found");

    long jmax = *std::max_element(sep.j.begin(), sep.j.end());
    long j0 = l0 + jmax;
    // the containment argument needs A^{j_t - j0}[0,1]^d inside the delta box
    // for every t; widen j0 until it holds
    for (int guard = 0; guard < 512; ++guard) {
        bool ok = true;
        for (long jt : sep.j) ok = ok && contracts(j0 - jt);
        if (ok) break;
        ++j0;
    }

    double radius = 10.0 * std::sqrt(static_cast<double>(d)) * a.power_norm(j0);
    vecd rx0(sep.x0);
    for (double& c : rx0) c *= radius;
    kvec k0 = geom::cube_of_point(a, j0, rx0);

    // P_delta as a polygon/interval region in ambient coordinates
    region p_delta = region::box({0.0}, {1.0});
    if (d == 1) {
        double lo = a.power(j0).at(0, 0) * (static_cast<double>(k0[0]) + 0.5 - delta);
        double hi = a.power(j0).at(0, 0) * (static_cast<double>(k0[0]) + 0.5 + delta);
        p_delta = region::box({std::min(lo, hi)}, {std::max(lo, hi)});
    } else {
        dmatrix pj = a.power(j0);
        geom::dpolygon poly;
        const double corners[4][2] = {{-delta, -delta}, {delta, -delta}, {delta, delta},
                                      {-delta, delta}};
        for (const auto& c : corners) {
            double x = static_cast<double>(k0[0]) + 0.5 + c[0];
            double y = static_cast<double>(k0[1]) + 0.5 + c[1];
            poly.v.push_back({pj.at(0, 0) * x + pj.at(0, 1) * y,
                              pj.at(1, 0) * x + pj.at(1, 1) * y});
        }
        poly.normalize_ccw();
        p_delta = region::of_polygon(std::move(poly));
    }

    // materialized index sets, with the containment audit Omega_t in Q_{j0,k0}
    std::vector<seq_atom> atoms;
    geom::dpolygon outer_cube;
    double outer_lo = 0, outer_hi = 0;
    if (d == 2)
        outer_cube = geom::cube_polygon(a, j0, k0);
    else
        geom::cube_interval(a, j0, k0[0], outer_lo, outer_hi);
    for (size_t t = 0; t < sep.j.size(); ++t) {
        long jt = sep.j[t];
        double coeff = a.det_abs_pow(static_cast<double>(jt) * (alpha1 + 0.5)) * std::abs(tau[t]);
        auto idx = geom::cubes_meeting_region(a, jt, p_delta, true);
        if (idx.empty()) throw std::logic_error("empty index set I_{t,delta}");
        for (const auto& k : idx) {
            if (d == 2) {
                if (!geom::polygon_inside(geom::cube_polygon(a, jt, k), outer_cube))
                    throw std::logic_error(
                        "case 2 containment Omega_t in Q_{j0,k0} failed; widen the search");
            } else {
                double lo, hi;
                geom::cube_interval(a, jt, k[0], lo, hi);
                if (!(lo >= outer_lo - 1e-12 && hi <= outer_hi + 1e-12))
                    throw std::logic_error(
                        "case 2 containment Omega_t in Q_{j0,k0} failed; widen the search");
            }
            if (coeff > 0) atoms.push_back({jt, k, coeff});
        }
    }

    case2_result out;
    out.l0 = l0;
    out.j0 = j0;
    out.k0 = k0;
    out.radius = radius;
    out.volume_ratio = std::pow(2.0 * delta, static_cast<double>(d));
    out.p_delta = p_delta;

    coefficient_sequence seq = coefficient_sequence::from_atoms(d, std::move(atoms));
    auto fill = [&](witness_family& f, const std::string& which) {
        f.tag = witness_tag::case2;
        f.seq = seq;
        f.weights = tau;
        f.params["family"] = "case2";
        f.params["space"] = which;
        f.params["j"] = format_longs(sep.j);
        f.params["x0"] = format_vec(sep.x0);
        f.params["eps"] = format_double(sep.eps);
        f.params["delta"] = format_double(delta);
        f.params["l0"] = std::to_string(l0);
        f.params["j0"] = std::to_string(j0);
        f.params["R"] = format_double(radius);
        f.params["alpha1"] = format_double(alpha1);
        f.params["tau"] = format_vec(tau);
    };
    fill(out.for_a, "A");
    out.for_a.law = "||c||_{f^a_{inf,q1}(A)} >= (|P_delta|/|Q_{j0,k0}| sum |tau|^q1)^{1/q1}";
    out.for_a.predicted = out.volume_ratio; // multiply by ||tau||_{q1}^... at verify time
    fill(out.for_b, "B");
    out.for_b.law = "||c||_{f^a_{inf,q2}(B)} <= ||tau||_{l^inf}";
    out.for_b.predicted = weight_norm(tau, exponent::infinity());
    return out;
}

witness_family multiscale_witness(const std::vector<double>& tau, const space_params& s,
                                  bool closed_cubes) {
    const int d = s.matrix.dim();
    const long length = static_cast<long>(tau.size());
    witness_family f;
    f.tag = witness_tag::multiscale;
    f.weights = tau;
    if (length == 0) {
        f.seq = coefficient_sequence::from_atoms(d, {});
        f.predicted = 0;
        f.law = "||c|| ~ ||tau||_{l^q}";
        return f;
    }
    region unit = closed_cubes ? region::box(vecd(d, 0.0), vecd(d, 1.0))
                               : region::box(vecd(d, 0.0), vecd(d, 1.0), true);

    // For diagonal rational dilations the index set I_j factors into per-axis
    // integer intervals, which keeps membership O(1) at every scale.
    bool diagonal = s.matrix.is_rational();
    if (diagonal) {
        const qmatrix& q = s.matrix.rational_view();
        for (int r = 0; r < d && diagonal; ++r)
            for (int c = 0; c < d; ++c)
                if (r != c && sgn(q.at(r, c)) != 0) diagonal = false;
    }
    std::vector<expansive_matrix> axis_mats;
    if (diagonal)
        for (int i = 0; i < d; ++i)
            axis_mats.push_back(expansive_matrix::from_rational(
                1, {s.matrix.rational_view().at(i, i)}));

    std::vector<coefficient_sequence::implicit_scale> scales;
    for (long j = -(length - 1); j <= 0; ++j) {
        coefficient_sequence::implicit_scale sc;
        sc.j = j;
        double coeff = s.matrix.det_abs_pow(static_cast<double>(j) * (s.alpha + 0.5)) *
                       std::abs(tau[static_cast<size_t>(-j)]);
        sc.coeff = [coeff](const kvec&) { return coeff; };
        sc.max_abs = coeff;
        bool boxed = false;
        if (diagonal) {
            region unit_1d = region::box({0.0}, {1.0}, !closed_cubes);
            kvec mlo(d), mhi(d);
            boxed = true;
            double count = 1;
            for (int i = 0; i < d && boxed; ++i) {
                auto ks = geom::cubes_meeting_region(axis_mats[i], j, unit_1d, closed_cubes);
                if (ks.empty()) {
                    boxed = false;
                    break;
                }
                long long lo = ks.front()[0], hi = ks.front()[0];
                for (const auto& k : ks) {
                    lo = std::min(lo, k[0]);
                    hi = std::max(hi, k[0]);
                }
                if (static_cast<long long>(ks.size()) != hi - lo + 1) {
                    boxed = false; // not contiguous: fall back to geometry
                    break;
                }
                mlo[i] = lo;
                mhi[i] = hi;
                count *= static_cast<double>(hi - lo + 1);
            }
            if (boxed) {
                sc.member_is_box = true;
                sc.member_lo = mlo;
                sc.member_hi = mhi;
                sc.k_lo = mlo;
                sc.k_hi = mhi;
                sc.count_hint = count;
            }
        }
        if (!boxed) {
            expansive_matrix m = s.matrix;
            region unit_copy = unit;
            bool closed_copy = closed_cubes;
            sc.member = [m, j, unit_copy, closed_copy](const kvec& k) {
                return geom::cube_meets_region(m, j, k, unit_copy, closed_copy);
            };
            geom::cube_index_box(s.matrix, j, unit, sc.k_lo, sc.k_hi);
        }
        scales.push_back(std::move(sc));
    }
    f.seq = coefficient_sequence::implicit(d, std::move(scales));
    f.predicted = weight_norm(tau, s.q);
    f.law = "||c|| ~ ||tau||_{l^q}, constants independent of L";
    f.params["family"] = "multiscale";
    f.params["tau"] = format_vec(tau);
    f.params["closed"] = closed_cubes ? "true" : "false";
    return f;
}

law_report fit_norm_law(std::vector<law_point> points, bool log_size) {
    law_report rep;
    rep.points = std::move(points);
    if (rep.points.size() < 2) throw std::invalid_argument("need at least two sizes");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    double ymin = std::numeric_limits<double>::infinity(), ymax = -ymin;
    double max_rel_err = 0;
    rep.ratio_min = std::numeric_limits<double>::infinity();
    rep.ratio_max = 0;
    const double n = static_cast<double>(rep.points.size());
    for (const auto& pt : rep.points) {
        if (!(pt.measured > 0)) throw std::invalid_argument("nonpositive measurement in law fit");
        double x = log_size ? std::log(pt.size) : pt.size;
        double y = std::log(pt.measured);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ymin = std::min(ymin, y);
        ymax = std::max(ymax, y);
        if (pt.error > 0) max_rel_err = std::max(max_rel_err, pt.error / pt.measured);
        if (pt.predicted > 0) {
            rep.ratio_min = std::min(rep.ratio_min, pt.measured / pt.predicted);
            rep.ratio_max = std::max(rep.ratio_max, pt.measured / pt.predicted);
        }
    }
    double denom = n * sxx - sx * sx;
    if (denom == 0) throw std::invalid_argument("degenerate sizes in law fit");
    rep.slope = (n * sxy - sx * sy) / denom;
    rep.intercept = (sy - rep.slope * sx) / n;
    for (const auto& pt : rep.points) {
        double x = log_size ? std::log(pt.size) : pt.size;
        double resid = std::abs(std::log(pt.measured) - (rep.intercept + rep.slope * x));
        rep.max_residual = std::max(rep.max_residual, resid);
    }
    double effect = ymax - ymin;
    rep.inconclusive = max_rel_err > 0.5 * std::max(effect, 1e-300);
    if (!(rep.ratio_min <= rep.ratio_max)) {
        rep.ratio_min = 0;
        rep.ratio_max = 0;
    }
    return rep;
}

law_report verify_multiscale_law(const space_params& s, const std::vector<long>& sizes,
                                 eval_method method, const mc_config& mc, bool closed_cubes) {
    std::vector<law_point> pts;
    for (long length : sizes) {
        std::vector<double> tau(static_cast<size_t>(length), 1.0);
        witness_family fam = multiscale_witness(tau, s, closed_cubes);
        norm_result r = evaluate_norm(fam.seq, s, method, mc);
        law_point pt;
        pt.size = static_cast<double>(length);
        pt.measured = r.value;
        pt.error = r.error_bound;
        pt.predicted = fam.predicted;
        pts.push_back(pt);
    }
    return fit_norm_law(std::move(pts));
}

law_report verify_case1_ratio(const expansive_matrix& a, const expansive_matrix& b,
                              const exponent& p, const exponent& q1, double alpha1, double alpha2,
                              const exponent& q2, const std::vector<long>& sizes,
                              const mc_config& mc, const search_config& search) {
    std::vector<law_point> pts;
    for (long n : sizes) {
        separation_data sep = find_separating_points(a, b, static_cast<int>(n), search);
        std::vector<double> sigma(static_cast<size_t>(n), 1.0);
        case1_result cw = case1_witness(a, b, sep, sigma, p, alpha1);
        space_params sa{a, alpha1, p, q1};
        space_params sb{b, alpha2, p, q2};
        norm_result na = norm_lp(cw.for_a.seq, sa, eval_method::monte_carlo, mc);
        norm_result nb = norm_lp(cw.for_b.seq, sb, eval_method::monte_carlo, mc);
        if (!(na.value > 0)) throw std::logic_error("vanishing A-norm in case 1 ratio");
        law_point pt;
        pt.size = static_cast<double>(n);
        pt.measured = nb.value / na.value;
        pt.error = pt.measured * (na.error_bound / na.value + nb.error_bound / nb.value);
        pt.predicted = std::pow(static_cast<double>(n), p.reciprocal() - q1.reciprocal());
        pts.push_back(pt);
    }
    return fit_norm_law(std::move(pts));
}

law_report verify_delta_law(const space_params& s, const std::vector<long>& j0_values) {
    std::vector<law_point> pts;
    for (long j0 : j0_values) {
        witness_family fam = delta_witness(j0, s);
        norm_result r = evaluate_norm(fam.seq, s, eval_method::exact);
        law_point pt;
        pt.size = static_cast<double>(j0);
        pt.measured = r.value;
        pt.error = 0;
        pt.predicted = fam.predicted;
        pts.push_back(pt);
    }
    return fit_norm_law(std::move(pts), false);
}

} // namespace anisotl
