#include "anisotl/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace anisotl {
namespace geom {

namespace {

template <class T>
int sign_of(const T& v) {
    if constexpr (std::is_same_v<T, mpq_class>)
        return sgn(v);
    else
        return v > 0 ? 1 : (v < 0 ? -1 : 0);
}

// cross(b - a, p - a): > 0 iff p strictly left of a -> b.
template <class T>
T side(const std::array<T, 2>& a, const std::array<T, 2>& b, const std::array<T, 2>& p) {
    return T(T(b[0] - a[0]) * T(p[1] - a[1])) - T(T(b[1] - a[1]) * T(p[0] - a[0]));
}

template <class T>
bool points_equal(const std::array<T, 2>& a, const std::array<T, 2>& b) {
    if constexpr (std::is_same_v<T, mpq_class>)
        return a[0] == b[0] && a[1] == b[1];
    else
        return a[0] == b[0] && a[1] == b[1];
}

template <class T>
void push_dedup(std::vector<std::array<T, 2>>& out, const std::array<T, 2>& p) {
    if (!out.empty() && points_equal(out.back(), p)) return;
    out.push_back(p);
}

template <class T>
polygon<T> finish_poly(std::vector<std::array<T, 2>> pts) {
    while (pts.size() >= 2 && points_equal(pts.front(), pts.back())) pts.pop_back();
    polygon<T> p;
    p.v = std::move(pts);
    if (p.v.size() < 3) p.v.clear();
    if (!p.v.empty() && sign_of(p.area2()) == 0) p.v.clear();
    return p;
}

// Generic half-plane clip: keep points with keep_sign * side >= 0.
template <class T>
polygon<T> clip_side(const polygon<T>& poly, const std::array<T, 2>& a, const std::array<T, 2>& b,
                     int keep_sign) {
    if (poly.empty()) return {};
    std::vector<std::array<T, 2>> out;
    const size_t n = poly.v.size();
    for (size_t i = 0; i < n; ++i) {
        const auto& p = poly.v[i];
        const auto& q = poly.v[(i + 1) % n];
        T sp = side(a, b, p);
        T sq = side(a, b, q);
        int ip = sign_of(sp) * keep_sign;
        int iq = sign_of(sq) * keep_sign;
        if (ip >= 0) push_dedup(out, p);
        if ((ip > 0 && iq < 0) || (ip < 0 && iq > 0)) {
            // segment crosses the line: p + t (q - p), t = sp / (sp - sq)
            T t(sp / T(sp - sq));
            std::array<T, 2> x{T(p[0] + T(t * T(q[0] - p[0]))), T(p[1] + T(t * T(q[1] - p[1])))};
            push_dedup(out, x);
        }
    }
    return finish_poly(std::move(out));
}

} // namespace

template <class T>
void polygon<T>::bbox(T& x0, T& y0, T& x1, T& y1) const {
    x0 = v[0][0];
    x1 = v[0][0];
    y0 = v[0][1];
    y1 = v[0][1];
    for (const auto& p : v) {
        x0 = std::min(x0, p[0]);
        x1 = std::max(x1, p[0]);
        y0 = std::min(y0, p[1]);
        y1 = std::max(y1, p[1]);
    }
}

template struct polygon<double>;
template struct polygon<mpq_class>;

template <class T>
polygon<T> clip_left(const polygon<T>& poly, const std::array<T, 2>& a,
                     const std::array<T, 2>& b) {
    return clip_side(poly, a, b, 1);
}

template <class T>
polygon<T> clip_right(const polygon<T>& poly, const std::array<T, 2>& a,
                      const std::array<T, 2>& b) {
    return clip_side(poly, a, b, -1);
}

template <class T>
polygon<T> clip_to_convex(const polygon<T>& poly, const polygon<T>& clip) {
    polygon<T> cur = poly;
    const size_t n = clip.v.size();
    for (size_t i = 0; i < n && !cur.empty(); ++i)
        cur = clip_left(cur, clip.v[i], clip.v[(i + 1) % n]);
    return cur;
}

template <class T>
std::vector<polygon<T>> subtract_convex(const polygon<T>& poly, const polygon<T>& sub) {
    std::vector<polygon<T>> out;
    polygon<T> rest = poly;
    const size_t n = sub.v.size();
    for (size_t i = 0; i < n && !rest.empty(); ++i) {
        polygon<T> outside = clip_right(rest, sub.v[i], sub.v[(i + 1) % n]);
        if (!outside.empty()) out.push_back(std::move(outside));
        rest = clip_left(rest, sub.v[i], sub.v[(i + 1) % n]);
    }
    return out;
}

template <class T>
bool polygons_intersect(const polygon<T>& a, const polygon<T>& b) {
    if (a.empty() || b.empty()) return false;
    auto separated_by_edges = [](const polygon<T>& edges, const polygon<T>& other) {
        const size_t n = edges.v.size();
        for (size_t i = 0; i < n; ++i) {
            bool all_outside = true;
            for (const auto& p : other.v)
                if (sign_of(side(edges.v[i], edges.v[(i + 1) % n], p)) >= 0) {
                    all_outside = false;
                    break;
                }
            if (all_outside) return true;
        }
        return false;
    };
    return !separated_by_edges(a, b) && !separated_by_edges(b, a);
}

template <class T>
bool polygon_contains(const polygon<T>& poly, const std::array<T, 2>& pt) {
    const size_t n = poly.v.size();
    if (n < 3) return false;
    for (size_t i = 0; i < n; ++i)
        if (sign_of(side(poly.v[i], poly.v[(i + 1) % n], pt)) < 0) return false;
    return true;
}

template <class T>
bool polygon_inside(const polygon<T>& inner, const polygon<T>& outer) {
    for (const auto& p : inner.v)
        if (!polygon_contains(outer, p)) return false;
    return !inner.empty();
}

template polygon<double> clip_left(const polygon<double>&, const std::array<double, 2>&,
                                   const std::array<double, 2>&);
template polygon<mpq_class> clip_left(const polygon<mpq_class>&, const std::array<mpq_class, 2>&,
                                      const std::array<mpq_class, 2>&);
template polygon<double> clip_right(const polygon<double>&, const std::array<double, 2>&,
                                    const std::array<double, 2>&);
template polygon<mpq_class> clip_right(const polygon<mpq_class>&, const std::array<mpq_class, 2>&,
                                       const std::array<mpq_class, 2>&);
template polygon<double> clip_to_convex(const polygon<double>&, const polygon<double>&);
template polygon<mpq_class> clip_to_convex(const polygon<mpq_class>&, const polygon<mpq_class>&);
template std::vector<polygon<double>> subtract_convex(const polygon<double>&,
                                                      const polygon<double>&);
template std::vector<polygon<mpq_class>> subtract_convex(const polygon<mpq_class>&,
                                                         const polygon<mpq_class>&);
template bool polygons_intersect(const polygon<double>&, const polygon<double>&);
template bool polygons_intersect(const polygon<mpq_class>&, const polygon<mpq_class>&);
template bool polygon_contains(const polygon<double>&, const std::array<double, 2>&);
template bool polygon_contains(const polygon<mpq_class>&, const std::array<mpq_class, 2>&);
template bool polygon_inside(const polygon<double>&, const polygon<double>&);
template bool polygon_inside(const polygon<mpq_class>&, const polygon<mpq_class>&);

double dist2_point_polygon(const dpolygon& poly, double x, double y) {
    if (polygon_contains(poly, std::array<double, 2>{x, y})) return 0.0;
    double best = std::numeric_limits<double>::infinity();
    const size_t n = poly.v.size();
    for (size_t i = 0; i < n; ++i) {
        const auto& a = poly.v[i];
        const auto& b = poly.v[(i + 1) % n];
        double ex = b[0] - a[0], ey = b[1] - a[1];
        double px = x - a[0], py = y - a[1];
        double len2 = ex * ex + ey * ey;
        double t = len2 > 0 ? std::clamp((px * ex + py * ey) / len2, 0.0, 1.0) : 0.0;
        double dx = px - t * ex, dy = py - t * ey;
        best = std::min(best, dx * dx + dy * dy);
    }
    return best;
}

region region::box(vecd lo, vecd hi, bool half_open) {
    region r;
    r.k = kind::box;
    r.lo = std::move(lo);
    r.hi = std::move(hi);
    r.half_open = half_open;
    if (r.lo.size() != r.hi.size() || r.lo.empty()) throw std::invalid_argument("bad box");
    for (size_t i = 0; i < r.lo.size(); ++i)
        if (!(r.lo[i] <= r.hi[i])) throw std::invalid_argument("bad box bounds");
    return r;
}

region region::exact_box(std::vector<mpq_class> lo, std::vector<mpq_class> hi, bool half_open) {
    vecd lod, hid;
    for (const auto& v : lo) lod.push_back(v.get_d());
    for (const auto& v : hi) hid.push_back(v.get_d());
    region r = box(std::move(lod), std::move(hid), half_open);
    r.lo_q = std::move(lo);
    r.hi_q = std::move(hi);
    r.has_exact_box = true;
    return r;
}

region region::ball(vecd center, double radius) {
    region r;
    r.k = kind::ball;
    r.center = std::move(center);
    r.radius = radius;
    if (r.center.empty() || !(radius > 0)) throw std::invalid_argument("bad ball");
    return r;
}

region region::of_polygon(dpolygon p) {
    region r;
    r.k = kind::poly;
    p.normalize_ccw();
    r.poly = std::move(p);
    if (r.poly.empty()) throw std::invalid_argument("bad polygon region");
    return r;
}

region region::join(std::vector<region> parts) {
    if (parts.empty()) throw std::invalid_argument("empty union");
    region r;
    r.k = kind::uni;
    r.parts = std::move(parts);
    return r;
}

int region::dim() const {
    switch (k) {
    case kind::box: return static_cast<int>(lo.size());
    case kind::ball: return static_cast<int>(center.size());
    case kind::poly: return 2;
    case kind::uni: return parts.front().dim();
    }
    return 0;
}

void region::bounds(vecd& out_lo, vecd& out_hi) const {
    switch (k) {
    case kind::box:
        out_lo = lo;
        out_hi = hi;
        return;
    case kind::ball:
        out_lo = center;
        out_hi = center;
        for (size_t i = 0; i < center.size(); ++i) {
            out_lo[i] -= radius;
            out_hi[i] += radius;
        }
        return;
    case kind::poly: {
        double x0, y0, x1, y1;
        poly.bbox(x0, y0, x1, y1);
        out_lo = {x0, y0};
        out_hi = {x1, y1};
        return;
    }
    case kind::uni: {
        parts.front().bounds(out_lo, out_hi);
        vecd lo2, hi2;
        for (size_t i = 1; i < parts.size(); ++i) {
            parts[i].bounds(lo2, hi2);
            for (size_t d = 0; d < out_lo.size(); ++d) {
                out_lo[d] = std::min(out_lo[d], lo2[d]);
                out_hi[d] = std::max(out_hi[d], hi2[d]);
            }
        }
        return;
    }
    }
}

bool region::contains(const vecd& x) const {
    switch (k) {
    case kind::box:
        for (size_t i = 0; i < lo.size(); ++i) {
            if (half_open ? !(x[i] >= lo[i] && x[i] < hi[i]) : !(x[i] >= lo[i] && x[i] <= hi[i]))
                return false;
        }
        return true;
    case kind::ball: {
        double s = 0;
        for (size_t i = 0; i < center.size(); ++i) s += (x[i] - center[i]) * (x[i] - center[i]);
        return s < radius * radius;
    }
    case kind::poly:
        return polygon_contains(poly, std::array<double, 2>{x[0], x[1]});
    case kind::uni:
        for (const auto& p : parts)
            if (p.contains(x)) return true;
        return false;
    }
    return false;
}

dpolygon cube_polygon(const expansive_matrix& m, long j, const kvec& k) {
    if (m.dim() != 2) throw std::invalid_argument("cube_polygon needs d = 2");
    dmatrix p = m.power(j);
    dpolygon poly;
    const double corners[4][2] = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    for (const auto& c : corners) {
        double x = c[0] + static_cast<double>(k[0]);
        double y = c[1] + static_cast<double>(k[1]);
        poly.v.push_back({p.at(0, 0) * x + p.at(0, 1) * y, p.at(1, 0) * x + p.at(1, 1) * y});
    }
    poly.normalize_ccw();
    return poly;
}

qpolygon cube_polygon_exact(const expansive_matrix& m, long j, const kvec& k) {
    if (m.dim() != 2) throw std::invalid_argument("cube_polygon needs d = 2");
    qmatrix p = m.power_exact(j);
    qpolygon poly;
    const int corners[4][2] = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    for (const auto& c : corners) {
        mpq_class x = mpq_class(c[0]) + mpq_class(static_cast<long>(k[0]));
        mpq_class y = mpq_class(c[1]) + mpq_class(static_cast<long>(k[1]));
        poly.v.push_back({mpq_class(p.at(0, 0) * x + p.at(0, 1) * y),
                          mpq_class(p.at(1, 0) * x + p.at(1, 1) * y)});
    }
    poly.normalize_ccw();
    return poly;
}

void cube_interval(const expansive_matrix& m, long j, long long k, double& lo, double& hi) {
    if (m.dim() != 1) throw std::invalid_argument("cube_interval needs d = 1");
    double a = m.power(j).at(0, 0);
    double e0 = a * static_cast<double>(k);
    double e1 = a * static_cast<double>(k + 1);
    lo = std::min(e0, e1);
    hi = std::max(e0, e1);
}

kvec cube_of_point(const expansive_matrix& m, long j, const vecd& x) {
    if (static_cast<int>(x.size()) != m.dim()) throw std::invalid_argument("dimension mismatch");
    dmatrix inv = m.power(-j);
    kvec k(x.size());
    for (int i = 0; i < m.dim(); ++i) {
        double y = 0;
        for (int c = 0; c < m.dim(); ++c) y += inv.at(i, c) * x[c];
        k[i] = static_cast<long long>(std::floor(y));
    }
    return k;
}

namespace {

dpolygon box_polygon(const vecd& lo, const vecd& hi) {
    dpolygon p;
    p.v = {{lo[0], lo[1]}, {hi[0], lo[1]}, {hi[0], hi[1]}, {lo[0], hi[1]}};
    return p;
}

qpolygon box_polygon_exact(const std::vector<mpq_class>& lo, const std::vector<mpq_class>& hi) {
    qpolygon p;
    p.v = {{lo[0], lo[1]}, {hi[0], lo[1]}, {hi[0], hi[1]}, {lo[0], hi[1]}};
    return p;
}

// All points of the closed intersection of two convex polygons that can be
// extreme: mutual vertex containments plus edge-edge crossings. Used only for
// the degenerate (zero-area) case of the half-open refinement.
template <class T>
std::vector<std::array<T, 2>> intersection_points(const polygon<T>& a, const polygon<T>& b) {
    std::vector<std::array<T, 2>> pts;
    for (const auto& p : a.v)
        if (polygon_contains(b, p)) pts.push_back(p);
    for (const auto& p : b.v)
        if (polygon_contains(a, p)) pts.push_back(p);
    const size_t na = a.v.size(), nb = b.v.size();
    for (size_t i = 0; i < na; ++i)
        for (size_t jj = 0; jj < nb; ++jj) {
            const auto& a0 = a.v[i];
            const auto& a1 = a.v[(i + 1) % na];
            const auto& b0 = b.v[jj];
            const auto& b1 = b.v[(jj + 1) % nb];
            T dax(a1[0] - a0[0]), day(a1[1] - a0[1]);
            T dbx(b1[0] - b0[0]), dby(b1[1] - b0[1]);
            T denom(T(dax * dby) - T(day * dbx));
            if (sign_of(denom) == 0) continue;
            T wx(b0[0] - a0[0]), wy(b0[1] - a0[1]);
            T s(T(T(wx * dby) - T(wy * dbx)) / denom);
            T t(T(T(wx * day) - T(wy * dax)) / denom);
            if (sign_of(s) < 0 || sign_of(T(T(1) - s)) < 0) continue;
            if (sign_of(t) < 0 || sign_of(T(T(1) - t)) < 0) continue;
            pts.push_back({T(a0[0] + T(s * dax)), T(a0[1] + T(s * day))});
        }
    return pts;
}

// Does the closed cube at (j, k) meet a non-union region leaf?
bool closed_cube_meets_leaf(const expansive_matrix& m, long j, const kvec& k, const region& x) {
    const int d = m.dim();
    if (d == 1) {
        double lo, hi;
        cube_interval(m, j, k[0], lo, hi);
        switch (x.k) {
        case region::kind::box: return hi >= x.lo[0] && lo <= x.hi[0];
        case region::kind::ball: {
            double dist = 0;
            if (x.center[0] < lo) dist = lo - x.center[0];
            if (x.center[0] > hi) dist = x.center[0] - hi;
            return dist < x.radius;
        }
        default: throw std::invalid_argument("region kind unsupported in d = 1");
        }
    }
    switch (x.k) {
    case region::kind::box:
        if (m.is_rational() && x.has_exact_box)
            return polygons_intersect(cube_polygon_exact(m, j, k),
                                      box_polygon_exact(x.lo_q, x.hi_q));
        return polygons_intersect(cube_polygon(m, j, k), box_polygon(x.lo, x.hi));
    case region::kind::poly:
        return polygons_intersect(cube_polygon(m, j, k), x.poly);
    case region::kind::ball:
        return dist2_point_polygon(cube_polygon(m, j, k), x.center[0], x.center[1]) <
               x.radius * x.radius;
    default: throw std::invalid_argument("unexpected region kind");
    }
}

// Half-open refinement, d = 1: the closed intersection must contain a point
// that is not the removed cube endpoint (image of local coordinate 1) and,
// for a half-open box, not the removed box endpoint.
bool halfopen_refine_1d(const expansive_matrix& m, long j, const kvec& k, const region& x) {
    if (x.k == region::kind::ball) return true; // open ball: interior touch guaranteed
    double clo, chi;
    cube_interval(m, j, k[0], clo, chi);
    double a = m.power(j).at(0, 0);
    double removed = a >= 0 ? chi : clo;
    double ilo = std::max(clo, x.lo[0]);
    double ihi = std::min(chi, x.hi[0]);
    if (ilo > ihi) return false;
    if (ilo < ihi) return true; // positive length survives removing endpoints
    if (ilo == removed) return false;
    if (x.half_open && ilo == x.hi[0]) return false;
    return true;
}

// Half-open refinement, d = 2. The closed intersection C is convex; it misses
// the half-open cube (resp. half-open box) exactly when it lies inside one of
// the removed face lines, which reduces to testing the extreme points of C.
bool halfopen_refine_2d(const expansive_matrix& m, long j, const kvec& k, const region& x) {
    if (x.k == region::kind::ball) return true; // open ball: interior touch guaranteed

    auto run = [&](const auto& cube, const auto& reg, const auto& local) -> bool {
        using T = std::decay_t<decltype(cube.v[0][0])>;
        std::vector<std::array<T, 2>> pts;
        polygon<T> clipped = clip_to_convex(cube, reg);
        if (!clipped.empty())
            pts = clipped.v;
        else
            pts = intersection_points(cube, reg);
        if (pts.empty()) return false;
        for (int axis = 0; axis < 2; ++axis) {
            bool all_on = true;
            for (const auto& p : pts)
                if (!local(p, axis)) {
                    all_on = false;
                    break;
                }
            if (all_on) return false;
        }
        if (x.k == region::kind::box && x.half_open) {
            for (int axis = 0; axis < 2; ++axis) {
                bool all_on = true;
                T upper = reg.v[2][axis]; // (hi, hi) corner
                for (const auto& p : pts)
                    if (!(p[axis] == upper)) {
                        all_on = false;
                        break;
                    }
                if (all_on) return false;
            }
        }
        return true;
    };

    if (m.is_rational() && (x.k != region::kind::box || x.has_exact_box)) {
        qpolygon reg;
        if (x.k == region::kind::box) {
            reg = box_polygon_exact(x.lo_q, x.hi_q);
        } else {
            // promote the double polygon; its coordinates are exact binary
            // rationals, so the test stays consistent with the double path
            for (const auto& p : x.poly.v) reg.v.push_back({mpq_class(p[0]), mpq_class(p[1])});
        }
        qmatrix invq = m.power_exact(-j);
        auto local = [&](const std::array<mpq_class, 2>& p, int axis) {
            mpq_class y(invq.at(axis, 0) * p[0] + invq.at(axis, 1) * p[1]);
            y -= static_cast<long>(k[axis]);
            return y == 1;
        };
        return run(cube_polygon_exact(m, j, k), reg, local);
    }
    dpolygon reg = x.k == region::kind::box ? box_polygon(x.lo, x.hi) : x.poly;
    dmatrix invd = m.power(-j);
    auto local = [&](const std::array<double, 2>& p, int axis) {
        double y = invd.at(axis, 0) * p[0] + invd.at(axis, 1) * p[1] -
                   static_cast<double>(k[axis]);
        return std::abs(y - 1.0) <= 1e-9;
    };
    return run(cube_polygon(m, j, k), reg, local);
}

bool cube_meets(const expansive_matrix& m, long j, const kvec& k, const region& x,
                bool closed_cubes) {
    if (x.k == region::kind::uni) {
        for (const auto& p : x.parts)
            if (cube_meets(m, j, k, p, closed_cubes)) return true;
        return false;
    }
    if (!closed_cube_meets_leaf(m, j, k, x)) return false;
    if (closed_cubes) return true;
    return m.dim() == 1 ? halfopen_refine_1d(m, j, k, x) : halfopen_refine_2d(m, j, k, x);
}

} // namespace

bool cube_meets_region(const expansive_matrix& m, long j, const kvec& k, const region& x,
                       bool closed_cubes) {
    if (m.dim() > 2) throw std::invalid_argument("cube_meets_region supports d <= 2");
    return cube_meets(m, j, k, x, closed_cubes);
}

void cube_index_box(const expansive_matrix& m, long j, const region& x, kvec& k_lo, kvec& k_hi) {
    const int d = m.dim();
    if (x.dim() != d) throw std::invalid_argument("region dimension mismatch");
    vecd lo, hi;
    x.bounds(lo, hi);
    dmatrix inv = m.power(-j);
    k_lo.assign(d, 0);
    k_hi.assign(d, 0);
    for (int corner = 0; corner < (1 << d); ++corner) {
        vecd c(d);
        for (int i = 0; i < d; ++i) c[i] = (corner >> i) & 1 ? hi[i] : lo[i];
        for (int i = 0; i < d; ++i) {
            double y = 0;
            for (int cdim = 0; cdim < d; ++cdim) y += inv.at(i, cdim) * c[cdim];
            long long f = static_cast<long long>(std::floor(y));
            if (corner == 0) {
                k_lo[i] = f;
                k_hi[i] = f;
            } else {
                k_lo[i] = std::min(k_lo[i], f);
                k_hi[i] = std::max(k_hi[i], f);
            }
        }
    }
    for (int i = 0; i < d; ++i) {
        k_lo[i] -= 2;
        k_hi[i] += 2;
    }
}

std::vector<kvec> cubes_meeting_region(const expansive_matrix& m, long j, const region& x,
                                       bool closed_cubes, const cube_enum_options& opts) {
    const int d = m.dim();
    if (d > 2) throw std::invalid_argument("cubes_meeting_region supports d <= 2");
    if (x.dim() != d) throw std::invalid_argument("region dimension mismatch");

    // unions enumerate per part: the parts' index boxes are usually far
    // smaller than the box around the whole union
    if (x.k == region::kind::uni) {
        std::set<kvec> seen;
        for (const auto& part : x.parts)
            for (auto& k : cubes_meeting_region(m, j, part, closed_cubes, opts))
                seen.insert(std::move(k));
        return {seen.begin(), seen.end()};
    }

    kvec klo, khi;
    cube_index_box(m, j, x, klo, khi);
    long long count = 1;
    for (int i = 0; i < d; ++i) count *= khi[i] - klo[i] + 1;
    if (count > opts.max_candidates)
        throw overlay_capacity_error("cube candidate box too large: " + std::to_string(count));

    std::vector<kvec> out;
    kvec k(d);
    std::function<void(int)> rec = [&](int axis) {
        if (axis == d) {
            if (cube_meets(m, j, k, x, closed_cubes)) out.push_back(k);
            return;
        }
        for (long long v = klo[axis]; v <= khi[axis]; ++v) {
            k[axis] = v;
            rec(axis + 1);
        }
    };
    rec(0);
    return out;
}

namespace {

template <class T>
struct bbox_t {
    T x0, y0, x1, y1;
    bool overlaps(const bbox_t& o) const {
        return !(x1 < o.x0 || o.x1 < x0 || y1 < o.y0 || o.y1 < y0);
    }
};

template <class T>
bbox_t<T> bbox_of(const polygon<T>& p) {
    bbox_t<T> b;
    p.bbox(b.x0, b.y0, b.x1, b.y1);
    return b;
}

template <class T>
bool piece_degenerate(const polygon<T>& p) {
    if (p.empty()) return true;
    if constexpr (std::is_same_v<T, mpq_class>)
        return sgn(p.area2()) <= 0;
    else
        return p.area2() <= 1e-12;
}

} // namespace

template <class T>
overlay<T> overlay_polygons(const std::vector<polygon<T>>& inputs, size_t budget) {
    if (inputs.size() > budget)
        throw overlay_capacity_error("overlay input count exceeds budget");
    struct entry {
        polygon<T> poly;
        std::vector<uint32_t> mask;
        bbox_t<T> bb;
    };
    std::vector<entry> pieces;
    for (uint32_t idx = 0; idx < inputs.size(); ++idx) {
        polygon<T> in = inputs[idx];
        in.normalize_ccw();
        if (piece_degenerate(in)) continue;
        bbox_t<T> inbb = bbox_of(in);
        std::vector<entry> next;
        next.reserve(pieces.size() + 8);
        // residual = part of the new polygon not covered by existing pieces
        std::vector<polygon<T>> residual{in};
        for (auto& pc : pieces) {
            if (!pc.bb.overlaps(inbb)) {
                next.push_back(std::move(pc));
                continue;
            }
            polygon<T> inter = clip_to_convex(pc.poly, in);
            if (piece_degenerate(inter)) {
                next.push_back(std::move(pc));
                continue;
            }
            // split the piece
            std::vector<polygon<T>> outside = subtract_convex(pc.poly, in);
            entry inside_e;
            inside_e.poly = std::move(inter);
            inside_e.mask = pc.mask;
            inside_e.mask.push_back(idx);
            inside_e.bb = bbox_of(inside_e.poly);
            for (auto& op : outside) {
                if (piece_degenerate(op)) continue;
                entry oe;
                oe.bb = bbox_of(op);
                oe.poly = std::move(op);
                oe.mask = pc.mask;
                next.push_back(std::move(oe));
            }
            // carve the covered part out of the residual
            std::vector<polygon<T>> res2;
            for (auto& r : residual) {
                if (!bbox_of(r).overlaps(pc.bb)) {
                    res2.push_back(std::move(r));
                    continue;
                }
                auto parts = subtract_convex(r, pc.poly);
                for (auto& pp : parts)
                    if (!piece_degenerate(pp)) res2.push_back(std::move(pp));
            }
            residual = std::move(res2);
            next.push_back(std::move(inside_e));
            if (next.size() + residual.size() > budget)
                throw overlay_capacity_error("overlay piece budget exceeded");
        }
        for (auto& r : residual) {
            if (piece_degenerate(r)) continue;
            entry e;
            e.bb = bbox_of(r);
            e.poly = std::move(r);
            e.mask = {idx};
            next.push_back(std::move(e));
        }
        if (next.size() > budget) throw overlay_capacity_error("overlay piece budget exceeded");
        pieces = std::move(next);
    }
    overlay<T> out;
    out.pieces.reserve(pieces.size());
    for (auto& pc : pieces) {
        overlay_piece<T> op;
        op.poly = std::move(pc.poly);
        op.mask = std::move(pc.mask);
        std::sort(op.mask.begin(), op.mask.end());
        out.pieces.push_back(std::move(op));
    }
    return out;
}

template overlay<double> overlay_polygons(const std::vector<polygon<double>>&, size_t);
template overlay<mpq_class> overlay_polygons(const std::vector<polygon<mpq_class>>&, size_t);

template <class T>
std::vector<overlay_cell<T>> overlay_cells_2d(const std::vector<polygon<T>>& inputs,
                                              size_t budget) {
    overlay<T> ov = overlay_polygons(inputs, budget);
    std::map<std::vector<uint32_t>, overlay_cell<T>> cells;
    for (auto& pc : ov.pieces) {
        auto& cell = cells[pc.mask];
        cell.mask = pc.mask;
        cell.area += pc.poly.area();
        cell.pieces.push_back(std::move(pc.poly));
    }
    std::vector<overlay_cell<T>> out;
    out.reserve(cells.size());
    for (auto& [mask, cell] : cells) out.push_back(std::move(cell));
    return out;
}

template std::vector<overlay_cell<double>> overlay_cells_2d(const std::vector<polygon<double>>&,
                                                            size_t);
template std::vector<overlay_cell<mpq_class>>
overlay_cells_2d(const std::vector<polygon<mpq_class>>&, size_t);

uint64_t mix64(uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

namespace {

// the per-(seed,index) state and per-axis draw, split so inner loops hoist
// the seed mixing; mc_uniform(seed, i, t) composes exactly these two steps
inline uint64_t mc_state(uint64_t seed_mixed, uint64_t index) {
    return mix64(seed_mixed ^ index * 0x9e3779b97f4a7c15ULL);
}
inline double mc_draw(uint64_t state, uint64_t axis) {
    uint64_t z = mix64(state ^ (axis + 1) * 0xda942042e4dd58b5ULL);
    return static_cast<double>(z >> 11) * 0x1.0p-53;
}
inline uint64_t mc_seed_mix(uint64_t seed) { return mix64(seed ^ 0x5851f42d4c957f2dULL); }

} // namespace

double mc_uniform(uint64_t seed, uint64_t index, uint64_t axis) {
    return mc_draw(mc_state(mc_seed_mix(seed), index), axis);
}

namespace {

constexpr long mc_chunk = 4096;

struct accum {
    double sum = 0;
    double sum_sq = 0;
};

// fixed-order pairwise combine so results never depend on scheduling
accum combine_range(const std::vector<accum>& chunks, size_t lo, size_t hi) {
    if (hi - lo == 1) return chunks[lo];
    size_t mid = lo + (hi - lo) / 2;
    accum a = combine_range(chunks, lo, mid);
    accum b = combine_range(chunks, mid, hi);
    return {a.sum + b.sum, a.sum_sq + b.sum_sq};
}

mc_result finish_mc(const std::vector<accum>& chunks, long samples, double volume) {
    accum total = combine_range(chunks, 0, chunks.size());
    double mean = total.sum / static_cast<double>(samples);
    double var = 0;
    if (samples > 1) {
        var = (total.sum_sq - static_cast<double>(samples) * mean * mean) /
              static_cast<double>(samples - 1);
        var = std::max(0.0, var);
    }
    mc_result r;
    r.samples = samples;
    r.estimate = mean * volume;
    r.std_error = volume * std::sqrt(var / static_cast<double>(samples));
    return r;
}

} // namespace

mc_result integrate_mc(const std::function<double(const vecd&)>& f, const region& x, long samples,
                       uint64_t seed) {
    if (samples < 2) throw std::invalid_argument("need at least 2 samples");
    vecd lo, hi;
    x.bounds(lo, hi);
    const int d = static_cast<int>(lo.size());
    double volume = 1;
    for (int i = 0; i < d; ++i) volume *= hi[i] - lo[i];
    if (!(volume > 0)) throw std::invalid_argument("zero-volume region");

    const long nchunks = (samples + mc_chunk - 1) / mc_chunk;
    std::vector<accum> chunks(static_cast<size_t>(nchunks));
    const uint64_t sm = mc_seed_mix(seed);
    vecd pt(d);
    for (long c = 0; c < nchunks; ++c) {
        accum a;
        const long begin = c * mc_chunk;
        const long end = std::min(samples, begin + mc_chunk);
        for (long i = begin; i < end; ++i) {
            uint64_t st = mc_state(sm, static_cast<uint64_t>(i));
            for (int t = 0; t < d; ++t)
                pt[t] = lo[t] + (hi[t] - lo[t]) * mc_draw(st, static_cast<uint64_t>(t));
            double val = x.contains(pt) ? f(pt) : 0.0;
            a.sum += val;
            a.sum_sq += val * val;
        }
        chunks[static_cast<size_t>(c)] = a;
    }
    return finish_mc(chunks, samples, volume);
}

mc_result cube_average_mc(const std::function<double(const vecd&)>& f, const expansive_matrix& m,
                          long j, const kvec& k, long samples, uint64_t seed) {
    if (samples < 2) throw std::invalid_argument("need at least 2 samples");
    const int d = m.dim();
    dmatrix p = m.power(j);
    const long nchunks = (samples + mc_chunk - 1) / mc_chunk;
    std::vector<accum> chunks(static_cast<size_t>(nchunks));
    const uint64_t sm = mc_seed_mix(seed);
    vecd pt(d);
    for (long c = 0; c < nchunks; ++c) {
        accum a;
        const long begin = c * mc_chunk;
        const long end = std::min(samples, begin + mc_chunk);
        for (long i = begin; i < end; ++i) {
            uint64_t st = mc_state(sm, static_cast<uint64_t>(i));
            for (int t = 0; t < d; ++t)
                pt[t] = static_cast<double>(k[t]) + mc_draw(st, static_cast<uint64_t>(t));
            vecd xpt(d, 0.0);
            for (int r = 0; r < d; ++r)
                for (int cdim = 0; cdim < d; ++cdim) xpt[r] += p.at(r, cdim) * pt[cdim];
            double val = f(xpt);
            a.sum += val;
            a.sum_sq += val * val;
        }
        chunks[static_cast<size_t>(c)] = a;
    }
    return finish_mc(chunks, samples, 1.0); // mean over the cube
}

} // namespace geom
} // namespace anisotl
