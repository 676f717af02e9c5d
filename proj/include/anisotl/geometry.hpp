#pragma once

#include "anisotl/matrix.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

namespace anisotl {

using kvec = std::vector<long long>;
using vecd = std::vector<double>;

namespace geom {

/// Convex polygon in the plane, vertices counterclockwise. T is double or
/// mpq_class; with rationals every predicate below is exact.
template <class T>
struct polygon {
    std::vector<std::array<T, 2>> v;

    bool empty() const { return v.size() < 3; }
    /// Twice the signed area (shoelace).
    T area2() const {
        T s(0);
        for (size_t i = 0; i < v.size(); ++i) {
            const auto& p = v[i];
            const auto& q = v[(i + 1) % v.size()];
            s += T(p[0] * q[1]) - T(p[1] * q[0]);
        }
        return s;
    }
    double area() const {
        if constexpr (std::is_same_v<T, mpq_class>)
            return mpq_class(area2() / 2).get_d();
        else
            return area2() / 2;
    }
    void normalize_ccw() {
        if (v.size() >= 3 && area2() < T(0)) std::reverse(v.begin(), v.end());
    }
    void bbox(T& x0, T& y0, T& x1, T& y1) const;
};

using dpolygon = polygon<double>;
using qpolygon = polygon<mpq_class>;

/// Keep the part of poly on the left of (or on) the directed line a -> b.
template <class T>
polygon<T> clip_left(const polygon<T>& poly, const std::array<T, 2>& a, const std::array<T, 2>& b);
/// Keep the right-or-on part.
template <class T>
polygon<T> clip_right(const polygon<T>& poly, const std::array<T, 2>& a,
                      const std::array<T, 2>& b);
/// poly ∩ clip (clip convex CCW).
template <class T>
polygon<T> clip_to_convex(const polygon<T>& poly, const polygon<T>& clip);
/// poly \ sub as a list of disjoint convex pieces.
template <class T>
std::vector<polygon<T>> subtract_convex(const polygon<T>& poly, const polygon<T>& sub);
/// Closed convex polygons intersect (touching counts), by separating axes.
template <class T>
bool polygons_intersect(const polygon<T>& a, const polygon<T>& b);
/// Closed containment of a point.
template <class T>
bool polygon_contains(const polygon<T>& poly, const std::array<T, 2>& pt);
/// Every vertex of inner lies in outer (convexity then gives containment).
template <class T>
bool polygon_inside(const polygon<T>& inner, const polygon<T>& outer);

/// Squared distance from a point to a closed convex polygon (0 if inside).
double dist2_point_polygon(const dpolygon& poly, double x, double y);

/// Bounded region: axis box, open euclidean ball, convex polygon, or a finite
/// union. Boxes/polygons are closed; a box may be flagged half-open (upper
/// faces excluded), which only intersection tests look at.
struct region {
    enum class kind { box, ball, poly, uni };
    kind k = kind::box;
    vecd lo, hi;          // box
    bool half_open = false;
    vecd center;          // ball
    double radius = 0;
    dpolygon poly;        // poly (d = 2)
    std::vector<mpq_class> lo_q, hi_q; // optional exact twin of a box
    bool has_exact_box = false;
    std::vector<region> parts; // uni

    static region box(vecd lo, vecd hi, bool half_open = false);
    static region exact_box(std::vector<mpq_class> lo, std::vector<mpq_class> hi,
                            bool half_open = false);
    static region ball(vecd center, double radius);
    static region of_polygon(dpolygon p);
    static region join(std::vector<region> parts);

    int dim() const;
    void bounds(vecd& out_lo, vecd& out_hi) const;
    bool contains(const vecd& x) const;
};

/// Vertices of the dilated cube M^j([0,1]^d + k). d = 2 only.
dpolygon cube_polygon(const expansive_matrix& m, long j, const kvec& k);
qpolygon cube_polygon_exact(const expansive_matrix& m, long j, const kvec& k);
/// Endpoints (lo <= hi) of the d = 1 cube.
void cube_interval(const expansive_matrix& m, long j, long long k, double& lo, double& hi);

/// Index of the half-open cube M^j([0,1)^d + k) containing x:
/// k = floor(M^-j x) componentwise.
kvec cube_of_point(const expansive_matrix& m, long j, const vecd& x);

/// One dilated cube Q^M_{j,k} = M^j([0,1]^d + k). The scale j is recoverable
/// from the volume as log_{|det M|} |Q|.
struct dyadic_cube {
    expansive_matrix matrix;
    long j = 0;
    kvec k;

    long scale() const { return j; }
    double volume() const { return matrix.det_abs_pow(static_cast<double>(j)); }
    dpolygon vertices() const { return cube_polygon(matrix, j, k); }
    void endpoints(double& lo, double& hi) const { cube_interval(matrix, j, k[0], lo, hi); }
    /// x in the half-open cube M^j([0,1)^d + k)?
    bool contains(const vecd& x) const { return cube_of_point(matrix, j, x) == k; }
};

struct cube_enum_options {
    long long max_candidates = 50'000'000;
};

/// Does the single cube at (j, k) meet the region? closed_cubes = true tests
/// the closed cube M^j([0,1]^d + k), the convention of the witness index
/// sets; false tests the half-open cube (a touch only on a removed upper
/// face does not count). d <= 2.
bool cube_meets_region(const expansive_matrix& m, long j, const kvec& k, const region& x,
                       bool closed_cubes);

/// All k whose cube at scale j meets the region, enumerated over the integer
/// bounding box of M^-j(region).
std::vector<kvec> cubes_meeting_region(const expansive_matrix& m, long j, const region& x,
                                       bool closed_cubes, const cube_enum_options& opts = {});

/// Integer box sure to contain every k whose cube at scale j meets the
/// region (the enumeration box of cubes_meeting_region).
void cube_index_box(const expansive_matrix& m, long j, const region& x, kvec& k_lo, kvec& k_hi);

class overlay_capacity_error : public std::runtime_error {
public:
    explicit overlay_capacity_error(const std::string& what) : std::runtime_error(what) {}
};

/// One atomic piece of an overlay: a convex polygon covered by exactly the
/// input polygons listed in mask (sorted indices).
template <class T>
struct overlay_piece {
    polygon<T> poly;
    std::vector<uint32_t> mask;
};

/// Decomposition of the union of the inputs into disjoint convex pieces, each
/// labeled with the set of inputs covering it. Pieces sharing a label form one
/// overlay cell. Built by incremental clipping; exact when T = mpq_class.
template <class T>
struct overlay {
    std::vector<overlay_piece<T>> pieces;
    T union_area2() const {
        T s(0);
        for (const auto& p : pieces) s += p.poly.area2();
        return s;
    }
};

template <class T>
overlay<T> overlay_polygons(const std::vector<polygon<T>>& inputs, size_t budget = 4096);

/// Cells grouped by membership mask, as the public overlay product.
template <class T>
struct overlay_cell {
    std::vector<uint32_t> mask;
    std::vector<polygon<T>> pieces;
    double area = 0;
};
template <class T>
std::vector<overlay_cell<T>> overlay_cells_2d(const std::vector<polygon<T>>& inputs,
                                              size_t budget = 4096);

struct mc_result {
    double estimate = 0;
    double std_error = 0;
    long samples = 0;
};

/// Deterministic counter-based uniform in [0,1): same (seed, index, axis)
/// always yields the same value, independent of evaluation order.
double mc_uniform(uint64_t seed, uint64_t index, uint64_t axis);
uint64_t mix64(uint64_t z);

/// Uniform sampling over the bounding box of x; points outside x contribute 0.
/// Sample i is a pure function of (seed, i) and chunk sums are combined
/// pairwise in fixed order, so the result is reproducible bit-for-bit for a
/// given (seed, samples) no matter how chunks are scheduled.
mc_result integrate_mc(const std::function<double(const vecd&)>& f, const region& x, long samples,
                       uint64_t seed);

/// Mean of f over the single cube M^j([0,1)^d + k), sampled exactly (affine
/// image of the unit cube, no rejection).
mc_result cube_average_mc(const std::function<double(const vecd&)>& f, const expansive_matrix& m,
                          long j, const kvec& k, long samples, uint64_t seed);

} // namespace geom
} // namespace anisotl
