#include "anisotl/orbit.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace anisotl {

namespace {

void check_pair(const expansive_matrix& a, const expansive_matrix& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("dimension mismatch");
    if (a.mode() != b.mode()) throw std::invalid_argument("mixed-mode matrix pair");
}

std::string qmatrix_key(const qmatrix& m) {
    std::ostringstream os;
    for (const auto& e : m.entries()) os << e.get_num().get_str() << '/' << e.get_den().get_str() << ',';
    return os.str();
}

// D_j = B^j A^-j for j in [-j_range, j_range], built incrementally.
template <class M>
std::vector<M> orbit_elements(const M& bmat, const M& ainv, const M& binv, const M& amat,
                              long j_range) {
    std::vector<M> elems;
    elems.reserve(2 * j_range + 1);
    M up = M::identity(bmat.dim());
    M down = up;
    elems.push_back(up);
    for (long j = 1; j <= j_range; ++j) {
        up = bmat * (up * ainv);
        down = binv * (down * amat);
        elems.push_back(up);
        elems.push_back(down);
    }
    return elems;
}

} // namespace

long brute_force_orbit_count(const expansive_matrix& a, const expansive_matrix& b, long j_range,
                             double tol) {
    check_pair(a, b);
    if (j_range < 0) throw std::invalid_argument("j_range must be nonnegative");
    if (a.is_rational()) {
        auto elems = orbit_elements<qmatrix>(b.rational_view(), a.power_exact(-1),
                                             b.power_exact(-1), a.rational_view(), j_range);
        std::map<std::string, int> seen;
        for (const auto& m : elems) seen.emplace(qmatrix_key(m), 1);
        return static_cast<long>(seen.size());
    }
    auto elems = orbit_elements<dmatrix>(b.float_view(), a.power(-1), b.power(-1), a.float_view(),
                                         j_range);
    std::vector<const dmatrix*> distinct;
    for (const auto& m : elems) {
        bool found = false;
        for (const auto* d : distinct)
            if (d->equals(m, tol)) {
                found = true;
                break;
            }
        if (!found) distinct.push_back(&m);
    }
    return static_cast<long>(distinct.size());
}

orbit_verdict orbit_is_finite(const expansive_matrix& a, const expansive_matrix& b, long m_max,
                              double tol) {
    check_pair(a, b);
    if (m_max < 1) throw std::invalid_argument("m_max must be positive");
    orbit_verdict v;
    v.m_max = m_max;
    v.mode = a.mode();
    v.tol = a.is_rational() ? 0.0 : tol;
    for (long m = 1; m <= m_max; ++m) {
        bool eq;
        if (a.is_rational())
            eq = a.power_exact(m).equals(b.power_exact(m), 0);
        else
            eq = a.power(m).equals(b.power(m), tol);
        if (eq) {
            v.finite = true;
            v.period = m;
            return v;
        }
    }
    v.finite = false;
    v.witness_count = brute_force_orbit_count(a, b, m_max, tol);
    return v;
}

orbit_decomposition decompose_orbit(const expansive_matrix& a, const expansive_matrix& b,
                                    long m_max, double tol) {
    orbit_verdict v = orbit_is_finite(a, b, m_max, tol);
    if (!v.finite)
        throw std::logic_error("decompose_orbit called on an orbit not found finite up to m_max");
    orbit_decomposition dec;
    dec.period = v.period;
    if (a.is_rational()) {
        qmatrix cur = qmatrix::identity(a.dim());
        qmatrix ainv = a.power_exact(-1);
        for (long j = 0; j < v.period; ++j) {
            if (j > 0) cur = b.rational_view() * (cur * ainv);
            bool matched = false;
            for (size_t t = 0; t < dec.representatives_exact.size(); ++t)
                if (dec.representatives_exact[t].equals(cur, 0)) {
                    dec.residue_classes[t].push_back(j);
                    matched = true;
                    break;
                }
            if (!matched) {
                dec.representatives_exact.push_back(cur);
                dec.representatives.push_back(to_double_matrix(cur));
                dec.residue_classes.push_back({j});
            }
        }
        return dec;
    }
    dmatrix cur = dmatrix::identity(a.dim());
    dmatrix ainv = a.power(-1);
    for (long j = 0; j < v.period; ++j) {
        if (j > 0) cur = b.float_view() * (cur * ainv);
        bool matched = false;
        for (size_t t = 0; t < dec.representatives.size(); ++t)
            if (dec.representatives[t].equals(cur, tol)) {
                dec.residue_classes[t].push_back(j);
                matched = true;
                break;
            }
        if (!matched) {
            dec.representatives.push_back(cur);
            dec.residue_classes.push_back({j});
        }
    }
    return dec;
}

namespace {

// s = alpha + 1/2 - 1/p, exact. alpha enters as the exact binary rational of
// its double representation.
mpq_class det_exponent_exact(double alpha, const exponent& p) {
    mpq_class s(alpha);
    s += mpq_class(1, 2);
    s -= p.reciprocal_exact();
    s.canonicalize();
    return s;
}

// Finds small positive (u, v) with r1^v == r2^u (both > 1 exact), i.e. both
// are integer powers of a common base. Returns false if none with u,v <= 64.
bool common_power_relation(const mpq_class& r1, const mpq_class& r2, long& u, long& v) {
    auto qpow = [](const mpq_class& r, long e) {
        mpz_class pn, pd;
        mpz_pow_ui(pn.get_mpz_t(), r.get_num().get_mpz_t(), static_cast<unsigned long>(e));
        mpz_pow_ui(pd.get_mpz_t(), r.get_den().get_mpz_t(), static_cast<unsigned long>(e));
        mpq_class out(pn, pd);
        out.canonicalize();
        return out;
    };
    for (long a = 1; a <= 64; ++a)
        for (long bb = 1; bb <= 64; ++bb)
            if (qpow(r1, bb) == qpow(r2, a)) {
                u = a;
                v = bb;
                return true;
            }
    return false;
}

// |det A|^s1 == |det B|^s2, exactly when both determinants admit a common
// base, in log form with tolerance 1e-9 otherwise.
bool det_identity_holds(const space_params& sa, const space_params& sb, bool& exact) {
    exact = false;
    if (sa.matrix.is_rational() && sb.matrix.is_rational()) {
        const mpq_class& da = sa.matrix.abs_det_exact();
        const mpq_class& db = sb.matrix.abs_det_exact();
        long u = 0, v = 0;
        if (common_power_relation(da, db, u, v)) {
            // da = c^u, db = c^v  =>  da^s1 = db^s2  <=>  u*s1 == v*s2
            mpq_class lhs = det_exponent_exact(sa.alpha, sa.p) * u;
            mpq_class rhs = det_exponent_exact(sb.alpha, sb.p) * v;
            exact = true;
            return lhs == rhs;
        }
    }
    double s1 = sa.alpha + 0.5 - sa.p.reciprocal();
    double s2 = sb.alpha + 0.5 - sb.p.reciprocal();
    return std::abs(s1 * std::log(sa.matrix.abs_det()) - s2 * std::log(sb.matrix.abs_det())) <=
           1e-9;
}

} // namespace

classify_result classify_spaces(const space_params& sa, const space_params& sb,
                                const classify_options& opts) {
    if (sa.matrix.dim() != sb.matrix.dim()) throw std::invalid_argument("dimension mismatch");
    classify_result res;
    res.numerical = !(sa.matrix.is_rational() && sb.matrix.is_rational());

    if (sa.p != sb.p) {
        res.verdict = space_verdict::not_equal;
        res.reason = "integrability exponents differ (p1 != p2)";
        return res;
    }

    // Route 1: p = q on both sides and matching determinant power.
    bool pq_route = sa.p == sa.q && sb.p == sb.q;
    if (pq_route) {
        bool exact = false;
        if (det_identity_holds(sa, sb, exact)) {
            res.verdict = space_verdict::equal;
            res.reason = std::string("p = q and |det A|^(alpha+1/2-1/p) matches (") +
                         (exact ? "exact" : "log-form, tol 1e-9") + ")";
            return res;
        }
    }

    // Route 2: finite orbit with matching alpha and q. Mixed-mode pairs are
    // compared numerically through their float views.
    bool alpha_q_match = sa.alpha == sb.alpha && sa.q == sb.q;
    if (alpha_q_match) {
        expansive_matrix ma = sa.matrix, mb = sb.matrix;
        if (ma.mode() != mb.mode()) {
            ma = expansive_matrix::from_float(ma.dim(), ma.float_view().entries());
            mb = expansive_matrix::from_float(mb.dim(), mb.float_view().entries());
        }
        res.orbit = orbit_is_finite(ma, mb, opts.m_max, opts.tol);
        res.orbit_tested = true;
        if (res.orbit.finite) {
            res.verdict = space_verdict::equal;
            res.reason = "orbit finite, period " + std::to_string(res.orbit.period) +
                         (res.numerical ? " (numerical)" : "");
            return res;
        }
        if (!opts.m_max_conclusive) {
            res.verdict = space_verdict::unknown;
            res.reason = "orbit not periodic up to m_max = " + std::to_string(opts.m_max) +
                         ", flagged insufficient";
            return res;
        }
        res.verdict = space_verdict::not_equal;
        res.reason = "orbit infinite up to m_max = " + std::to_string(opts.m_max) +
                     (pq_route ? " and determinant identity fails" : "") +
                     "; alpha/q equal but orbit criterion fails";
        return res;
    }

    res.verdict = space_verdict::not_equal;
    if (pq_route)
        res.reason = "determinant identity fails and (alpha, q) differ";
    else
        res.reason = sa.q == sb.q ? "smoothness exponents differ (alpha1 != alpha2)"
                                  : "fine exponents differ (q1 != q2)";
    return res;
}

} // namespace anisotl
