#include "anisotl/matrix.hpp"

#include <algorithm>
#include <cmath>

namespace anisotl {

namespace {

template <class T>
T det_impl(basic_matrix<T> m) {
    const int n = m.dim();
    if (n == 0) throw std::invalid_argument("empty matrix");
    T result(1);
    int sign = 1;
    for (int col = 0; col < n; ++col) {
        int pivot = -1;
        if constexpr (std::is_same_v<T, mpq_class>) {
            for (int r = col; r < n; ++r)
                if (sgn(m.at(r, col)) != 0) {
                    pivot = r;
                    break;
                }
        } else {
            double best = 0;
            for (int r = col; r < n; ++r)
                if (std::abs(m.at(r, col)) > best) {
                    best = std::abs(m.at(r, col));
                    pivot = r;
                }
        }
        if (pivot < 0) return T(0);
        if (pivot != col) {
            for (int c = 0; c < n; ++c) std::swap(m.at(pivot, c), m.at(col, c));
            sign = -sign;
        }
        result *= m.at(col, col);
        for (int r = col + 1; r < n; ++r) {
            if constexpr (std::is_same_v<T, mpq_class>) {
                if (sgn(m.at(r, col)) == 0) continue;
            } else {
                if (m.at(r, col) == 0.0) continue;
            }
            T f(m.at(r, col) / m.at(col, col));
            for (int c = col; c < n; ++c) m.at(r, c) -= T(f * m.at(col, c));
        }
    }
    if (sign < 0) result = -result;
    return result;
}

template <class T>
basic_matrix<T> inverse_impl(basic_matrix<T> m) {
    const int n = m.dim();
    basic_matrix<T> inv = basic_matrix<T>::identity(n);
    for (int col = 0; col < n; ++col) {
        int pivot = -1;
        if constexpr (std::is_same_v<T, mpq_class>) {
            for (int r = col; r < n; ++r)
                if (sgn(m.at(r, col)) != 0) {
                    pivot = r;
                    break;
                }
        } else {
            double best = 0;
            for (int r = col; r < n; ++r)
                if (std::abs(m.at(r, col)) > best) {
                    best = std::abs(m.at(r, col));
                    pivot = r;
                }
            if (pivot >= 0 && best < 1e-300) pivot = -1;
        }
        if (pivot < 0) throw std::invalid_argument("singular matrix");
        if (pivot != col)
            for (int c = 0; c < n; ++c) {
                std::swap(m.at(pivot, c), m.at(col, c));
                std::swap(inv.at(pivot, c), inv.at(col, c));
            }
        T p = m.at(col, col);
        for (int c = 0; c < n; ++c) {
            m.at(col, c) = T(m.at(col, c) / p);
            inv.at(col, c) = T(inv.at(col, c) / p);
        }
        for (int r = 0; r < n; ++r) {
            if (r == col) continue;
            T f = m.at(r, col);
            bool zero;
            if constexpr (std::is_same_v<T, mpq_class>)
                zero = sgn(f) == 0;
            else
                zero = f == 0.0;
            if (zero) continue;
            for (int c = 0; c < n; ++c) {
                m.at(r, c) -= T(f * m.at(col, c));
                inv.at(r, c) -= T(f * inv.at(col, c));
            }
        }
    }
    return inv;
}

template <class T>
basic_matrix<T> pow_nonneg(const basic_matrix<T>& m, unsigned long e) {
    basic_matrix<T> result = basic_matrix<T>::identity(m.dim());
    basic_matrix<T> base = m;
    while (e > 0) {
        if (e & 1UL) result = result * base;
        e >>= 1UL;
        if (e > 0) base = base * base;
    }
    return result;
}

} // namespace

template <class T>
T basic_matrix<T>::det() const {
    return det_impl(*this);
}

template <class T>
basic_matrix<T> basic_matrix<T>::inverse() const {
    return inverse_impl(*this);
}

template <class T>
bool basic_matrix<T>::equals(const basic_matrix& o, double tol) const {
    if (dim_ != o.dim_) throw std::invalid_argument("dimension mismatch");
    if constexpr (std::is_same_v<T, mpq_class>) {
        (void)tol;
        for (size_t i = 0; i < e_.size(); ++i)
            if (e_[i] != o.e_[i]) return false;
        return true;
    } else {
        return max_entry_distance(o) <= tol;
    }
}

template <class T>
double basic_matrix<T>::max_entry_distance(const basic_matrix& o) const {
    if (dim_ != o.dim_) throw std::invalid_argument("dimension mismatch");
    double worst = 0;
    for (size_t i = 0; i < e_.size(); ++i) {
        double d;
        if constexpr (std::is_same_v<T, mpq_class>)
            d = std::abs(mpq_class(e_[i] - o.e_[i]).get_d());
        else
            d = std::abs(e_[i] - o.e_[i]);
        worst = std::max(worst, d);
    }
    return worst;
}

template class basic_matrix<double>;
template class basic_matrix<mpq_class>;

dmatrix to_double_matrix(const qmatrix& m) {
    dmatrix r(m.dim());
    for (int i = 0; i < m.dim(); ++i)
        for (int j = 0; j < m.dim(); ++j) r.at(i, j) = m.at(i, j).get_d();
    return r;
}

dmatrix scaled_rotation(double s, double phi) {
    dmatrix m(2);
    m.at(0, 0) = s * std::cos(phi);
    m.at(0, 1) = -s * std::sin(phi);
    m.at(1, 0) = s * std::sin(phi);
    m.at(1, 1) = s * std::cos(phi);
    return m;
}

double operator_norm(const dmatrix& m) {
    const int n = m.dim();
    if (n == 1) return std::abs(m.at(0, 0));
    // Gram matrix G = M^T M; norm = sqrt(lambda_max(G)).
    dmatrix g(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double s = 0;
            for (int k = 0; k < n; ++k) s += m.at(k, i) * m.at(k, j);
            g.at(i, j) = s;
        }
    if (n == 2) {
        double a = g.at(0, 0), b = g.at(0, 1), c = g.at(1, 1);
        double mid = 0.5 * (a + c);
        double rad = std::sqrt(0.25 * (a - c) * (a - c) + b * b);
        return std::sqrt(std::max(0.0, mid + rad));
    }
    double best = 0;
    for (int start = 0; start <= n; ++start) {
        std::vector<double> v(n, 0.0);
        if (start == n)
            std::fill(v.begin(), v.end(), 1.0 / std::sqrt(double(n)));
        else
            v[start] = 1.0;
        double lambda = 0;
        for (int it = 0; it < 300; ++it) {
            std::vector<double> w = g.apply(v);
            double nw = 0;
            for (double x : w) nw += x * x;
            nw = std::sqrt(nw);
            if (nw == 0) break;
            for (double& x : w) x /= nw;
            double l = 0;
            std::vector<double> gw = g.apply(w);
            for (int i = 0; i < n; ++i) l += w[i] * gw[i];
            if (it > 4 && std::abs(l - lambda) <= 1e-15 * std::max(1.0, std::abs(l))) {
                lambda = l;
                break;
            }
            lambda = l;
            v = std::move(w);
        }
        best = std::max(best, lambda);
    }
    return std::sqrt(std::max(0.0, best));
}

namespace {

std::vector<double> eigen_moduli_small(const dmatrix& m) {
    const int n = m.dim();
    if (n == 1) return {std::abs(m.at(0, 0))};
    if (n == 2) {
        double tr = m.at(0, 0) + m.at(1, 1);
        double det = m.at(0, 0) * m.at(1, 1) - m.at(0, 1) * m.at(1, 0);
        double disc = tr * tr - 4 * det;
        if (disc >= 0) {
            double r = std::sqrt(disc);
            return {std::abs(0.5 * (tr + r)), std::abs(0.5 * (tr - r))};
        }
        // complex pair: |lambda|^2 = det
        double mod = std::sqrt(det);
        return {mod, mod};
    }
    // n == 3: p(x) = x^3 + a x^2 + b x + c
    double tr = m.at(0, 0) + m.at(1, 1) + m.at(2, 2);
    double minors = 0;
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
            minors += m.at(i, i) * m.at(j, j) - m.at(i, j) * m.at(j, i);
    double det = m.det();
    double a = -tr, b = minors, c = -det;
    double p = b - a * a / 3.0;
    double q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
    double disc = q * q / 4.0 + p * p * p / 27.0;
    double shift = -a / 3.0;
    if (disc > 0) {
        double s = std::sqrt(disc);
        double t = std::cbrt(-q / 2.0 + s) + std::cbrt(-q / 2.0 - s);
        double real_root = t + shift;
        // deflate: x^3 + a x^2 + b x + c = (x - r)(x^2 + beta x + gamma)
        double beta = a + real_root;
        double gamma = b + real_root * beta;
        double mod = std::sqrt(std::max(0.0, gamma));
        return {std::abs(real_root), mod, mod};
    }
    // three real roots (trigonometric form)
    if (p >= 0) {
        // p == 0, q == 0 up to rounding: triple root
        double r = std::cbrt(-q) + shift;
        return {std::abs(r), std::abs(r), std::abs(r)};
    }
    double rho = 2.0 * std::sqrt(-p / 3.0);
    double arg = std::clamp(3.0 * q / (p * rho), -1.0, 1.0);
    double theta = std::acos(arg);
    std::vector<double> mods;
    for (int k = 0; k < 3; ++k)
        mods.push_back(std::abs(rho * std::cos((theta - 2.0 * M_PI * k) / 3.0) + shift));
    return mods;
}

} // namespace

expansive_certificate certify_expansive(const dmatrix& m, const expansive_options& opts) {
    expansive_certificate cert;
    const int n = m.dim();
    double det = m.det();
    if (det == 0.0 || !std::isfinite(det)) throw std::invalid_argument("singular matrix");
    if (n <= 3) {
        cert.method = "char-poly";
        cert.eigen_moduli = eigen_moduli_small(m);
        bool all_above = true;
        for (double mod : cert.eigen_moduli) all_above = all_above && mod > 1.0;
        cert.status = all_above ? expansive_status::expansive : expansive_status::not_expansive;
        return cert;
    }
    cert.method = "gelfand";
    dmatrix inv = m.inverse();
    dmatrix pw = basic_matrix<double>::identity(n);
    double g = 0;
    for (int i = 1; i <= opts.n_max; ++i) {
        pw = pw * inv;
        g = std::pow(operator_norm(pw), 1.0 / i);
        cert.gelfand_n = i;
        cert.gelfand_value = g;
        if (g < 1.0 - opts.theta) {
            cert.status = expansive_status::expansive;
            return cert;
        }
    }
    cert.status = g > 1.0 + opts.theta ? expansive_status::not_expansive
                                       : expansive_status::indeterminate;
    return cert;
}

expansive_matrix expansive_matrix::finish(std::shared_ptr<data> d, const expansive_options& opts) {
    d->cert = certify_expansive(d->fmat, opts);
    if (d->cert.status == expansive_status::not_expansive)
        throw not_expansive_error("matrix is not expansive");
    if (d->cert.status == expansive_status::indeterminate)
        throw indeterminate_error("expansiveness indeterminate within n_max");
    return expansive_matrix(std::move(d));
}

expansive_matrix expansive_matrix::from_rational(int dim, std::vector<mpq_class> entries,
                                                 const expansive_options& opts) {
    auto d = std::make_shared<data>();
    d->mode = scalar_mode::rational;
    for (auto& e : entries) e.canonicalize();
    d->qmat = qmatrix(dim, std::move(entries));
    mpq_class det = d->qmat->det();
    if (sgn(det) == 0) throw std::invalid_argument("singular matrix");
    mpq_class adet(abs(det));
    d->abs_det_q = adet;
    d->abs_det = adet.get_d();
    d->fmat = to_double_matrix(*d->qmat);
    return finish(std::move(d), opts);
}

expansive_matrix expansive_matrix::from_float(int dim, std::vector<double> entries,
                                              const expansive_options& opts) {
    auto d = std::make_shared<data>();
    d->mode = scalar_mode::floating;
    d->fmat = dmatrix(dim, std::move(entries));
    double det = d->fmat.det();
    if (det == 0.0 || !std::isfinite(det)) throw std::invalid_argument("singular matrix");
    d->abs_det = std::abs(det);
    return finish(std::move(d), opts);
}

expansive_matrix expansive_matrix::from_scalars(int dim, const std::vector<scalar>& entries,
                                                const expansive_options& opts) {
    if (entries.empty()) throw std::invalid_argument("no entries");
    scalar_mode mode = entries.front().mode();
    for (const auto& s : entries)
        if (s.mode() != mode) throw std::invalid_argument("mixed-mode matrix entries");
    if (mode == scalar_mode::rational) {
        std::vector<mpq_class> q;
        q.reserve(entries.size());
        for (const auto& s : entries) q.push_back(s.rat());
        return from_rational(dim, std::move(q), opts);
    }
    std::vector<double> f;
    f.reserve(entries.size());
    for (const auto& s : entries) f.push_back(s.to_double());
    return from_float(dim, std::move(f), opts);
}

const qmatrix& expansive_matrix::rational_view() const {
    if (!d_->qmat) throw std::invalid_argument("matrix is not in rational mode");
    return *d_->qmat;
}

const mpq_class& expansive_matrix::abs_det_exact() const {
    if (!d_->abs_det_q) throw std::invalid_argument("matrix is not in rational mode");
    return *d_->abs_det_q;
}

qmatrix expansive_matrix::power_exact(long j) const {
    if (!d_->qmat) throw std::invalid_argument("matrix is not in rational mode");
    std::lock_guard<std::mutex> lock(d_->mu);
    auto it = d_->qpow.find(j);
    if (it != d_->qpow.end()) return it->second;
    qmatrix result(0);
    if (j >= 0)
        result = pow_nonneg(*d_->qmat, static_cast<unsigned long>(j));
    else
        result = pow_nonneg(d_->qmat->inverse(), static_cast<unsigned long>(-j));
    d_->qpow.emplace(j, result);
    return result;
}

dmatrix expansive_matrix::power(long j) const {
    {
        std::lock_guard<std::mutex> lock(d_->mu);
        auto it = d_->fpow.find(j);
        if (it != d_->fpow.end()) return it->second;
    }
    dmatrix result(0);
    if (d_->mode == scalar_mode::rational) {
        result = to_double_matrix(power_exact(j));
    } else if (j >= 0) {
        result = pow_nonneg(d_->fmat, static_cast<unsigned long>(j));
    } else {
        result = pow_nonneg(d_->fmat.inverse(), static_cast<unsigned long>(-j));
    }
    std::lock_guard<std::mutex> lock(d_->mu);
    d_->fpow.emplace(j, result);
    return result;
}

mpq_class expansive_matrix::det_abs_pow_exact(long j) const {
    const mpq_class& base = abs_det_exact();
    mpz_class num = base.get_num(), den = base.get_den();
    mpz_class pn, pd;
    unsigned long e = static_cast<unsigned long>(j >= 0 ? j : -j);
    mpz_pow_ui(pn.get_mpz_t(), num.get_mpz_t(), e);
    mpz_pow_ui(pd.get_mpz_t(), den.get_mpz_t(), e);
    mpq_class r = j >= 0 ? mpq_class(pn, pd) : mpq_class(pd, pn);
    r.canonicalize();
    return r;
}

double expansive_matrix::power_norm(long j) const {
    {
        std::lock_guard<std::mutex> lock(d_->mu);
        auto it = d_->norms.find(j);
        if (it != d_->norms.end()) return it->second;
    }
    double n = operator_norm(power(j));
    std::lock_guard<std::mutex> lock(d_->mu);
    d_->norms.emplace(j, n);
    return n;
}

bool matrix_equal(const expansive_matrix& a, const expansive_matrix& b, double tol) {
    if (a.dim() != b.dim()) throw std::invalid_argument("dimension mismatch");
    if (a.mode() != b.mode()) throw std::invalid_argument("mixed-mode comparison");
    if (a.is_rational()) return a.rational_view().equals(b.rational_view(), 0);
    return a.float_view().equals(b.float_view(), tol);
}

} // namespace anisotl
