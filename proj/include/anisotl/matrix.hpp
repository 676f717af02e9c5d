#pragma once

#include "anisotl/scalar.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

namespace anisotl {

/// Dense square matrix over double or mpq_class. Row-major.
template <class T>
class basic_matrix {
public:
    basic_matrix() : dim_(0) {}
    explicit basic_matrix(int dim) : dim_(dim), e_(static_cast<size_t>(dim) * dim, T(0)) {}
    basic_matrix(int dim, std::vector<T> entries) : dim_(dim), e_(std::move(entries)) {
        if (e_.size() != static_cast<size_t>(dim) * dim)
            throw std::invalid_argument("entry count does not match dimension");
    }

    static basic_matrix identity(int dim) {
        basic_matrix m(dim);
        for (int i = 0; i < dim; ++i) m.at(i, i) = T(1);
        return m;
    }

    int dim() const { return dim_; }
    T& at(int r, int c) { return e_[static_cast<size_t>(r) * dim_ + c]; }
    const T& at(int r, int c) const { return e_[static_cast<size_t>(r) * dim_ + c]; }
    const std::vector<T>& entries() const { return e_; }

    basic_matrix operator*(const basic_matrix& o) const {
        if (dim_ != o.dim_) throw std::invalid_argument("dimension mismatch");
        basic_matrix r(dim_);
        for (int i = 0; i < dim_; ++i)
            for (int k = 0; k < dim_; ++k) {
                const T& a = at(i, k);
                if (is_zero(a)) continue;
                for (int j = 0; j < dim_; ++j) r.at(i, j) += T(a * o.at(k, j));
            }
        return r;
    }

    std::vector<T> apply(const std::vector<T>& x) const {
        if (static_cast<int>(x.size()) != dim_) throw std::invalid_argument("dimension mismatch");
        std::vector<T> y(dim_, T(0));
        for (int i = 0; i < dim_; ++i)
            for (int j = 0; j < dim_; ++j) y[i] += T(at(i, j) * x[j]);
        return y;
    }

    T det() const;
    basic_matrix inverse() const;

    /// Entrywise equality: exact for rationals, max-deviation <= tol for doubles.
    bool equals(const basic_matrix& o, double tol) const;
    /// Largest |entry| difference, as double.
    double max_entry_distance(const basic_matrix& o) const;

private:
    static bool is_zero(const T& v) {
        if constexpr (std::is_same_v<T, mpq_class>)
            return sgn(v) == 0;
        else
            return v == T(0);
    }
    int dim_;
    std::vector<T> e_;
};

using qmatrix = basic_matrix<mpq_class>;
using dmatrix = basic_matrix<double>;

dmatrix to_double_matrix(const qmatrix& m);

/// 2x2 rotation by phi scaled by s, in float mode.
dmatrix scaled_rotation(double s, double phi);

enum class expansive_status { expansive, not_expansive, indeterminate };

struct expansive_options {
    double theta = 1e-6; // Gelfand acceptance margin
    int n_max = 64;      // Gelfand iteration cap
};

struct expansive_certificate {
    expansive_status status = expansive_status::indeterminate;
    std::string method;               // "char-poly" (d<=3) or "gelfand"
    std::vector<double> eigen_moduli; // char-poly path
    int gelfand_n = 0;                // iterations used
    double gelfand_value = 0.0;       // last ||M^-n||^(1/n)
};

/// Spectral-radius test for |lambda| > 1. For d <= 3 the eigenvalue moduli are
/// computed from the characteristic polynomial; for d > 3 the Gelfand bound
/// ||M^-n||^(1/n) decides, with an explicit indeterminate outcome when it
/// cannot separate from 1 within n_max iterations.
expansive_certificate certify_expansive(const dmatrix& m, const expansive_options& opts = {});

/// Operator 2-norm (largest singular value), computed in double precision.
double operator_norm(const dmatrix& m);

class not_expansive_error : public std::invalid_argument {
public:
    explicit not_expansive_error(const std::string& what) : std::invalid_argument(what) {}
};
class indeterminate_error : public std::runtime_error {
public:
    explicit indeterminate_error(const std::string& what) : std::runtime_error(what) {}
};

/// Invertible d x d matrix with all eigenvalue moduli > 1, certified at
/// construction. Immutable; power and norm caches are internally locked, so
/// values can be shared freely across threads.
class expansive_matrix {
public:
    static expansive_matrix from_rational(int dim, std::vector<mpq_class> entries,
                                          const expansive_options& opts = {});
    static expansive_matrix from_float(int dim, std::vector<double> entries,
                                       const expansive_options& opts = {});
    static expansive_matrix from_scalars(int dim, const std::vector<scalar>& entries,
                                         const expansive_options& opts = {});

    int dim() const { return d_->fmat.dim(); }
    scalar_mode mode() const { return d_->mode; }
    bool is_rational() const { return d_->mode == scalar_mode::rational; }

    const dmatrix& float_view() const { return d_->fmat; }
    const qmatrix& rational_view() const;

    double abs_det() const { return d_->abs_det; }
    const mpq_class& abs_det_exact() const;
    const expansive_certificate& certificate() const { return d_->cert; }

    /// M^j for j in Z, memoized. Exact in rational mode (negative j via the
    /// exact inverse); binary-exponentiation ladder in float mode.
    dmatrix power(long j) const;
    qmatrix power_exact(long j) const;

    /// |det M|^x as a double.
    double det_abs_pow(double x) const { return std::pow(d_->abs_det, x); }
    /// |det M|^j exactly (rational mode, integer exponent).
    mpq_class det_abs_pow_exact(long j) const;

    /// ||M^j|| (operator 2-norm of the power), memoized.
    double power_norm(long j) const;

    bool same_object(const expansive_matrix& o) const { return d_ == o.d_; }

private:
    struct data {
        scalar_mode mode = scalar_mode::floating;
        std::optional<qmatrix> qmat;
        dmatrix fmat;
        double abs_det = 0;
        std::optional<mpq_class> abs_det_q;
        expansive_certificate cert;
        mutable std::mutex mu;
        mutable std::map<long, qmatrix> qpow;
        mutable std::map<long, dmatrix> fpow;
        mutable std::map<long, double> norms;
    };
    explicit expansive_matrix(std::shared_ptr<data> d) : d_(std::move(d)) {}
    static expansive_matrix finish(std::shared_ptr<data> d, const expansive_options& opts);
    std::shared_ptr<data> d_;
};

/// Entrywise comparison per the scalar mode shared by both matrices: exact in
/// rational mode (tol ignored), max-entry deviation <= tol in float mode.
/// Mixed modes or mismatched dimensions are invalid input.
bool matrix_equal(const expansive_matrix& a, const expansive_matrix& b, double tol = 1e-9);

} // namespace anisotl
