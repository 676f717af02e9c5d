#pragma once

#include "anisotl/geometry.hpp"

#include <functional>
#include <optional>
#include <unordered_map>
#include <vector>

namespace anisotl {

/// One explicit coefficient: |c_{j,k}| at scale j, translation k.
struct seq_atom {
    long j = 0;
    kvec k;
    double value = 0; // modulus, > 0 when stored
};

/// Finitely supported coefficient family (j, k) -> |c_{j,k}|, either as an
/// explicit atom list or as per-scale predicates over a declared integer
/// index box. Norms depend only on the moduli, so complex values are reduced
/// at ingestion.
class coefficient_sequence {
public:
    struct implicit_scale {
        long j = 0;
        std::function<double(const kvec&)> coeff;  // |c(j, k)| for members
        std::function<bool(const kvec&)> member;
        kvec k_lo, k_hi;                           // support index box
        double max_abs = 0;                        // sup_k |c(j, k)|
        std::optional<double> count_hint;          // # support indices if known
        // fast path: membership is exactly an integer box (diagonal dilations)
        bool member_is_box = false;
        kvec member_lo, member_hi;
        bool contains(const kvec& k) const {
            if (member_is_box) {
                for (size_t i = 0; i < k.size(); ++i)
                    if (k[i] < member_lo[i] || k[i] > member_hi[i]) return false;
                return true;
            }
            return member(k);
        }
    };

    static coefficient_sequence from_atoms(int dim, std::vector<seq_atom> atoms);
    static coefficient_sequence implicit(int dim, std::vector<implicit_scale> scales);

    bool is_explicit() const { return explicit_; }
    int dim() const { return dim_; }
    bool empty() const;

    /// Support scales, ascending.
    const std::vector<long>& scales() const { return scales_; }
    long scale_min() const;
    long scale_max() const;

    /// |c_{j,k}|, 0 off the support.
    double value_at(long j, const kvec& k) const;
    double max_abs(long j) const;
    void scale_k_box(long j, kvec& lo, kvec& hi) const;
    /// Number of support indices at scale j; for implicit scales the declared
    /// hint or the index-box volume as an upper bound.
    double support_count_bound(long j) const;

    const std::vector<seq_atom>& atoms() const;
    const std::vector<implicit_scale>& implicit_scales() const;

    coefficient_sequence scaled(double factor) const;
    /// Modulus-wise sum (explicit only).
    friend coefficient_sequence sum_sequences(const coefficient_sequence& a,
                                              const coefficient_sequence& b);
    /// Enumerates an implicit sequence into an explicit one; throws when the
    /// support exceeds max_atoms.
    friend coefficient_sequence materialize(const coefficient_sequence& c, size_t max_atoms);

private:
    struct khash {
        size_t operator()(const kvec& k) const {
            uint64_t h = 1469598103934665603ULL;
            for (long long v : k) {
                h ^= static_cast<uint64_t>(v);
                h *= 1099511628211ULL;
            }
            return static_cast<size_t>(h);
        }
    };
    struct scale_data {
        std::unordered_map<kvec, double, khash> values;
        kvec lo, hi;
        double max_abs = 0;
    };
    bool explicit_ = true;
    int dim_ = 0;
    std::vector<long> scales_;
    std::vector<seq_atom> atoms_;
    std::unordered_map<long, scale_data> by_scale_;
    std::vector<implicit_scale> imp_;
    const implicit_scale* find_implicit(long j) const;
};

} // namespace anisotl
