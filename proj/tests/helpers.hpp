#pragma once

#include "anisotl/matrix.hpp"
#include "anisotl/orbit.hpp"
#include "anisotl/sequence.hpp"

#include <random>
#include <vector>

namespace testutil {

using namespace anisotl;

inline expansive_matrix rational_matrix(std::vector<std::string> entries) {
    int d = entries.size() == 1 ? 1 : (entries.size() == 4 ? 2 : 3);
    std::vector<mpq_class> q;
    for (const auto& s : entries) q.push_back(parse_rational(s));
    return expansive_matrix::from_rational(d, std::move(q));
}

inline expansive_matrix diag2(const std::string& a, const std::string& b) {
    return rational_matrix({a, "0", "0", b});
}

inline expansive_matrix float2(double a00, double a01, double a10, double a11) {
    return expansive_matrix::from_float(2, {a00, a01, a10, a11});
}

inline expansive_matrix rotation2(double scale, double phi) {
    dmatrix m = scaled_rotation(scale, phi);
    return expansive_matrix::from_float(2, m.entries());
}

inline space_params make_space(expansive_matrix m, double alpha, const std::string& p,
                               const std::string& q) {
    return space_params{std::move(m), alpha, exponent::parse(p), exponent::parse(q)};
}

inline coefficient_sequence delta_seq(int dim, long j0) {
    return coefficient_sequence::from_atoms(dim, {{j0, kvec(dim, 0), 1.0}});
}

/// Deterministic random explicit sequence: scales in [j_lo, j_hi], k in
/// [-k_span, k_span]^dim, values in [0.5, 2.5].
inline coefficient_sequence random_sequence(std::mt19937_64& rng, int dim, long j_lo, long j_hi,
                                            int k_span, int atoms) {
    std::uniform_int_distribution<long> jd(j_lo, j_hi);
    std::uniform_int_distribution<long long> kd(-k_span, k_span);
    std::uniform_real_distribution<double> vd(0.5, 2.5);
    std::vector<seq_atom> out;
    for (int i = 0; i < atoms; ++i) {
        kvec k(dim);
        for (int t = 0; t < dim; ++t) k[t] = kd(rng);
        out.push_back({jd(rng), k, vd(rng)});
    }
    return coefficient_sequence::from_atoms(dim, std::move(out));
}

} // namespace testutil
