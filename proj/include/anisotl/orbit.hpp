#pragma once

#include "anisotl/matrix.hpp"

#include <string>
#include <vector>

namespace anisotl {

/// Parameters of one space f^alpha_{p,q}(A).
struct space_params {
    expansive_matrix matrix;
    double alpha = 0.0;
    exponent p;
    exponent q;
};

/// Outcome of the orbit finiteness test for {B^j A^-j : j in Z}.
/// finite == true: period is the minimal m >= 1 with A^m = B^m.
/// finite == false: no such m <= m_max was found; witness_count distinct
/// orbit elements were observed over |j| <= m_max.
struct orbit_verdict {
    bool finite = false;
    long period = 0;
    long m_max = 0;
    long witness_count = 0;
    scalar_mode mode = scalar_mode::rational; // floating verdicts are numerical
    double tol = 0.0;                         // tolerance used in float mode
};

/// Orbit finiteness via the derived criterion: the orbit is finite iff
/// A^m = B^m for some m >= 1, in which case j -> B^j A^-j is m-periodic.
/// Exact and terminating in rational mode; tolerance-based in float mode.
orbit_verdict orbit_is_finite(const expansive_matrix& a, const expansive_matrix& b, long m_max,
                              double tol = 1e-9);

/// Number of pairwise-distinct matrices among {B^j A^-j : |j| <= j_range}.
/// Independent oracle for orbit_is_finite.
long brute_force_orbit_count(const expansive_matrix& a, const expansive_matrix& b, long j_range,
                             double tol = 1e-9);

/// Representatives M_t of the finite orbit together with the residue classes
/// J_t = {j : B^j A^-j = M_t} (stored as residues mod period).
struct orbit_decomposition {
    long period = 0;
    std::vector<dmatrix> representatives;
    std::vector<qmatrix> representatives_exact; // rational mode only
    std::vector<std::vector<long>> residue_classes;
    size_t size() const { return representatives.size(); }
};

orbit_decomposition decompose_orbit(const expansive_matrix& a, const expansive_matrix& b,
                                    long m_max, double tol = 1e-9);

enum class space_verdict { equal, not_equal, unknown };

struct classify_options {
    long m_max = 64;
    double tol = 1e-9;
    /// When false, an InfiniteUpTo orbit verdict that decides the outcome is
    /// reported as unknown instead of not_equal (the caller flags m_max as
    /// insufficient).
    bool m_max_conclusive = true;
};

struct classify_result {
    space_verdict verdict = space_verdict::unknown;
    std::string reason;
    bool numerical = false; // float-mode inputs: verdict rests on tolerances
    orbit_verdict orbit;    // filled when the orbit test ran
    bool orbit_tested = false;
};

/// Full classification of f^a1_{p1,q1}(A) = f^a2_{p2,q2}(B):
/// equal iff p1 = p2 and either (orbit finite, alpha1 = alpha2, q1 = q2) or
/// (p = q on both sides and |det A|^(a1+1/2-1/p) = |det B|^(a2+1/2-1/p)).
classify_result classify_spaces(const space_params& sa, const space_params& sb,
                                const classify_options& opts = {});

} // namespace anisotl
