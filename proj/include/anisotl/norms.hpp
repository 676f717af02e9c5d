#pragma once

#include "anisotl/orbit.hpp"
#include "anisotl/sequence.hpp"

#include <optional>

namespace anisotl {

enum class norm_method_tag { exact_1d, exact_2d_overlay, monte_carlo, closed_form, sup_formula };

std::string norm_method_name(norm_method_tag t);

struct mc_config {
    long samples = 1'000'000;
    uint64_t seed = 0;
    /// samples per candidate cube in the p = infinity sweep
    long candidate_samples = 100'000;
    /// overlay piece budget for the exact paths
    size_t overlay_budget = 4096;
};

struct norm_diagnostics {
    long candidates = 0;       // candidate cubes evaluated (p = inf)
    long support_cubes = 0;    // explicit atoms / enumerated support size
    double pruning_bound = 0;  // I_total upper bound driving the sweep cutoff
    long best_scale = 0;       // scale of the winning candidate (p = inf)
    long overlay_pieces = 0;
    std::string note;
};

struct norm_result {
    double value = 0;
    norm_method_tag method = norm_method_tag::closed_form;
    double error_bound = 0; // 0 for exact paths, propagated std error for MC
    norm_diagnostics diag;
};

enum class eval_method { exact, monte_carlo };

/// The q-stack at a point: ( sum_{j <= j_cap} (|det A|^{-j(alpha+1/2)}
/// |c_{j,k(x,j)}| )^q )^{1/q}, sup over scales when q = infinity. At most one
/// translation contributes per scale under the half-open convention.
double stack_value(const coefficient_sequence& c, const space_params& s, const vecd& x,
                   std::optional<long> j_cap = std::nullopt);

/// L^p norm of the stack, p < infinity. Exact path (d <= 2) overlays all
/// support cubes; Monte Carlo integrates stack^p over the support bounding
/// box. Overlay capacity errors fall back to Monte Carlo with a note.
norm_result norm_lp(const coefficient_sequence& c, const space_params& s,
                    eval_method method = eval_method::exact, const mc_config& mc = {});

/// The p = infinity, q < infinity norm: sup over candidate cubes P of the
/// averaged q-power sum capped at scale(P). The candidate sweep is exact:
/// scales below the support floor vanish, a per-scale pointwise bound prunes
/// fine scales, and avg <= I_total / |P| terminates the coarse direction.
norm_result norm_infty_q(const coefficient_sequence& c, const space_params& s,
                         eval_method method = eval_method::exact, const mc_config& mc = {});

/// p = q = infinity: sup_{j,k} |det A|^{-j(alpha+1/2)} |c_{j,k}|.
norm_result norm_sup_sup(const coefficient_sequence& c, const space_params& s);

/// Dispatches on (p, q).
norm_result evaluate_norm(const coefficient_sequence& c, const space_params& s,
                          eval_method method = eval_method::exact, const mc_config& mc = {});

/// Axis-aligned sub-box of the local cube [0,1]^d assigned to each (j, k).
struct shrink_family {
    std::function<void(long j, const kvec& k, vecd& lo, vecd& hi)> sub_box;
    double min_fraction = 0.5; // volume fractions must exceed this
};

/// Essential sup of the q-stack built from indicators of E_{j,k} =
/// A^j(S_{j,k} + k) for the given sub-box family (full cubes when none).
double stacked_sup_norm(const coefficient_sequence& c, const space_params& s,
                        const shrink_family* shrink = nullptr);

/// (sum_{j,k} D^{-jp} |c_{j,k}|^p)^{1/p} with D = |det A|^(alpha+1/2-1/p);
/// valid exactly when p = q < infinity.
norm_result norm_closed_form_pq(const coefficient_sequence& c, const space_params& s);

/// ||a+b||^r - ||a||^r - ||b||^r with r = min{1, p, q}; nonpositive up to
/// method error.
double r_triangle_defect(const coefficient_sequence& a, const coefficient_sequence& b,
                         const space_params& s, eval_method method = eval_method::exact,
                         const mc_config& mc = {});

/// Bounding box of all support cubes of c under the dilation of s.
geom::region support_region(const coefficient_sequence& c, const space_params& s);

} // namespace anisotl
