#pragma once

#include "anisotl/norms.hpp"

#include <map>
#include <string>

namespace anisotl {

/// Indices j_1..j_N and a base point whose transported images B^{j_t} A^{-j_t}
/// x0 are pairwise distinct, together with the separation data that makes the
/// transported balls B^{j_t} A^{-j_t} B_{R eps}(R x0) pairwise disjoint for
/// every R > 0: delta below half the minimal pairwise distance, R' bounding
/// the transport norms, eps < delta / (R' sqrt(d)).
struct separation_data {
    std::vector<long> j;
    vecd x0;
    double delta = 0;
    double r_prime = 0; // bound on max_t ||B^{j_t} A^{-j_t}||
    double eps = 0;
};

struct search_config {
    long j_window = 64;        // scan j in [1, w] then [-1, -w]
    double distance_floor = 1e-6;
    int random_candidates = 16; // seeded random unit vectors tried after e_i
    uint64_t seed = 0;
};

class witness_not_found : public std::runtime_error {
public:
    explicit witness_not_found(const std::string& what) : std::runtime_error(what) {}
};

/// Searches scale indices and base points until N pairwise-separated images
/// are found; throws witness_not_found with the window when the orbit looks
/// finite or the window is too small.
separation_data find_separating_points(const expansive_matrix& a, const expansive_matrix& b,
                                       int n, const search_config& cfg = {});

/// Recomputes the separation invariants; throws std::logic_error on failure.
void check_separation(const expansive_matrix& a, const expansive_matrix& b,
                      const separation_data& sep);

enum class witness_tag { delta_atom, single_scale, case1, case2, multiscale };

struct witness_family {
    witness_tag tag = witness_tag::delta_atom;
    coefficient_sequence seq{coefficient_sequence::from_atoms(1, {})};
    std::string law;              // human-readable predicted norm law
    double predicted = 0;         // instance prediction where closed-form
    std::vector<double> weights;  // sigma / tau driving the law, if any
    std::map<std::string, std::string> params; // reproducibility manifest data
};

/// c = delta_{(j0, 0)}: predicted norm |det A|^{-j0 (alpha + 1/2 - 1/p)}
/// (1/p = 0 when p = infinity).
witness_family delta_witness(long j0, const space_params& s);

/// c_{j,k} = delta_{0,j} a_k: predicted norm ||a||_{l^p} (||a||_inf for
/// p = infinity), independent of q.
witness_family single_scale_witness(const std::vector<std::pair<kvec, double>>& a,
                                    const space_params& s);

/// Case 1 of the divergence construction (p < infinity): coefficients
/// sigma_t |det A|^{j_t (alpha1 + 1/2)} on the cubes meeting the ball
/// P_R = B_{R eps / 2}(R x0) at scale j_t. Predicted laws
/// ||c||_A ~ (R eps)^{d/p} ||sigma||_{q1} and ||c||_B ~ (R eps)^{d/p}
/// ||sigma||_p. Sequences are implicit: membership is evaluated geometrically.
struct case1_result {
    witness_family for_a, for_b;
    double radius = 0;  // R
    double eps = 0;
    double prefactor = 0; // (R eps)^{d/p}
    std::vector<long> index_counts; // #I_{t,R} when cheaply countable
};
case1_result case1_witness(const expansive_matrix& a, const expansive_matrix& b,
                           const separation_data& sep, const std::vector<double>& sigma,
                           const exponent& p, double alpha1);

/// Case 2 (p = infinity): coefficients |det A|^{j_t (alpha1 + 1/2)} |tau_t| on
/// the cubes meeting P_delta = A^{j0}([1/2-delta, 1/2+delta)^d + k0). The
/// inclusion of every support cube in Q^A_{j0,k0} is verified geometrically.
struct case2_result {
    witness_family for_a, for_b;
    long l0 = 0;
    long j0 = 0;
    kvec k0;
    double radius = 0;       // R
    double volume_ratio = 0; // |P_delta| / |Q^A_{j0,k0}|
    geom::region p_delta{geom::region::box({0}, {1})};
};
case2_result case2_witness(const expansive_matrix& a, const expansive_matrix& b,
                           const separation_data& sep, const std::vector<double>& tau,
                           double alpha1, double delta = 0.1);

/// c_{j,k} = |det A|^{j(alpha+1/2)} |tau_{-j}| for j in [-(L-1), 0] on the
/// cubes meeting the unit cube. The default keeps the half-open core (cubes
/// meeting [0,1)^d under the half-open convention), whose norm follows
/// ||tau||_{l^q} with constant one; closed_cubes = true keeps the closed
/// intersection family instead. Emitted implicit.
witness_family multiscale_witness(const std::vector<double>& tau, const space_params& s,
                                  bool closed_cubes = false);

double weight_norm(const std::vector<double>& w, const exponent& q);

struct law_point {
    double size = 0;
    double measured = 0;
    double error = 0;
    double predicted = 0;
};

struct law_report {
    std::vector<law_point> points;
    double slope = 0;      // of log(measured) vs log(size), or vs size for linear fits
    double intercept = 0;
    double max_residual = 0; // largest |log measured - fit|
    double ratio_min = 0;  // measured / predicted extremes
    double ratio_max = 0;
    bool inconclusive = false; // MC error exceeded half the fitted effect
};

/// Least-squares fit of log(measured) against log(size) (log_size = true) or
/// against size itself.
law_report fit_norm_law(std::vector<law_point> points, bool log_size = true);

/// Multiscale law: tau = 1 repeated L times per size, measured norm in s,
/// predicted L^{1/q}.
law_report verify_multiscale_law(const space_params& s, const std::vector<long>& sizes,
                                 eval_method method, const mc_config& mc,
                                 bool closed_cubes = false);

/// Case-1 law: measured ||c||_B / ||c||_A against N, predicted
/// N^{1/p - 1/q1} for sigma = 1.
law_report verify_case1_ratio(const expansive_matrix& a, const expansive_matrix& b,
                              const exponent& p, const exponent& q1, double alpha1, double alpha2,
                              const exponent& q2, const std::vector<long>& sizes,
                              const mc_config& mc, const search_config& search = {});

/// Delta law: slope of log(norm) against j0 is -log|det A| (alpha+1/2-1/p).
law_report verify_delta_law(const space_params& s, const std::vector<long>& j0_values);

} // namespace anisotl
