#pragma once

#include <string>
#include <vector>

#include "hx/sparse.hpp"

namespace hx {

struct WeightFamilyMember {
    std::string label;
    double delta = 1.0;
    Weight w;
};

// kind: "power" (x^{delta-1}), "power-dual" (x^{(1-delta)(p-1)}),
// "two-step", "random-A1"
struct WeightFamily {
    std::string kind;
    std::vector<WeightFamilyMember> members;
};

Weight uniform_weight(int dim, int level, int denom);
Weight two_step_weight(int level);  // 2 on [0,1/2), 1 on [1/2,1)

// Exact cell averages of x^{delta-1} on [0,1); [w_1]_{A_1} = 1.
WeightFamily power_family(const std::vector<double>& deltas, int level);
// Exact cell averages of x^{(1-delta)(p-1)} on [0,1).
WeightFamily power_dual_family(const std::vector<double>& deltas, double p, int level);
WeightFamily random_a1_family(int count, int level, std::uint64_t seed);

// The canonical "maximal-type" collection: the stopping chain [0,2^{-j}),
// j = 0..K, which is 1/2-sparse.
SparseCollection chain_collection(int level);
// Full dyadic tree of [0,1) to the given depth.
SparseCollection full_tree_collection(int depth);

struct RdFConfig {
    double p = 2.0;
    double p0 = 1.0;
    int grids = 1;
    int k_max = 30;
    double norm_bound = 0.0;  // 0 -> use the theoretical [grids (p/p0)']^{1/p0}
};

struct RdFResult {
    LatticeFunction rh;        // truncated series
    LatticeFunction tail;      // first omitted term 2^{-(N+1)} M^{N+1}h / b^{N+1}
    double norm_bound = 0.0;   // the b actually used
};

double rdf_norm_bound(double p, double p0, int grids);
RdFResult rubio_de_francia(const LatticeFunction& h, const RdFConfig& cfg);

struct ExponentFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual_rms = 0.0;
    size_t npoints = 0;
};
ExponentFit fit_exponent(const std::vector<std::pair<double, double>>& points);

struct ThmRow {
    std::string label;
    double a1 = 1.0, ainf = 1.0, rh_const = 1.0;
    double norm_lb = 0.0, rhs = 0.0, ratio = 0.0;
};

struct ThmReport {
    std::vector<ThmRow> rows;
    double ratio_cap = 0.0;    // the frozen c_T used
    double trend_slope = 0.0;  // log-ratio vs log-A1 least squares slope
    bool pass = false;
    std::string to_csv() const;
};

// strong_norm_estimate vs c_T * thm11_rhs over a weight family
ThmReport verify_thm11(const SparseFormSpec& spec, double p, const WeightFamily& family,
                       long long budget, std::uint64_t seed, double c_t);
// weak_norm_estimate vs c_T * psi(w)
ThmReport verify_thm12(const SparseFormSpec& spec, const WeightFamily& family,
                       long long budget, std::uint64_t seed, double c_t);

struct EndpointFits {
    double alpha_hat = 0.0, gamma_hat = 0.0;
    ExponentFit alpha_fit, gamma_fit;
    std::vector<std::pair<double, double>> alpha_points, gamma_points;  // (p, norm)
};

// alpha: slope of log||T||_p against -log(p-p0) on a p-grid near p0;
// gamma: against log p (q0 = inf) or -log(q0-p) (q0 < inf); unweighted norms.
EndpointFits estimate_endpoint_exponents(const SparseFormSpec& spec,
                                         const std::vector<double>& p_grid_alpha,
                                         const std::vector<double>& p_grid_gamma,
                                         long long budget, std::uint64_t seed);

struct OptimalityReport {
    double p = 0.0;
    std::string abscissa;  // which constant the fit ran against
    std::vector<std::pair<double, double>> points;  // (constant, norm_lb)
    double beta_hat = 0.0;
    double alpha_hat = 0.0, gamma_hat = 0.0;
    double implied_lower = 0.0;   // max(p0/(p-p0) alpha_hat, (q0/p)' gamma_hat)
    double predicted = 0.0;       // max(1/(p-p0), (q0-1)/(q0-p))
    bool consistent = false;      // beta_hat >= implied_lower - 0.2
    std::string to_csv() const;
};

// Fits the norm growth over `family` against [w]_{A_1} (abscissa "A1") or
// [w^{(q0/p)'}]_{A_phi(p)} (abscissa "Aphi").
OptimalityReport optimality_report(const SparseFormSpec& spec, double p,
                                   const WeightFamily& family, const std::string& abscissa,
                                   const EndpointFits& fits, long long budget, std::uint64_t seed);

}  // namespace hx
