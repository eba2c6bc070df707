#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hx/lattice.hpp"
#include "hx/weight_constants.hpp"

namespace hx {

// Cube set with a sparseness parameter and (optionally) a disjointness
// witness: E_Q subset Q, pairwise disjoint per grid, |Q| <= eta^{-1} |E_Q|.
struct SparseCollection {
    std::vector<Cube> cubes;
    double eta = 1.0;
    std::map<size_t, std::vector<CellIdx>> witness;  // cube position -> E_Q cells

    std::string to_json() const;
    static SparseCollection from_json(const std::string& text);
};

struct SparseFormSpec {
    SparseCollection collection;
    ExponentPair exponents;
    double scale = 1.0;  // the c in c * sum <f>_{p0,Q} <g>_{q0',Q} |Q|
};

// Builds E_Q = Q minus the union of maximal strict subcubes in S (per grid)
// and checks |E_Q| >= eta |Q| for all Q.  Failure is a value, not an error.
struct SparseVerification {
    bool ok = false;
    std::map<size_t, std::vector<CellIdx>> witness;
    double worst_fraction = 1.0;  // min over Q of |E_Q|/|Q|
};
SparseVerification verify_sparse(const std::vector<Cube>& cubes, double eta,
                                 const LatticeFunction& lattice);

// Carleson packing constant sup_{Q in S} (sum_{P in S, P subset Q} |P|)/|Q|;
// single grid.
double carleson(const std::vector<Cube>& cubes);

double sparse_form(const SparseFormSpec& spec, const LatticeFunction& f, const LatticeFunction& g);

// A_S f = sum_Q <f>_{p0,Q} chi_Q, the canonical positive operator.
LatticeFunction sparse_operator(const SparseCollection& s, double p0, const LatticeFunction& f);

// T_S f = sum_Q <f>_{1,Q} chi_Q with signed averages; linear and self-adjoint
// in the pairing.  Coincides with sparse_operator at p0 = 1 for f >= 0.
LatticeFunction sparse_operator_linear(const SparseCollection& s, const LatticeFunction& f);

struct FormCheck {
    double lhs = 0.0, rhs = 0.0, ratio = 0.0;
    bool pass = false;
};

// form <= eta^{-1} int M_{p0}((M_{q0'} g)^{1-beta} f) (M_{q0'} g)^beta, exact
FormCheck intermedmax_check(const SparseFormSpec& spec, const LatticeFunction& f,
                            const LatticeFunction& g, double beta);

// form <= c_lem c_p (q')^{1/p'} ||f||_{L^p(M_{q(q0/p)'} w)} ||g||_{L^{p'}(w^{1-p'})}
FormCheck lemma_main_check(const SparseFormSpec& spec, const LatticeFunction& f,
                           const LatticeFunction& g, const Weight& w, double p, double q,
                           double c_lem);

// Certified lower bound on an operator norm: best witness value found plus
// the witness itself; deterministic in (seed, budget) and re-verified by a
// direct evaluation of the witness.
struct NormEstimate {
    double value = 0.0;
    LatticeFunction witness_f, witness_g;
    long long evaluations = 0;
    std::string to_json() const;
};

// sup form(f,g) / (||f||_{L^p(w)} ||g||_{L^{p'}(w^{1-p'})}) = ||A_S||_{L^p(w)}
NormEstimate strong_norm_estimate(const SparseFormSpec& spec, double p, const Weight& w,
                                  long long budget, std::uint64_t seed);

// sup_lambda lambda w({A_S f > lambda})^{1/p0} / ||f||_{L^{p0}(w)}
NormEstimate weak_norm_estimate(const SparseFormSpec& spec, const Weight& w,
                                long long budget, std::uint64_t seed);

// ||T* f / w^{1/q0'}||_{L^{q0',inf}(w)} <= c_dual ([w]_{A_inf} log(e+[w]_{A_1}))^{1/q0'} ||f||_{q0'}
FormCheck dual_weak_check(const SparseFormSpec& spec, const Weight& w, const LatticeFunction& f,
                          double c_dual);

// Unweighted form bound of Remark 2.3: eta^{-1} [(p/p0)']^{1/p0} [(p'/q0')']^{1/q0'}
double unweighted_form_bound(const SparseFormSpec& spec, double p);

}  // namespace hx
