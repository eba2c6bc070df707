#pragma once

#include <string>
#include <vector>

#include "hx/lattice.hpp"

namespace hx {

struct ExponentPair {
    double p0 = 1.0;
    double q0 = std::numeric_limits<double>::infinity();

    ExponentPair() = default;
    ExponentPair(double p0_, double q0_);
};

struct ConstantEntry {
    std::string name;
    double value = 1.0;
    Cube attaining;
};

struct ConstantsReport {
    std::vector<ConstantEntry> entries;
    std::string to_csv() const;
    std::string to_json() const;
};

// All standard-grid dyadic cubes contained in the weight's domain box, down
// to the lattice level; the suprema below range over this family by default.
std::vector<Cube> dyadic_family(const Weight& w);

// sup_Q <w>_{1,Q} <w^{-1}>_{p'-1,Q}; for p = 1 the limiting (essinf) form
ConstantEntry a_p(const Weight& w, double p, const std::vector<Cube>& family);

// Wilson constant, dyadic-cube variant: sup_Q w(Q)^{-1} int_Q M(w chi_Q)
ConstantEntry a_infty_wilson(const Weight& w, const std::vector<Cube>& family);

// sup_Q <w>_{s,Q}/<w>_{1,Q}; s = 1 returns 1 by convention
ConstantEntry rh(const Weight& w, double s, const std::vector<Cube>& family);

// phi(s) = (q0/s)'(s/p0 - 1) + 1 for p0 < s < q0
double phi(double s, const ExponentPair& ep);

// c_p = [(p'/q0')']^{1/q0'} [(p0'/p')'(p/p0)']^{1/p0} for p0 < p < q0
double c_p(double p, const ExponentPair& ep);

// tau_p = [(p0'/p')'(p/p0)']^{1/p0} for p > p0 >= 1
double tau_p(double p, double p0);

// The four-case weak (p0,p0) bound factor psi(w).
double psi(const Weight& w, const ExponentPair& ep);

// c_p [v]_{A_inf}^{1/p'} [v]_{A_1}^{1/(p (q0/p)')} with v = w^{(q0/p)'}
double thm11_rhs(const Weight& w, double p, const ExponentPair& ep);

// [v]_{A_phi(p)}^{max(1/(p-p0),(q0-1)/(q0-p))/(q0/p)'} with v = w^{(q0/p)'}
double atwo_rhs(const Weight& w, double p, const ExponentPair& ep);

struct InequalityCheck {
    double lhs = 0.0, rhs = 0.0;
    bool pass = false;
};

// [w^s]_{A_{s(p-1)+1}} <= ([w]_{A_p} [w]_{RH_s})^s
InequalityCheck prop22_ii_check(const Weight& w, double p, double s);

// Both lines of the weighted Holder estimate on one cube, exact constants:
//   <f>_{p,Q}       <= [w]_{A_{q/p}}^{1/q} (w(Q)^{-1} int_Q |f|^q w)^{1/q}
//   <g w>_{q',Q}|Q| <= [w]_{RH_{(q/p)'}}^{1/p} (w(Q)^{-1} int_Q |g|^{p'} w)^{1/p'} w(Q)
struct HolweightResult {
    InequalityCheck line1, line2;
    bool pass = false;
};
HolweightResult holweight_check(const LatticeFunction& f, const LatticeFunction& g,
                                const Weight& w, double p, double q, const Cube& Q);

// (w(E)^{-1} int_E |f|^q w)^{1/q}, q = inf -> esssup_E |f|
double weighted_avg(const LatticeFunction& f, double q, const Weight& w, const CellRange& r);

}  // namespace hx
