#pragma once

#include <optional>
#include <vector>

#include "hx/lattice.hpp"

namespace hx {

enum class MaxVariant {
    DyadicSingleGrid,
    DyadicAllShifts,
    IntervalBall,   // n = 1, all intervals with lattice endpoints
    WeightedBall,   // n = 1, intervals, averages against a weight measure
};

struct MaximalConfig {
    MaxVariant variant = MaxVariant::DyadicSingleGrid;
    double q = 1.0;
    GridShift shift;                       // for DyadicSingleGrid
    std::optional<CellRange> window;       // evaluation cells; default derived from f
    const Weight* measure = nullptr;       // for WeightedBall
    std::optional<int> level_lo;           // coarsest level for dyadic variants
};

// x -> sup over admissible sets Q containing x of <f>_{q,Q}; exact step
// function on the window cells.
LatticeFunction maximal(const LatticeFunction& f, const MaximalConfig& cfg);

// Dyadic maximal over the subcubes of [0,1)^n, levels 0..K.
LatticeFunction maximal_bounded(const LatticeFunction& f, double q = 1.0);

// Dyadic maximal over one grid, restricted to subcubes of a given cube.
LatticeFunction maximal_within(const LatticeFunction& f, const Cube& q_top, double q = 1.0);

struct CheckResult {
    double lhs = 0.0, rhs = 0.0;
    bool pass = false;
};

// ||Mf||_{L^{1,inf}(w)} <= ||f||_{L^1(Mw)}, constant exactly 1 (bounded system)
CheckResult fs_check(const LatticeFunction& f, const Weight& w);

// ||M_q f||_{L^p(w)} <= [(p/q)']^{1/q} ||f||_{L^p(Mw)}, 1 <= q < p < inf
CheckResult fs_strong_check(const LatticeFunction& f, const Weight& w, double p, double q);

// M((Mf)^delta) <= C (Mf)^delta / (1-delta): returns the normalized ratio
// (1-delta) * max_cells M((Mf)^delta)/(Mf)^delta and compares to C_kol
struct KolmogorovResult {
    double ratio = 0.0;
    bool pass = false;
};
KolmogorovResult kolmogorov_check(const LatticeFunction& f, double delta, double c_kol);

// ||Mf||_{L^{p'}((M_q w)^{1-p'})} <= ((pq-1)/(q-1))^{1-1/(pq)} ||f||_{L^{p'}(w^{1-p'})}
CheckResult maxwduo_check(const LatticeFunction& f, const Weight& w, double p, double q);

// Prop-2.2(iii)-style calibration: smallest constants on a suite making
// M^B_q w <= c [w]_{A1} w pointwise at q = 1 + 1/(kappa [w]_{A_inf}).
struct Prop22iiiConstants {
    double c_hat = 1.0;
    double kappa_hat = 1.0;
};
Prop22iiiConstants prop22_iii_calibrate(const std::vector<Weight>& suite);
CheckResult prop22_iii_check(const Weight& w, const Prop22iiiConstants& k);

}  // namespace hx
