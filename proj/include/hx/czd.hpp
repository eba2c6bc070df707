#pragma once

#include <map>
#include <string>
#include <vector>

#include "hx/lattice.hpp"

namespace hx {

// f = g + sum_P b_P at level lambda: disjoint cubes P covering
// Omega = {Mf > lambda}, bounded good part, mean-zero localized bad parts.
struct CZDecomposition {
    double lambda = 0.0;
    std::vector<CellIdx> omega;            // base cells of Omega
    std::vector<Cube> cubes;               // the selection P
    LatticeFunction good;
    std::vector<LatticeFunction> bad;      // aligned with `cubes`
    double c_good = 0.0;                   // published bound: ||g||_inf <= c_good * lambda

    std::string to_json(const LatticeFunction& f) const;
};

struct WhitneyCube {
    Cube cube;
    double distance;  // lattice-adjusted d(P, Omega^c)
    double ratio;     // distance / diam(P)
};

struct WhitneyDecomposition {
    std::vector<WhitneyCube> cubes;
    double ratio_bound = 0.0;  // C_whit from the grid parameters
};

// Bounded case: maximal dyadic subcubes of [0,1)^n with <f>_{1,P} > lambda.
// Errors with "level too small" when <f>_{1,[0,1)^n} > lambda.
CZDecomposition cz_bounded(const LatticeFunction& f, double lambda);

// Whitney decomposition of a 1-d open set given as a finite union of lattice
// cells, by standard dyadic intervals.  Distances to the complement are
// measured at lattice resolution: the complement starts one cell width past
// the last cell of Omega, which makes the finite selection tile Omega exactly
// (a genuinely open set would generate an infinite boundary tail).
WhitneyDecomposition whitney(const std::vector<CellIdx>& omega_cells, const LatticeFunction& lattice);

// Unbounded case (n = 1): Omega = {M^B f > lambda} decomposed by whitney;
// each P satisfies <f>_{1,P} <= c_I lambda with the published constant c_I.
struct CZUnbounded {
    CZDecomposition cz;
    WhitneyDecomposition whitney;
};
CZUnbounded cz_unbounded(const LatticeFunction& f, double lambda);

double cz_unbounded_average_bound();  // c_I

}  // namespace hx
