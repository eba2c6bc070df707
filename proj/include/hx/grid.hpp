#pragma once

#include <cstdint>
#include <vector>

#include "hx/rat.hpp"

namespace hx {

// Shift vector of a translated dyadic system: alpha in {0, 1/3, 2/3}^n,
// stored as ternary integers t_i in {0,1,2} with alpha_i = t_i/3.
struct GridShift {
    int dim = 1;
    std::vector<int> t;

    GridShift() : dim(1), t(1, 0) {}
    GridShift(int n, std::vector<int> shift) : dim(n), t(std::move(shift)) {}
    static GridShift standard(int n) { return GridShift(n, std::vector<int>(n, 0)); }
};

// A cube of the system D^alpha: box = 2^{-k}([0,1)^n + m + (-1)^k alpha).
struct Cube {
    GridShift shift;
    int level = 0;            // k
    std::vector<long long> m; // index vector in Z^n
};

bool same_cube(const Cube& a, const Cube& b);

// sign (-1)^k, valid for negative k
int level_sign(int k);

RatBox cube_box(const Cube& q);
Rat cube_measure(const Cube& q);   // 2^{-kn}
Rat cube_side(const Cube& q);      // 2^{-k}
std::vector<Rat> cube_center(const Cube& q);

Cube parent(const Cube& q);
std::vector<Cube> children(const Cube& q);

Cube cube_containing(const GridShift& shift, int level, const std::vector<Rat>& x);
Cube cube_containing(const GridShift& shift, int level, const std::vector<double>& x);

// Smallest cube (over the 3^n shifts) containing the open ball B(x;r);
// ratio = diam(Q)/r.  The published bound on the ratio is rho(n).
struct BallCover {
    Cube cube;
    double ratio;
};
BallCover cover_ball(const std::vector<double>& x, double r);

// Published constants for the Euclidean instantiations.
double rho_bound(int dim);   // cover_ball ratio bound rho(n)
double c0_const();           // inscribed open ball radius factor: 1/2
double C0_const(int dim);    // circumscribed closed ball radius factor: sqrt(n)

// All cubes of D^shift at the given levels whose box intersects `region`,
// each listed once.
std::vector<Cube> cubes_intersecting(const RatBox& region, const GridShift& shift,
                                     int level_lo, int level_hi);

// The standard-grid (alpha = 0) dyadic subcubes of [0,1)^n down to level K_top.
struct BoundedSystem {
    int dim = 1;
    int max_level = 0;

    BoundedSystem(int n, int K_top) : dim(n), max_level(K_top) {}

    Cube top() const;
    Cube cube(int level, const std::vector<long long>& m) const;
    Cube parent(const Cube& q) const;           // throws "no parent" on the top cube
    std::vector<Cube> children(const Cube& q) const;
    std::vector<Cube> all_cubes() const;        // levels 0..max_level
    long long cubes_per_axis(int level) const { return 1LL << level; }
};

// Parameter record of a dyadic system in a quasimetric space; only the two
// Euclidean instantiations are constructed here.
struct SystemParams {
    double c0, C0, delta, quasimetric_A, gamma, doubling_nu;

    static SystemParams euclidean(int n);
    double whitney_ratio_bound() const { return 4.0 * quasimetric_A * quasimetric_A * C0 / (gamma * c0 * delta); }
};

}  // namespace hx
