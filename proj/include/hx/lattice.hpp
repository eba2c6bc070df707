#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hx/grid.hpp"
#include "hx/rat.hpp"

namespace hx {

using CellIdx = std::vector<long long>;

// Integer cell ranges [lo_i, hi_i) per axis, at the lattice's finest scale.
struct CellRange {
    std::vector<long long> lo, hi;

    int dim() const { return static_cast<int>(lo.size()); }
    long long count() const {
        long long c = 1;
        for (size_t i = 0; i < lo.size(); ++i) c *= (hi[i] - lo[i]);
        return c;
    }
    bool contains(const CellIdx& i) const {
        for (size_t a = 0; a < lo.size(); ++a)
            if (i[a] < lo[a] || i[a] >= hi[a]) return false;
        return true;
    }
    bool contains_range(const CellRange& r) const {
        for (size_t a = 0; a < lo.size(); ++a)
            if (r.lo[a] < lo[a] || r.hi[a] > hi[a]) return false;
        return true;
    }
    bool empty() const {
        for (size_t a = 0; a < lo.size(); ++a)
            if (lo[a] >= hi[a]) return true;
        return false;
    }
};

// Finitely supported piecewise-constant function on the refinement lattice.
// Cell i covers prod_t [ i_t/(d 2^K), (i_t+1)/(d 2^K) ); unmapped cells are 0.
// With d = 3 every cube of every shifted system at level k <= K is a union of
// cells; with d = 1 only the standard grid is compatible.
class LatticeFunction {
public:
    LatticeFunction() = default;
    LatticeFunction(int dim, int level, int denom);

    int dim() const { return dim_; }
    int level() const { return level_; }
    int denom() const { return denom_; }

    const std::map<CellIdx, double>& cells() const { return cells_; }
    void set_cell(const CellIdx& i, double v);
    double cell(const CellIdx& i) const;  // 0 when unmapped

    bool same_lattice(const LatticeFunction& o) const {
        return o.dim_ == dim_ && o.level_ == level_ && o.denom_ == denom_;
    }

    double cell_volume() const;       // (1/(d 2^K))^n, one rounding for d = 3
    Rat cell_side() const { return Rat(1, static_cast<__int128>(denom_) << level_); }

    // Exact cell range of a box whose endpoints lie on the lattice;
    // throws "lattice mismatch" otherwise.
    CellRange range_of_box(const RatBox& box) const;
    CellRange range_of_cube(const Cube& q) const;
    RatBox box_of_range(const CellRange& r) const;

    std::optional<CellRange> support_hull() const;

    LatticeFunction refined() const;  // level K+1 by cell splitting

    std::string to_json() const;
    static LatticeFunction from_json(const std::string& text);

private:
    int dim_ = 1;
    int level_ = 0;
    int denom_ = 1;
    std::map<CellIdx, double> cells_;
};

// A positive LatticeFunction together with the box on which it is total.
// Outside the domain the weight is undefined; operations that would touch
// cells outside error out rather than assume zero.
struct Weight {
    LatticeFunction fn;
    CellRange domain;

    void validate() const;  // total and strictly positive on the domain
    std::string to_json() const;
    static Weight from_json(const std::string& text);
};

// <f>_{p,E} over a cube or cell range: (|E|^{-1} int_E |f|^p)^{1/p};
// p = infinity gives the essential sup over the cells of E.
double average(const LatticeFunction& f, double p, const Cube& q);
double average_range(const LatticeFunction& f, double p, const CellRange& r);
double essinf_range(const LatticeFunction& f, const CellRange& r);

double pairing(const LatticeFunction& f, const LatticeFunction& g);

// integral of |f|^p w over the lattice, to the 1/p
double lp_norm(const LatticeFunction& f, double p, const Weight& w);
double lp_norm_lebesgue(const LatticeFunction& f, double p);
// sup over the distinct values v of |f| of v * w({|f| >= v})^{1/p}, which
// equals sup_{t>0} t w({|f| > t})^{1/p} for step functions
double weak_lp(const LatticeFunction& f, double p, const Weight& w);
double weak_lp_lebesgue(const LatticeFunction& f, double p);

double weight_mass(const Weight& w, const CellRange& r);  // w(E)
double weight_mass_cells(const Weight& w, const std::vector<CellIdx>& cells);

// p' = p/(p-1) with 1' = inf, inf' = 1; errors for p < 1
double conjugate(double p);

LatticeFunction power(const LatticeFunction& f, double a);
LatticeFunction scale(const LatticeFunction& f, double c);
LatticeFunction add(const LatticeFunction& f, const LatticeFunction& g);
LatticeFunction multiply(const LatticeFunction& f, const LatticeFunction& g);
LatticeFunction restrict_to(const LatticeFunction& f, const CellRange& r);
LatticeFunction indicator(int dim, int level, int denom, const CellRange& r);

Weight power_weight(const Weight& w, double a);  // cellwise w^a on the same domain

}  // namespace hx
