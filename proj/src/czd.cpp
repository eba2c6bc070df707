#include "hx/czd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

#include "hx/maximal.hpp"
#include "hx/report.hpp"

namespace hx {

namespace {

double range_sum(const LatticeFunction& f, const CellRange& r) {
    double s = 0.0;
    for (const auto& [idx, v] : f.cells())
        if (r.contains(idx)) s += v;
    return s;
}

void select_bounded(const LatticeFunction& f, const BoundedSystem& sys, const Cube& q,
                    double lambda, std::vector<Cube>& out) {
    CellRange r = f.range_of_cube(q);
    double avg = range_sum(f, r) / static_cast<double>(r.count());
    if (avg > lambda) {
        out.push_back(q);
        return;
    }
    if (q.level >= sys.max_level) return;
    for (const Cube& c : sys.children(q)) select_bounded(f, sys, c, lambda, out);
}

void build_good_bad(const LatticeFunction& f, const std::vector<Cube>& cubes, CZDecomposition& d) {
    d.good = f;
    for (const Cube& q : cubes) {
        CellRange r = f.range_of_cube(q);
        double avg = range_sum(f, r) / static_cast<double>(r.count());
        LatticeFunction b(f.dim(), f.level(), f.denom());
        CellIdx i = r.lo;
        while (true) {
            b.set_cell(i, f.cell(i) - avg);
            d.good.set_cell(i, avg);
            int axis = 0;
            while (axis < r.dim()) {
                if (++i[axis] < r.hi[axis]) break;
                i[axis] = r.lo[axis];
                ++axis;
            }
            if (axis == r.dim()) break;
        }
        d.bad.push_back(std::move(b));
        CellIdx j = r.lo;
        while (true) {
            d.omega.push_back(j);
            int axis = 0;
            while (axis < r.dim()) {
                if (++j[axis] < r.hi[axis]) break;
                j[axis] = r.lo[axis];
                ++axis;
            }
            if (axis == r.dim()) break;
        }
    }
}

}  // namespace

CZDecomposition cz_bounded(const LatticeFunction& f, double lambda) {
    if (!(lambda > 0.0)) throw std::domain_error("cz_bounded: lambda must be positive");
    if (f.denom() != 1) throw std::domain_error("cz_bounded: requires a denominator-1 lattice");
    for (const auto& [idx, v] : f.cells())
        if (v < 0.0) throw std::domain_error("cz_bounded: f must be nonnegative");
    BoundedSystem sys(f.dim(), f.level());
    Cube top = sys.top();
    CellRange rtop = f.range_of_cube(top);
    double top_avg = range_sum(f, rtop) / static_cast<double>(rtop.count());
    if (top_avg > lambda) throw std::domain_error("level too small");

    CZDecomposition d;
    d.lambda = lambda;
    d.c_good = std::ldexp(1.0, f.dim());  // 2^n
    std::vector<Cube> sel;
    if (f.level() > 0) {
        for (const Cube& c : sys.children(top)) select_bounded(f, sys, c, lambda, sel);
    }
    d.cubes = sel;
    build_good_bad(f, sel, d);
    return d;
}

namespace {

// 1-d run decomposition of a sorted cell set: [lo, hi) index pairs
std::vector<std::pair<long long, long long>> runs_of(const std::set<long long>& cells) {
    std::vector<std::pair<long long, long long>> out;
    auto it = cells.begin();
    while (it != cells.end()) {
        long long lo = *it, hi = lo + 1;
        ++it;
        while (it != cells.end() && *it == hi) {
            ++hi;
            ++it;
        }
        out.emplace_back(lo, hi);
    }
    return out;
}

}  // namespace

WhitneyDecomposition whitney(const std::vector<CellIdx>& omega_cells, const LatticeFunction& lattice) {
    if (lattice.dim() != 1) throw std::domain_error("whitney: implemented for dim 1");
    if (lattice.denom() != 1) throw std::domain_error("whitney: requires a denominator-1 lattice");
    if (omega_cells.empty()) throw std::domain_error("whitney: Omega is empty");
    std::set<long long> cells;
    for (const auto& i : omega_cells) cells.insert(i[0]);

    const int K = lattice.level();
    const int d = lattice.denom();
    const double cell_w = 1.0 / (static_cast<double>(d) * std::ldexp(1.0, K));
    auto comp_runs = runs_of(cells);

    SystemParams params = SystemParams::euclidean(1);
    WhitneyDecomposition w;
    w.ratio_bound = params.whitney_ratio_bound();

    // Lattice-adjusted distance from a cell run [a,b) to the complement: the
    // complement is everything outside `cells`; the nearest complement cell
    // counts as one cell width away.
    auto dist_cells = [&](long long a, long long b) -> long long {
        // gap in whole cells between [a,b) and the nearest non-Omega cell
        long long best = std::numeric_limits<long long>::max();
        // scan right from b and left from a-1
        long long g = 0;
        for (long long i = b;; ++i) {
            if (!cells.count(i)) {
                best = std::min(best, g);
                break;
            }
            ++g;
        }
        g = 0;
        for (long long i = a - 1;; --i) {
            if (!cells.count(i)) {
                best = std::min(best, g);
                break;
            }
            ++g;
        }
        return best;
    };

    // A standard-grid cube at level k spans d*2^{K-k} cells; only grid-aligned
    // runs are cubes.  Selection: Q in E iff Q subset Omega and diam(Q) <=
    // d_lat(Q, Omega^c); keep Q when its parent fails.
    auto span_of_level = [&](int k) -> long long { return static_cast<long long>(d) << (K - k); };
    auto in_E = [&](int k, long long m) -> bool {
        long long span = span_of_level(k);
        long long a = m * span, b = (m + 1) * span;
        for (long long i = a; i < b; ++i)
            if (!cells.count(i)) return false;
        long long gap = dist_cells(a, b);
        // diam = span * cell_w, d_lat = (gap + 1) * cell_w
        return span <= gap + 1;
    };

    // Walk each cell up from level K to find its selected ancestor.
    std::set<std::pair<int, long long>> chosen;
    for (long long c : cells) {
        int k = K;
        long long m = (c >= 0) ? c / span_of_level(K) : -((-c + span_of_level(K) - 1) / span_of_level(K));
        if (!in_E(K, m)) throw std::runtime_error("whitney: base cell not eligible");
        while (k > K - 60) {
            long long pm = (m >= 0) ? m / 2 : -((-m + 1) / 2);
            if (!in_E(k - 1, pm)) break;
            --k;
            m = pm;
        }
        chosen.insert({k, m});
    }

    for (const auto& [k, m] : chosen) {
        WhitneyCube wc;
        wc.cube.shift = GridShift::standard(1);
        wc.cube.level = k;
        wc.cube.m = {m};
        long long span = span_of_level(k);
        long long gap = dist_cells(m * span, (m + 1) * span);
        wc.distance = static_cast<double>(gap + 1) * cell_w;
        wc.ratio = wc.distance / (static_cast<double>(span) * cell_w);
        w.cubes.push_back(wc);
    }
    return w;
}

double cz_unbounded_average_bound() {
    // |I_P| <= (1 + C_whit) |P| for the certificate interval reaching the
    // nearest complement cell, so <f>_{1,P} <= (1 + C_whit) lambda.
    return 1.0 + SystemParams::euclidean(1).whitney_ratio_bound();
}

CZUnbounded cz_unbounded(const LatticeFunction& f, double lambda) {
    if (!(lambda > 0.0)) throw std::domain_error("cz_unbounded: lambda must be positive");
    if (f.dim() != 1) throw std::domain_error("cz_unbounded: implemented for dim 1");
    if (f.denom() != 1) throw std::domain_error("cz_unbounded: requires a denominator-1 lattice");
    for (const auto& [idx, v] : f.cells())
        if (v < 0.0) throw std::domain_error("cz_unbounded: f must be nonnegative");

    CZUnbounded out;
    out.cz.lambda = lambda;
    out.cz.c_good = cz_unbounded_average_bound();
    out.cz.good = f;

    auto hull = f.support_hull();
    if (!hull) return out;  // zero function: empty Omega

    // Window that surely contains Omega = {M^B f > lambda}: any interval
    // containing x and meeting the support has length > ||f||_1/lambda
    // outside it, so the averages drop below lambda.
    double mass = 0.0;
    for (const auto& [idx, v] : f.cells()) mass += v;
    long long pad = static_cast<long long>(std::ceil(mass / lambda)) + 2;
    CellRange window;
    window.lo = {hull->lo[0] - pad};
    window.hi = {hull->hi[0] + pad};

    MaximalConfig cfg;
    cfg.variant = MaxVariant::IntervalBall;
    cfg.q = 1.0;
    cfg.window = window;
    LatticeFunction mb = maximal(f, cfg);

    std::vector<CellIdx> omega;
    for (const auto& [idx, v] : mb.cells())
        if (v > lambda) omega.push_back(idx);
    if (omega.empty()) return out;

    out.whitney = whitney(omega, f);
    std::vector<Cube> cubes;
    for (const auto& wc : out.whitney.cubes) cubes.push_back(wc.cube);
    out.cz.cubes = cubes;
    build_good_bad(f, cubes, out.cz);
    return out;
}

std::string CZDecomposition::to_json(const LatticeFunction& f) const {
    std::ostringstream os;
    os << "{\n  \"lambda\": " << format_double(lambda) << ",\n  \"cubes\": [\n";
    for (size_t i = 0; i < cubes.size(); ++i) {
        CellRange r = f.range_of_cube(cubes[i]);
        double s = 0.0;
        for (const auto& [idx, v] : f.cells())
            if (r.contains(idx)) s += v;
        double avg = s / static_cast<double>(r.count());
        os << "    { \"cube\": " << cube_to_json(cubes[i]) << ", \"average\": " << format_double(avg)
           << " }";
        if (i + 1 < cubes.size()) os << ",";
        os << "\n";
    }
    os << "  ],\n  \"omega_cells\": " << omega.size() << ",\n  \"good_sup_bound\": "
       << format_double(c_good * lambda) << "\n}\n";
    return os.str();
}

}  // namespace hx
