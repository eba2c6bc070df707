#include "hx/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace hx {

int level_sign(int k) { return (((k % 2) + 2) % 2 == 0) ? 1 : -1; }

bool same_cube(const Cube& a, const Cube& b) {
    return a.level == b.level && a.m == b.m && a.shift.t == b.shift.t;
}

RatBox cube_box(const Cube& q) {
    RatBox box;
    const int s = level_sign(q.level);
    for (int i = 0; i < q.shift.dim; ++i) {
        long long lo3 = 3 * q.m[i] + s * q.shift.t[i];
        box.lo.push_back(Rat::third_dyadic(lo3, q.level));
        box.hi.push_back(Rat::third_dyadic(lo3 + 3, q.level));
    }
    return box;
}

Rat cube_side(const Cube& q) {
    if (q.level >= 0) return Rat(1, static_cast<__int128>(1) << q.level);
    return Rat(static_cast<__int128>(1) << (-q.level), 1);
}

Rat cube_measure(const Cube& q) {
    Rat side = cube_side(q);
    Rat v(1);
    for (int i = 0; i < q.shift.dim; ++i) v = v * side;
    return v;
}

std::vector<Rat> cube_center(const Cube& q) {
    RatBox box = cube_box(q);
    std::vector<Rat> z;
    for (int i = 0; i < box.dim(); ++i) z.push_back((box.lo[i] + box.hi[i]) / Rat(2));
    return z;
}

// Children of (k,m) have indices 2m + (-1)^k t + {0,1} per axis; the (-1)^k
// alternation of the shift is exactly what makes consecutive levels nest.
std::vector<Cube> children(const Cube& q) {
    const int s = level_sign(q.level);
    const int n = q.shift.dim;
    std::vector<Cube> out;
    long long count = 1LL << n;
    for (long long bits = 0; bits < count; ++bits) {
        Cube c;
        c.shift = q.shift;
        c.level = q.level + 1;
        c.m.resize(n);
        for (int i = 0; i < n; ++i) {
            long long b = (bits >> i) & 1;
            c.m[i] = 2 * q.m[i] + s * q.shift.t[i] + b;
        }
        out.push_back(std::move(c));
    }
    return out;
}

Cube parent(const Cube& q) {
    const int n = q.shift.dim;
    const int sp = level_sign(q.level - 1);
    Cube p;
    p.shift = q.shift;
    p.level = q.level - 1;
    p.m.resize(n);
    for (int i = 0; i < n; ++i) {
        long long a = q.m[i] - sp * q.shift.t[i];
        p.m[i] = (a >= 0) ? a / 2 : -((-a + 1) / 2);
    }
    return p;
}

Cube cube_containing(const GridShift& shift, int level, const std::vector<Rat>& x) {
    Cube q;
    q.shift = shift;
    q.level = level;
    q.m.resize(shift.dim);
    const int s = level_sign(level);
    Rat side = (level >= 0) ? Rat(1, static_cast<__int128>(1) << level)
                            : Rat(static_cast<__int128>(1) << (-level), 1);
    for (int i = 0; i < shift.dim; ++i) {
        // m = floor(x/side - s*t/3)
        Rat v = x[i] / side - Rat(s * shift.t[i], 3);
        q.m[i] = Rat::floor_div(v, Rat(1));
    }
    return q;
}

Cube cube_containing(const GridShift& shift, int level, const std::vector<double>& x) {
    std::vector<Rat> xr;
    xr.reserve(x.size());
    for (double v : x) xr.push_back(Rat::from_double(v));
    return cube_containing(shift, level, xr);
}

double rho_bound(int dim) {
    // At level k the union of the three shifted boundary sets on an axis has
    // gaps of 2^{-k}/3, so any ball with 2r < 2^{-k}/3 sits inside a single
    // cube of one shift.  Scanning k downward from 2^{-k} >= 2r, a working
    // level is reached once 2^{-k} > 6r, hence 2^{-k} < 16r at the first hit
    // and diam(Q) = sqrt(n) 2^{-k} < 16 sqrt(n) r.
    return 16.0 * std::sqrt(static_cast<double>(dim));
}

double c0_const() { return 0.5; }
double C0_const(int dim) { return std::sqrt(static_cast<double>(dim)); }

BallCover cover_ball(const std::vector<double>& x, double r) {
    if (!(r > 0)) throw std::domain_error("cover_ball: radius must be positive");
    const int n = static_cast<int>(x.size());
    std::vector<Rat> xr;
    for (double v : x) xr.push_back(Rat::from_double(v));
    Rat rr = Rat::from_double(r);

    // Finest level that could possibly contain a ball of radius r: 2^{-k} >= 2r.
    int k_hi = static_cast<int>(std::floor(std::log2(1.0 / (2.0 * r))));

    std::vector<GridShift> shifts;
    long long count = 1;
    for (int i = 0; i < n; ++i) count *= 3;
    for (long long code = 0; code < count; ++code) {
        std::vector<int> t(n);
        long long c = code;
        for (int i = 0; i < n; ++i) {
            t[i] = static_cast<int>(c % 3);
            c /= 3;
        }
        shifts.emplace_back(n, t);
    }

    for (int k = k_hi; k >= k_hi - 60; --k) {
        for (const auto& sh : shifts) {
            Cube q = cube_containing(sh, k, xr);
            RatBox box = cube_box(q);
            bool ok = true;
            for (int i = 0; i < n && ok; ++i) {
                if (!(box.lo[i] <= xr[i] - rr && xr[i] + rr <= box.hi[i])) ok = false;
            }
            if (ok) {
                double diam = std::sqrt(static_cast<double>(n)) * cube_side(q).to_double();
                return BallCover{q, diam / r};
            }
        }
    }
    throw std::runtime_error("cover_ball: no covering cube found (radius out of range)");
}

std::vector<Cube> cubes_intersecting(const RatBox& region, const GridShift& shift,
                                     int level_lo, int level_hi) {
    std::vector<Cube> out;
    for (int k = level_lo; k <= level_hi; ++k) {
        // Index range per axis from the half-open region bounds.
        std::vector<long long> lo_idx(shift.dim), hi_idx(shift.dim);
        const int s = level_sign(k);
        Rat side = (k >= 0) ? Rat(1, static_cast<__int128>(1) << k)
                            : Rat(static_cast<__int128>(1) << (-k), 1);
        for (int i = 0; i < shift.dim; ++i) {
            Rat a = region.lo[i] / side - Rat(s * shift.t[i], 3);
            Rat b = region.hi[i] / side - Rat(s * shift.t[i], 3);
            lo_idx[i] = Rat::floor_div(a, Rat(1));
            long long hb = Rat::floor_div(b, Rat(1));
            // If the region's upper face is a cube boundary, that cube is excluded.
            Rat frac = b - Rat(hb);
            hi_idx[i] = (frac.num == 0) ? hb - 1 : hb;
        }
        std::vector<long long> m = lo_idx;
        while (true) {
            Cube q;
            q.shift = shift;
            q.level = k;
            q.m = m;
            if (cube_box(q).intersects(region)) out.push_back(q);
            int axis = 0;
            while (axis < shift.dim) {
                if (++m[axis] <= hi_idx[axis]) break;
                m[axis] = lo_idx[axis];
                ++axis;
            }
            if (axis == shift.dim) break;
        }
    }
    return out;
}

Cube BoundedSystem::top() const {
    Cube q;
    q.shift = GridShift::standard(dim);
    q.level = 0;
    q.m.assign(dim, 0);
    return q;
}

Cube BoundedSystem::cube(int level, const std::vector<long long>& m) const {
    if (level < 0 || level > max_level) throw std::domain_error("BoundedSystem: level out of range");
    Cube q;
    q.shift = GridShift::standard(dim);
    q.level = level;
    q.m = m;
    for (int i = 0; i < dim; ++i)
        if (m[i] < 0 || m[i] >= (1LL << level)) throw std::domain_error("BoundedSystem: index out of range");
    return q;
}

Cube BoundedSystem::parent(const Cube& q) const {
    if (q.level <= 0) throw std::domain_error("no parent");
    return hx::parent(q);
}

std::vector<Cube> BoundedSystem::children(const Cube& q) const {
    if (q.level >= max_level) throw std::domain_error("BoundedSystem: no children below max level");
    return hx::children(q);
}

std::vector<Cube> BoundedSystem::all_cubes() const {
    std::vector<Cube> out;
    for (int k = 0; k <= max_level; ++k) {
        std::vector<long long> m(dim, 0);
        long long top_idx = 1LL << k;
        while (true) {
            out.push_back(cube(k, m));
            int axis = 0;
            while (axis < dim) {
                if (++m[axis] < top_idx) break;
                m[axis] = 0;
                ++axis;
            }
            if (axis == dim) break;
        }
    }
    return out;
}

SystemParams SystemParams::euclidean(int n) {
    SystemParams p;
    p.c0 = c0_const();
    p.C0 = C0_const(n);
    p.delta = 0.5;
    p.quasimetric_A = 1.0;
    p.gamma = 1.0;
    p.doubling_nu = static_cast<double>(n);
    return p;
}

}  // namespace hx
