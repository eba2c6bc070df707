#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hx {

// Exact rational arithmetic for cube geometry.  All endpoints that occur in
// the translated dyadic systems have denominators of the form 3*2^k, and the
// lattice cells have denominators d*2^K with d in {1,3}; a general reduced
// fraction over 128-bit integers covers all of it, including exact values of
// IEEE doubles (which are dyadic rationals).
struct Rat {
    __int128 num = 0;
    __int128 den = 1;  // > 0, gcd(num,den) == 1

    Rat() = default;
    Rat(long long n) : num(n), den(1) {}
    Rat(__int128 n, __int128 d) : num(n), den(d) { normalize(); }

    static __int128 gcd128(__int128 a, __int128 b) {
        if (a < 0) a = -a;
        if (b < 0) b = -b;
        while (b != 0) {
            __int128 t = a % b;
            a = b;
            b = t;
        }
        return a;
    }

    void normalize() {
        if (den == 0) throw std::domain_error("Rat: zero denominator");
        if (den < 0) {
            num = -num;
            den = -den;
        }
        __int128 g = gcd128(num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
    }

    static Rat from_double(double x) {
        if (!std::isfinite(x)) throw std::domain_error("Rat: non-finite value");
        int e = 0;
        double m = std::frexp(x, &e);  // x = m * 2^e, |m| in [0.5,1)
        long long mant = static_cast<long long>(std::ldexp(m, 53));
        e -= 53;
        if (e >= 0) {
            if (e > 70) throw std::domain_error("Rat: double exponent too large");
            return Rat(static_cast<__int128>(mant) << e, 1);
        }
        if (e < -140) {
            // Subnormal-scale noise; treat as exact zero only when it is.
            if (mant == 0) return Rat(0);
            throw std::domain_error("Rat: double exponent too small");
        }
        return Rat(mant, static_cast<__int128>(1) << (-e));
    }

    // value = num / (3 * 2^k), k may be negative
    static Rat third_dyadic(long long num3, int k) {
        if (k >= 0) return Rat(num3, static_cast<__int128>(3) << k);
        return Rat(static_cast<__int128>(num3) << (-k), 3);
    }

    // value = i / (d * 2^K)
    static Rat cell_coord(long long i, int d, int K) {
        return Rat(i, static_cast<__int128>(d) << K);
    }

    double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }

    friend Rat operator+(const Rat& a, const Rat& b) { return Rat(a.num * b.den + b.num * a.den, a.den * b.den); }
    friend Rat operator-(const Rat& a, const Rat& b) { return Rat(a.num * b.den - b.num * a.den, a.den * b.den); }
    friend Rat operator*(const Rat& a, const Rat& b) { return Rat(a.num * b.num, a.den * b.den); }
    friend Rat operator/(const Rat& a, const Rat& b) {
        if (b.num == 0) throw std::domain_error("Rat: division by zero");
        return Rat(a.num * b.den, a.den * b.num);
    }
    Rat operator-() const {
        Rat r = *this;
        r.num = -r.num;
        return r;
    }

    friend bool operator==(const Rat& a, const Rat& b) { return a.num == b.num && a.den == b.den; }
    friend bool operator!=(const Rat& a, const Rat& b) { return !(a == b); }
    friend bool operator<(const Rat& a, const Rat& b) { return a.num * b.den < b.num * a.den; }
    friend bool operator<=(const Rat& a, const Rat& b) { return a.num * b.den <= b.num * a.den; }
    friend bool operator>(const Rat& a, const Rat& b) { return b < a; }
    friend bool operator>=(const Rat& a, const Rat& b) { return b <= a; }

    // floor(a/b) as an integer
    static long long floor_div(const Rat& a, const Rat& b) {
        Rat q = a / b;
        __int128 fl = q.num / q.den;
        if (q.num % q.den != 0 && (q.num < 0)) fl -= 1;
        return static_cast<long long>(fl);
    }
};

// Half-open axis-aligned box: product of [lo_i, hi_i).
struct RatBox {
    std::vector<Rat> lo, hi;

    int dim() const { return static_cast<int>(lo.size()); }

    bool contains_point(const std::vector<Rat>& x) const {
        for (size_t i = 0; i < lo.size(); ++i)
            if (!(lo[i] <= x[i] && x[i] < hi[i])) return false;
        return true;
    }
    bool contains_box(const RatBox& b) const {
        for (size_t i = 0; i < lo.size(); ++i)
            if (!(lo[i] <= b.lo[i] && b.hi[i] <= hi[i])) return false;
        return true;
    }
    bool intersects(const RatBox& b) const {
        for (size_t i = 0; i < lo.size(); ++i)
            if (!(lo[i] < b.hi[i] && b.lo[i] < hi[i])) return false;
        return true;
    }
};

}  // namespace hx
