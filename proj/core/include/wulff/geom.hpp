#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace wulff {

/// Ambient vector. Curves in the plane use z == 0 throughout.
struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    double& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }
    double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator-() const { return {-x, -y, -z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
    Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
    Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
    Vec3& operator*=(double s) { x *= s; y *= s; z *= s; return *this; }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm2(const Vec3& v) { return dot(v, v); }
inline double norm(const Vec3& v) { return std::sqrt(norm2(v)); }

inline Vec3 normalized(const Vec3& v) {
    const double n = norm(v);
    if (n == 0.0) throw std::domain_error("normalized: zero vector");
    return v / n;
}

/// 90-degree counterclockwise rotation in the plane (z ignored).
inline Vec3 rot90ccw(const Vec3& v) { return {-v.y, v.x, 0.0}; }

/// Symmetric 3x3 matrix stored dense; used for ambient Hessians.
struct Mat3 {
    double m[3][3] = {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}};

    Vec3 apply(const Vec3& v) const {
        return {m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z,
                m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
                m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z};
    }
    double quad(const Vec3& a, const Vec3& b) const { return dot(a, apply(b)); }
};

/// Small square matrix of runtime rank n in {1,2}; chart-basis endomorphisms.
struct MatN {
    int n = 1;
    double m[2][2] = {{0, 0}, {0, 0}};

    static MatN identity(int n) {
        MatN r; r.n = n;
        for (int i = 0; i < n; ++i) r.m[i][i] = 1.0;
        return r;
    }
    double trace() const {
        double t = 0;
        for (int i = 0; i < n; ++i) t += m[i][i];
        return t;
    }
    MatN mul(const MatN& o) const {
        MatN r; r.n = n;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double s = 0;
                for (int k = 0; k < n; ++k) s += m[i][k] * o.m[k][j];
                r.m[i][j] = s;
            }
        return r;
    }
    MatN inverse() const {
        MatN r; r.n = n;
        if (n == 1) {
            if (m[0][0] == 0.0) throw std::domain_error("MatN::inverse: singular");
            r.m[0][0] = 1.0 / m[0][0];
            return r;
        }
        const double det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        if (det == 0.0) throw std::domain_error("MatN::inverse: singular");
        r.m[0][0] = m[1][1] / det;
        r.m[1][1] = m[0][0] / det;
        r.m[0][1] = -m[0][1] / det;
        r.m[1][0] = -m[1][0] / det;
        return r;
    }
    double det() const {
        return n == 1 ? m[0][0] : m[0][0] * m[1][1] - m[0][1] * m[1][0];
    }
    MatN plus(const MatN& o, double scale = 1.0) const {
        MatN r; r.n = n;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) r.m[i][j] = m[i][j] + scale * o.m[i][j];
        return r;
    }
    double frobenius() const {
        double s = 0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) s += m[i][j] * m[i][j];
        return std::sqrt(s);
    }
};

/// Eigenvalues of a symmetric 2x2 matrix, ascending.
inline std::array<double, 2> sym_eigenvalues2(double a, double b, double d) {
    const double tr = a + d;
    const double disc = std::sqrt(std::max(0.0, (a - d) * (a - d) / 4.0 + b * b));
    return {tr / 2.0 - disc, tr / 2.0 + disc};
}

/// Deterministic pairwise reduction; result independent of any scheduling.
inline double pairwise_sum(std::span<const double> xs) {
    const std::size_t n = xs.size();
    if (n == 0) return 0.0;
    if (n <= 8) {
        double s = 0.0;
        for (double x : xs) s += x;
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(xs.subspan(0, half)) + pairwise_sum(xs.subspan(half));
}

inline double pairwise_sum(const std::vector<double>& xs) {
    return pairwise_sum(std::span<const double>(xs.data(), xs.size()));
}

/// splitmix64; fixed-seed deterministic stream for sampling in tests and checks.
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    /// Uniform in [0, 1).
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
    /// Uniform in [a, b).
    double uniform(double a, double b) { return a + (b - a) * next_double(); }

    /// Uniform direction on the unit sphere (dim == 3) or circle (dim == 2).
    Vec3 unit_vector(int dim) {
        for (;;) {
            Vec3 v{uniform(-1, 1), uniform(-1, 1), dim == 3 ? uniform(-1, 1) : 0.0};
            const double n2 = norm2(v);
            if (n2 > 1e-6 && n2 < 1.0) return v / std::sqrt(n2);
        }
    }

  private:
    std::uint64_t state_;
};

}  // namespace wulff
