#pragma once

#include <array>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

namespace wulff {

/// Truncated second-order Taylor value in up to three seed directions.
///
/// Carries f, the gradient df/ds_i and the (symmetric) Hessian d2f/ds_i ds_j
/// with respect to the seeded directions. Arithmetic propagates both orders
/// by the chain rule, so any composition of the elementary operations below
/// yields exact first and second derivatives of the composite expression.
class Jet2 {
  public:
    static constexpr int kMaxSeeds = 3;

    Jet2() = default;

    /// Constant with respect to m seed directions.
    Jet2(double value, int m) : m_(check_m(m)), val_(value) {}

    int seeds() const { return m_; }
    double value() const { return val_; }
    double grad(int i) const { return g_[i]; }
    double hess(int i, int j) const { return h_[i][j]; }

    double& grad(int i) { return g_[i]; }
    double& hess(int i, int j) { return h_[i][j]; }

    /// Independent variables: jet k of the result has value values[k],
    /// gradient equal to the k-th standard basis row and zero Hessian.
    static std::vector<Jet2> seed(std::span<const double> values) {
        const int m = check_m(static_cast<int>(values.size()));
        std::vector<Jet2> out;
        out.reserve(static_cast<std::size_t>(m));
        for (int k = 0; k < m; ++k) {
            Jet2 j(values[static_cast<std::size_t>(k)], m);
            j.g_[k] = 1.0;
            out.push_back(j);
        }
        return out;
    }

    static Jet2 variable(double value, int index, int m) {
        check_m(m);
        if (index < 0 || index >= m) throw std::invalid_argument("Jet2::variable: index out of range");
        Jet2 j(value, m);
        j.g_[index] = 1.0;
        return j;
    }

    Jet2 operator-() const {
        Jet2 r(-val_, m_);
        for (int i = 0; i < m_; ++i) {
            r.g_[i] = -g_[i];
            for (int j = 0; j < m_; ++j) r.h_[i][j] = -h_[i][j];
        }
        return r;
    }

    Jet2 operator+(const Jet2& o) const {
        same(o);
        Jet2 r(val_ + o.val_, m_);
        for (int i = 0; i < m_; ++i) {
            r.g_[i] = g_[i] + o.g_[i];
            for (int j = 0; j < m_; ++j) r.h_[i][j] = h_[i][j] + o.h_[i][j];
        }
        return r;
    }
    Jet2 operator-(const Jet2& o) const {
        same(o);
        Jet2 r(val_ - o.val_, m_);
        for (int i = 0; i < m_; ++i) {
            r.g_[i] = g_[i] - o.g_[i];
            for (int j = 0; j < m_; ++j) r.h_[i][j] = h_[i][j] - o.h_[i][j];
        }
        return r;
    }
    Jet2 operator*(const Jet2& o) const {
        same(o);
        Jet2 r(val_ * o.val_, m_);
        for (int i = 0; i < m_; ++i) {
            r.g_[i] = g_[i] * o.val_ + val_ * o.g_[i];
            for (int j = 0; j < m_; ++j)
                r.h_[i][j] = h_[i][j] * o.val_ + g_[i] * o.g_[j] + g_[j] * o.g_[i] + val_ * o.h_[i][j];
        }
        return r;
    }
    Jet2 operator/(const Jet2& o) const {
        same(o);
        if (o.val_ == 0.0) throw std::domain_error("Jet2: division by zero");
        const double w = o.val_;
        const double f = val_ / w;
        const double fx = 1.0 / w;            // d/da (a/b)
        const double fy = -val_ / (w * w);    // d/db
        const double fxy = -1.0 / (w * w);
        const double fyy = 2.0 * val_ / (w * w * w);
        return compose2(f, fx, fy, 0.0, fxy, fyy, *this, o);
    }

    Jet2 operator+(double c) const { Jet2 r = *this; r.val_ += c; return r; }
    Jet2 operator-(double c) const { Jet2 r = *this; r.val_ -= c; return r; }
    Jet2 operator*(double c) const {
        Jet2 r(val_ * c, m_);
        for (int i = 0; i < m_; ++i) {
            r.g_[i] = g_[i] * c;
            for (int j = 0; j < m_; ++j) r.h_[i][j] = h_[i][j] * c;
        }
        return r;
    }
    Jet2 operator/(double c) const {
        if (c == 0.0) throw std::domain_error("Jet2: division by zero");
        return *this * (1.0 / c);
    }

    /// Unary chain rule: g(f) with g' and g'' evaluated at f's value. The
    /// quadratic terms multiply the symmetric product (a_i a_j) so the Hessian
    /// stays bitwise symmetric.
    static Jet2 compose1(double f, double df, double ddf, const Jet2& a) {
        Jet2 r(f, a.m_);
        for (int i = 0; i < a.m_; ++i) {
            r.g_[i] = df * a.g_[i];
            for (int j = 0; j < a.m_; ++j) r.h_[i][j] = df * a.h_[i][j] + ddf * (a.g_[i] * a.g_[j]);
        }
        return r;
    }

    /// Binary chain rule with the partials of g(a, b) at the argument values.
    static Jet2 compose2(double f, double fa, double fb, double faa, double fab, double fbb,
                         const Jet2& a, const Jet2& b) {
        a.same(b);
        Jet2 r(f, a.m_);
        for (int i = 0; i < a.m_; ++i) {
            r.g_[i] = fa * a.g_[i] + fb * b.g_[i];
            for (int j = 0; j < a.m_; ++j) {
                r.h_[i][j] = faa * (a.g_[i] * a.g_[j]) +
                             fab * (a.g_[i] * b.g_[j] + a.g_[j] * b.g_[i]) +
                             fbb * (b.g_[i] * b.g_[j]) + fa * a.h_[i][j] + fb * b.h_[i][j];
            }
        }
        return r;
    }

  private:
    static int check_m(int m) {
        if (m < 1 || m > kMaxSeeds) throw std::invalid_argument("Jet2: seed count must be 1..3");
        return m;
    }
    void same(const Jet2& o) const {
        if (m_ != o.m_) throw std::invalid_argument("Jet2: mixed seed counts");
    }

    int m_ = 1;
    double val_ = 0.0;
    std::array<double, 3> g_{};
    std::array<std::array<double, 3>, 3> h_{};
};

inline Jet2 operator+(double c, const Jet2& a) { return a + c; }
inline Jet2 operator-(double c, const Jet2& a) { return (-a) + c; }
inline Jet2 operator*(double c, const Jet2& a) { return a * c; }
inline Jet2 operator/(double c, const Jet2& a) { return Jet2(c, a.seeds()) / a; }

inline Jet2 sqrt(const Jet2& a) {
    if (a.value() <= 0.0) throw std::domain_error("Jet2: sqrt of nonpositive value");
    const double s = std::sqrt(a.value());
    return Jet2::compose1(s, 0.5 / s, -0.25 / (s * a.value()), a);
}

inline Jet2 sin(const Jet2& a) {
    const double s = std::sin(a.value()), c = std::cos(a.value());
    return Jet2::compose1(s, c, -s, a);
}

inline Jet2 cos(const Jet2& a) {
    const double s = std::sin(a.value()), c = std::cos(a.value());
    return Jet2::compose1(c, -s, -c, a);
}

/// x^p for real exponent; requires x > 0 (derivatives may blow up at 0).
inline Jet2 pow(const Jet2& a, double p) {
    if (a.value() <= 0.0) throw std::domain_error("Jet2: pow base must be positive");
    const double f = std::pow(a.value(), p);
    const double df = p * std::pow(a.value(), p - 1.0);
    const double ddf = p * (p - 1.0) * std::pow(a.value(), p - 2.0);
    return Jet2::compose1(f, df, ddf, a);
}

inline Jet2 atan2(const Jet2& y, const Jet2& x) {
    const double xv = x.value(), yv = y.value();
    const double r2 = xv * xv + yv * yv;
    if (r2 == 0.0) throw std::domain_error("Jet2: atan2 at the origin");
    const double f = std::atan2(yv, xv);
    const double fy = xv / r2, fx = -yv / r2;
    const double r4 = r2 * r2;
    const double fyy = -2.0 * xv * yv / r4;
    const double fyx = (yv * yv - xv * xv) / r4;
    const double fxx = 2.0 * xv * yv / r4;
    return Jet2::compose2(f, fy, fx, fyy, fyx, fxx, y, x);
}

/// Jet-valued ambient vector; the z slot stays a constant 0 in the plane.
using JetVec3 = std::array<Jet2, 3>;

inline Jet2 jdot(const JetVec3& a, const JetVec3& b, int dim) {
    Jet2 s = a[0] * b[0] + a[1] * b[1];
    if (dim == 3) s = s + a[2] * b[2];
    return s;
}

/// Euclidean norm of a jet vector; hard error when the vector vanishes.
inline Jet2 jnorm(const JetVec3& v, int dim) {
    return sqrt(jdot(v, v, dim));
}

}  // namespace wulff
