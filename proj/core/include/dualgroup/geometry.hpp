#pragma once

#include <array>
#include <cmath>

// Small fixed-size linear algebra used by the projection and normal
// estimation code. Everything is double precision; scene points are stored
// as float and widened at the call site.

namespace dualgroup {

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
};

inline double dot(const Vec3& a, const Vec3& b) {
    return a.x * b.x + a.y * b.y + a.z * b.z;
}

inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }

inline Vec3 normalized(const Vec3& v) {
    const double n = norm(v);
    return n > 0.0 ? v / n : Vec3{};
}

inline double squared_distance(const Vec3& a, const Vec3& b) {
    const double dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
    return dx * dx + dy * dy + dz * dz;
}

// Row-major 3x3.
struct Mat3 {
    std::array<double, 9> m{};

    double& operator()(int r, int c) { return m[static_cast<size_t>(r) * 3 + c]; }
    double operator()(int r, int c) const { return m[static_cast<size_t>(r) * 3 + c]; }

    static Mat3 identity() {
        Mat3 out;
        out(0, 0) = out(1, 1) = out(2, 2) = 1.0;
        return out;
    }

    Vec3 operator*(const Vec3& v) const {
        return {m[0] * v.x + m[1] * v.y + m[2] * v.z,
                m[3] * v.x + m[4] * v.y + m[5] * v.z,
                m[6] * v.x + m[7] * v.y + m[8] * v.z};
    }

    Mat3 transposed() const {
        Mat3 out;
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) out(r, c) = (*this)(c, r);
        return out;
    }
};

// Row-major 4x4 homogeneous transform.
struct Mat4 {
    std::array<double, 16> m{};

    double& operator()(int r, int c) { return m[static_cast<size_t>(r) * 4 + c]; }
    double operator()(int r, int c) const { return m[static_cast<size_t>(r) * 4 + c]; }

    static Mat4 identity() {
        Mat4 out;
        out(0, 0) = out(1, 1) = out(2, 2) = out(3, 3) = 1.0;
        return out;
    }

    Mat4 operator*(const Mat4& o) const {
        Mat4 out;
        for (int r = 0; r < 3 + 1; ++r)
            for (int c = 0; c < 4; ++c) {
                double s = 0.0;
                for (int k = 0; k < 4; ++k) s += (*this)(r, k) * o(k, c);
                out(r, c) = s;
            }
        return out;
    }

    // Applies the transform to a point (w = 1), returning the xyz part.
    Vec3 transform_point(const Vec3& v) const {
        return {m[0] * v.x + m[1] * v.y + m[2] * v.z + m[3],
                m[4] * v.x + m[5] * v.y + m[6] * v.z + m[7],
                m[8] * v.x + m[9] * v.y + m[10] * v.z + m[11]};
    }

    Mat3 rotation() const {
        Mat3 out;
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) out(r, c) = (*this)(r, c);
        return out;
    }

    Vec3 translation() const { return {m[3], m[7], m[11]}; }

    // Inverse of a rigid transform (rotation + translation only).
    Mat4 rigid_inverse() const {
        const Mat3 rt = rotation().transposed();
        const Vec3 t = translation();
        const Vec3 it = rt * t;
        Mat4 out = Mat4::identity();
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) out(r, c) = rt(r, c);
        out(0, 3) = -it.x;
        out(1, 3) = -it.y;
        out(2, 3) = -it.z;
        return out;
    }
};

// Eigen decomposition of a symmetric 3x3 matrix by cyclic Jacobi rotations.
// Returns eigenvalues in descending order with matching unit eigenvectors.
struct SymmetricEigen3 {
    std::array<double, 3> values{};
    std::array<Vec3, 3> vectors{};
};

inline SymmetricEigen3 symmetric_eigen3(const Mat3& a_in) {
    Mat3 a = a_in;
    Mat3 v = Mat3::identity();

    for (int sweep = 0; sweep < 32; ++sweep) {
        double off = std::abs(a(0, 1)) + std::abs(a(0, 2)) + std::abs(a(1, 2));
        if (off == 0.0) break;
        for (int p = 0; p < 2; ++p) {
            for (int q = p + 1; q < 3; ++q) {
                if (std::abs(a(p, q)) < 1e-300) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int k = 0; k < 3; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < 3; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                for (int k = 0; k < 3; ++k) {
                    const double vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    SymmetricEigen3 out;
    std::array<int, 3> order = {0, 1, 2};
    std::array<double, 3> diag = {a(0, 0), a(1, 1), a(2, 2)};
    // descending by eigenvalue
    for (int i = 0; i < 2; ++i)
        for (int j = i + 1; j < 3; ++j)
            if (diag[order[j]] > diag[order[i]]) std::swap(order[i], order[j]);
    for (int i = 0; i < 3; ++i) {
        out.values[i] = diag[order[i]];
        out.vectors[i] = {v(0, order[i]), v(1, order[i]), v(2, order[i])};
    }
    return out;
}

}  // namespace dualgroup
