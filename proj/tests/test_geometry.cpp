#include <doctest.h>

#include "dualgroup/geometry.hpp"

using namespace dualgroup;

TEST_CASE("symmetric eigen decomposition recovers a known spectrum") {
    // diag(3, 2, 1) rotated by a permutation-free rotation
    Mat3 a;
    a(0, 0) = 2.0; a(0, 1) = 0.5; a(0, 2) = 0.0;
    a(1, 0) = 0.5; a(1, 1) = 2.0; a(1, 2) = 0.5;
    a(2, 0) = 0.0; a(2, 1) = 0.5; a(2, 2) = 2.0;

    const SymmetricEigen3 eig = symmetric_eigen3(a);
    CHECK(eig.values[0] >= eig.values[1]);
    CHECK(eig.values[1] >= eig.values[2]);

    for (int i = 0; i < 3; ++i) {
        const Vec3 v = eig.vectors[i];
        const Vec3 av = a * v;
        CHECK(std::abs(av.x - eig.values[i] * v.x) < 1e-9);
        CHECK(std::abs(av.y - eig.values[i] * v.y) < 1e-9);
        CHECK(std::abs(av.z - eig.values[i] * v.z) < 1e-9);
        CHECK(std::abs(norm(v) - 1.0) < 1e-12);
    }
    // trace is preserved
    CHECK(std::abs(eig.values[0] + eig.values[1] + eig.values[2] - 6.0) < 1e-9);
}

TEST_CASE("rigid inverse undoes a rotation + translation") {
    const double c = std::cos(0.7), s = std::sin(0.7);
    Mat4 t = Mat4::identity();
    t(0, 0) = c;  t(0, 1) = -s;
    t(1, 0) = s;  t(1, 1) = c;
    t(0, 3) = 1.5;
    t(1, 3) = -2.0;
    t(2, 3) = 0.25;

    const Mat4 inv = t.rigid_inverse();
    const Mat4 id = t * inv;
    for (int r = 0; r < 4; ++r)
        for (int col = 0; col < 4; ++col)
            CHECK(std::abs(id(r, col) - (r == col ? 1.0 : 0.0)) < 1e-12);
}
