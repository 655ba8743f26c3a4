#ifndef RYDSIM_GEOMETRY_HPP
#define RYDSIM_GEOMETRY_HPP

#include <cmath>

namespace rydsim {

/// 3-vector used for both atom positions (um) and Bloch vectors
/// (dimensionless).
struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    Vec3() = default;
    Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec3& operator+=(const Vec3& o) {
        x += o.x;
        y += o.y;
        z += o.z;
        return *this;
    }

    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    Vec3 cross(const Vec3& o) const {
        return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
    }
    double norm() const { return std::sqrt(dot(*this)); }
    Vec3 normalized() const {
        const double n = norm();
        return {x / n, y / n, z / n};
    }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

inline double distance(const Vec3& a, const Vec3& b) { return (a - b).norm(); }

/// Rodrigues rotation of v about unit axis n by angle a (right-handed).
inline Vec3 rotate_about(const Vec3& v, const Vec3& n, double a) {
    const double c = std::cos(a), s = std::sin(a);
    return v * c + n.cross(v) * s + n * (n.dot(v) * (1.0 - c));
}

/// Rotation about the z axis (azimuth increases by angle a).
inline Vec3 rotate_z(const Vec3& v, double a) {
    const double c = std::cos(a), s = std::sin(a);
    return {c * v.x - s * v.y, s * v.x + c * v.y, v.z};
}

/// Rotation about an equatorial axis with azimuth `axis_azimuth`.
inline Vec3 rotate_equatorial(const Vec3& v, double axis_azimuth, double angle) {
    return rotate_about(v, {std::cos(axis_azimuth), std::sin(axis_azimuth), 0.0}, angle);
}

/// Bloch vector of the state |theta, phi>: polar angle theta from +z,
/// azimuth phi. theta = 0 is spin-up.
inline Vec3 bloch_from_angles(double theta, double phi = 0.0) {
    return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
            std::cos(theta)};
}

} // namespace rydsim

#endif // RYDSIM_GEOMETRY_HPP
