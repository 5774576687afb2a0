#pragma once

#include <cmath>

namespace gravmc {

template <class T>
struct Vec3 {
    T x{}, y{}, z{};
};

using Vec3d = Vec3<double>;
using Vec3f = Vec3<float>;

template <class T>
inline Vec3<T> operator+(Vec3<T> a, Vec3<T> b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }

template <class T>
inline Vec3<T> operator-(Vec3<T> a, Vec3<T> b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }

template <class T>
inline Vec3<T> operator*(T s, Vec3<T> a) { return {s * a.x, s * a.y, s * a.z}; }

template <class T>
inline T dot(Vec3<T> a, Vec3<T> b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

template <class T>
inline T norm2(Vec3<T> a) { return dot(a, a); }

template <class T>
inline T norm(Vec3<T> a) { return std::sqrt(norm2(a)); }

template <class T>
inline bool operator==(Vec3<T> a, Vec3<T> b) { return a.x == b.x && a.y == b.y && a.z == b.z; }

} // namespace gravmc
