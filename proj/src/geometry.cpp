#include "rhls/geometry.hpp"

#include <cmath>

#include "rhls/errors.hpp"

namespace rhls {

namespace {

double norm2(std::span<const double> v) {
    double s = 0;
    for (double c : v) s += c * c;
    return s;
}

// Pads a boundary point with a zero height so both kinds live in R^n.
Vec lift(std::span<const double> v, std::size_t n) {
    Vec out(v.begin(), v.end());
    out.resize(n, 0.0);
    return out;
}

}  // namespace

Vec HalfSpacePoint::full() const {
    Vec v = tangential;
    v.push_back(height);
    return v;
}

double distance(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw InvalidArgument("distance: dimension mismatch");
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

KelvinImage kelvin(const BoundaryPoint& x, double nu, std::span<const double> xi) {
    if (!(nu > 0)) throw InvalidArgument("kelvin: radius must be positive");
    const std::size_t m = x.coords.size();
    bool boundary;
    if (xi.size() == m) boundary = true;
    else if (xi.size() == m + 1) boundary = false;
    else throw InvalidArgument("kelvin: point dimension mismatch");
    const Vec c = lift(x.coords, xi.size());
    double d2 = 0;
    for (std::size_t i = 0; i < xi.size(); ++i) d2 += (xi[i] - c[i]) * (xi[i] - c[i]);
    if (d2 == 0) throw SingularPoint("kelvin: point coincides with the center");
    KelvinImage img;
    img.point.resize(xi.size());
    const double s = nu * nu / d2;
    for (std::size_t i = 0; i < xi.size(); ++i) img.point[i] = c[i] + s * (xi[i] - c[i]);
    const int n = static_cast<int>(m) + 1;
    const int expo = boundary ? 2 * n - 2 : 2 * n;
    img.measure_factor = std::pow(nu * nu / d2, 0.5 * expo);
    return img;
}

PointFunction ms_reflect(PointFunction w, const BoundaryPoint& x, double nu, double lambda) {
    return [w = std::move(w), x, nu, lambda](std::span<const double> xi) {
        const KelvinImage img = kelvin(x, nu, xi);
        const Vec c = lift(x.coords, xi.size());
        return std::pow(distance(xi, c) / nu, lambda) * w(img.point);
    };
}

double ms_kernel(const BoundaryPoint& x, double nu, std::span<const double> zeta,
                 std::span<const double> z, double lambda) {
    const std::size_t n = x.coords.size() + 1;
    const Vec zt = lift(zeta, n), zz = lift(z, n), c = lift(x.coords, n);
    const KelvinImage img = kelvin(x, nu, zt);
    return std::pow(distance(zt, c) / nu, lambda) * std::pow(distance(img.point, zz), lambda) -
           std::pow(distance(zt, zz), lambda);
}

SpherePoint stereo(std::span<const double> x) {
    const std::size_t n = x.size();
    if (n < 1) throw InvalidArgument("stereo: empty point");
    const double s = norm2(x);
    const double d = 1 + s;
    SpherePoint out;
    out.coords.resize(n + 1);
    for (std::size_t i = 0; i + 1 < n; ++i) out.coords[i] = 2 * x[i] / d;
    out.coords[n - 1] = (1 - s) / d;
    out.coords[n] = 2 * x[n - 1] / d;
    return out;
}

Vec stereo_inv(const SpherePoint& xi) {
    const std::size_t n = xi.coords.size() - 1;
    const double den = 1 + xi.coords[n - 1];
    if (!(den > 1e-300)) throw PoleImage("stereo_inv: excluded point");
    Vec x(n);
    for (std::size_t i = 0; i + 1 < n; ++i) x[i] = xi.coords[i] / den;
    x[n - 1] = xi.coords[n] / den;
    return x;
}

double stereo_jacobian(std::span<const double> x) {
    return std::pow(2 / (1 + norm2(x)), static_cast<double>(x.size()));
}

double stereo_boundary_jacobian(std::span<const double> x) {
    // x lies in R^{n-1}, so the exponent n-1 equals its length.
    return std::pow(2 / (1 + norm2(x)), static_cast<double>(x.size()));
}

}  // namespace rhls
