#pragma once

#include <functional>
#include <span>
#include <vector>

namespace rhls {

using Vec = std::vector<double>;

struct BoundaryPoint {
    Vec coords;  // length n-1
    int dim() const { return static_cast<int>(coords.size()) + 1; }
};

struct HalfSpacePoint {
    Vec tangential;  // length n-1
    double height = 0;
    Vec full() const;  // (tangential..., height)
};

struct SpherePoint {
    Vec coords;  // length n+1, unit norm
};

// Image of xi under inversion in the sphere of radius nu about x, with the
// measure factor (nu/|xi-x|)^{2n} (half-space points) or ^{2n-2} (boundary points).
struct KelvinImage {
    Vec point;
    double measure_factor;
};

// xi has length n-1 (a boundary point) or n (a half-space point).
KelvinImage kelvin(const BoundaryPoint& x, double nu, std::span<const double> xi);

using PointFunction = std::function<double(std::span<const double>)>;

// xi -> (|xi-x|/nu)^lambda w(xi^{x,nu}).
PointFunction ms_reflect(PointFunction w, const BoundaryPoint& x, double nu, double lambda);

// (|zeta-x|/nu)^lambda |zeta^{x,nu} - z|^lambda - |zeta - z|^lambda.
// zeta and z may be boundary (length n-1) or half-space (length n) points.
double ms_kernel(const BoundaryPoint& x, double nu, std::span<const double> zeta,
                 std::span<const double> z, double lambda);

// Conformal lift of R^n onto S^n; the component (1-|x|^2)/(1+|x|^2) sits at
// index n-1 and 2 x_n/(1+|x|^2) at index n (zero based).
SpherePoint stereo(std::span<const double> x);
Vec stereo_inv(const SpherePoint& xi);
double stereo_jacobian(std::span<const double> x);           // (2/(1+|x|^2))^n
double stereo_boundary_jacobian(std::span<const double> x);  // x in R^{n-1}: exponent n-1

double distance(std::span<const double> a, std::span<const double> b);

}  // namespace rhls
