#pragma once

// Named curve generators and seeded fuzz families.
//
//   circle R               regular equilateral N-gon of perimeter 2 pi R
//   ellipse A B            x = A cos t, y = B sin t
//   peanut AMP K           r(phi) = 1 + AMP cos(K phi)
//   polygon-smooth SEED    hull of 10 random points in [-1,1]^2 rounded by a
//                          disc of radius 0.2
//   oval SEED              support function h = 1 + sum_{k=2..5} a_k cos(k phi + c_k)
//                          with sum (k^2 - 1)|a_k| <= 0.7, so h + h'' > 0
//   egg                    h = 1 + 0.12 cos 2phi + 0.06 cos 3phi
//   perturbed-circle SEED  r = 1 + e sum_{k=2..6} c_k cos(k phi + d_k), e
//                          log-uniform in [1e-4, 0.15], sum |c_k| = 1
//   rounded-square RHO     unit square with corners rounded to radius RHO
//
// Families for sweeps and fuzzing: circles, perturbed-circles, convex
// (ovals and rounded polygons), peanuts (AMP uniform in [0.3, 0.7]), mixed.
// Sample i of a family depends only on (seed, i).

#include <cstdint>
#include <string>
#include <vector>

#include "pelastic/curve.hpp"

namespace pelastic::gen {

struct NamedCurve {
    std::string id;
    AngleCurve curve;
};

AngleCurve circle(double radius, std::size_t n);
PointCurve ellipse_points(double a, double b, std::size_t m);
PointCurve peanut_points(double amp, int k, std::size_t m);
PointCurve rounded_polygon_points(std::uint64_t seed, std::size_t m);
PointCurve support_points(const std::vector<double> &amp, const std::vector<double> &phase, std::size_t m);
PointCurve oval_points(std::uint64_t seed, std::size_t m);
PointCurve egg_points(std::size_t m);
PointCurve perturbed_circle_points(std::uint64_t seed, std::size_t m);
PointCurve rounded_square_points(double rho, std::size_t m);

// Dense polyline size used before resampling to n angle samples.
std::size_t dense_size(std::size_t n);

// Parses "name arg..." as listed above. Throws std::invalid_argument for an
// unknown name or bad arguments.
NamedCurve make_generator(const std::string &spec, std::size_t n);

const std::vector<std::string> &family_names();

// Throws std::invalid_argument for an unknown family.
std::vector<NamedCurve> make_family(const std::string &family, std::size_t count, std::uint64_t seed,
                                    std::size_t n);

}  // namespace pelastic::gen
