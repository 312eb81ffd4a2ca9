#pragma once

#include <cmath>
#include <span>
#include <vector>

namespace passfeas {

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    friend Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
    friend Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
    friend Point2 operator*(double s, Point2 p) { return {s * p.x, s * p.y}; }
    friend bool operator==(Point2 a, Point2 b) = default;
};

inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 p) { return std::hypot(p.x, p.y); }
inline double distance(Point2 a, Point2 b) { return norm(a - b); }

enum class AttackDirection { PositiveX, NegativeX };

/// Pitch rectangle [0, length] x [0, width] in meters.
struct FieldSpec {
    double length = 105.0;
    double width = 68.0;
    AttackDirection attack_direction = AttackDirection::PositiveX;

    /// Longest distance on the pitch; dividing by it maps field distances into [0, 1].
    double diagonal() const { return std::hypot(length, width); }
    double normalized_distance(Point2 a, Point2 b) const { return distance(a, b) / diagonal(); }
    /// Coordinate along the attack axis, growing towards the opponent goal.
    double depth(Point2 p) const {
        return attack_direction == AttackDirection::PositiveX ? p.x : -p.x;
    }

    friend bool operator==(const FieldSpec&, const FieldSpec&) = default;
};

FieldSpec make_field(double length, double width,
                     AttackDirection direction = AttackDirection::PositiveX);

/// Counter-clockwise convex polygon. An empty vertex list is the empty region.
struct ConvexPolygon {
    std::vector<Point2> vertices;

    bool empty() const { return vertices.empty(); }
    double area() const;
    Point2 centroid() const;
};

/// Isosceles field-of-view triangle: apex at the player, axis along the body
/// orientation, equal sides of `side_length` opening +/- `half_angle`.
struct ViewTriangle {
    Point2 apex;
    double orientation = 0.0;
    double half_angle = 30.0;
    double side_length = 1.0;

    ConvexPolygon polygon() const;
};

double deg_to_rad(double deg);
double rad_to_deg(double rad);
/// Wraps into [0, 360).
double wrap_degrees(double deg);
/// Wraps into [-180, 180).
double wrap_signed_degrees(double deg);
Point2 direction(double orientation_deg);

/// Bearing from `origin` to `target`, counter-clockwise from +x, in [0, 360).
/// Throws passfeas::Error on coincident points.
double angle_of(Point2 origin, Point2 target);

/// Smallest absolute difference between two bearings, in [0, 180].
double angular_diff(double a_deg, double b_deg);

ViewTriangle build_view_triangle(Point2 apex, double orientation_deg, double half_angle_deg,
                                 double side_length);

double polygon_area(std::span<const Point2> vertices);

/// Sutherland-Hodgman clip of one convex polygon by another. Results with
/// area below kEmptyAreaEpsilon collapse to the empty polygon.
ConvexPolygon intersect_convex(const ConvexPolygon& a, const ConvexPolygon& b);

inline constexpr double kEmptyAreaEpsilon = 1e-12;

/// Integral over `region` of exp(-|x-p|/dist_scale) + exp(-|x-r|/dist_scale).
/// Fan triangulation from the centroid, 7-point degree-5 rule per triangle,
/// adaptive 4-way subdivision to 1e-4 relative (at most 6 levels).
double integrate_pair_weights(const ConvexPolygon& region, Point2 p, Point2 r, double dist_scale);

}  // namespace passfeas
