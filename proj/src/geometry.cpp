#include "passfeas/geometry.hpp"

#include <algorithm>
#include <array>
#include <numbers>

#include "passfeas/error.hpp"

namespace passfeas {

namespace {

constexpr double kQuadratureRelTol = 1e-4;
constexpr int kQuadratureMaxLevel = 6;

struct Triangle {
    Point2 a, b, c;
};

double triangle_area(const Triangle& t) { return 0.5 * std::abs(cross(t.b - t.a, t.c - t.a)); }

// Symmetric 7-point, degree-5 rule (barycentric orbits). Weights sum to 1.
struct QuadNode {
    double l1, l2, l3, w;
};

const std::array<QuadNode, 7>& quad_nodes() {
    static const std::array<QuadNode, 7> nodes = [] {
        const double s15 = std::sqrt(15.0);
        const double a1 = (6.0 - s15) / 21.0;
        const double b1 = (9.0 + 2.0 * s15) / 21.0;
        const double a2 = (6.0 + s15) / 21.0;
        const double b2 = (9.0 - 2.0 * s15) / 21.0;
        const double w1 = (155.0 - s15) / 1200.0;
        const double w2 = (155.0 + s15) / 1200.0;
        return std::array<QuadNode, 7>{{
            {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 9.0 / 40.0},
            {a1, a1, b1, w1},
            {a1, b1, a1, w1},
            {b1, a1, a1, w1},
            {a2, a2, b2, w2},
            {a2, b2, a2, w2},
            {b2, a2, a2, w2},
        }};
    }();
    return nodes;
}

template <typename F>
double rule7(const Triangle& t, const F& f) {
    double sum = 0.0;
    for (const auto& n : quad_nodes()) {
        const Point2 x{n.l1 * t.a.x + n.l2 * t.b.x + n.l3 * t.c.x,
                       n.l1 * t.a.y + n.l2 * t.b.y + n.l3 * t.c.y};
        sum += n.w * f(x);
    }
    return triangle_area(t) * sum;
}

std::array<Triangle, 4> split4(const Triangle& t) {
    const Point2 ab = 0.5 * (t.a + t.b);
    const Point2 bc = 0.5 * (t.b + t.c);
    const Point2 ca = 0.5 * (t.c + t.a);
    return {{{t.a, ab, ca}, {ab, t.b, bc}, {ca, bc, t.c}, {ab, bc, ca}}};
}

template <typename F>
double adaptive(const Triangle& t, double coarse, int level, const F& f) {
    const auto children = split4(t);
    std::array<double, 4> fine{};
    double refined = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
        fine[i] = rule7(children[i], f);
        refined += fine[i];
    }
    if (level >= kQuadratureMaxLevel ||
        std::abs(refined - coarse) <= kQuadratureRelTol * std::abs(refined)) {
        return refined;
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < 4; ++i) sum += adaptive(children[i], fine[i], level + 1, f);
    return sum;
}

std::vector<Point2> clip_by_edge(const std::vector<Point2>& subject, Point2 e1, Point2 e2) {
    std::vector<Point2> out;
    const std::size_t n = subject.size();
    if (n == 0) return out;
    out.reserve(n + 1);
    const Point2 edge = e2 - e1;
    auto side = [&](Point2 p) { return cross(edge, p - e1); };
    for (std::size_t i = 0; i < n; ++i) {
        const Point2 cur = subject[i];
        const Point2 prev = subject[(i + n - 1) % n];
        const double s_cur = side(cur);
        const double s_prev = side(prev);
        const bool cur_in = s_cur >= 0.0;
        const bool prev_in = s_prev >= 0.0;
        if (cur_in != prev_in) {
            const double t = s_prev / (s_prev - s_cur);
            out.push_back(prev + t * (cur - prev));
        }
        if (cur_in) out.push_back(cur);
    }
    return out;
}

std::vector<Point2> ccw(std::vector<Point2> v) {
    if (polygon_area(v) < 0.0) std::reverse(v.begin(), v.end());
    return v;
}

}  // namespace

FieldSpec make_field(double length, double width, AttackDirection direction) {
    if (!(length > 0.0) || !(width > 0.0) || !std::isfinite(length) || !std::isfinite(width)) {
        throw Error("field dimensions must be positive and finite");
    }
    return FieldSpec{length, width, direction};
}

double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }
double rad_to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }

double wrap_degrees(double deg) {
    double w = std::fmod(deg, 360.0);
    if (w < 0.0) w += 360.0;
    if (w >= 360.0) w -= 360.0;
    return w;
}

double wrap_signed_degrees(double deg) {
    double w = wrap_degrees(deg + 180.0) - 180.0;
    return w;
}

Point2 direction(double orientation_deg) {
    const double r = deg_to_rad(orientation_deg);
    return {std::cos(r), std::sin(r)};
}

double angle_of(Point2 origin, Point2 target) {
    const Point2 d = target - origin;
    if (d.x == 0.0 && d.y == 0.0) throw Error("degenerate direction: coincident points");
    return wrap_degrees(rad_to_deg(std::atan2(d.y, d.x)));
}

double angular_diff(double a_deg, double b_deg) {
    const double d = wrap_degrees(std::abs(a_deg - b_deg));
    return std::min(d, 360.0 - d);
}

ViewTriangle build_view_triangle(Point2 apex, double orientation_deg, double half_angle_deg,
                                 double side_length) {
    if (!(half_angle_deg > 0.0 && half_angle_deg < 90.0)) {
        throw Error("view triangle half angle must lie in (0, 90) degrees");
    }
    if (!(side_length > 0.0) || !std::isfinite(side_length)) {
        throw Error("view triangle side length must be positive");
    }
    return ViewTriangle{apex, orientation_deg, half_angle_deg, side_length};
}

ConvexPolygon ViewTriangle::polygon() const {
    return ConvexPolygon{{apex, apex + side_length * direction(orientation - half_angle),
                          apex + side_length * direction(orientation + half_angle)}};
}

double polygon_area(std::span<const Point2> v) {
    const std::size_t n = v.size();
    if (n < 3) return 0.0;
    double twice = 0.0;
    for (std::size_t i = 0; i < n; ++i) twice += cross(v[i], v[(i + 1) % n]);
    return 0.5 * twice;
}

double ConvexPolygon::area() const { return std::abs(polygon_area(vertices)); }

Point2 ConvexPolygon::centroid() const {
    if (vertices.empty()) return {};
    const double a = polygon_area(vertices);
    if (std::abs(a) < kEmptyAreaEpsilon) {
        Point2 s{};
        for (const auto& v : vertices) s = s + v;
        return (1.0 / static_cast<double>(vertices.size())) * s;
    }
    double cx = 0.0;
    double cy = 0.0;
    const std::size_t n = vertices.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point2 p = vertices[i];
        const Point2 q = vertices[(i + 1) % n];
        const double c = cross(p, q);
        cx += (p.x + q.x) * c;
        cy += (p.y + q.y) * c;
    }
    return {cx / (6.0 * a), cy / (6.0 * a)};
}

ConvexPolygon intersect_convex(const ConvexPolygon& a, const ConvexPolygon& b) {
    if (a.vertices.size() < 3 || b.vertices.size() < 3) return {};
    std::vector<Point2> result = ccw(a.vertices);
    const std::vector<Point2> clip = ccw(b.vertices);
    for (std::size_t i = 0; i < clip.size() && !result.empty(); ++i) {
        result = clip_by_edge(result, clip[i], clip[(i + 1) % clip.size()]);
    }
    // Drop repeated vertices produced by touching edges.
    std::vector<Point2> cleaned;
    cleaned.reserve(result.size());
    for (const auto& p : result) {
        if (cleaned.empty() || !(p == cleaned.back())) cleaned.push_back(p);
    }
    while (cleaned.size() > 1 && cleaned.front() == cleaned.back()) cleaned.pop_back();
    if (cleaned.size() < 3 || std::abs(polygon_area(cleaned)) < kEmptyAreaEpsilon) return {};
    return ConvexPolygon{std::move(cleaned)};
}

double integrate_pair_weights(const ConvexPolygon& region, Point2 p, Point2 r, double dist_scale) {
    if (!(dist_scale > 0.0)) throw Error("integration distance scale must be positive");
    if (region.vertices.size() < 3 || region.area() < kEmptyAreaEpsilon) return 0.0;
    const double inv = 1.0 / dist_scale;
    auto f = [&](Point2 x) { return std::exp(-distance(p, x) * inv) + std::exp(-distance(r, x) * inv); };

    const Point2 center = region.centroid();
    const auto& v = region.vertices;
    double total = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const Triangle t{center, v[i], v[(i + 1) % v.size()]};
        if (triangle_area(t) == 0.0) continue;
        total += adaptive(t, rule7(t, f), 1, f);
    }
    return total;
}

}  // namespace passfeas
