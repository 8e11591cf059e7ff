#include "plasma/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "json.hpp"

namespace plasma {

namespace {

constexpr double kInsideTol = 1e-12;

double shoelace_area(const std::vector<std::array<double, 2>>& v) {
    double a = 0;
    const size_t k = v.size();
    for (size_t i = 0; i < k; ++i) {
        const auto& p = v[i];
        const auto& q = v[(i + 1) % k];
        a += p[0] * q[1] - q[0] * p[1];
    }
    return 0.5 * a;
}

double polygon_perimeter(const std::vector<std::array<double, 2>>& v) {
    double len = 0;
    const size_t k = v.size();
    for (size_t i = 0; i < k; ++i) {
        const auto& p = v[i];
        const auto& q = v[(i + 1) % k];
        len += std::hypot(q[0] - p[0], q[1] - p[1]);
    }
    return len;
}

bool segments_intersect(const std::array<double, 2>& a, const std::array<double, 2>& b,
                        const std::array<double, 2>& c, const std::array<double, 2>& d) {
    auto cross = [](double ox, double oy, double ax, double ay, double bx, double by) {
        return (ax - ox) * (by - oy) - (ay - oy) * (bx - ox);
    };
    const double d1 = cross(a[0], a[1], b[0], b[1], c[0], c[1]);
    const double d2 = cross(a[0], a[1], b[0], b[1], d[0], d[1]);
    const double d3 = cross(c[0], c[1], d[0], d[1], a[0], a[1]);
    const double d4 = cross(c[0], c[1], d[0], d[1], b[0], b[1]);
    return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0));
}

void check_simple_polygon(const std::vector<std::array<double, 2>>& v) {
    const size_t k = v.size();
    for (size_t i = 0; i < k; ++i) {
        for (size_t j = i + 1; j < k; ++j) {
            // skip edges sharing a vertex
            if (j == i || (j + 1) % k == i || (i + 1) % k == j) continue;
            if (segments_intersect(v[i], v[(i + 1) % k], v[j], v[(j + 1) % k]))
                throw DomainError("polygon is self-intersecting");
        }
    }
}

double point_segment_distance(double x, double y, const std::array<double, 2>& a,
                              const std::array<double, 2>& b) {
    const double ex = b[0] - a[0], ey = b[1] - a[1];
    const double len2 = ex * ex + ey * ey;
    double t = (len2 > 0) ? ((x - a[0]) * ex + (y - a[1]) * ey) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return std::hypot(x - (a[0] + t * ex), y - (a[1] + t * ey));
}

bool point_in_polygon(const std::vector<std::array<double, 2>>& v, double x, double y) {
    // strict insideness: the crossing test plus a positive boundary distance
    const size_t k = v.size();
    for (size_t i = 0; i < k; ++i)
        if (point_segment_distance(x, y, v[i], v[(i + 1) % k]) <= kInsideTol)
            return false;
    bool in = false;
    for (size_t i = 0, j = k - 1; i < k; j = i++) {
        const double xi = v[i][0], yi = v[i][1];
        const double xj = v[j][0], yj = v[j][1];
        if (((yi > y) != (yj > y)) && (x < (xj - xi) * (y - yi) / (yj - yi) + xi))
            in = !in;
    }
    return in;
}

// Distance from an interior point to the polygon boundary along a ray.
double polygon_ray_distance(const std::vector<std::array<double, 2>>& v, double x, double y,
                            double dx, double dy, double cap) {
    double best = cap;
    const size_t k = v.size();
    for (size_t i = 0; i < k; ++i) {
        const auto& p = v[i];
        const auto& q = v[(i + 1) % k];
        const double ex = q[0] - p[0], ey = q[1] - p[1];
        const double den = dx * ey - dy * ex;
        if (std::abs(den) < 1e-300) continue;
        const double t = ((p[0] - x) * ey - (p[1] - y) * ex) / den;
        const double s = ((p[0] - x) * dy - (p[1] - y) * dx) / den;
        if (t > 1e-14 && s >= -1e-12 && s <= 1.0 + 1e-12) best = std::min(best, t);
    }
    return best;
}

double min_pos(double a, double b) { return std::min(a, b); }

}  // namespace

DomainSpec DomainSpec::disk(int n, double radius) {
    DomainSpec s;
    s.shape = Shape::disk;
    s.disk_radius = radius;
    s.n = n;
    return s;
}

DomainSpec DomainSpec::rectangle(double aspect, int n) {
    DomainSpec s;
    s.shape = Shape::rectangle;
    s.aspect = aspect;
    s.n = n;
    return s;
}

DomainSpec DomainSpec::unit_square(int n) { return rectangle(1.0, n); }

DomainSpec DomainSpec::polygon(std::vector<std::array<double, 2>> verts, int n) {
    DomainSpec s;
    s.shape = Shape::polygon;
    s.vertices = std::move(verts);
    s.n = n;
    return s;
}

DomainSpec DomainSpec::from_json_text(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    DomainSpec s;
    const std::string shape = j.at("shape").get<std::string>();
    if (shape == "disk") {
        s.shape = Shape::disk;
    } else if (shape == "rectangle") {
        s.shape = Shape::rectangle;
        s.aspect = j.at("aspect").get<double>();
    } else if (shape == "polygon") {
        s.shape = Shape::polygon;
        for (const auto& v : j.at("vertices"))
            s.vertices.push_back({v.at(0).get<double>(), v.at(1).get<double>()});
    } else {
        throw DomainError("unknown shape '" + shape + "'");
    }
    if (j.contains("n")) s.n = j.at("n").get<int>();
    return s;
}

std::string DomainSpec::to_json_text() const {
    nlohmann::json j;
    switch (shape) {
        case Shape::disk: j["shape"] = "disk"; break;
        case Shape::rectangle:
            j["shape"] = "rectangle";
            j["aspect"] = aspect;
            break;
        case Shape::polygon: {
            j["shape"] = "polygon";
            auto arr = nlohmann::json::array();
            for (const auto& v : vertices) arr.push_back({v[0], v[1]});
            j["vertices"] = arr;
            break;
        }
    }
    j["n"] = n;
    return j.dump();
}

double Domain::ell() const { return perimeter_ * perimeter_ / (2.0 * M_PI) - 1.0; }

double ell(const Domain& d) { return d.ell(); }

bool Domain::inside(double x, double y) const {
    switch (shape_) {
        case DomainSpec::Shape::disk:
            return x * x + y * y < disk_R_ * disk_R_ - kInsideTol;
        case DomainSpec::Shape::rectangle:
            return x > kInsideTol && x < rect_w_ - kInsideTol && y > kInsideTol &&
                   y < rect_h_ - kInsideTol;
        case DomainSpec::Shape::polygon:
            return point_in_polygon(poly_, x, y);
    }
    return false;
}

double Domain::boundary_distance(double x, double y, int dir, double cap) const {
    const double dx = (dir == 0) ? 1.0 : (dir == 1) ? -1.0 : 0.0;
    const double dy = (dir == 2) ? 1.0 : (dir == 3) ? -1.0 : 0.0;
    switch (shape_) {
        case DomainSpec::Shape::disk: {
            // smallest t > 0 with |(x,y) + t(dx,dy)| = R
            const double b = x * dx + y * dy;
            const double c = x * x + y * y - disk_R_ * disk_R_;
            const double disc = b * b - c;
            if (disc < 0) return cap;
            const double t = -b + std::sqrt(disc);
            return (t > 0) ? min_pos(t, cap) : cap;
        }
        case DomainSpec::Shape::rectangle: {
            double t = cap;
            if (dx > 0) t = rect_w_ - x;
            if (dx < 0) t = x;
            if (dy > 0) t = rect_h_ - y;
            if (dy < 0) t = y;
            return min_pos(std::max(t, 0.0), cap);
        }
        case DomainSpec::Shape::polygon:
            return polygon_ray_distance(poly_, x, y, dx, dy, cap);
    }
    return cap;
}

int Grid::nearest_node(double px, double py) const {
    const double fi = (px - ox) / h;
    const double fj = (py - oy) / h;
    int best = -1;
    double bestd = std::numeric_limits<double>::max();
    const int ci = static_cast<int>(std::lround(fi));
    const int cj = static_cast<int>(std::lround(fj));
    for (int dj = -2; dj <= 2; ++dj) {
        for (int di = -2; di <= 2; ++di) {
            const int k = at(ci + di, cj + dj);
            if (k < 0) continue;
            const double d = std::hypot(x(k) - px, y(k) - py);
            if (d < bestd) {
                bestd = d;
                best = k;
            }
        }
    }
    if (best >= 0) return best;
    // fall back to a full scan (point far from the mask)
    for (int k = 0; k < size(); ++k) {
        const double d = std::hypot(x(k) - px, y(k) - py);
        if (d < bestd) {
            bestd = d;
            best = k;
        }
    }
    return best;
}

std::shared_ptr<const Domain> Domain::normalize(const DomainSpec& spec) {
    if (spec.n < 16) throw DomainError("grid resolution n must be at least 16");

    auto dom = std::shared_ptr<Domain>(new Domain());
    dom->shape_ = spec.shape;
    dom->n_ = spec.n;

    switch (spec.shape) {
        case DomainSpec::Shape::disk: {
            if (spec.disk_radius <= 0) throw DomainError("disk radius must be positive");
            dom->disk_R_ = 1.0 / std::sqrt(M_PI);  // radius after scaling to unit area
            dom->perimeter_ = 2.0 * std::sqrt(M_PI);
            dom->centroid_ = {0.0, 0.0};
            dom->tag_ = "disk";
            break;
        }
        case DomainSpec::Shape::rectangle: {
            if (!(spec.aspect > 0)) throw DomainError("rectangle aspect must be positive");
            dom->rect_w_ = std::sqrt(spec.aspect);
            dom->rect_h_ = 1.0 / std::sqrt(spec.aspect);
            dom->perimeter_ = 2.0 * (dom->rect_w_ + dom->rect_h_);
            dom->centroid_ = {0.5 * dom->rect_w_, 0.5 * dom->rect_h_};
            if (std::abs(spec.aspect - 1.0) < 1e-14) {
                dom->tag_ = "square";
            } else {
                std::ostringstream os;
                os << "rectangle_a" << spec.aspect;
                dom->tag_ = os.str();
            }
            break;
        }
        case DomainSpec::Shape::polygon: {
            std::vector<std::array<double, 2>> v = spec.vertices;
            if (v.size() >= 2 && std::abs(v.front()[0] - v.back()[0]) < 1e-15 &&
                std::abs(v.front()[1] - v.back()[1]) < 1e-15)
                v.pop_back();  // tolerate an explicitly closed ring
            if (v.size() < 3) throw DomainError("polygon needs at least 3 vertices");
            double raw = shoelace_area(v);
            if (raw < 0) {  // enforce counter-clockwise orientation
                std::reverse(v.begin(), v.end());
                raw = -raw;
            }
            if (raw < 1e-12) throw DomainError("degenerate polygon: area is zero");
            check_simple_polygon(v);
            const double s = 1.0 / std::sqrt(raw);
            for (auto& q : v) {
                q[0] *= s;
                q[1] *= s;
            }
            dom->poly_ = std::move(v);
            dom->perimeter_ = polygon_perimeter(dom->poly_);
            double cx = 0, cy = 0;
            const size_t k = dom->poly_.size();
            for (size_t i = 0; i < k; ++i) {
                const auto& p = dom->poly_[i];
                const auto& q = dom->poly_[(i + 1) % k];
                const double w = p[0] * q[1] - q[0] * p[1];
                cx += (p[0] + q[0]) * w;
                cy += (p[1] + q[1]) * w;
            }
            dom->centroid_ = {cx / 6.0, cy / 6.0};  // area is 1 after scaling
            std::ostringstream os;
            os << "polygon_k" << k;
            dom->tag_ = os.str();
            break;
        }
    }

    dom->build_grid();
    return dom;
}

void Domain::build_grid() {
    Grid& g = grid_;
    g.h = 1.0 / n_;

    // Lattice anchored so that symmetric shapes get symmetric masks: the disk
    // has a node exactly at its center, rectangles have nodes on their edges.
    double x0, y0, x1, y1;
    switch (shape_) {
        case DomainSpec::Shape::disk: {
            const int K = static_cast<int>(std::ceil(disk_R_ / g.h)) + 1;
            g.ox = -K * g.h;
            g.oy = -K * g.h;
            g.nx = 2 * K + 1;
            g.ny = 2 * K + 1;
            break;
        }
        case DomainSpec::Shape::rectangle: {
            g.ox = 0;
            g.oy = 0;
            g.nx = static_cast<int>(std::ceil(rect_w_ / g.h)) + 1;
            g.ny = static_cast<int>(std::ceil(rect_h_ / g.h)) + 1;
            break;
        }
        case DomainSpec::Shape::polygon: {
            x0 = y0 = std::numeric_limits<double>::max();
            x1 = y1 = std::numeric_limits<double>::lowest();
            for (const auto& p : poly_) {
                x0 = std::min(x0, p[0]);
                x1 = std::max(x1, p[0]);
                y0 = std::min(y0, p[1]);
                y1 = std::max(y1, p[1]);
            }
            g.ox = x0;
            g.oy = y0;
            g.nx = static_cast<int>(std::ceil((x1 - x0) / g.h)) + 2;
            g.ny = static_cast<int>(std::ceil((y1 - y0) / g.h)) + 2;
            break;
        }
    }

    g.node_of_cell.assign(static_cast<size_t>(g.nx) * g.ny, -1);
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const double px = g.ox + i * g.h;
            const double py = g.oy + j * g.h;
            if (!inside(px, py)) continue;
            g.node_of_cell[static_cast<size_t>(j) * g.nx + i] =
                static_cast<int>(g.cell_i.size());
            g.cell_i.push_back(i);
            g.cell_j.push_back(j);
        }
    }

    const int m = g.size();
    if (m < 100)
        throw DomainError("mask has fewer than 100 interior cells; resolution too coarse");
    {
        std::vector<char> seen_i(g.nx, 0), seen_j(g.ny, 0);
        for (int k = 0; k < m; ++k) {
            seen_i[g.cell_i[k]] = 1;
            seen_j[g.cell_j[k]] = 1;
        }
        const int wi = static_cast<int>(std::count(seen_i.begin(), seen_i.end(), 1));
        const int wj = static_cast<int>(std::count(seen_j.begin(), seen_j.end(), 1));
        if (std::min(wi, wj) < 4)
            throw DomainError(
                "mask has fewer than 4 interior cells across the short side; "
                "resolution too coarse");
    }

    g.arm_e.resize(m);
    g.arm_w.resize(m);
    g.arm_n.resize(m);
    g.arm_s.resize(m);
    g.nbr_e.resize(m);
    g.nbr_w.resize(m);
    g.nbr_n.resize(m);
    g.nbr_s.resize(m);

    const double arm_floor = 1e-9 * g.h;
    auto arm = [&](int k, int di, int dj, int dir, int& nbr) {
        const int i = g.cell_i[k] + di;
        const int j = g.cell_j[k] + dj;
        nbr = g.at(i, j);
        if (nbr >= 0) return g.h;
        const double d = boundary_distance(g.x(k), g.y(k), dir, g.h);
        return std::max(std::min(d, g.h), arm_floor);
    };
    for (int k = 0; k < m; ++k) {
        g.arm_e[k] = arm(k, +1, 0, 0, g.nbr_e[k]);
        g.arm_w[k] = arm(k, -1, 0, 1, g.nbr_w[k]);
        g.arm_n[k] = arm(k, 0, +1, 2, g.nbr_n[k]);
        g.arm_s[k] = arm(k, 0, -1, 3, g.nbr_s[k]);
    }

    g.quad_w.resize(m);
    g.quad_total = 0;
    for (int k = 0; k < m; ++k) {
        // a node owns half the gap toward an interior neighbor and the whole
        // arm up to a cut boundary
        auto side = [&](double d, int nbr) { return (nbr >= 0) ? 0.5 * g.h : d; };
        const double ex = side(g.arm_e[k], g.nbr_e[k]) + side(g.arm_w[k], g.nbr_w[k]);
        const double ey = side(g.arm_n[k], g.nbr_n[k]) + side(g.arm_s[k], g.nbr_s[k]);
        g.quad_w[k] = ex * ey;
        g.quad_total += g.quad_w[k];
    }
}

}  // namespace plasma
