#ifndef PLASMA_GEOMETRY_HPP
#define PLASMA_GEOMETRY_HPP

#include <array>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace plasma {

class DomainError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Shape request before unit-area normalization.
struct DomainSpec {
    enum class Shape { disk, rectangle, polygon };

    Shape shape = Shape::disk;
    double aspect = 1.0;       // rectangle width:height ratio
    double disk_radius = 1.0;  // pre-normalization radius, irrelevant after scaling
    std::vector<std::array<double, 2>> vertices;  // polygon, closed implicitly
    int n = 128;               // grid resolution, cells per unit length

    static DomainSpec disk(int n = 128, double radius = 1.0);
    static DomainSpec rectangle(double aspect, int n = 128);
    static DomainSpec unit_square(int n = 128);
    static DomainSpec polygon(std::vector<std::array<double, 2>> verts, int n = 128);

    // JSON object {"shape": "disk"|"rectangle"|"polygon", "aspect": number?,
    // "vertices": [[x,y],...]?, "n": integer}
    static DomainSpec from_json_text(const std::string& text);
    std::string to_json_text() const;
};

/// Interior lattice with Shortley-Weller boundary arms. Node k sits at
/// (ox + i*h, oy + j*h); arms give the distance to the Dirichlet boundary
/// in each axis direction, equal to h when the neighbor node is interior.
struct Grid {
    double h = 0;
    double ox = 0, oy = 0;
    int nx = 0, ny = 0;

    std::vector<int> node_of_cell;  // nx*ny, -1 when not interior
    std::vector<int> cell_i, cell_j;
    std::vector<double> arm_e, arm_w, arm_n, arm_s;
    std::vector<int> nbr_e, nbr_w, nbr_n, nbr_s;  // interior node index or -1

    // Arm-extent product quadrature weights for mass-type integrals: the
    // inside extent of each node's cell in x times the extent in y. Smooth in
    // the boundary position, unlike the raw cell count. quad_total ~ |Omega|.
    std::vector<double> quad_w;
    double quad_total = 0;

    int size() const { return static_cast<int>(cell_i.size()); }
    double x(int k) const { return ox + cell_i[k] * h; }
    double y(int k) const { return oy + cell_j[k] * h; }
    double mask_area() const { return size() * h * h; }
    int at(int i, int j) const {
        if (i < 0 || j < 0 || i >= nx || j >= ny) return -1;
        return node_of_cell[static_cast<size_t>(j) * nx + i];
    }
    /// Interior node closest to (px, py).
    int nearest_node(double px, double py) const;
};

/// Unit-area planar domain with analytic perimeter and a grid mask.
/// Immutable after construction; safe to share across threads.
class Domain {
public:
    double area() const { return 1.0; }
    double perimeter() const { return perimeter_; }
    /// Isoperimetric deficit |dOmega|^2 / (2 pi) - 1, always >= 1.
    double ell() const;
    const Grid& grid() const { return grid_; }
    int resolution() const { return n_; }
    std::array<double, 2> centroid() const { return centroid_; }
    const std::string& tag() const { return tag_; }
    DomainSpec::Shape shape() const { return shape_; }
    bool is_disk() const { return shape_ == DomainSpec::Shape::disk; }

    bool inside(double x, double y) const;
    /// Distance along (+-x, +-y) from an interior point to the boundary,
    /// capped at `cap`. dir: 0=east 1=west 2=north 3=south.
    double boundary_distance(double x, double y, int dir, double cap) const;

    /// Normalized geometry of the spec rescaled after s = 1/sqrt(raw area).
    static std::shared_ptr<const Domain> normalize(const DomainSpec& spec);

private:
    Domain() = default;
    void build_grid();

    DomainSpec::Shape shape_;
    double disk_R_ = 0;                 // disk
    double rect_w_ = 0, rect_h_ = 0;    // rectangle, anchored at (0,0)
    std::vector<std::array<double, 2>> poly_;  // polygon, scaled
    double perimeter_ = 0;
    std::array<double, 2> centroid_{0, 0};
    std::string tag_;
    int n_ = 0;
    Grid grid_;
};

using DomainPtr = std::shared_ptr<const Domain>;

/// ell(domain) on the analytic perimeter; never touches the raster.
double ell(const Domain& d);

}  // namespace plasma

#endif
