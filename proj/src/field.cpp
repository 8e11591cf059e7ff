#include "plasma/field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace plasma {

double ScalarField::max() const { return *std::max_element(v.begin(), v.end()); }
double ScalarField::min() const { return *std::min_element(v.begin(), v.end()); }

double ScalarField::max_abs() const {
    double m = 0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

int ScalarField::argmax() const {
    return static_cast<int>(std::max_element(v.begin(), v.end()) - v.begin());
}

double integrate_plain(const ScalarField& f) {
    const double h = f.domain->grid().h;
    double s = 0;
    for (double x : f.v) s += x;
    return s * h * h;
}

double integrate_domain(const ScalarField& f) {
    const Grid& g = f.domain->grid();
    double s = 0;
    for (int k = 0; k < f.size(); ++k) s += f.v[k] * g.quad_w[k];
    return s / g.quad_total;
}

double norm_l2(const ScalarField& f) {
    const double h = f.domain->grid().h;
    double s = 0;
    for (double x : f.v) s += x * x;
    return std::sqrt(s * h * h);
}

double dist_inf(const ScalarField& a, const ScalarField& b) {
    if (a.size() != b.size()) throw std::invalid_argument("field size mismatch");
    double m = 0;
    for (int k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a.v[k] - b.v[k]));
    return m;
}

}  // namespace plasma
