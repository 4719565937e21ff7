#include "fcmcfl/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace fcmcfl {

Box Box::unit_cube(int dim) {
    Box box;
    box.dim = dim;
    for (int k = 0; k < dim; ++k) box.upper[k] = 1.0;
    return box;
}

Box Box::reference_cube(int dim) {
    Box box;
    box.dim = dim;
    for (int k = 0; k < dim; ++k) {
        box.lower[k] = -1.0;
        box.upper[k] = 1.0;
    }
    return box;
}

double Box::volume() const {
    double v = 1.0;
    for (int k = 0; k < dim; ++k) v *= extent(k);
    return v;
}

Point Box::center() const {
    Point c{0.0, 0.0, 0.0};
    for (int k = 0; k < dim; ++k) c[k] = 0.5 * (lower[k] + upper[k]);
    return c;
}

Point Box::corner(unsigned mask) const {
    Point c{0.0, 0.0, 0.0};
    for (int k = 0; k < dim; ++k) c[k] = (mask >> k) & 1u ? upper[k] : lower[k];
    return c;
}

Point Box::map_from_reference(const Point& xi) const {
    Point x{0.0, 0.0, 0.0};
    for (int k = 0; k < dim; ++k) x[k] = lower[k] + 0.5 * (xi[k] + 1.0) * extent(k);
    return x;
}

double fcm_scale(const ImplicitDomain& domain, const Point& x, double alpha) {
    return domain.inside(x) ? 1.0 : alpha;
}

std::optional<bool> ImplicitDomain::boundary_crosses(const Box&) const { return std::nullopt; }

namespace {

// The circle of radius r about c passes through the open box interior.
bool circle_crosses_box(const Point& c, double r, const Box& box) {
    double near2 = 0.0, far2 = 0.0;
    for (int k = 0; k < 2; ++k) {
        const double lo = box.lower[k] - c[k], hi = box.upper[k] - c[k];
        const double n = (lo > 0.0) ? lo : (hi < 0.0 ? hi : 0.0);
        const double f = std::max(std::abs(lo), std::abs(hi));
        near2 += n * n;
        far2 += f * f;
    }
    return near2 < r * r && far2 > r * r;
}

}  // namespace

CornerCutDomain::CornerCutDomain(double chi, int dim) : chi_(chi), dim_(dim) {
    if (dim < 1) throw std::invalid_argument("CornerCutDomain: dimension must be >= 1");
    if (!(chi >= 0.0 && chi <= 1.0))
        throw std::invalid_argument("CornerCutDomain: chi must lie in [0, 1]");
}

bool CornerCutDomain::inside(const Point& x) const {
    for (int k = 0; k < std::min(dim_, 3); ++k)
        if (x[k] > chi_) return false;
    return true;
}

std::optional<bool> CornerCutDomain::boundary_crosses(const Box& box) const {
    bool contained = true;
    for (int k = 0; k < dim_; ++k) {
        if (box.lower[k] >= chi_) return false;
        if (box.upper[k] > chi_) contained = false;
    }
    return !contained;
}

double volume_fraction(const CornerCutDomain& domain) {
    return std::pow(domain.chi(), domain.dimension());
}

DiskDomain::DiskDomain(Point center, double radius) : center_(center), radius_(radius) {
    if (!(radius > 0.0)) throw std::invalid_argument("DiskDomain: radius must be positive");
}

std::optional<bool> DiskDomain::boundary_crosses(const Box& box) const {
    return circle_crosses_box(center_, radius_, box);
}

bool DiskDomain::inside(const Point& x) const {
    const double dx = x[0] - center_[0];
    const double dy = x[1] - center_[1];
    return dx * dx + dy * dy <= radius_ * radius_;
}

namespace {

constexpr double plate_mid_height = 0.5 * PerforatedPlate::height;

bool disk_meets_strip(double cy, double r) {
    return cy + r > 0.0 && cy - r < PerforatedPlate::height;
}

}  // namespace

PerforatedPlate::PerforatedPlate(double shift_x, double shift_y)
    : shift_x_(shift_x), shift_y_(shift_y) {
    const double mid = 0.5 * width;
    columns_ = {mid - spacing + shift_x, mid + shift_x, mid + spacing + shift_x};

    // One extra period on either side so holes leaving at the top and
    // entering at the bottom are both generated.
    const double base = plate_mid_height + shift_y;
    const int j_lo = static_cast<int>(std::floor((-hole_radius - base) / spacing)) - 1;
    const int j_hi = static_cast<int>(std::ceil((height + hole_radius - base) / spacing)) + 1;
    for (double cx : columns_) {
        for (int j = j_lo; j <= j_hi; ++j) {
            const double cy = base + j * spacing;
            if (disk_meets_strip(cy, hole_radius)) holes_.push_back({{cx, cy, 0.0}, hole_radius});
        }
    }
}

bool PerforatedPlate::inside(const Point& x) const {
    if (x[0] < 0.0 || x[0] > width || x[1] < 0.0 || x[1] > height) return false;
    // Rows are 9/13 apart and holes 6/13 wide, so only the nearest row of a
    // column can contain the point.
    const double base = plate_mid_height + shift_y_;
    const double j = std::round((x[1] - base) / spacing);
    const double dy = x[1] - (base + j * spacing);
    constexpr double r2 = hole_radius * hole_radius;
    for (double cx : columns_) {
        const double dx = x[0] - cx;
        if (dx * dx + dy * dy < r2) return false;
    }
    return true;
}

std::optional<bool> PerforatedPlate::boundary_crosses(const Box& box) const {
    for (int k = 0; k < 2; ++k) {
        const double edge = k == 0 ? width : height;
        if ((box.lower[k] < 0.0 && box.upper[k] > 0.0) || (box.lower[k] < edge && box.upper[k] > edge)) return true;
    }
    for (const Circle& h : holes_)
        if (circle_crosses_box(h.center, h.radius, box)) return true;
    return false;
}

PerforatedPlate perforated_plate(double shift_x, double shift_y) {
    if (!(shift_x >= 0.0 && shift_x <= PerforatedPlate::max_shift_x))
        throw std::invalid_argument("perforated_plate: shift_x " + std::to_string(shift_x) +
                                    " outside [0, 0.2]");
    if (!(shift_y >= 0.0 && shift_y <= PerforatedPlate::max_shift_y))
        throw std::invalid_argument("perforated_plate: shift_y " + std::to_string(shift_y) +
                                    " outside [0, 9/13]");
    return PerforatedPlate(shift_x, shift_y);
}

}  // namespace fcmcfl
