#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

namespace fcmcfl {

/// Spatial point. Coordinates beyond the active dimension are ignored and
/// conventionally zero.
using Point = std::array<double, 3>;

/// Axis-aligned box in `dim` dimensions.
struct Box {
    int dim = 0;
    Point lower{0.0, 0.0, 0.0};
    Point upper{0.0, 0.0, 0.0};

    [[nodiscard]] static Box unit_cube(int dim);
    [[nodiscard]] static Box reference_cube(int dim);

    [[nodiscard]] double extent(int k) const { return upper[k] - lower[k]; }
    [[nodiscard]] double volume() const;
    [[nodiscard]] Point center() const;
    /// Corner `mask`: bit k selects the upper bound in direction k.
    [[nodiscard]] Point corner(unsigned mask) const;
    /// Affine image of reference coordinates in [-1,1]^dim.
    [[nodiscard]] Point map_from_reference(const Point& xi) const;
};

/// Physical domain embedded in an extended domain.
class ImplicitDomain {
public:
    virtual ~ImplicitDomain() = default;

    [[nodiscard]] virtual int dimension() const noexcept = 0;
    /// Points on the boundary count as inside.
    [[nodiscard]] virtual bool inside(const Point& x) const = 0;
    /// Whether the boundary passes through the interior of `box`, when the
    /// domain can tell exactly. Empty means unknown; callers then sample.
    [[nodiscard]] virtual std::optional<bool> boundary_crosses(const Box& box) const;
};

/// Indicator scaling: 1 inside the physical domain, alpha in the fictitious part.
[[nodiscard]] double fcm_scale(const ImplicitDomain& domain, const Point& x, double alpha);

/// Physical domain [0, chi]^d inside the unit cube.
class CornerCutDomain final : public ImplicitDomain {
public:
    CornerCutDomain(double chi, int dim);

    [[nodiscard]] int dimension() const noexcept override { return dim_; }
    [[nodiscard]] bool inside(const Point& x) const override;
    [[nodiscard]] std::optional<bool> boundary_crosses(const Box& box) const override;
    [[nodiscard]] double chi() const noexcept { return chi_; }

private:
    double chi_;
    int dim_;
};

[[nodiscard]] double volume_fraction(const CornerCutDomain& domain);

/// Disk in 2D (inside = within radius). Used for quadrature checks.
class DiskDomain final : public ImplicitDomain {
public:
    DiskDomain(Point center, double radius);

    [[nodiscard]] int dimension() const noexcept override { return 2; }
    [[nodiscard]] bool inside(const Point& x) const override;
    [[nodiscard]] std::optional<bool> boundary_crosses(const Box& box) const override;

private:
    Point center_;
    double radius_;
};

struct Circle {
    Point center;
    double radius;
};

/// 9 x 3 plate with three columns of circular holes. Holes are fictitious.
///
/// Layout assumption: at zero vertical shift each column carries a hole centred
/// at mid-height (y = 1.5), further rows repeat every 9/13 in both directions,
/// and the columns are vertically aligned.
class PerforatedPlate final : public ImplicitDomain {
public:
    static constexpr double width = 9.0;
    static constexpr double height = 3.0;
    static constexpr double hole_radius = 3.0 / 13.0;
    static constexpr double spacing = 9.0 / 13.0;
    static constexpr double max_shift_x = 0.2;
    static constexpr double max_shift_y = 9.0 / 13.0;

    PerforatedPlate(double shift_x, double shift_y);

    [[nodiscard]] int dimension() const noexcept override { return 2; }
    [[nodiscard]] bool inside(const Point& x) const override;
    [[nodiscard]] std::optional<bool> boundary_crosses(const Box& box) const override;

    [[nodiscard]] double shift_x() const noexcept { return shift_x_; }
    [[nodiscard]] double shift_y() const noexcept { return shift_y_; }
    /// Every hole whose disk intersects the plate rectangle.
    [[nodiscard]] const std::vector<Circle>& holes() const noexcept { return holes_; }
    [[nodiscard]] std::array<double, 3> column_centers() const noexcept { return columns_; }

private:
    double shift_x_;
    double shift_y_;
    std::array<double, 3> columns_{};
    std::vector<Circle> holes_;
};

/// Validating factory: shifts must lie in [0, 0.2] x [0, 9/13].
[[nodiscard]] PerforatedPlate perforated_plate(double shift_x, double shift_y);

}  // namespace fcmcfl
