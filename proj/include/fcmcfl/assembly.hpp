#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "fcmcfl/geometry.hpp"
#include "fcmcfl/quadrature.hpp"

namespace fcmcfl {

enum class CellKind { physical, fictitious, cut };
enum class MassIntegration { consistent, lumped };

[[nodiscard]] const char* to_string(CellKind kind) noexcept;

/// Mass and stiffness of one element, ordered like TensorBasis.
struct ElementMatrices {
    int degree = 1;
    int dim = 1;
    Box bounds;
    double alpha = 1.0;
    CellKind kind = CellKind::physical;
    MassIntegration mass_integration = MassIntegration::consistent;
    Eigen::MatrixXd mass;
    Eigen::MatrixXd stiffness;

    [[nodiscard]] int size() const noexcept { return static_cast<int>(mass.rows()); }
    /// Indicator value of an uncut element (1 or alpha).
    [[nodiscard]] double uniform_scale() const noexcept { return kind == CellKind::fictitious ? alpha : 1.0; }
};

/// Unit-cube element [0,1]^d with physical part [0,chi]^d. Both integrals
/// are exact: (p+1)-point Gauss-Legendre per direction on the full cube and
/// on [0,chi]^d.
[[nodiscard]] ElementMatrices element_matrices_cornercut(int p, int d, double chi, double alpha);

/// Uncut element with indicator value `scale` everywhere; stiffness by
/// (p+1)-point Gauss-Legendre, mass consistent (Gauss-Legendre) or lumped
/// (GLL nodes).
[[nodiscard]] ElementMatrices element_matrices_uncut(int p, const Box& bounds, CellKind kind, double alpha,
                                                     MassIntegration mass);

/// Consistent mass and stiffness integrated with a prebuilt space-tree rule.
[[nodiscard]] ElementMatrices element_matrices_from_rule(int p, const Box& bounds, const CutCellRule& rule,
                                                         double alpha);

/// Builds the space-tree rule with p+1 points per direction, then integrates.
[[nodiscard]] ElementMatrices element_matrices_quadtree(int p, const Box& bounds, const ImplicitDomain& domain,
                                                        double alpha, int depth);

/// GLL-quadrature mass diagonal. Rejects cut elements.
[[nodiscard]] Eigen::VectorXd lumped_mass(const ElementMatrices& element);

/// Cartesian grid of nx x ny square elements of size h.
struct GridSpec {
    int nx = 1;
    int ny = 1;
    double h = 1.0;
    Point origin{0.0, 0.0, 0.0};

    [[nodiscard]] int num_elements() const noexcept { return nx * ny; }
    [[nodiscard]] Box element_box(int e) const;
};

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Assembled mass and stiffness of a 2D grid. GLL nodes are shared across
/// element faces; global node (I, J) has index I + (nx p + 1) J.
struct GlobalSystem {
    int degree = 1;
    GridSpec grid;
    double alpha = 1.0;
    int depth = 0;
    SparseMatrix mass;
    SparseMatrix stiffness;
    std::vector<ElementMatrices> elements;  // element e = ex + nx * ey

    [[nodiscard]] int num_dofs() const noexcept { return static_cast<int>(mass.rows()); }
    [[nodiscard]] std::vector<int> element_dofs(int e) const;
    [[nodiscard]] int count(CellKind kind) const noexcept;
};

/// Uncut physical and fictitious elements get lumped mass, cut elements
/// consistent space-tree matrices. Requires alpha > 0.
[[nodiscard]] GlobalSystem assemble_global(const GridSpec& grid, int p, const ImplicitDomain& domain,
                                           double alpha, int depth);

struct DensePencil {
    Eigen::MatrixXd mass;
    Eigen::MatrixXd stiffness;
    std::vector<int> free_dofs;
};

struct SparsePencil {
    SparseMatrix mass;
    SparseMatrix stiffness;
    std::vector<int> free_dofs;
};

/// Homogeneous Dirichlet conditions by elimination of rows and columns.
[[nodiscard]] DensePencil apply_dirichlet(const Eigen::MatrixXd& mass, const Eigen::MatrixXd& stiffness,
                                          std::span<const int> constrained);
[[nodiscard]] DensePencil apply_dirichlet(const ElementMatrices& element, std::span<const int> constrained);
[[nodiscard]] SparsePencil apply_dirichlet(const GlobalSystem& system, std::span<const int> constrained);

/// DOFs of a single element lying on any face x_k = 0 of the reference
/// element (the one-unknown setup for p = 1).
[[nodiscard]] std::vector<int> origin_face_dofs(int p, int d);

}  // namespace fcmcfl
