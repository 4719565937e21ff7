#include "fcmcfl/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "fcmcfl/basis.hpp"

namespace fcmcfl {

const char* to_string(CellKind kind) noexcept {
    switch (kind) {
        case CellKind::physical: return "physical";
        case CellKind::fictitious: return "fictitious";
        case CellKind::cut: return "cut";
    }
    return "unknown";
}

namespace {

void check_degree_and_dim(int p, int d) {
    if (p < 1) throw std::invalid_argument("element matrices: degree must be >= 1, got " + std::to_string(p));
    if (d < 1 || d > 3) throw std::invalid_argument("element matrices: dimension must be 1, 2 or 3");
}

// Kronecker product with the first factor's index running fastest.
Eigen::MatrixXd kron_lexicographic(const std::vector<const Eigen::MatrixXd*>& factors) {
    Eigen::MatrixXd result = *factors.front();
    for (std::size_t k = 1; k < factors.size(); ++k) {
        const Eigen::MatrixXd& a = *factors[k];
        Eigen::MatrixXd next(a.rows() * result.rows(), a.cols() * result.cols());
        for (Eigen::Index i = 0; i < a.rows(); ++i)
            for (Eigen::Index j = 0; j < a.cols(); ++j)
                next.block(i * result.rows(), j * result.cols(), result.rows(), result.cols()) = a(i, j) * result;
        result = std::move(next);
    }
    return result;
}

// Integrals of N_i N_j and N_i' N_j' over [a, b] in reference coordinates.
struct IntervalFactors {
    Eigen::MatrixXd mass;
    Eigen::MatrixXd stiffness;
};

// Integrates over [a, a + length]; taking the length directly avoids cancellation for tiny cuts.
// With a = -1 the basis is evaluated from the left end.
IntervalFactors interval_factors_from(const NodalBasis1D& basis, const QuadratureRule& rule, double a,
                                      double length) {
    const int n = basis.size();
    IntervalFactors f{Eigen::MatrixXd::Zero(n, n), Eigen::MatrixXd::Zero(n, n)};
    if (!(length > 0.0)) return f;
    Eigen::VectorXd v(n), dv(n);
    const double half = 0.5 * length;
    for (std::size_t q = 0; q < rule.size(); ++q) {
        const double offset = half * (rule.points[q][0] + 1.0);
        const double w = rule.weights[q] * half;
        if (a == -1.0)
            basis.evaluate_from_left(offset, std::span(v.data(), n), std::span(dv.data(), n));
        else
            basis.evaluate(a + offset, std::span(v.data(), n), std::span(dv.data(), n));
        f.mass.noalias() += w * v * v.transpose();
        f.stiffness.noalias() += w * dv * dv.transpose();
    }
    // (w v_i) v_j and (w v_j) v_i round differently.
    f.mass = 0.5 * (f.mass + f.mass.transpose()).eval();
    f.stiffness = 0.5 * (f.stiffness + f.stiffness.transpose()).eval();
    return f;
}

IntervalFactors interval_factors(const NodalBasis1D& basis, const QuadratureRule& rule, double a, double b) {
    return interval_factors_from(basis, rule, a, b - a);
}

// Tensor mass and stiffness from per-direction reference factors over a
// sub-box, mapped to an element with edge lengths h_k.
struct TensorMatrices {
    Eigen::MatrixXd mass;
    Eigen::MatrixXd stiffness;
};

TensorMatrices tensor_matrices(const std::vector<IntervalFactors>& per_dir, const Box& element) {
    const int d = element.dim;
    std::vector<Eigen::MatrixXd> mass_k(d), stiff_k(d);
    for (int k = 0; k < d; ++k) {
        const double h = element.extent(k);
        mass_k[k] = 0.5 * h * per_dir[k].mass;
        stiff_k[k] = (2.0 / h) * per_dir[k].stiffness;
    }
    std::vector<const Eigen::MatrixXd*> factors(d);
    for (int k = 0; k < d; ++k) factors[k] = &mass_k[k];
    TensorMatrices out;
    out.mass = kron_lexicographic(factors);
    out.stiffness = Eigen::MatrixXd::Zero(out.mass.rows(), out.mass.cols());
    for (int g = 0; g < d; ++g) {
        for (int k = 0; k < d; ++k) factors[k] = (k == g) ? &stiff_k[k] : &mass_k[k];
        out.stiffness += kron_lexicographic(factors);
    }
    return out;
}

TensorMatrices full_cell_matrices(const NodalBasis1D& basis, const QuadratureRule& rule, const Box& element) {
    const IntervalFactors full = interval_factors(basis, rule, -1.0, 1.0);
    return tensor_matrices(std::vector<IntervalFactors>(element.dim, full), element);
}

// Pointwise accumulation over one leaf whose points carry mixed scales.
void accumulate_leaf_pointwise(const NodalBasis1D& basis, const CutCellLeaf& leaf, int n1d, const Box& element,
                               Eigen::MatrixXd& mass, Eigen::MatrixXd& stiffness) {
    const int d = element.dim;
    const int n = basis.size();
    const int nb = static_cast<int>(mass.rows());
    const int nq = static_cast<int>(leaf.points.size());

    // 1D values at the leaf's distinct coordinates in each direction.
    std::vector<Eigen::MatrixXd> v1(d, Eigen::MatrixXd(n, n1d)), d1(d, Eigen::MatrixXd(n, n1d));
    int stride = 1;
    for (int k = 0; k < d; ++k) {
        for (int q = 0; q < n1d; ++q) {
            const double xi = leaf.points[static_cast<std::size_t>(q) * stride].xi[k];
            basis.evaluate(xi, std::span(v1[k].col(q).data(), n), std::span(d1[k].col(q).data(), n));
        }
        stride *= n1d;
    }

    double jacobian = 1.0;
    for (int k = 0; k < d; ++k) jacobian *= 0.5 * element.extent(k);

    Eigen::MatrixXd values(nb, nq);
    std::vector<Eigen::MatrixXd> grads(d, Eigen::MatrixXd(nb, nq));
    std::vector<int> qi(d), bi(d);
    for (int q = 0; q < nq; ++q) {
        int rest = q;
        for (int k = 0; k < d; ++k) {
            qi[k] = rest % n1d;
            rest /= n1d;
        }
        const double root_w = std::sqrt(leaf.points[q].weight * leaf.points[q].scale * jacobian);
        for (int b = 0; b < nb; ++b) {
            int r = b;
            for (int k = 0; k < d; ++k) {
                bi[k] = r % n;
                r /= n;
            }
            double value = root_w;
            for (int k = 0; k < d; ++k) value *= v1[k](bi[k], qi[k]);
            values(b, q) = value;
            for (int g = 0; g < d; ++g) {
                double grad = root_w * 2.0 / element.extent(g);
                for (int k = 0; k < d; ++k) grad *= (k == g) ? d1[k](bi[k], qi[k]) : v1[k](bi[k], qi[k]);
                grads[g](b, q) = grad;
            }
        }
    }
    mass.noalias() += values * values.transpose();
    for (int g = 0; g < d; ++g) stiffness.noalias() += grads[g] * grads[g].transpose();
}

bool leaf_is_uniform(const CutCellLeaf& leaf) {
    const double s = leaf.points.front().scale;
    return std::all_of(leaf.points.begin(), leaf.points.end(), [s](const QuadraturePoint& q) { return q.scale == s; });
}

}  // namespace

ElementMatrices element_matrices_cornercut(int p, int d, double chi, double alpha) {
    check_degree_and_dim(p, d);
    if (!(chi >= 0.0 && chi <= 1.0)) throw std::invalid_argument("element_matrices_cornercut: chi outside [0, 1]");
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("element_matrices_cornercut: alpha outside [0, 1]");

    const NodalBasis1D basis(p);
    const QuadratureRule rule = gauss_legendre_1d(p + 1);
    const Box cube = Box::unit_cube(d);

    const TensorMatrices full = full_cell_matrices(basis, rule, cube);
    const IntervalFactors part1d = interval_factors_from(basis, rule, -1.0, 2.0 * chi);
    const TensorMatrices part = tensor_matrices(std::vector<IntervalFactors>(d, part1d), cube);

    ElementMatrices em;
    em.degree = p;
    em.dim = d;
    em.bounds = cube;
    em.alpha = alpha;
    em.kind = chi >= 1.0 ? CellKind::physical : (chi <= 0.0 ? CellKind::fictitious : CellKind::cut);
    em.mass_integration = MassIntegration::consistent;
    em.mass = (1.0 - alpha) * part.mass + alpha * full.mass;
    em.stiffness = (1.0 - alpha) * part.stiffness + alpha * full.stiffness;
    return em;
}

ElementMatrices element_matrices_uncut(int p, const Box& bounds, CellKind kind, double alpha, MassIntegration mass) {
    check_degree_and_dim(p, bounds.dim);
    if (kind == CellKind::cut) throw std::invalid_argument("element_matrices_uncut: element is cut");

    ElementMatrices em;
    em.degree = p;
    em.dim = bounds.dim;
    em.bounds = bounds;
    em.alpha = alpha;
    em.kind = kind;
    em.mass_integration = mass;

    const NodalBasis1D basis(p);
    const TensorMatrices full = full_cell_matrices(basis, gauss_legendre_1d(p + 1), bounds);
    const double scale = em.uniform_scale();
    em.stiffness = scale * full.stiffness;
    if (mass == MassIntegration::consistent)
        em.mass = scale * full.mass;
    else
        em.mass = lumped_mass(em).asDiagonal();
    return em;
}

ElementMatrices element_matrices_from_rule(int p, const Box& bounds, const CutCellRule& rule, double alpha) {
    check_degree_and_dim(p, bounds.dim);
    if (rule.dim != bounds.dim) throw std::invalid_argument("element_matrices_from_rule: dimension mismatch");

    const NodalBasis1D basis(p);
    const QuadratureRule leaf1d = gauss_legendre_1d(rule.points_per_direction);
    int nb = 1;
    for (int k = 0; k < bounds.dim; ++k) nb *= p + 1;

    ElementMatrices em;
    em.degree = p;
    em.dim = bounds.dim;
    em.bounds = bounds;
    em.alpha = alpha;
    em.mass_integration = MassIntegration::consistent;
    em.mass = Eigen::MatrixXd::Zero(nb, nb);
    em.stiffness = Eigen::MatrixXd::Zero(nb, nb);

    for (const CutCellLeaf& leaf : rule.leaves) {
        if (leaf_is_uniform(leaf)) {
            std::vector<IntervalFactors> per_dir;
            per_dir.reserve(bounds.dim);
            for (int k = 0; k < bounds.dim; ++k)
                per_dir.push_back(interval_factors(basis, leaf1d, leaf.bounds.lower[k], leaf.bounds.upper[k]));
            const TensorMatrices m = tensor_matrices(per_dir, bounds);
            const double s = leaf.points.front().scale;
            em.mass += s * m.mass;
            em.stiffness += s * m.stiffness;
        } else {
            accumulate_leaf_pointwise(basis, leaf, rule.points_per_direction, bounds, em.mass, em.stiffness);
        }
    }
    // Blocked products leave rounding-level asymmetry.
    em.mass = 0.5 * (em.mass + em.mass.transpose()).eval();
    em.stiffness = 0.5 * (em.stiffness + em.stiffness.transpose()).eval();

    if (rule.single_leaf() && rule.uniform_scale()) {
        const double s = rule.leaves.front().points.front().scale;
        em.kind = (s == 1.0) ? CellKind::physical : CellKind::fictitious;
    } else {
        em.kind = CellKind::cut;
    }
    return em;
}

ElementMatrices element_matrices_quadtree(int p, const Box& bounds, const ImplicitDomain& domain, double alpha,
                                          int depth) {
    return element_matrices_from_rule(p, bounds, cut_cell_rule(bounds, domain, depth, p + 1, alpha), alpha);
}

Eigen::VectorXd lumped_mass(const ElementMatrices& element) {
    if (element.kind == CellKind::cut)
        throw std::invalid_argument("lumped_mass: lumping of cut elements is not supported");

    const QuadratureRule gll = gll_rule_1d(element.degree);
    const int n = element.degree + 1;
    int nb = 1;
    for (int k = 0; k < element.dim; ++k) nb *= n;

    Eigen::VectorXd diag(nb);
    const double scale = element.uniform_scale();
    for (int b = 0; b < nb; ++b) {
        double value = scale;
        int rest = b;
        for (int k = 0; k < element.dim; ++k) {
            value *= 0.5 * element.bounds.extent(k) * gll.weights[rest % n];
            rest /= n;
        }
        diag[b] = value;
    }
    return diag;
}

Box GridSpec::element_box(int e) const {
    const int ex = e % nx;
    const int ey = e / nx;
    Box box;
    box.dim = 2;
    box.lower = {origin[0] + ex * h, origin[1] + ey * h, 0.0};
    box.upper = {origin[0] + (ex + 1) * h, origin[1] + (ey + 1) * h, 0.0};
    return box;
}

std::vector<int> GlobalSystem::element_dofs(int e) const {
    const int p = degree;
    const int ex = e % grid.nx;
    const int ey = e / grid.nx;
    const int row = grid.nx * p + 1;
    std::vector<int> dofs;
    dofs.reserve(static_cast<std::size_t>((p + 1) * (p + 1)));
    for (int b = 0; b <= p; ++b)
        for (int a = 0; a <= p; ++a) dofs.push_back((ex * p + a) + row * (ey * p + b));
    return dofs;
}

int GlobalSystem::count(CellKind kind) const noexcept {
    return static_cast<int>(
        std::count_if(elements.begin(), elements.end(), [kind](const ElementMatrices& em) { return em.kind == kind; }));
}

GlobalSystem assemble_global(const GridSpec& grid, int p, const ImplicitDomain& domain, double alpha, int depth) {
    if (domain.dimension() != 2) throw std::invalid_argument("assemble_global: only 2D grids are supported");
    if (!(alpha > 0.0 && alpha <= 1.0))
        throw std::invalid_argument("assemble_global: alpha must lie in (0, 1]; alpha = 0 leaves the mass singular");
    if (grid.nx < 1 || grid.ny < 1 || !(grid.h > 0.0)) throw std::invalid_argument("assemble_global: invalid grid");
    if (p < 1) throw std::invalid_argument("assemble_global: degree must be >= 1");
    if (depth < 0) throw std::invalid_argument("assemble_global: depth must be >= 0");

    GlobalSystem sys;
    sys.degree = p;
    sys.grid = grid;
    sys.alpha = alpha;
    sys.depth = depth;
    sys.elements.reserve(grid.num_elements());

    const int n_dofs = (grid.nx * p + 1) * (grid.ny * p + 1);
    const int nb = (p + 1) * (p + 1);
    std::vector<Eigen::Triplet<double>> mass_triplets, stiffness_triplets;
    stiffness_triplets.reserve(static_cast<std::size_t>(grid.num_elements()) * nb * nb);

    for (int e = 0; e < grid.num_elements(); ++e) {
        const Box box = grid.element_box(e);
        const CutCellRule rule = cut_cell_rule(box, domain, depth, p + 1, alpha);
        ElementMatrices em;
        if (rule.single_leaf() && rule.uniform_scale()) {
            const bool physical = rule.leaves.front().points.front().scale == 1.0;
            em = element_matrices_uncut(p, box, physical ? CellKind::physical : CellKind::fictitious, alpha,
                                        MassIntegration::lumped);
        } else {
            em = element_matrices_from_rule(p, box, rule, alpha);
        }

        sys.elements.push_back(std::move(em));
        const ElementMatrices& stored = sys.elements.back();
        const std::vector<int> dofs = sys.element_dofs(e);
        for (int j = 0; j < nb; ++j) {
            for (int i = 0; i < nb; ++i) {
                stiffness_triplets.emplace_back(dofs[i], dofs[j], stored.stiffness(i, j));
                if (stored.mass_integration == MassIntegration::consistent || i == j)
                    mass_triplets.emplace_back(dofs[i], dofs[j], stored.mass(i, j));
            }
        }
    }

    sys.mass.resize(n_dofs, n_dofs);
    sys.stiffness.resize(n_dofs, n_dofs);
    sys.mass.setFromTriplets(mass_triplets.begin(), mass_triplets.end());
    sys.stiffness.setFromTriplets(stiffness_triplets.begin(), stiffness_triplets.end());
    return sys;
}

namespace {

std::vector<int> free_dofs_of(int n, std::span<const int> constrained) {
    std::vector<char> is_constrained(n, 0);
    for (int c : constrained) {
        if (c < 0 || c >= n) throw std::invalid_argument("apply_dirichlet: DOF " + std::to_string(c) + " out of range");
        if (is_constrained[c]) throw std::invalid_argument("apply_dirichlet: DOF " + std::to_string(c) + " listed twice");
        is_constrained[c] = 1;
    }
    if (static_cast<int>(constrained.size()) == n) throw std::invalid_argument("apply_dirichlet: every DOF is constrained");
    std::vector<int> free;
    free.reserve(n - constrained.size());
    for (int i = 0; i < n; ++i)
        if (!is_constrained[i]) free.push_back(i);
    return free;
}

}  // namespace

DensePencil apply_dirichlet(const Eigen::MatrixXd& mass, const Eigen::MatrixXd& stiffness,
                            std::span<const int> constrained) {
    if (mass.rows() != stiffness.rows() || mass.rows() != mass.cols() || stiffness.rows() != stiffness.cols())
        throw std::invalid_argument("apply_dirichlet: mass and stiffness must be square and of equal size");
    DensePencil out;
    out.free_dofs = free_dofs_of(static_cast<int>(mass.rows()), constrained);
    const auto m = static_cast<Eigen::Index>(out.free_dofs.size());
    out.mass.resize(m, m);
    out.stiffness.resize(m, m);
    for (Eigen::Index j = 0; j < m; ++j) {
        for (Eigen::Index i = 0; i < m; ++i) {
            out.mass(i, j) = mass(out.free_dofs[i], out.free_dofs[j]);
            out.stiffness(i, j) = stiffness(out.free_dofs[i], out.free_dofs[j]);
        }
    }
    return out;
}

DensePencil apply_dirichlet(const ElementMatrices& element, std::span<const int> constrained) {
    return apply_dirichlet(element.mass, element.stiffness, constrained);
}

SparsePencil apply_dirichlet(const GlobalSystem& system, std::span<const int> constrained) {
    SparsePencil out;
    out.free_dofs = free_dofs_of(system.num_dofs(), constrained);
    const auto m = static_cast<Eigen::Index>(out.free_dofs.size());
    SparseMatrix select(m, system.num_dofs());
    std::vector<Eigen::Triplet<double>> entries;
    entries.reserve(out.free_dofs.size());
    for (Eigen::Index i = 0; i < m; ++i) entries.emplace_back(static_cast<int>(i), out.free_dofs[i], 1.0);
    select.setFromTriplets(entries.begin(), entries.end());
    out.mass = select * system.mass * select.transpose();
    out.stiffness = select * system.stiffness * select.transpose();
    return out;
}

std::vector<int> origin_face_dofs(int p, int d) {
    check_degree_and_dim(p, d);
    const int n = p + 1;
    int nb = 1;
    for (int k = 0; k < d; ++k) nb *= n;
    std::vector<int> dofs;
    for (int b = 0; b < nb; ++b) {
        int rest = b;
        bool on_face = false;
        for (int k = 0; k < d; ++k) {
            on_face = on_face || (rest % n == 0);
            rest /= n;
        }
        if (on_face) dofs.push_back(b);
    }
    return dofs;
}

}  // namespace fcmcfl
