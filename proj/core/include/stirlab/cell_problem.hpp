#pragma once

#include <Eigen/Sparse>
#include <optional>
#include <stdexcept>

#include "stirlab/flow.hpp"
#include "stirlab/grid.hpp"

namespace stirlab {

enum class BottomBoundary {
    Neumann,    ///< insulated floor
    Dirichlet,  ///< absorbing floor (the reflected formulation)
};

/// Steady stirred-diffusion problem on one horizontal period pair
/// [0,2] x [y_lo,1]:
///
///   advect(T) - 1/2 d11 T - (eps^2/2) d22 T = source,
///
/// periodic in y1, T = 0 at the top, bc_bottom at the floor.  The advecting
/// field is the perp gradient of the handle's stream function (amplitude
/// included), discretized conservatively from corner stream values so the
/// discrete velocity is divergence free to roundoff.
struct CellProblem {
    VelocityFieldHandle handle;
    double epsilon = 0.1;
    int nx = 256;
    int ny = 256;
    BottomBoundary bc_bottom = BottomBoundary::Neumann;
    std::optional<double> source;  ///< defaults to eps^2
    bool stretched = true;
    double y_lo = 0.0;  ///< set to -1 for the doubled-domain formulation

    double source_value() const {
        return source.value_or(epsilon * epsilon);
    }
};

struct AssembledSystem {
    Eigen::SparseMatrix<double> matrix;
    Eigen::VectorXd rhs;
    Grid2D grid;
    bool under_resolved = false;
};

struct SolveResult {
    Grid2D grid;
    std::vector<double> T;  ///< cell-centered values, row-major (j*nx+i)
    int iterations = 0;
    double residual = 0.0;
    bool under_resolved = false;
    double min_value = 0.0;
    double max_value = 0.0;
    double assemble_seconds = 0.0;
    double solve_seconds = 0.0;
};

class solve_error : public std::runtime_error {
  public:
    solve_error(const std::string& what, double residual, int iterations)
        : std::runtime_error(what),
          residual(residual),
          iterations(iterations) {}
    double residual;
    int iterations;
};

/// The grid a problem will be solved on: wall-clustered faces with attract
/// lines at the cell separatrices, or uniform when stretching is disabled.
/// Exposed so callers can size nx/ny before paying for an assembly.
Grid2D problem_grid(const CellProblem& problem);

/// Exponential-fitting finite-volume discretization: face fluxes use the
/// Bernoulli weighting of the face Peclet number, so the matrix is an
/// M-matrix at every stirring strength and the discrete maximum principle
/// holds even when the layers are under-resolved.
AssembledSystem assemble(const CellProblem& problem);

/// Advection-only operator (zero-diffusion limit of the fitted fluxes);
/// its row sums vanish identically because the face fluxes telescope the
/// corner stream values.
Eigen::SparseMatrix<double> assemble_advection(const CellProblem& problem);

/// Stabilized-biconjugate-gradient solve with incomplete-LU preconditioning,
/// accepted when the normwise backward error drops below 1e-10, at most 1e5
/// iterations.  Throws solve_error on non-convergence.
SolveResult solve(const CellProblem& problem);

/// Bilinear sample of the solution with boundary ghosts (periodic in y1,
/// reflecting or absorbing in y2 to match the boundary conditions).
double sample_field(const SolveResult& result, const CellProblem& problem,
                    double y1, double y2);

/// L^q norm with the cell measure normalized to unit total area; q may be
/// infinity.  Matches the physical-domain norm of the rescaled field.
double field_norm(const SolveResult& result, double q);

/// Smallest count of vertical cells covering the top (and, for an absorbing
/// floor, bottom) distance delta = eps/sqrt(amplitude); the solve is flagged
/// under-resolved when fewer than 4 cells fit.
int cells_across_layer(const Grid2D& grid, double delta, bool at_bottom);

}  // namespace stirlab
