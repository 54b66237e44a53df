#pragma once

#include <string>

namespace stirlab {

struct Vec2 {
    double x1 = 0.0;
    double x2 = 0.0;
};

/// Symmetric 2x2 second-derivative block.
struct Sym2 {
    double h11 = 0.0;
    double h12 = 0.0;
    double h22 = 0.0;
};

enum class HamiltonianKind {
    Standard,       ///< sin(pi x1) sin(pi x2) convection rolls
    CornerPatched,  ///< Standard away from lattice corners, exact x1*x2
                    ///< quadratic near them, C2 quintic radial blend between
    CutOff,         ///< Standard composed with the odd plateau cut-off G
};

/// Parameters that pin down one stream function on the periodic lattice.
///
/// N and A control the cut-off: the identity ramp ends at N/sqrt(A) and the
/// plateau starts at 2N/sqrt(A).  c0 is the corner patch half-width; the
/// exact quadratic holds on squares of side 2*c0 around lattice points.
struct HamiltonianSpec {
    HamiltonianKind kind = HamiltonianKind::Standard;
    int N = 1;
    double A = 1.0;
    double c0 = 0.05;
};

double eval_H(const HamiltonianSpec& spec, double x1, double x2);
Vec2 eval_grad_H(const HamiltonianSpec& spec, double x1, double x2);
Sym2 eval_hess_H(const HamiltonianSpec& spec, double x1, double x2);

/// Odd C2 cut-off: G(h) = h up to N/sqrt(A), constant 3N/(2 sqrt(A)) past
/// 2N/sqrt(A), cubic-smoothstep slope ramp in between.
double cutoff_G(double h, int N, double A);
double cutoff_G_prime(double h, int N, double A);
double cutoff_G_second(double h, int N, double A);

/// sup |H| over the plane (1 for Standard/CornerPatched, the plateau value
/// for CutOff when it saturates below 1).
double h_sup(const HamiltonianSpec& spec);

/// Numerical sup bounds used for step-size control; sampled once on a dense
/// grid with a 5% safety margin, exact constants for the closed forms.
double grad_sup_bound(const HamiltonianSpec& spec);
double hessian_sup_bound(const HamiltonianSpec& spec);

/// One stirring field in cell coordinates y = (x1/eps, x2/eps^alpha).
///
/// The cell-coordinate stream function is amplitude * eps^alpha *
/// H(y1, y2/eps^alpha); velocity() is its perpendicular gradient
/// (d2, -d1), so alpha = 0 gives amplitude * perp grad H.
struct VelocityFieldHandle {
    HamiltonianSpec spec;
    double epsilon = 1.0;
    double alpha = 0.0;
    double amplitude = 1.0;
};

double stream_function(const VelocityFieldHandle& handle, double y1, double y2);
Vec2 velocity(const VelocityFieldHandle& handle, double y1, double y2);

/// sup over y of the velocity Jacobian norm; the advective time step scale.
double velocity_jacobian_bound(const VelocityFieldHandle& handle);

/// Numerical audit of the standing structural assumptions.
struct AssumptionReport {
    double c2_bound = 0.0;           ///< max of |H|, |grad H|, |hess H| entries
    double center_value = 0.0;       ///< H(1/2,1/2), nominal +1
    double shifted_center_value = 0.0;  ///< H(3/2,1/2), nominal -1
    double zero_set_deviation = 0.0;    ///< max |H| on the lattice lines
    double quadratic_residual = 0.0;    ///< max |H - q| on the inner patches
    double a4_h0 = 0.0;              ///< largest level with H * dii H <= 0 below it
    double a4_worst = 0.0;           ///< worst positive H * dii H found anywhere
    double a5_residual = 0.0;        ///< max |d11 H| near vertical lattice lines
                                     ///< below the fixed reference level 0.05
    double min_corner_det = 0.0;     ///< min |det hess| at lattice points
    bool normalization_ok = false;
    bool zero_set_ok = false;
    bool quadratic_ok = false;
    bool c2_ok = false;
};

/// Samples H on an n-per-unit grid over one period cell and fills the report.
AssumptionReport check_assumptions(const HamiltonianSpec& spec, int resolution);

std::string format_report(const AssumptionReport& report);

}  // namespace stirlab
