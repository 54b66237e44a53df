#pragma once

#include <vector>

#include "stirlab/flow.hpp"

namespace stirlab {

/// One closed level curve of the stream Hamiltonian inside the cell that
/// contains the center (1/2, 1/2).
struct LevelSetContour {
    double h = 0.0;
    std::vector<Vec2> points;         ///< ordered around the center; wraps
    std::vector<double> arc_weights;  ///< trapezoidal |dl| weight per point
};

/// Marches along the perpendicular gradient with Newton projection back to
/// {H = h} and resamples to n_points of equal arc length.
///
/// Every returned point satisfies |H(point) - h| <= 1e-10.  Throws
/// std::invalid_argument for levels outside (0, sup H) and
/// std::runtime_error if the curve fails to close.
LevelSetContour trace_contour(const HamiltonianSpec& spec, double h,
                              int n_points = 512);

/// Circulation period T(h): the contour integral of |dl| / |grad H|.
double period(const HamiltonianSpec& spec, const LevelSetContour& contour);

struct ContourCoefficients {
    double d1 = 0.0;  ///< (1/T) contour integral of (d1 H)^2 / |grad H|
    double d2 = 0.0;  ///< (1/T) contour integral of d11 H / |grad H|
};

ContourCoefficients coefficients(const HamiltonianSpec& spec,
                                 const LevelSetContour& contour);

/// Independent period oracle: direct adaptive integration of the contour
/// motion (fourth-order steps along the perpendicular gradient) until the
/// trajectory returns to its start.
double period_by_ode(const HamiltonianSpec& spec, double h);

/// Points equidistributed in circulation travel time along {H = h}; the
/// natural start panel for path ensembles (amplitude rescales travel time
/// uniformly, so panels are amplitude independent).
std::vector<Vec2> travel_time_panel(const HamiltonianSpec& spec, double h,
                                    int n_points);

struct AveragedCoefficients {
    std::vector<double> h_grid;
    std::vector<double> t_of_h;
    std::vector<double> d1_of_h;
    std::vector<double> d2_of_h;
};

AveragedCoefficients averaged_coefficients(const HamiltonianSpec& spec,
                                           const std::vector<double>& h_grid,
                                           int n_points = 512);

/// Chebyshev-spaced levels on [lo, hi], increasing.
std::vector<double> chebyshev_levels(double lo, double hi, int n);

/// Max over interior levels of |d/dh (T D1) - T D2| / |T D2| with
/// three-point nonuniform differences; the structural flux identity.
double verify_flux_identity(const AveragedCoefficients& coeffs);

/// Reduced vertical profile on the coefficient grid:
/// U'(h) = 4 * int_h^1 T(s) ds / (T(h) D1(h)), pinned by U(0) = 0.
struct ReducedProfile {
    std::vector<double> h_grid;
    std::vector<double> u;
    std::vector<double> du_dh;
};

ReducedProfile reduced_profile(const AveragedCoefficients& coeffs);

}  // namespace stirlab
