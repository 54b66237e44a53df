#pragma once

#include <vector>

namespace stirlab {

/// Tensor-product cell-centered grid; faces bound the control volumes.
struct Grid2D {
    std::vector<double> xf, yf;  ///< face coordinates, sizes nx+1 / ny+1
    std::vector<double> xc, yc;  ///< cell centers
    int nx = 0, ny = 0;

    int index(int i, int j) const { return j * nx + i; }
    double x_lo() const { return xf.front(); }
    double x_hi() const { return xf.back(); }
    double y_lo() const { return yf.front(); }
    double y_hi() const { return yf.back(); }
    double cell_area(int i, int j) const {
        return (xf[i + 1] - xf[i]) * (yf[j + 1] - yf[j]);
    }
};

std::vector<double> uniform_faces(double lo, double hi, int n);

/// Faces on [lo,hi] with n cells total, clustered symmetrically toward both
/// ends of every subinterval between consecutive attract lines via a
/// two-sided tanh map.  wall_dx is the requested spacing at each attract
/// line; when it is no finer than uniform the map degenerates to uniform.
/// attract must contain lo and hi and be sorted.
std::vector<double> stretched_faces(double lo, double hi, int n,
                                    const std::vector<double>& attract,
                                    double wall_dx);

Grid2D make_grid(std::vector<double> xf, std::vector<double> yf);

}  // namespace stirlab
