#include "stirlab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace stirlab {

namespace {

// Two-sided tanh distribution of m cells on [0,1]; beta = 0 is uniform.
double tanh_point(double xi, double beta) {
    if (beta < 1e-12) return xi;
    return 0.5 * (1.0 + std::tanh(beta * (2.0 * xi - 1.0)) / std::tanh(beta));
}

// Pick beta so the first cell of the m-cell map has width wall (normalized).
double solve_beta(int m, double wall) {
    if (wall * m >= 1.0) return 0.0;
    double lo = 1e-6, hi = 40.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (tanh_point(1.0 / m, mid) > wall)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

void append_segment(std::vector<double>& faces, double a, double b, int m,
                    double wall_dx) {
    const double L = b - a;
    const double beta = solve_beta(m, wall_dx / L);
    for (int k = 1; k <= m; ++k) {
        faces.push_back(a + L * tanh_point(static_cast<double>(k) / m, beta));
    }
    faces.back() = b;  // exact endpoint, no accumulated roundoff
}

}  // namespace

std::vector<double> uniform_faces(double lo, double hi, int n) {
    std::vector<double> f(n + 1);
    for (int i = 0; i <= n; ++i) f[i] = lo + (hi - lo) * i / n;
    return f;
}

std::vector<double> stretched_faces(double lo, double hi, int n,
                                    const std::vector<double>& attract,
                                    double wall_dx) {
    if (attract.size() < 2 || attract.front() != lo || attract.back() != hi)
        throw std::invalid_argument("attract lines must bracket the domain");
    const int nseg = static_cast<int>(attract.size()) - 1;
    if (n < 4 * nseg)
        throw std::invalid_argument("need at least 4 cells per subinterval");

    // Proportional cell split with a floor of 4, remainder left to right.
    std::vector<int> counts(nseg, 4);
    int assigned = 4 * nseg;
    const double total = hi - lo;
    for (int s = 0; s < nseg; ++s) {
        const double frac = (attract[s + 1] - attract[s]) / total;
        const int want = static_cast<int>(std::floor(frac * n));
        if (want > counts[s]) {
            assigned += want - counts[s];
            counts[s] = want;
        }
    }
    for (int s = 0; assigned < n; s = (s + 1) % nseg) {
        ++counts[s];
        ++assigned;
    }
    while (assigned > n) {
        for (int s = 0; s < nseg && assigned > n; ++s) {
            if (counts[s] > 4) {
                --counts[s];
                --assigned;
            }
        }
    }

    std::vector<double> faces;
    faces.reserve(n + 1);
    faces.push_back(lo);
    for (int s = 0; s < nseg; ++s)
        append_segment(faces, attract[s], attract[s + 1], counts[s], wall_dx);
    return faces;
}

Grid2D make_grid(std::vector<double> xf, std::vector<double> yf) {
    Grid2D g;
    g.nx = static_cast<int>(xf.size()) - 1;
    g.ny = static_cast<int>(yf.size()) - 1;
    g.xf = std::move(xf);
    g.yf = std::move(yf);
    g.xc.resize(g.nx);
    g.yc.resize(g.ny);
    for (int i = 0; i < g.nx; ++i) g.xc[i] = 0.5 * (g.xf[i] + g.xf[i + 1]);
    for (int j = 0; j < g.ny; ++j) g.yc[j] = 0.5 * (g.yf[j] + g.yf[j + 1]);
    return g;
}

}  // namespace stirlab
