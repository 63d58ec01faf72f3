#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace nlslab {

/// Uniform periodic lattice on [-L, L)^dim with its paired wavenumber lattice.
///
/// Sample points      x_j = -L + j*dx,          dx = 2L/N,   j = 0..N-1
/// Wavenumber lattice k_m = (pi/L)*m,           m = -N/2..N/2-1
/// Spectra are stored in "shifted" order: index i along an axis corresponds
/// to m = i - N/2, so the lattice runs monotonically from -pi/dx to the
/// Nyquist mode exclusive. dk = pi/L is the Plancherel measure per axis.
class Grid {
public:
    static Grid make(int dim, int points_per_axis, double half_width) {
        if (dim != 1 && dim != 2)
            throw std::invalid_argument("Grid: dim must be 1 or 2, got " + std::to_string(dim));
        if (points_per_axis < 16 || (points_per_axis & (points_per_axis - 1)) != 0)
            throw std::invalid_argument("Grid: points_per_axis must be a power of two >= 16, got " +
                                        std::to_string(points_per_axis));
        if (!(half_width > 0.0))
            throw std::invalid_argument("Grid: half_width must be positive");
        return Grid(dim, points_per_axis, half_width);
    }

    int dim() const { return dim_; }
    int points_per_axis() const { return n_; }
    double half_width() const { return L_; }
    double dx() const { return dx_; }
    double dk() const { return dk_; }
    double cell_volume() const { return dim_ == 1 ? dx_ : dx_ * dx_; }
    double mode_volume() const { return dim_ == 1 ? dk_ : dk_ * dk_; }
    std::size_t size() const { return size_; }

    double x(int j) const { return -L_ + j * dx_; }
    double k(int i) const { return dk_ * (i - n_ / 2); }
    /// Largest resolved wavenumber magnitude (the Nyquist mode |k| = pi/dx).
    double k_max() const { return dk_ * (n_ / 2); }

    /// Per-axis lattice index of a flattened sample index (axis 0 is fastest).
    int axis_index(std::size_t flat, int axis) const {
        return axis == 0 ? static_cast<int>(flat % static_cast<std::size_t>(n_))
                         : static_cast<int>(flat / static_cast<std::size_t>(n_));
    }

    std::array<double, 2> x_vec(std::size_t flat) const {
        std::array<double, 2> r{x(axis_index(flat, 0)), 0.0};
        if (dim_ == 2) r[1] = x(axis_index(flat, 1));
        return r;
    }
    std::array<double, 2> k_vec(std::size_t flat) const {
        std::array<double, 2> r{k(axis_index(flat, 0)), 0.0};
        if (dim_ == 2) r[1] = k(axis_index(flat, 1));
        return r;
    }
    double x_sq(std::size_t flat) const {
        auto v = x_vec(flat);
        return v[0] * v[0] + v[1] * v[1];
    }
    double k_sq(std::size_t flat) const {
        auto v = k_vec(flat);
        return v[0] * v[0] + v[1] * v[1];
    }

    friend bool operator==(const Grid& a, const Grid& b) {
        return a.dim_ == b.dim_ && a.n_ == b.n_ && a.L_ == b.L_;
    }
    friend bool operator!=(const Grid& a, const Grid& b) { return !(a == b); }

private:
    Grid(int dim, int n, double L)
        : dim_(dim), n_(n), L_(L), dx_(2.0 * L / n), dk_(3.141592653589793238462643383279502884 / L),
          size_(dim == 1 ? static_cast<std::size_t>(n) : static_cast<std::size_t>(n) * n) {}

    int dim_;
    int n_;
    double L_;
    double dx_;
    double dk_;
    std::size_t size_;
};

inline Grid make_grid(int dim, int points_per_axis, double half_width) {
    return Grid::make(dim, points_per_axis, half_width);
}

/// The wavenumber lattice of `g` viewed as a spatial grid in its own right
/// (half-width k_max, same point count). dual_grid(dual_grid(g)) == g.
inline Grid dual_grid(const Grid& g) {
    return Grid::make(g.dim(), g.points_per_axis(), g.k_max());
}

} // namespace nlslab
