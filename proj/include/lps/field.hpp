#pragma once

// SampledField: a B-valued function sampled on a tensor-product grid. Each
// axis carries its own quadrature weights so integrals over the grid are
// weighted sums.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace lps {

enum class AxisKind {
    uniform,    // equispaced nodes, rectangle weights; periodic for the Fourier engine
    half_line,  // nodes x = e^u on Gauss-Legendre panels in u
};

struct Axis {
    AxisKind kind = AxisKind::uniform;
    std::vector<double> nodes;
    std::vector<double> weights;

    std::size_t size() const { return nodes.size(); }
    /// Grid spacing for uniform axes.
    double step() const;
    /// Period of a uniform axis seen as a periodic box: size() * step().
    double period() const;

    static Axis uniform(double lo, double step, std::size_t count);
    /// Symmetric uniform axis -m h, ..., m h with m = round(half_width / h).
    static Axis symmetric(double half_width, double step);
    static Axis half_line(double u_min, double u_max, int panels, int order);
};

class Grid {
public:
    Grid() = default;
    explicit Grid(std::vector<Axis> axes);

    std::size_t dim() const { return axes_.size(); }
    std::size_t size() const { return size_; }
    const Axis& axis(std::size_t d) const { return axes_[d]; }
    const std::vector<Axis>& axes() const { return axes_; }
    std::vector<std::size_t> shape() const;

    /// Coordinates of flat point index i (row-major, last axis fastest).
    void point(std::size_t i, std::span<double> out) const;
    std::vector<double> point(std::size_t i) const;
    double weight(std::size_t i) const;
    bool all_uniform() const;

private:
    std::vector<Axis> axes_;
    std::size_t size_ = 0;
};

class SampledField {
public:
    SampledField() = default;
    SampledField(Grid grid, std::size_t components);

    /// Scalar field from f(x).
    static SampledField from_function(const Grid& grid, const std::function<double(std::span<const double>)>& f);
    /// B-valued field from f(x, out) filling `components` values.
    static SampledField from_function(const Grid& grid, std::size_t components,
                                      const std::function<void(std::span<const double>, std::span<double>)>& f);

    const Grid& grid() const { return grid_; }
    std::size_t size() const { return grid_.size(); }
    std::size_t components() const { return components_; }

    std::span<double> component(std::size_t c);
    std::span<const double> component(std::size_t c) const;
    double& at(std::size_t i, std::size_t c = 0) { return values_[c * grid_.size() + i]; }
    double at(std::size_t i, std::size_t c = 0) const { return values_[c * grid_.size() + i]; }
    std::span<double> data() { return values_; }
    std::span<const double> data() const { return values_; }

    /// Grid quadrature of sum_c f_c g_c.
    double inner(const SampledField& other) const;
    /// sup over points and components of |f|.
    double max_abs() const;

private:
    Grid grid_;
    std::size_t components_ = 0;
    std::vector<double> values_;  // component-major
};

/// Zero-pads a field on a uniform 1-D (or n-D) grid to a larger symmetric
/// box of the given half-width, keeping the original spacing.
SampledField pad_symmetric(const SampledField& f, double half_width);

}  // namespace lps
