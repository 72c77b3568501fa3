#include "lps/field.hpp"

#include "lps/error.hpp"
#include "lps/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace lps {

double Axis::step() const {
    detail::require(kind == AxisKind::uniform && nodes.size() >= 2, "Axis::step: uniform axis with >= 2 nodes");
    return nodes[1] - nodes[0];
}

double Axis::period() const { return step() * static_cast<double>(nodes.size()); }

Axis Axis::uniform(double lo, double step, std::size_t count) {
    detail::require(step > 0.0 && count >= 2, "Axis::uniform: step > 0 and count >= 2");
    Axis a;
    a.kind = AxisKind::uniform;
    a.nodes.resize(count);
    a.weights.assign(count, step);
    for (std::size_t i = 0; i < count; ++i) a.nodes[i] = lo + step * static_cast<double>(i);
    return a;
}

Axis Axis::symmetric(double half_width, double step) {
    detail::require(half_width > 0.0 && step > 0.0, "Axis::symmetric: positive half-width and step");
    const auto m = static_cast<std::size_t>(std::llround(half_width / step));
    return uniform(-static_cast<double>(m) * step, step, 2 * m + 1);
}

Axis Axis::half_line(double u_min, double u_max, int panels, int order) {
    const QuadratureRule r = half_line_rule(u_min, u_max, panels, order);
    Axis a;
    a.kind = AxisKind::half_line;
    a.nodes = r.nodes;
    a.weights = r.weights;
    return a;
}

Grid::Grid(std::vector<Axis> axes) : axes_(std::move(axes)) {
    detail::require(!axes_.empty(), "Grid: at least one axis");
    size_ = 1;
    for (const Axis& a : axes_) {
        detail::require(a.size() >= 2 && a.weights.size() == a.size(), "Grid: axes need >= 2 weighted nodes");
        size_ *= a.size();
    }
}

std::vector<std::size_t> Grid::shape() const {
    std::vector<std::size_t> s;
    for (const Axis& a : axes_) s.push_back(a.size());
    return s;
}

void Grid::point(std::size_t i, std::span<double> out) const {
    for (std::size_t d = axes_.size(); d-- > 0;) {
        const std::size_t n = axes_[d].size();
        out[d] = axes_[d].nodes[i % n];
        i /= n;
    }
}

std::vector<double> Grid::point(std::size_t i) const {
    std::vector<double> p(axes_.size());
    point(i, p);
    return p;
}

double Grid::weight(std::size_t i) const {
    double w = 1.0;
    for (std::size_t d = axes_.size(); d-- > 0;) {
        const std::size_t n = axes_[d].size();
        w *= axes_[d].weights[i % n];
        i /= n;
    }
    return w;
}

bool Grid::all_uniform() const {
    return std::all_of(axes_.begin(), axes_.end(), [](const Axis& a) { return a.kind == AxisKind::uniform; });
}

SampledField::SampledField(Grid grid, std::size_t components)
    : grid_(std::move(grid)), components_(components), values_(grid_.size() * components, 0.0) {
    detail::require(components >= 1, "SampledField: at least one component");
}

SampledField SampledField::from_function(const Grid& grid, const std::function<double(std::span<const double>)>& f) {
    SampledField out(grid, 1);
    std::vector<double> x(grid.dim());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        grid.point(i, x);
        out.at(i) = f(x);
    }
    return out;
}

SampledField SampledField::from_function(const Grid& grid, std::size_t components,
                                         const std::function<void(std::span<const double>, std::span<double>)>& f) {
    SampledField out(grid, components);
    std::vector<double> x(grid.dim()), v(components);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        grid.point(i, x);
        f(x, v);
        for (std::size_t c = 0; c < components; ++c) out.at(i, c) = v[c];
    }
    return out;
}

std::span<double> SampledField::component(std::size_t c) {
    return std::span<double>(values_).subspan(c * grid_.size(), grid_.size());
}

std::span<const double> SampledField::component(std::size_t c) const {
    return std::span<const double>(values_).subspan(c * grid_.size(), grid_.size());
}

double SampledField::inner(const SampledField& other) const {
    detail::require(other.size() == size() && other.components() == components(), "inner: shape mismatch");
    double s = 0.0;
    for (std::size_t c = 0; c < components_; ++c)
        for (std::size_t i = 0; i < size(); ++i) s += grid_.weight(i) * at(i, c) * other.at(i, c);
    return s;
}

double SampledField::max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

SampledField pad_symmetric(const SampledField& f, double half_width) {
    const Grid& g = f.grid();
    detail::require(g.all_uniform(), "pad_symmetric: uniform axes required");
    std::vector<Axis> axes;
    std::vector<std::size_t> offset;
    for (const Axis& a : g.axes()) {
        const double h = a.step();
        const double lo_idx = a.nodes.front() / h;
        detail::require(std::abs(lo_idx - std::round(lo_idx)) < 1e-6, "pad_symmetric: axis not aligned with 0");
        Axis big = Axis::symmetric(std::max(half_width, std::max(std::abs(a.nodes.front()), a.nodes.back())), h);
        const double shift = (a.nodes.front() - big.nodes.front()) / h;
        offset.push_back(static_cast<std::size_t>(std::llround(shift)));
        axes.push_back(std::move(big));
    }
    Grid big_grid(axes);
    SampledField out(big_grid, f.components());
    const auto small_shape = g.shape();
    const auto big_shape = big_grid.shape();
    std::vector<std::size_t> idx(g.dim());
    for (std::size_t i = 0; i < g.size(); ++i) {
        std::size_t rem = i;
        for (std::size_t d = g.dim(); d-- > 0;) {
            idx[d] = rem % small_shape[d] + offset[d];
            rem /= small_shape[d];
        }
        std::size_t j = 0;
        for (std::size_t d = 0; d < g.dim(); ++d) j = j * big_shape[d] + idx[d];
        for (std::size_t c = 0; c < f.components(); ++c) out.at(j, c) = f.at(i, c);
    }
    return out;
}

}  // namespace lps
