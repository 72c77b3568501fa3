#include "lps/normed_space.hpp"

#include "lps/error.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace lps {

NormedSpace::NormedSpace(std::size_t dim, Norm norm, std::string label)
    : dim_(dim), norm_(std::move(norm)), label_(std::move(label)) {
    detail::require(dim >= 1, "NormedSpace: dimension >= 1");
    detail::require(static_cast<bool>(norm_), "NormedSpace: norm oracle required");
}

NormedSpace NormedSpace::lp(double r, std::size_t dim) {
    detail::require(r >= 1.0, "NormedSpace::lp: r >= 1");
    std::ostringstream label;
    Norm norm;
    if (std::isinf(r)) {
        label << "l^inf_" << dim;
        norm = [](std::span<const double> v) {
            double m = 0.0;
            for (double x : v) m = std::max(m, std::abs(x));
            return m;
        };
    } else if (r == 2.0) {
        label << "l^2_" << dim;
        norm = [](std::span<const double> v) {
            double s = 0.0;
            for (double x : v) s += x * x;
            return std::sqrt(s);
        };
    } else if (r == 1.0) {
        label << "l^1_" << dim;
        norm = [](std::span<const double> v) {
            double s = 0.0;
            for (double x : v) s += std::abs(x);
            return s;
        };
    } else {
        label << "l^" << r << "_" << dim;
        norm = [r](std::span<const double> v) {
            double m = 0.0;
            for (double x : v) m = std::max(m, std::abs(x));
            if (m == 0.0) return 0.0;
            double s = 0.0;
            for (double x : v) s += std::pow(std::abs(x) / m, r);
            return m * std::pow(s, 1.0 / r);
        };
    }
    NormedSpace space(dim, std::move(norm), label.str());
    space.exponent_ = r;
    return space;
}

}  // namespace lps
