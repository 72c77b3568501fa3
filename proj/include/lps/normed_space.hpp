#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>

namespace lps {

/// Finite-dimensional space R^M with a norm oracle.
class NormedSpace {
public:
    using Norm = std::function<double(std::span<const double>)>;

    NormedSpace(std::size_t dim, Norm norm, std::string label);

    /// l^r_M, r in [1, inf]; pass r = infinity for the sup norm.
    static NormedSpace lp(double r, std::size_t dim);
    static NormedSpace real_line() { return lp(2.0, 1); }

    std::size_t dim() const { return dim_; }
    const std::string& label() const { return label_; }
    double norm(std::span<const double> v) const { return norm_(v); }
    /// r for built-in l^r spaces, 0 for user-supplied norms.
    double exponent() const { return exponent_; }

private:
    std::size_t dim_;
    Norm norm_;
    std::string label_;
    double exponent_ = 0.0;
};

}  // namespace lps
