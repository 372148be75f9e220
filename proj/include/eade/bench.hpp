#pragma once

#include <cmath>
#include <cstddef>
#include <fstream>
#include <istream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace eade::bench {

enum class FunctionId { Sphere, SumPowers, Schwefel, Rastrigin };

inline const char* function_name(FunctionId id) {
    switch (id) {
        case FunctionId::Sphere: return "sphere";
        case FunctionId::SumPowers: return "powers";
        case FunctionId::Schwefel: return "schwefel";
        case FunctionId::Rastrigin: return "rastrigin";
    }
    throw std::invalid_argument("unknown function id");
}

inline FunctionId function_from_name(const std::string& name) {
    if (name == "sphere") return FunctionId::Sphere;
    if (name == "powers") return FunctionId::SumPowers;
    if (name == "schwefel") return FunctionId::Schwefel;
    if (name == "rastrigin") return FunctionId::Rastrigin;
    throw std::invalid_argument("unknown function name: " + name);
}

// A benchmark problem: base function, box bounds, and an optional
// shift/rotation applied before evaluation. With both transforms set the
// evaluated point is R * (x - shift).
struct ObjectiveSpec {
    FunctionId id = FunctionId::Sphere;
    int dimension = 0;
    std::vector<double> lower;
    std::vector<double> upper;
    std::vector<double> shift;     // empty when unshifted
    std::vector<double> rotation;  // row-major dimension x dimension, empty when unrotated
};

inline ObjectiveSpec make_spec(FunctionId id, int dimension) {
    if (dimension < 1) throw std::invalid_argument("dimension must be >= 1");
    double hi = 0.0;
    switch (id) {
        case FunctionId::Sphere: hi = 100.0; break;
        case FunctionId::SumPowers: hi = 1.0; break;
        case FunctionId::Schwefel: hi = 500.0; break;
        case FunctionId::Rastrigin: hi = 5.0; break;
    }
    ObjectiveSpec spec;
    spec.id = id;
    spec.dimension = dimension;
    spec.lower.assign(static_cast<std::size_t>(dimension), -hi);
    spec.upper.assign(static_cast<std::size_t>(dimension), hi);
    return spec;
}

namespace detail {

inline double sphere(const std::vector<double>& z) {
    double s = 0.0;
    for (double v : z) s += v * v;
    return s;
}

// sum_i |z_i|^(i+1), i = 1..D. The magnitude keeps fractional exponents
// defined for negative coordinates; the minimum stays at the origin.
inline double sum_powers(const std::vector<double>& z) {
    double s = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        s += std::pow(std::fabs(z[i]), static_cast<double>(i + 2));
    }
    return s;
}

inline double schwefel(const std::vector<double>& z) {
    double s = 0.0;
    for (double v : z) s += v * std::sin(std::sqrt(std::fabs(v)));
    return 418.9829 * static_cast<double>(z.size()) - s;
}

inline double rastrigin(const std::vector<double>& z) {
    constexpr double two_pi = 2.0 * 3.141592653589793238462643383279502884;
    double s = 0.0;
    for (double v : z) s += v * v - 10.0 * std::cos(two_pi * v) + 10.0;
    return s;
}

}  // namespace detail

inline double evaluate(const ObjectiveSpec& spec, const std::vector<double>& x) {
    auto d = static_cast<std::size_t>(spec.dimension);
    if (x.size() != d) throw std::invalid_argument("point dimension mismatch");

    const std::vector<double>* z = &x;
    std::vector<double> shifted;
    std::vector<double> rotated;
    if (!spec.shift.empty()) {
        shifted.resize(d);
        for (std::size_t i = 0; i < d; ++i) shifted[i] = x[i] - spec.shift[i];
        z = &shifted;
    }
    if (!spec.rotation.empty()) {
        rotated.assign(d, 0.0);
        for (std::size_t r = 0; r < d; ++r) {
            double acc = 0.0;
            const double* row = spec.rotation.data() + r * d;
            for (std::size_t c = 0; c < d; ++c) acc += row[c] * (*z)[c];
            rotated[r] = acc;
        }
        z = &rotated;
    }

    switch (spec.id) {
        case FunctionId::Sphere: return detail::sphere(*z);
        case FunctionId::SumPowers: return detail::sum_powers(*z);
        case FunctionId::Schwefel: return detail::schwefel(*z);
        case FunctionId::Rastrigin: return detail::rastrigin(*z);
    }
    throw std::invalid_argument("unknown function id");
}

// Reporting convention: errors below 1e-8 count as solved and are published
// as exact zero. Applies to reported values only, never to the search.
inline double report_clamp(double f) {
    return f < 1e-8 ? 0.0 : f;
}

inline std::optional<double> known_optimum(FunctionId id) {
    switch (id) {
        case FunctionId::Sphere:
        case FunctionId::SumPowers:
        case FunctionId::Schwefel:
        case FunctionId::Rastrigin:
            return 0.0;
    }
    return std::nullopt;
}

// Loads a shift/rotation pair from a plain-text stream:
//   line 1: dimension
//   line 2: D shift components
//   lines 3..D+2: rotation matrix rows
// The matrix must be orthonormal to 1e-9 (max abs deviation of R^T R from I).
inline void load_transform(ObjectiveSpec& spec, std::istream& in) {
    int d = 0;
    if (!(in >> d)) throw std::invalid_argument("transform: missing dimension");
    if (d != spec.dimension) {
        throw std::invalid_argument("transform: dimension " + std::to_string(d) +
                                    " does not match objective dimension " +
                                    std::to_string(spec.dimension));
    }
    auto n = static_cast<std::size_t>(d);
    std::vector<double> shift(n);
    for (auto& v : shift) {
        if (!(in >> v)) throw std::invalid_argument("transform: short shift row");
    }
    std::vector<double> rot(n * n);
    for (auto& v : rot) {
        if (!(in >> v)) throw std::invalid_argument("transform: short rotation matrix");
    }

    constexpr double tol = 1e-9;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            double dot = 0.0;
            for (std::size_t k = 0; k < n; ++k) dot += rot[k * n + i] * rot[k * n + j];
            double expect = i == j ? 1.0 : 0.0;
            if (std::fabs(dot - expect) > tol) {
                throw std::invalid_argument("transform: rotation matrix is not orthonormal");
            }
        }
    }

    spec.shift = std::move(shift);
    spec.rotation = std::move(rot);
}

inline void load_transform(ObjectiveSpec& spec, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("transform: cannot open " + path);
    load_transform(spec, in);
}

}  // namespace eade::bench
