#pragma once

#include <Eigen/Core>
#include <stdexcept>
#include <string>

namespace devstrip {

using Vec3 = Eigen::Vector3d;

// Two knot values closer than this are treated as the same knot.
inline constexpr double kKnotTol = 1e-9;

class ConversionError : public std::runtime_error {
public:
    explicit ConversionError(const std::string& msg) : std::runtime_error(msg) {}
};

class DegeneracyError : public std::runtime_error {
public:
    explicit DegeneracyError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace devstrip
