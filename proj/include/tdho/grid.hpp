#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

namespace tdho {

using cplx = std::complex<double>;

/// TO: unit mass, stiffness g2(t'); TM: time-dependent mass; TQ: TM plus dilation drift.
enum class Frame { to, tm, tq };

const char* to_string(Frame f);
Frame frame_from_string(const std::string& s);

struct UniformGrid {
    double xmin = -10.0;
    double xmax = 10.0;
    std::size_t n = 1025;

    double dx() const { return (xmax - xmin) / static_cast<double>(n - 1); }
    double x(std::size_t i) const;
    std::vector<double> nodes() const;
    /// Throws ValidationError unless n >= 64 and xmax > xmin.
    void validate() const;
    bool operator==(const UniformGrid& o) const = default;

    static UniformGrid symmetric(double half_width, std::size_t n);
};

struct WaveSample {
    Frame frame = Frame::to;
    double time = 0.0;  // t' for TO, t for TM and TQ
    UniformGrid grid;
    std::vector<cplx> values;
    std::vector<std::string> warnings;
};

/// Composite Simpson weights (3/8 rule on the last three panels when n is even).
std::vector<double> simpson_weights(std::size_t n, double dx);

double norm_squared(const WaveSample& w);

}  // namespace tdho
