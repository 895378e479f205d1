#include "tdho/grid.hpp"

#include <cmath>

#include "tdho/errors.hpp"

namespace tdho {

const char* to_string(Frame f) {
    switch (f) {
        case Frame::to:
            return "to";
        case Frame::tm:
            return "tm";
        case Frame::tq:
            return "tq";
    }
    return "?";
}

Frame frame_from_string(const std::string& s) {
    if (s == "to" || s == "TO") return Frame::to;
    if (s == "tm" || s == "TM") return Frame::tm;
    if (s == "tq" || s == "TQ") return Frame::tq;
    throw ValidationError("Frame: unknown frame '" + s + "' (expected to, tm or tq)");
}

double UniformGrid::x(std::size_t i) const {
    if (i + 1 == n) return xmax;
    return xmin + dx() * static_cast<double>(i);
}

std::vector<double> UniformGrid::nodes() const {
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = x(i);
    return out;
}

void UniformGrid::validate() const {
    if (n < 64) throw ValidationError("WaveSample.grid: at least 64 nodes required");
    if (!(xmax > xmin) || !std::isfinite(xmin) || !std::isfinite(xmax)) {
        throw ValidationError("WaveSample.grid: need finite xmin < xmax");
    }
}

UniformGrid UniformGrid::symmetric(double half_width, std::size_t n) {
    return {-half_width, half_width, n};
}

std::vector<double> simpson_weights(std::size_t n, double dx) {
    std::vector<double> w(n, 0.0);
    if (n < 4) {
        for (std::size_t i = 0; i + 1 < n; ++i) {
            w[i] += 0.5 * dx;
            w[i + 1] += 0.5 * dx;
        }
        return w;
    }
    const std::size_t simpson_end = n % 2 == 1 ? n - 1 : n - 4;
    for (std::size_t i = 0; i < simpson_end; i += 2) {
        w[i] += dx / 3.0;
        w[i + 1] += 4.0 * dx / 3.0;
        w[i + 2] += dx / 3.0;
    }
    if (n % 2 == 0) {
        const std::size_t j = n - 4;
        w[j] += 3.0 * dx / 8.0;
        w[j + 1] += 9.0 * dx / 8.0;
        w[j + 2] += 9.0 * dx / 8.0;
        w[j + 3] += 3.0 * dx / 8.0;
    }
    return w;
}

double norm_squared(const WaveSample& w) {
    const auto wt = simpson_weights(w.values.size(), w.grid.dx());
    double acc = 0.0;
    for (std::size_t i = 0; i < wt.size(); ++i) acc += wt[i] * std::norm(w.values[i]);
    return acc;
}

}  // namespace tdho
