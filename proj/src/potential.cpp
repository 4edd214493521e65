#include "tunnel/potential.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace tunnel {

PiecewisePotential::PiecewisePotential(std::vector<Segment> segments, bool semi_infinite_last)
    : segments_(std::move(segments)), semi_infinite_(semi_infinite_last) {
    if (semi_infinite_ && !segments_.empty()) {
        segments_.back().x_right = std::numeric_limits<double>::infinity();
    }
    validate();
}

void PiecewisePotential::validate() const {
    if (semi_infinite_ && segments_.empty()) {
        throw std::invalid_argument("semi-infinite flag requires at least one segment");
    }
    for (std::size_t i = 0; i < segments_.size(); ++i) {
        const Segment& s = segments_[i];
        const bool last_open = semi_infinite_ && i + 1 == segments_.size();
        if (!std::isfinite(s.x_left) || !std::isfinite(s.V) || (!last_open && !std::isfinite(s.x_right))) {
            throw std::invalid_argument("segment " + std::to_string(i) + " has non-finite fields");
        }
        if (!last_open && !(s.x_left < s.x_right)) {
            throw std::invalid_argument("segment " + std::to_string(i) + " needs x_left < x_right");
        }
        if (i > 0) {
            const double prev = segments_[i - 1].x_right;
            const double tol = 1e-12 * std::max({1.0, std::abs(prev), std::abs(s.x_left)});
            if (std::abs(prev - s.x_left) > tol) {
                throw std::invalid_argument("segments " + std::to_string(i - 1) + " and " + std::to_string(i) +
                                            " are not contiguous");
            }
        }
    }
}

PiecewisePotential PiecewisePotential::free() { return PiecewisePotential(); }

PiecewisePotential PiecewisePotential::square(double V0, double d) {
    if (d < 0.0) throw std::invalid_argument("barrier width must be non-negative");
    if (d == 0.0) return free();
    return PiecewisePotential({{0.0, d, V0}});
}

PiecewisePotential PiecewisePotential::step(double V0, double x0) {
    return PiecewisePotential({{x0, std::numeric_limits<double>::infinity(), V0}}, true);
}

PiecewisePotential PiecewisePotential::double_barrier(double V0, double d, double gap) {
    if (d <= 0.0 || gap < 0.0) throw std::invalid_argument("double barrier needs d > 0 and gap >= 0");
    if (gap == 0.0) return PiecewisePotential({{0.0, 2.0 * d, V0}});
    return PiecewisePotential({{0.0, d, V0}, {d, d + gap, 0.0}, {d + gap, 2.0 * d + gap, V0}});
}

double PiecewisePotential::left_edge() const { return segments_.empty() ? 0.0 : segments_.front().x_left; }

double PiecewisePotential::right_edge() const {
    if (segments_.empty()) return 0.0;
    return semi_infinite_ ? segments_.back().x_left : segments_.back().x_right;
}

double PiecewisePotential::asymptotic_right() const { return semi_infinite_ ? segments_.back().V : 0.0; }

double PiecewisePotential::value_at(double x) const {
    for (const Segment& s : segments_) {
        if (x >= s.x_left && x < s.x_right) return s.V;
    }
    return 0.0;
}

PiecewisePotential PiecewisePotential::reversed() const {
    if (semi_infinite_) throw std::invalid_argument("cannot reverse a potential with a semi-infinite segment");
    const double a = left_edge(), b = right_edge();
    std::vector<Segment> out;
    out.reserve(segments_.size());
    for (auto it = segments_.rbegin(); it != segments_.rend(); ++it) {
        out.push_back({a + b - it->x_right, a + b - it->x_left, it->V});
    }
    // keep the mirrored interfaces bitwise contiguous
    for (std::size_t i = 1; i < out.size(); ++i) out[i].x_left = out[i - 1].x_right;
    return PiecewisePotential(std::move(out));
}

std::string PiecewisePotential::describe() const {
    if (segments_.empty()) return "free";
    std::ostringstream os;
    os.precision(10);
    for (std::size_t i = 0; i < segments_.size(); ++i) {
        const Segment& s = segments_[i];
        if (i) os << ";";
        os << "[" << s.x_left << "," << (semi_infinite_ && i + 1 == segments_.size() ? std::string("inf")
                                                                                        : std::to_string(s.x_right))
           << "]:" << s.V;
    }
    return os.str();
}

}  // namespace tunnel
