#pragma once

#include <string>
#include <vector>

namespace tunnel {

struct Segment {
    double x_left;   // A
    double x_right;  // A (ignored for a semi-infinite final segment)
    double V;        // eV
};

// Ordered, contiguous constant-potential segments. The potential is zero to
// the left of the first segment and, unless the last segment is semi-infinite,
// zero to the right of the last one.
class PiecewisePotential {
public:
    PiecewisePotential() = default;
    explicit PiecewisePotential(std::vector<Segment> segments, bool semi_infinite_last = false);

    static PiecewisePotential free();
    static PiecewisePotential square(double V0, double d);
    static PiecewisePotential step(double V0, double x0 = 0.0);
    static PiecewisePotential double_barrier(double V0, double d, double gap);

    const std::vector<Segment>& segments() const { return segments_; }
    bool empty() const { return segments_.empty(); }
    bool semi_infinite_last() const { return semi_infinite_; }

    double left_edge() const;
    // Right edge of the last finite segment, or its left edge when semi-infinite.
    double right_edge() const;
    // Potential of the region beyond the right edge.
    double asymptotic_right() const;
    double value_at(double x) const;

    // Mirror image x -> (left_edge + right_edge) - x. Only defined for finite potentials.
    PiecewisePotential reversed() const;

    std::string describe() const;

private:
    void validate() const;

    std::vector<Segment> segments_;
    bool semi_infinite_ = false;
};

}  // namespace tunnel
