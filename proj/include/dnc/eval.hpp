#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dnc/tactile.hpp"
#include "dnc/vision.hpp"

// Quantitative metrics over completed traces and saliency maps: amplification
// ratio, adaptation level, adaptation-speed comparison and overlap against
// labeled masks.
namespace dnc::eval {

struct LabelMask {
    int cols = 0;
    int rows = 0;
    std::vector<std::uint8_t> cells;  // 1 = labeled important region
};

struct OverlapReport {
    double recall = 1.0;   // fraction of labeled cells also marked salient
    double jaccard = 1.0;  // intersection over union, reported alongside
    std::size_t labeled = 0;
    std::size_t hit = 0;
    bool vacuous = false;  // no labeled cell anywhere; recall defined as 1.0
    std::vector<double> per_frame_recall;
};

struct SpeedReport {
    std::optional<double> fast_time_s;  // time to 50% attenuation
    std::optional<double> slow_time_s;
    bool fast_is_faster = false;
    std::string note;
};

// 100 * peak(gain-scaled output) / peak(unity-gain output). Both traces must
// share the same stimulus timeline.
double amplification_ratio(const tactile::GraspTrace& trace,
                           const tactile::GraspTrace& baseline);

// 100 * (1 - output(t) / output at the trace's `stable` marker). Throws if t
// precedes stabilization or the trace carries no marker.
double adaptation_level(const tactile::GraspTrace& trace, double t_s);

// Fraction of labeled-salient cells (over all frames) the method also marks
// salient. Labels with no marked cell anywhere count as vacuous (1.0, flagged).
OverlapReport overlap_rate(const std::vector<vision::SaliencyMap>& maps,
                           const std::vector<LabelMask>& labels);

// Time to 50% attenuation for both schedules, measured from each trace's
// stable marker; fast must be strictly faster to satisfy the comparison.
SpeedReport speed_comparison(const tactile::GraspTrace& fast_trace,
                             const tactile::GraspTrace& slow_trace);

}  // namespace dnc::eval
