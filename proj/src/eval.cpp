#include "dnc/eval.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dnc::eval {

namespace {

std::size_t stable_index(const tactile::GraspTrace& trace) {
    const auto idx = trace.find_marker("stable");
    if (!idx) throw std::invalid_argument("trace has no stable marker");
    return *idx;
}

std::size_t row_at(const tactile::GraspTrace& trace, double t_s) {
    // last row with t <= t_s
    std::size_t best = trace.rows.size();
    for (std::size_t i = 0; i < trace.rows.size(); ++i) {
        if (trace.rows[i].t_s <= t_s + 1e-12) best = i;
        else break;
    }
    if (best == trace.rows.size()) throw std::invalid_argument("time before trace start");
    return best;
}

std::optional<double> time_to_half(const tactile::GraspTrace& trace) {
    const std::size_t s = stable_index(trace);
    const double ref = trace.rows[s].output;
    if (!(ref > 0.0)) return std::nullopt;
    for (std::size_t i = s; i < trace.rows.size(); ++i)
        if (trace.rows[i].output < 0.5 * ref) return trace.rows[i].t_s - trace.rows[s].t_s;
    return std::nullopt;
}

}  // namespace

double amplification_ratio(const tactile::GraspTrace& trace,
                           const tactile::GraspTrace& baseline) {
    if (trace.rows.size() != baseline.rows.size())
        throw std::invalid_argument("amplification_ratio: traces differ in length");
    double peak = 0.0, base_peak = 0.0;
    for (std::size_t i = 0; i < trace.rows.size(); ++i) {
        if (std::abs(trace.rows[i].t_s - baseline.rows[i].t_s) > 1e-12)
            throw std::invalid_argument("amplification_ratio: timelines differ");
        peak = std::max(peak, trace.rows[i].output);
        base_peak = std::max(base_peak, baseline.rows[i].output);
    }
    if (!(base_peak > 0.0))
        throw std::invalid_argument("amplification_ratio: baseline has no response");
    return 100.0 * peak / base_peak;
}

double adaptation_level(const tactile::GraspTrace& trace, double t_s) {
    const std::size_t s = stable_index(trace);
    if (t_s + 1e-12 < trace.rows[s].t_s)
        throw std::invalid_argument("adaptation_level: time precedes stabilization");
    const double ref = trace.rows[s].output;
    if (!(ref > 0.0)) throw std::invalid_argument("adaptation_level: zero reference output");
    const double out = trace.rows[row_at(trace, t_s)].output;
    return 100.0 * (1.0 - out / ref);
}

OverlapReport overlap_rate(const std::vector<vision::SaliencyMap>& maps,
                           const std::vector<LabelMask>& labels) {
    if (maps.size() != labels.size())
        throw std::invalid_argument("overlap_rate: sequence lengths differ");
    OverlapReport rep;
    std::size_t union_count = 0, intersection = 0;
    for (std::size_t f = 0; f < maps.size(); ++f) {
        const auto& m = maps[f];
        const auto& l = labels[f];
        if (m.cols != l.cols || m.rows != l.rows ||
            m.binary.size() != l.cells.size())
            throw std::invalid_argument("overlap_rate: mask dimensions differ from maps");
        std::size_t frame_labeled = 0, frame_hit = 0;
        for (std::size_t i = 0; i < m.binary.size(); ++i) {
            const bool salient = m.binary[i] == 0;
            const bool labeled = l.cells[i] != 0;
            if (labeled) {
                ++frame_labeled;
                if (salient) ++frame_hit;
            }
            if (labeled || salient) ++union_count;
            if (labeled && salient) ++intersection;
        }
        rep.labeled += frame_labeled;
        rep.hit += frame_hit;
        rep.per_frame_recall.push_back(
            frame_labeled == 0 ? 1.0 : static_cast<double>(frame_hit) / frame_labeled);
    }
    rep.vacuous = rep.labeled == 0;
    rep.recall = rep.vacuous ? 1.0 : static_cast<double>(rep.hit) / rep.labeled;
    rep.jaccard = union_count == 0 ? 1.0 : static_cast<double>(intersection) / union_count;
    return rep;
}

SpeedReport speed_comparison(const tactile::GraspTrace& fast_trace,
                             const tactile::GraspTrace& slow_trace) {
    SpeedReport rep;
    rep.fast_time_s = time_to_half(fast_trace);
    rep.slow_time_s = time_to_half(slow_trace);
    if (!rep.fast_time_s || !rep.slow_time_s) {
        rep.fast_is_faster = false;
        rep.note = "50% attenuation unreached";
        if (!rep.fast_time_s) rep.note += " (fast)";
        if (!rep.slow_time_s) rep.note += " (slow)";
        return rep;
    }
    rep.fast_is_faster = *rep.fast_time_s < *rep.slow_time_s;
    if (!rep.fast_is_faster)
        rep.note = "fast schedule is not strictly faster than slow";
    return rep;
}

}  // namespace dnc::eval
