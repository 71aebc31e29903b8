#pragma once

#include <string>
#include <vector>

#include "ethopipe/classify.hpp"
#include "ethopipe/ethogram.hpp"

namespace ethopipe {

/// Hysteresis event extraction: an event opens at the first timestamp with
/// p >= theta_on and closes at the first subsequent timestamp with
/// p < theta_off; the event end is the last timestamp with p >= theta_off.
/// Events shorter than min_dur_s are discarded; an event still open at the
/// end of the timeline closes at the final timestamp.
std::vector<EthogramInterval> threshold_events(const ProbabilityTimeline& timeline,
                                               const std::string& category,
                                               double theta_on = 0.5, double theta_off = 0.4,
                                               double min_dur_s = 0.5);

/// overlap / union of two intervals; symmetric, in [0,1], 1 iff equal.
double temporal_iou(const EthogramInterval& a, const EthogramInterval& b);

struct EventMatchReport {
    struct MatchedPair {
        int pred_index = 0;
        int gt_index = 0;
        double iou = 0;
        double latency_s = 0;  // pred onset - gt onset, positive = late
    };
    int tp = 0;
    int fp = 0;
    int fn = 0;
    std::vector<MatchedPair> matches;
    double mean_iou = 0;        // over matched pairs, 0 when none
    double mean_latency_s = 0;  // over matched pairs, 0 when none
};

/// Greedy one-to-one matching in descending temporal IoU; pairs below
/// iou_min stay unmatched. Unmatched predictions count as FP, unmatched
/// ground truth as FN. Each input list must be overlap-free.
EventMatchReport match_events(const std::vector<EthogramInterval>& pred,
                              const std::vector<EthogramInterval>& gt, double iou_min = 0.3);

/// Signed onset latency in seconds: pred_onset - gt_onset (late = positive).
double onset_latency(double pred_onset_s, double gt_onset_s);

/// Standalone SVG: probability curve in blue, ground-truth bands in red,
/// axes in seconds / probability. Byte-deterministic for identical input.
std::string render_timeline_svg(const ProbabilityTimeline& timeline,
                                const std::vector<EthogramInterval>& gt,
                                const std::string& category);

/// Report CSV `category,tp,fp,fn,mean_iou,mean_latency_s`.
std::string serialize_match_report_csv(
    const std::vector<std::pair<std::string, EventMatchReport>>& per_category);
void write_match_report_csv(
    const std::vector<std::pair<std::string, EventMatchReport>>& per_category,
    const std::string& path);

}  // namespace ethopipe
