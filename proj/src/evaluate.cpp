#include "ethopipe/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "ethopipe/errors.hpp"
#include "ethopipe/svg.hpp"

namespace ethopipe {

std::vector<EthogramInterval> threshold_events(const ProbabilityTimeline& timeline,
                                               const std::string& category, double theta_on,
                                               double theta_off, double min_dur_s) {
    if (theta_off > theta_on)
        throw ValidationError("threshold_events: theta_off must be <= theta_on");
    const auto it = std::find(timeline.categories.begin(), timeline.categories.end(), category);
    if (it == timeline.categories.end())
        throw ValidationError("threshold_events: unknown category '" + category + "'");
    const std::size_t col = static_cast<std::size_t>(it - timeline.categories.begin());
    for (std::size_t i = 1; i < timeline.times_s.size(); ++i)
        if (timeline.times_s[i] <= timeline.times_s[i - 1])
            throw ValidationError("threshold_events: times must be strictly increasing");

    std::vector<EthogramInterval> events;
    bool open = false;
    double start = 0, last_ok = 0;
    auto close = [&](double end) {
        if (end - start >= min_dur_s) events.push_back({category, start, end});
        open = false;
    };
    for (std::size_t i = 0; i < timeline.times_s.size(); ++i) {
        const double t = timeline.times_s[i];
        const double p = timeline.probs[i][col];
        if (!open) {
            if (p >= theta_on) {
                open = true;
                start = t;
                last_ok = t;
            }
        } else {
            if (p >= theta_off)
                last_ok = t;
            else
                close(last_ok);
        }
    }
    if (open) close(timeline.times_s.back());
    return events;
}

double temporal_iou(const EthogramInterval& a, const EthogramInterval& b) {
    const double overlap = std::max(0.0, std::min(a.end_s, b.end_s) - std::max(a.start_s, b.start_s));
    const double uni = (a.end_s - a.start_s) + (b.end_s - b.start_s) - overlap;
    return uni > 0 ? overlap / uni : 0.0;
}

namespace {

void check_list_no_overlap(const std::vector<EthogramInterval>& intervals, const char* which) {
    std::vector<std::pair<double, double>> spans;
    for (const auto& iv : intervals) spans.push_back({iv.start_s, iv.end_s});
    std::sort(spans.begin(), spans.end());
    for (std::size_t i = 1; i < spans.size(); ++i)
        if (spans[i].first < spans[i - 1].second)
            throw ValidationError(std::string("match_events: overlapping intervals in ") + which +
                                  " list");
}

}  // namespace

EventMatchReport match_events(const std::vector<EthogramInterval>& pred,
                              const std::vector<EthogramInterval>& gt, double iou_min) {
    check_list_no_overlap(pred, "prediction");
    check_list_no_overlap(gt, "ground-truth");

    struct Cand {
        double iou;
        int pi, gi;
    };
    std::vector<Cand> cands;
    for (int pi = 0; pi < static_cast<int>(pred.size()); ++pi)
        for (int gi = 0; gi < static_cast<int>(gt.size()); ++gi) {
            const double iou = temporal_iou(pred[pi], gt[gi]);
            if (iou >= iou_min) cands.push_back({iou, pi, gi});
        }
    std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
        if (a.iou != b.iou) return a.iou > b.iou;
        if (a.pi != b.pi) return a.pi < b.pi;
        return a.gi < b.gi;
    });

    EventMatchReport rep;
    std::vector<bool> pred_used(pred.size(), false), gt_used(gt.size(), false);
    for (const Cand& c : cands) {
        if (pred_used[c.pi] || gt_used[c.gi]) continue;
        pred_used[c.pi] = true;
        gt_used[c.gi] = true;
        rep.matches.push_back(
            {c.pi, c.gi, c.iou, onset_latency(pred[c.pi].start_s, gt[c.gi].start_s)});
    }
    rep.tp = static_cast<int>(rep.matches.size());
    rep.fp = static_cast<int>(pred.size()) - rep.tp;
    rep.fn = static_cast<int>(gt.size()) - rep.tp;
    for (const auto& m : rep.matches) {
        rep.mean_iou += m.iou;
        rep.mean_latency_s += m.latency_s;
    }
    if (!rep.matches.empty()) {
        rep.mean_iou /= rep.matches.size();
        rep.mean_latency_s /= rep.matches.size();
    }
    return rep;
}

double onset_latency(double pred_onset_s, double gt_onset_s) {
    if (pred_onset_s < 0 || gt_onset_s < 0)
        throw ValidationError("onset_latency: onsets must be >= 0");
    return pred_onset_s - gt_onset_s;
}

std::string render_timeline_svg(const ProbabilityTimeline& timeline,
                                const std::vector<EthogramInterval>& gt,
                                const std::string& category) {
    const double W = 800, H = 400, ml = 60, mr = 20, mt = 24, mb = 46;
    SvgDoc svg(W, H);

    double t_max = 1.0;
    if (!timeline.times_s.empty()) t_max = std::max(t_max, timeline.times_s.back());
    for (const auto& iv : gt) t_max = std::max(t_max, iv.end_s);

    auto px = [&](double t) { return ml + t / t_max * (W - ml - mr); };
    auto py = [&](double p) { return H - mb - p * (H - mt - mb); };

    // ground-truth bands first, curve on top
    for (const auto& iv : gt)
        svg.rect(px(iv.start_s), py(1.0), px(iv.end_s) - px(iv.start_s), py(0.0) - py(1.0),
                 "#dc143c", 0.35);

    const auto cit = std::find(timeline.categories.begin(), timeline.categories.end(), category);
    if (cit != timeline.categories.end() && !timeline.times_s.empty()) {
        const std::size_t col = static_cast<std::size_t>(cit - timeline.categories.begin());
        std::vector<std::pair<double, double>> pts;
        for (std::size_t i = 0; i < timeline.times_s.size(); ++i)
            pts.push_back({px(timeline.times_s[i]), py(timeline.probs[i][col])});
        svg.polyline(pts, "#1f4f9f", 1.5);
    }

    svg.line(ml, H - mb, W - mr, H - mb, "black");
    svg.line(ml, H - mb, ml, mt, "black");
    for (int i = 0; i <= 4; ++i) {
        const double p = i / 4.0;
        char lab[16];
        std::snprintf(lab, sizeof(lab), "%.2f", p);
        svg.line(ml - 4, py(p), ml, py(p), "black");
        svg.text(ml - 8, py(p) + 4, lab, 11, "end");
    }
    // x ticks at a 1-2-5 step close to t_max / 8
    double step = std::pow(10.0, std::floor(std::log10(t_max / 8.0)));
    if (t_max / 8.0 / step >= 5)
        step *= 5;
    else if (t_max / 8.0 / step >= 2)
        step *= 2;
    for (double t = 0; t <= t_max + 1e-9; t += step) {
        char lab[32];
        std::snprintf(lab, sizeof(lab), "%g", t);
        svg.line(px(t), H - mb, px(t), H - mb + 4, "black");
        svg.text(px(t), H - mb + 18, lab, 11, "middle");
    }
    svg.text((ml + W - mr) / 2, H - 10, "time (s)", 12, "middle");
    svg.text(14, mt + 8, "p", 12, "start");
    svg.text(ml, mt - 8, "category: " + category + "  (curve: prediction, band: ground truth)",
             12, "start");
    return svg.str();
}

std::string serialize_match_report_csv(
    const std::vector<std::pair<std::string, EventMatchReport>>& per_category) {
    std::string out = "category,tp,fp,fn,mean_iou,mean_latency_s\n";
    char buf[160];
    for (const auto& [category, rep] : per_category) {
        std::snprintf(buf, sizeof(buf), ",%d,%d,%d,%.6f,%.6f\n", rep.tp, rep.fp, rep.fn,
                      rep.mean_iou, rep.mean_latency_s);
        out += category;
        out += buf;
    }
    return out;
}

void write_match_report_csv(
    const std::vector<std::pair<std::string, EventMatchReport>>& per_category,
    const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write report: " + path);
    out << serialize_match_report_csv(per_category);
    if (!out) throw IoError("write failed: " + path);
}

}  // namespace ethopipe
