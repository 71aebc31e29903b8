#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ethopipe/errors.hpp"
#include "ethopipe/evaluate.hpp"
#include "ethopipe/rng.hpp"
#include "test_util.hpp"

using namespace ethopipe;

namespace {

// Samples every 0.02 s; probability `hi` inside [on, off], `lo` elsewhere.
ProbabilityTimeline step_timeline(double t_end, double on, double off, double hi, double lo) {
    ProbabilityTimeline tl;
    tl.categories = {"RG", "background"};
    const int n = static_cast<int>(t_end * 50) + 1;
    for (int k = 0; k < n; ++k) {
        const double t = k / 50.0;
        const double p = (t >= on && t <= off) ? hi : lo;
        tl.times_s.push_back(t);
        tl.probs.push_back({p, 1.0 - p});
    }
    return tl;
}

ProbabilityTimeline random_timeline(Rng& rng, int n) {
    ProbabilityTimeline tl;
    tl.categories = {"RG", "background"};
    for (int k = 0; k < n; ++k) {
        const double p = rng.uniform();
        tl.times_s.push_back(k * 0.25);
        tl.probs.push_back({p, 1.0 - p});
    }
    return tl;
}

}  // namespace

TEST_CASE("threshold_events: sustained high confidence gives one exact event") {
    const ProbabilityTimeline tl = step_timeline(35.0, 9.4, 30.28, 0.9, 0.01);
    const auto events = threshold_events(tl, "RG");
    REQUIRE(events.size() == 1);
    CHECK(events[0].start_s == 9.4);
    CHECK(events[0].end_s == 30.28);
    CHECK(events[0].label == "RG");
}

TEST_CASE("threshold_events: sub-min-duration spike is discarded") {
    // 0.6 for 0.2 s: samples at 1.00..1.20
    const ProbabilityTimeline tl = step_timeline(5.0, 1.0, 1.2, 0.6, 0.05);
    CHECK(threshold_events(tl, "RG", 0.5, 0.4, 0.5).empty());
    // with a looser filter it appears
    CHECK(threshold_events(tl, "RG", 0.5, 0.4, 0.1).size() == 1);
}

TEST_CASE("threshold_events: dip above theta_off keeps one continuous event") {
    ProbabilityTimeline tl;
    tl.categories = {"RG"};
    const double probs[] = {0.1, 0.9, 0.9, 0.45, 0.9, 0.9, 0.1};
    for (int k = 0; k < 7; ++k) {
        tl.times_s.push_back(k * 1.0);
        tl.probs.push_back({probs[k]});
    }
    const auto events = threshold_events(tl, "RG", 0.5, 0.4, 0.5);
    REQUIRE(events.size() == 1);
    CHECK(events[0].start_s == 1.0);
    CHECK(events[0].end_s == 5.0);
}

TEST_CASE("threshold_events: open event closes at the final timestamp") {
    const ProbabilityTimeline tl = step_timeline(10.0, 8.0, 10.0, 0.95, 0.0);
    const auto events = threshold_events(tl, "RG");
    REQUIRE(events.size() == 1);
    CHECK(events[0].end_s == 10.0);
}

TEST_CASE("threshold_events: errors") {
    const ProbabilityTimeline tl = step_timeline(2.0, 0.5, 1.0, 0.9, 0.0);
    CHECK_THROWS_WITH_AS(threshold_events(tl, "RX"), doctest::Contains("unknown category"),
                         ValidationError);
    CHECK_THROWS_AS(threshold_events(tl, "RG", 0.4, 0.5), ValidationError);
}

TEST_CASE("threshold_events: outputs are disjoint, ordered, and long enough") {
    Rng rng(77);
    for (int trial = 0; trial < 40; ++trial) {
        const ProbabilityTimeline tl = random_timeline(rng, 120);
        const auto events = threshold_events(tl, "RG", 0.6, 0.35, 0.5);
        for (std::size_t i = 0; i < events.size(); ++i) {
            CHECK(events[i].end_s - events[i].start_s >= 0.5);
            if (i) CHECK(events[i].start_s > events[i - 1].end_s);
        }
    }
}

TEST_CASE("threshold_events: raising theta_on never yields more or longer events") {
    Rng rng(78);
    for (int trial = 0; trial < 30; ++trial) {
        const ProbabilityTimeline tl = random_timeline(rng, 150);
        double prev_total = std::numeric_limits<double>::infinity();
        std::size_t prev_count = SIZE_MAX;
        for (double theta_on : {0.4, 0.55, 0.7, 0.85}) {
            const auto events = threshold_events(tl, "RG", theta_on, 0.35, 0.0);
            double total = 0;
            for (const auto& e : events) total += e.end_s - e.start_s;
            CHECK(events.size() <= prev_count);
            CHECK(total <= prev_total + 1e-12);
            prev_count = events.size();
            prev_total = total;
        }
    }
}

TEST_CASE("temporal_iou: symmetry, range, arithmetic") {
    const EthogramInterval a{"RG", 0, 10}, b{"RG", 5, 15};
    CHECK(temporal_iou(a, b) == doctest::Approx(1.0 / 3.0));
    CHECK(temporal_iou(a, b) == temporal_iou(b, a));
    CHECK(temporal_iou(a, a) == 1.0);
    CHECK(temporal_iou(a, {"RG", 20, 30}) == 0.0);
    Rng rng(5);
    for (int t = 0; t < 100; ++t) {
        const double s1 = rng.uniform(0, 50), e1 = s1 + rng.uniform(0.1, 20);
        const double s2 = rng.uniform(0, 50), e2 = s2 + rng.uniform(0.1, 20);
        const double iou = temporal_iou({"x", s1, e1}, {"x", s2, e2});
        CHECK(iou >= 0.0);
        CHECK(iou <= 1.0);
    }
}

TEST_CASE("match_events: identity and the missed-bout case") {
    const EventMatchReport exact = match_events({{"RG", 9.4, 30.28}}, {{"RG", 9.4, 30.28}});
    CHECK(exact.tp == 1);
    CHECK(exact.fp == 0);
    CHECK(exact.fn == 0);
    CHECK(exact.mean_iou == 1.0);

    // ground truth with no overlapping prediction at all
    const EventMatchReport missed = match_events({}, {{"RH", 2.42, 9.4}});
    CHECK(missed.tp == 0);
    CHECK(missed.fn == 1);

    // IoU 1/3 is above the 0.3 default threshold
    const EventMatchReport third = match_events({{"RG", 0, 10}}, {{"RG", 5, 15}});
    CHECK(third.tp == 1);
    CHECK(third.matches[0].iou == doctest::Approx(1.0 / 3.0));
    CHECK(third.matches[0].latency_s == doctest::Approx(-5.0));
}

TEST_CASE("match_events: TP+FN = |gt| and TP+FP = |pred| on random inputs") {
    Rng rng(31337);
    for (int trial = 0; trial < 50; ++trial) {
        auto gen = [&](int max_n) {
            std::vector<EthogramInterval> out;
            double t = rng.uniform(0.0, 3.0);
            const int n = static_cast<int>(rng.uniform_int(max_n + 1));
            for (int i = 0; i < n; ++i) {
                const double s = t + rng.uniform(0.1, 4.0);
                const double e = s + rng.uniform(0.2, 6.0);
                out.push_back({"RG", s, e});
                t = e;
            }
            return out;
        };
        const auto pred = gen(6), gt = gen(6);
        const EventMatchReport rep = match_events(pred, gt);
        CHECK(rep.tp + rep.fn == static_cast<int>(gt.size()));
        CHECK(rep.tp + rep.fp == static_cast<int>(pred.size()));
        for (const auto& m : rep.matches) CHECK(m.iou >= 0.3);
    }
}

TEST_CASE("match_events: overlapping input list is rejected") {
    CHECK_THROWS_WITH_AS(match_events({{"RG", 0, 5}, {"RG", 4, 8}}, {}),
                         doctest::Contains("overlapping"), ValidationError);
}

TEST_CASE("onset_latency: signed convention") {
    CHECK(onset_latency(1.48, 0.0) == 1.48);
    CHECK(onset_latency(3.0, 3.0) == 0.0);
    CHECK(onset_latency(2.0, 3.0) == -1.0);
    CHECK_THROWS_AS(onset_latency(-1.0, 0.0), ValidationError);
}

TEST_CASE("render_timeline_svg: byte-deterministic with curve and band") {
    const ProbabilityTimeline tl = step_timeline(35.0, 9.4, 30.28, 0.9, 0.02);
    const std::vector<EthogramInterval> gt = {{"RG", 9.4, 30.28}};
    const std::string a = render_timeline_svg(tl, gt, "RG");
    const std::string b = render_timeline_svg(tl, gt, "RG");
    CHECK(a == b);
    CHECK(a.find("<polyline") != std::string::npos);
    CHECK(a.find("#dc143c") != std::string::npos);   // red band
    CHECK(a.find("#1f4f9f") != std::string::npos);   // blue curve
    CHECK(a.find("</svg>") != std::string::npos);
}

TEST_CASE("render_timeline_svg: empty inputs still give a document with axes") {
    ProbabilityTimeline tl;
    tl.categories = {"RG"};
    const std::string svg = render_timeline_svg(tl, {}, "RG");
    CHECK(svg.find("<line") != std::string::npos);
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK(svg.find("<polyline") == std::string::npos);
}

TEST_CASE("match report csv: stable layout") {
    EventMatchReport rep;
    rep.tp = 1;
    rep.fp = 2;
    rep.fn = 0;
    rep.mean_iou = 0.5;
    rep.mean_latency_s = 1.48;
    const std::string csv = serialize_match_report_csv({{"RG", rep}});
    CHECK(csv == "category,tp,fp,fn,mean_iou,mean_latency_s\nRG,1,2,0,0.500000,1.480000\n");
}
