#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ethopipe/detection.hpp"
#include "ethopipe/errors.hpp"
#include "ethopipe/imageio.hpp"
#include "ethopipe/rng.hpp"
#include "test_util.hpp"

using namespace ethopipe;

namespace {

Mask random_mask(Rng& rng, int w, int h, double density) {
    Mask m(w, h);
    for (auto& b : m.bits) b = rng.bernoulli(density);
    return m;
}

Mask rect_mask(int w, int h, int x0, int y0, int x1, int y1) {
    Mask m(w, h);
    for (int y = y0; y < y1; ++y)
        for (int x = x0; x < x1; ++x) m.set(x, y, 1);
    return m;
}

}  // namespace

TEST_CASE("coverage_metrics: identity and empty prediction") {
    const Mask gt = rect_mask(8, 8, 2, 2, 6, 6);
    CHECK(coverage_metrics(gt, gt) == std::pair{1.0, 0.0});
    const Mask empty(8, 8);
    CHECK(coverage_metrics(empty, gt) == std::pair{0.0, 0.0});
}

TEST_CASE("coverage_metrics: errors") {
    CHECK_THROWS_AS(coverage_metrics(Mask(4, 4), Mask(5, 4)), ValidationError);
    CHECK_THROWS_WITH_AS(coverage_metrics(Mask(4, 4), Mask(4, 4)),
                         doctest::Contains("empty ground-truth"), ValidationError);
}

TEST_CASE("coverage_metrics: equals the per-pixel counting oracle exactly on 200 pairs") {
    Rng rng(2718);
    for (int trial = 0; trial < 200; ++trial) {
        const Mask pred = random_mask(rng, 32, 32, 0.3);
        Mask gt = random_mask(rng, 32, 32, 0.3);
        if (gt.count() == 0) gt.set(5, 5, 1);

        // independent oracle: explicit pixel loop
        int inter = 0, pred_n = 0, gt_n = 0;
        for (int y = 0; y < 32; ++y)
            for (int x = 0; x < 32; ++x) {
                const bool p = pred.get(x, y), g = gt.get(x, y);
                inter += p && g;
                pred_n += p;
                gt_n += g;
            }
        const double cov_oracle = static_cast<double>(inter) / gt_n;
        const double spill_oracle = pred_n == 0 ? 0.0 : static_cast<double>(pred_n - inter) / pred_n;

        const auto [cov, spill] = coverage_metrics(pred, gt);
        CHECK(cov == cov_oracle);      // exact, not approximate
        CHECK(spill == spill_oracle);
        CHECK(cov >= 0.0);
        CHECK(cov <= 1.0);
        CHECK(spill >= 0.0);
        CHECK(spill <= 1.0);
    }
}

TEST_CASE("coverage_metrics: monotone under adding gt-interior pixels to pred") {
    Rng rng(31);
    const Mask gt = rect_mask(16, 16, 3, 3, 13, 13);
    Mask pred = rect_mask(16, 16, 5, 5, 9, 9);
    auto [cov_prev, spill_prev] = coverage_metrics(pred, gt);
    for (int step = 0; step < 30; ++step) {
        // add one random gt-interior pixel
        for (;;) {
            const int x = 3 + static_cast<int>(rng.uniform_int(10));
            const int y = 3 + static_cast<int>(rng.uniform_int(10));
            if (!pred.get(x, y)) {
                pred.set(x, y, 1);
                break;
            }
        }
        const auto [cov, spill] = coverage_metrics(pred, gt);
        CHECK(cov >= cov_prev);
        CHECK(spill <= spill_prev);
        cov_prev = cov;
        spill_prev = spill;
    }
}

TEST_CASE("classify_detection: rule table instances") {
    CHECK(classify_detection(1.00, 0.00).verdict == Verdict::accurate);
    // inclusive bounds straight from the protocol
    CHECK(classify_detection(0.95, 0.05).verdict == Verdict::accurate);
    CHECK(classify_detection(0.55, 0.01).verdict == Verdict::under_detection);
    CHECK(classify_detection(0.97, 0.06).verdict == Verdict::over_detection);

    const CoverageReport both = classify_detection(0.5, 0.5);
    CHECK(both.verdict == Verdict::under_detection);  // precedence
    CHECK(both.is_under);
    CHECK(both.is_over);

    CHECK_THROWS_AS(classify_detection(-0.1, 0.0), ValidationError);
    CHECK_THROWS_AS(classify_detection(0.5, 1.2), ValidationError);
}

TEST_CASE("sample_review_frames: distinct, sorted, deterministic") {
    const auto a = sample_review_frames(1000, 100, 7);
    CHECK(a.size() == 100);
    CHECK(std::is_sorted(a.begin(), a.end()));
    CHECK(std::adjacent_find(a.begin(), a.end()) == a.end());
    for (int v : a) {
        CHECK(v >= 0);
        CHECK(v < 1000);
    }
    CHECK(a == sample_review_frames(1000, 100, 7));
    CHECK(a != sample_review_frames(1000, 100, 8));

    const auto all = sample_review_frames(50, 50, 3);
    for (int i = 0; i < 50; ++i) CHECK(all[i] == i);

    CHECK_THROWS_AS(sample_review_frames(10, 11, 0), ValidationError);
}

TEST_CASE("video_accuracy: counting") {
    std::vector<CoverageReport> reports = {
        classify_detection(1.0, 0.0),
        classify_detection(0.99, 0.02),
        classify_detection(0.55, 0.01),
        classify_detection(0.99, 0.20),
    };
    const VideoAccuracyReport r = video_accuracy("v1", reports);
    CHECK(r.accuracy == 0.5);
    CHECK(r.n_accurate == 2);
    CHECK(r.n_under == 1);
    CHECK(r.n_over == 1);
    CHECK(r.n_frames_evaluated == 4);

    std::vector<CoverageReport> all_good(5, classify_detection(1.0, 0.0));
    CHECK(video_accuracy("v2", all_good).accuracy == 1.0);

    CHECK_THROWS_AS(video_accuracy("v3", {}), ValidationError);
}

TEST_CASE("aggregate_accuracy: mean and population SD") {
    std::vector<VideoAccuracyReport> reports(2);
    reports[0].accuracy = 0.4;
    reports[1].accuracy = 0.8;
    const auto [mean, sd] = aggregate_accuracy(reports);
    CHECK(mean == doctest::Approx(0.6));
    CHECK(sd == doctest::Approx(0.2));
    CHECK_THROWS_AS(aggregate_accuracy({}), ValidationError);
}

TEST_CASE("GroundTruthPlayback: rasterized annotations at confidence 1.0") {
    Dataset d;
    d.categories = {"macaque"};
    d.images.push_back({1, "frame_000000.png", 32, 24});
    Polygon p1, p2;
    p1.vertices = {{2, 2}, {10, 2}, {10, 10}, {2, 10}};
    p2.vertices = {{20, 12}, {28, 12}, {24, 20}};
    d.annotations.push_back({1, "macaque", p1});
    d.annotations.push_back({1, "macaque", p2});

    const GroundTruthPlayback playback(d);
    const FrameDetection det = playback.detect(0, 32, 24);
    REQUIRE(det.instances.size() == 2);
    CHECK(det.instances[0].confidence == 1.0);
    CHECK(det.instances[0].mask.count() == 64);  // 8x8 square

    CHECK_THROWS_AS(playback.detect(0, 640, 480), ValidationError);
    CHECK_THROWS_AS(playback.detect(5, 32, 24), ValidationError);
}

TEST_CASE("GroundTruthPlayback: one animal category per run") {
    Dataset d;
    d.categories = {"macaque", "stone"};
    d.images.push_back({1, "a.png", 8, 8});
    CHECK_THROWS_AS(GroundTruthPlayback{d}, ValidationError);
}

TEST_CASE("ExternalMaskImport: single-instance sidecar round trip") {
    testutil::TempDir tmp("maskdir");
    const Mask m = rect_mask(12, 10, 1, 1, 5, 7);
    write_mask_sidecar(tmp.path(), 0, {m});

    const ExternalMaskImport import(tmp.path());
    const FrameDetection det = import.detect(0, 12, 10);
    REQUIRE(det.instances.size() == 1);
    CHECK(det.instances[0].mask == m);
}

TEST_CASE("ExternalMaskImport: missing file names the frame") {
    testutil::TempDir tmp("maskmissing");
    write_mask_sidecar(tmp.path(), 0, {rect_mask(4, 4, 0, 0, 2, 2)});
    const ExternalMaskImport import(tmp.path());
    CHECK_THROWS_WITH_AS(import.detect(7, 4, 4), doctest::Contains("frame 7"), IoError);
}

TEST_CASE("ExternalMaskImport: dimension mismatch is reported") {
    testutil::TempDir tmp("maskdim");
    write_mask_sidecar(tmp.path(), 0, {rect_mask(640, 480, 0, 0, 10, 10)});
    const ExternalMaskImport import(tmp.path());
    CHECK_THROWS_WITH_AS(import.detect(0, 1920, 1080), doctest::Contains("640x480"),
                         ValidationError);
}

TEST_CASE("ExternalMaskImport: multi-instance gray levels via index.jsonl") {
    testutil::TempDir tmp("maskmulti");
    const Mask a = rect_mask(16, 16, 0, 0, 4, 4);
    const Mask b = rect_mask(16, 16, 10, 10, 15, 15);
    write_mask_sidecar(tmp.path(), 3, {a, b});
    write_mask_sidecar(tmp.path(), 0, {a});

    const ExternalMaskImport import(tmp.path());
    const FrameDetection multi = import.detect(3, 16, 16);
    REQUIRE(multi.instances.size() == 2);
    CHECK(multi.instances[0].mask == a);
    CHECK(multi.instances[1].mask == b);
    CHECK(import.detect(0, 16, 16).instances.size() == 1);
}

TEST_CASE("evaluate_frame: single instance reduces to coverage_metrics") {
    const Mask gt = rect_mask(16, 16, 4, 4, 12, 12);
    const Mask pred = rect_mask(16, 16, 4, 4, 12, 10);
    FrameDetection det;
    det.instances.push_back({pred, 1.0});
    const CoverageReport r = evaluate_frame(det, {gt});
    const auto [cov, spill] = coverage_metrics(pred, gt);
    CHECK(r.coverage == cov);
    CHECK(r.spill == spill);
}

TEST_CASE("evaluate_frame: unmatched prediction counts as pure spill") {
    const Mask gt = rect_mask(16, 16, 0, 0, 4, 4);
    FrameDetection det;
    det.instances.push_back({gt, 1.0});                          // matches
    det.instances.push_back({rect_mask(16, 16, 10, 10, 14, 14), 1.0});  // off-animal
    const CoverageReport r = evaluate_frame(det, {gt});
    CHECK(r.coverage == 1.0);
    CHECK(r.spill == 0.5);  // half the predicted area lies outside any animal
    CHECK(r.verdict == Verdict::over_detection);
}
