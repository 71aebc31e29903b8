// ethopipe: command-line front end wiring the pipeline stages together.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <string>

#include <CLI11.hpp>

#include "ethopipe/annotations.hpp"
#include "ethopipe/augment.hpp"
#include "ethopipe/classify.hpp"
#include "ethopipe/detection.hpp"
#include "ethopipe/errors.hpp"
#include "ethopipe/ethogram.hpp"
#include "ethopipe/evaluate.hpp"
#include "ethopipe/imageio.hpp"
#include "ethopipe/parallel.hpp"
#include "ethopipe/patterns.hpp"
#include "ethopipe/runconfig.hpp"

namespace fs = std::filesystem;
using namespace ethopipe;

namespace {

constexpr const char* kVersion = "ethopipe 1.0.0";

class StageTimer {
public:
    explicit StageTimer(std::string stage) : stage_(std::move(stage)), t0_(now()) {}
    void done(std::size_t items, const std::string& extra = "") const {
        std::fprintf(stderr, "[ethopipe] stage=%s items=%zu wall_s=%.3f%s%s\n", stage_.c_str(),
                     items, now() - t0_, extra.empty() ? "" : " ", extra.c_str());
    }

private:
    static double now() {
        return std::chrono::duration<double>(
                   std::chrono::steady_clock::now().time_since_epoch())
            .count();
    }
    std::string stage_;
    double t0_;
};

void log_override(const CLI::Option* opt, const RunConfig& cfg, const char* key) {
    if (opt && opt->count() > 0 && cfg.has(key))
        std::fprintf(stderr, "[ethopipe] config %s overridden by %s\n", key,
                     opt->get_name().c_str());
}

// --config is honored before CLI11 parses, so flag values win over the file.
RunConfig preload_config(int argc, char** argv) {
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--config" && i + 1 < argc) return RunConfig::load(argv[i + 1]);
        if (arg.rfind("--config=", 0) == 0) return RunConfig::load(arg.substr(9));
    }
    return RunConfig{};
}

std::string frame_name(int index) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "frame_%06d.png", index);
    return buf;
}

// ---------------------------------------------------------------- ingest

int cmd_ingest(const std::string& dataset_path, const std::string& out_path) {
    StageTimer timer("ingest");
    const Dataset d = load_annotation_document(dataset_path);
    save_annotation_document(d, out_path);
    timer.done(d.images.size(),
               "annotations=" + std::to_string(d.annotations.size()));
    return 0;
}

// ---------------------------------------------------------------- augment

int cmd_augment(const std::string& dataset_path, std::string images_dir,
                const std::string& out_dir, AugmentConfig cfg,
                const std::vector<std::string>& disabled, int workers) {
    for (const std::string& t : disabled) {
        if (t == "rot90")
            cfg.enable_rot90 = false;
        else if (t == "crop")
            cfg.enable_crop = false;
        else if (t == "rotate")
            cfg.enable_rotate = false;
        else if (t == "grayscale")
            cfg.enable_grayscale = false;
        else if (t == "blur")
            cfg.enable_blur = false;
        else if (t == "noise")
            cfg.enable_noise = false;
        else
            throw ValidationError("unknown transform '" + t +
                                  "' (expected rot90|crop|rotate|grayscale|blur|noise)");
    }
    cfg.validate();

    StageTimer timer("augment");
    const Dataset input = load_annotation_document(dataset_path);
    if (images_dir.empty()) images_dir = fs::path(dataset_path).parent_path().string();

    std::vector<Image> pixels(input.images.size());
    run_pool(input.images.size(), workers, [&](std::size_t i) {
        pixels[i] = read_image((fs::path(images_dir) / input.images[i].path).string());
    });

    const DatasetAugmentation result = augment_dataset(input, pixels, cfg, workers);

    fs::create_directories(out_dir);
    run_pool(result.dataset.images.size(), workers, [&](std::size_t i) {
        const fs::path target = fs::path(out_dir) / result.dataset.images[i].path;
        fs::create_directories(target.parent_path());
        write_png(target.string(), result.pixels[i]);
    });
    save_annotation_document(result.dataset, (fs::path(out_dir) / "annotations.json").string());
    timer.done(result.dataset.images.size(),
               "annotations=" + std::to_string(result.dataset.annotations.size()));
    return 0;
}

// ------------------------------------------------------------ detect-eval

int cmd_detect_eval(const std::string& frames_dir, const std::string& gt_path,
                    const std::string& pred_dir, const std::string& report_path, int workers) {
    StageTimer timer("detect-eval");
    const FrameSequence seq = load_frame_sequence(frames_dir);
    const GroundTruthPlayback gt(load_annotation_document(gt_path));
    const ExternalMaskImport pred(pred_dir);
    const Image first = read_image(seq.frame_paths[0]);

    const int n = seq.frame_count();
    std::vector<int> skipped(n, 0);
    std::vector<CoverageReport> rows(n);
    run_pool(static_cast<std::size_t>(n), workers, [&](std::size_t i) {
        const FrameDetection truth = gt.detect(static_cast<int>(i), first.width, first.height);
        std::vector<Mask> gt_masks;
        std::size_t gt_px = 0;
        for (const auto& inst : truth.instances) {
            gt_px += inst.mask.count();
            gt_masks.push_back(inst.mask);
        }
        if (gt_px == 0) {
            skipped[i] = 1;  // nothing annotated on this frame
            return;
        }
        rows[i] = evaluate_frame(pred.detect(static_cast<int>(i), first.width, first.height),
                                 gt_masks);
    });

    std::ofstream out(report_path, std::ios::binary);
    if (!out) throw IoError("cannot write report: " + report_path);
    out << "frame,coverage,spill,verdict\n";
    std::vector<CoverageReport> evaluated;
    char buf[128];
    for (int i = 0; i < n; ++i) {
        if (skipped[i]) continue;
        std::snprintf(buf, sizeof(buf), "%d,%.6f,%.6f,%s\n", i, rows[i].coverage, rows[i].spill,
                      verdict_name(rows[i].verdict));
        out << buf;
        evaluated.push_back(rows[i]);
    }
    if (!out) throw IoError("write failed: " + report_path);

    if (!evaluated.empty()) {
        const VideoAccuracyReport acc = video_accuracy(seq.video_id, evaluated);
        std::fprintf(stderr,
                     "[ethopipe] video=%s frames=%d accuracy=%.3f accurate=%d under=%d over=%d "
                     "skipped=%d\n",
                     acc.video_id.c_str(), acc.n_frames_evaluated, acc.accuracy, acc.n_accurate,
                     acc.n_under, acc.n_over, n - acc.n_frames_evaluated);
    }
    timer.done(evaluated.size());
    return 0;
}

// ----------------------------------------------------------- gen-examples

std::string example_id(std::size_t index) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "ex%06d", static_cast<int>(index));
    return buf;
}

Image crop_frame(const Image& frame, int origin_x, int origin_y, int w, int h) {
    Image out(w, h);  // out-of-frame pixels stay black
    for (int y = 0; y < h; ++y) {
        const int sy = y + origin_y;
        if (sy < 0 || sy >= frame.height) continue;
        for (int x = 0; x < w; ++x) {
            const int sx = x + origin_x;
            if (sx < 0 || sx >= frame.width) continue;
            const std::uint8_t* s = frame.at(sx, sy);
            std::uint8_t* d = out.at(x, y);
            d[0] = s[0];
            d[1] = s[1];
            d[2] = s[2];
        }
    }
    return out;
}

Mask crop_mask(const Mask& m, int origin_x, int origin_y, int w, int h) {
    Mask out(w, h);
    for (int y = 0; y < h; ++y) {
        const int sy = y + origin_y;
        if (sy < 0 || sy >= m.height) continue;
        for (int x = 0; x < w; ++x) {
            const int sx = x + origin_x;
            if (sx < 0 || sx >= m.width) continue;
            out.set(x, y, m.get(sx, sy));
        }
    }
    return out;
}

int cmd_gen_examples(const std::string& frames_dir, const std::string& masks_dir,
                     const std::string& ethogram_path, const std::string& out_dir, int window,
                     int stride, bool background, int workers) {
    StageTimer timer("gen-examples");
    const FrameSequence seq = load_frame_sequence(frames_dir);
    const std::vector<EthogramInterval> ethogram = read_ethogram_csv(ethogram_path);
    const ExternalMaskImport masks(masks_dir);
    const Image first = read_image(seq.frame_paths[0]);

    std::vector<FrameDetection> detections(seq.frame_count());
    run_pool(detections.size(), workers, [&](std::size_t i) {
        detections[i] = masks.detect(static_cast<int>(i), first.width, first.height);
    });

    GenerateOptions opt;
    opt.window = window;
    opt.stride = stride;
    opt.emit_background = background;
    std::set<std::string> labels;
    for (const auto& iv : ethogram) labels.insert(iv.label);
    opt.categories.assign(labels.begin(), labels.end());

    const std::vector<BehaviourExample> examples =
        generate_examples(seq, detections, ethogram, opt);

    fs::create_directories(out_dir);
    run_pool(examples.size(), workers, [&](std::size_t i) {
        const BehaviourExample& ex = examples[i];
        const std::string id = example_id(i);
        const fs::path anim_dir = fs::path(out_dir) / ("anim_" + id);
        fs::create_directories(anim_dir);
        const int w = ex.pattern.canvas.width, h = ex.pattern.canvas.height;
        for (int t = 0; t < ex.animation.length(); ++t) {
            char name[32];
            std::snprintf(name, sizeof(name), "frame_%02d.png", t);
            const Image frame = read_image(seq.frame_paths[ex.animation.start_frame + t]);
            write_png((anim_dir / name).string(),
                      crop_frame(frame, ex.pattern.origin_x, ex.pattern.origin_y, w, h));
            std::snprintf(name, sizeof(name), "mask_%02d.png", t);
            write_mask_png((anim_dir / name).string(),
                           crop_mask(ex.animation.masks[t], ex.pattern.origin_x,
                                     ex.pattern.origin_y, w, h));
        }
        write_png((fs::path(out_dir) / ("pattern_" + id + ".png")).string(), ex.pattern.canvas);
    });

    std::ofstream manifest(fs::path(out_dir) / "manifest.csv", std::ios::binary);
    if (!manifest) throw IoError("cannot write manifest in " + out_dir);
    manifest << "id,video,start_frame,label\n";
    for (std::size_t i = 0; i < examples.size(); ++i)
        manifest << example_id(i) << "," << seq.video_id << ","
                 << examples[i].animation.start_frame << "," << examples[i].label << "\n";
    if (!manifest) throw IoError("write failed: manifest.csv");

    timer.done(examples.size(), "window=" + std::to_string(window) +
                                    " stride=" + std::to_string(stride));
    return 0;
}

// ---------------------------------------------------------- train-baseline

struct ManifestRow {
    std::string id;
    std::string video;
    int start_frame = 0;
    std::string label;
};

std::vector<ManifestRow> read_manifest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open manifest: " + path);
    std::string line;
    if (!std::getline(in, line) || line != "id,video,start_frame,label")
        throw ValidationError("manifest: expected header 'id,video,start_frame,label'");
    std::vector<ManifestRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        ManifestRow row;
        std::size_t p0 = line.find(','), p1 = line.find(',', p0 + 1),
                    p2 = line.find(',', p1 + 1);
        if (p0 == std::string::npos || p1 == std::string::npos || p2 == std::string::npos)
            throw ValidationError("manifest: expected 4 columns");
        row.id = line.substr(0, p0);
        row.video = line.substr(p0 + 1, p1 - p0 - 1);
        row.start_frame = std::stoi(line.substr(p1 + 1, p2 - p1 - 1));
        row.label = line.substr(p2 + 1);
        rows.push_back(std::move(row));
    }
    return rows;
}

BehaviourExample load_example(const std::string& dir, const ManifestRow& row) {
    BehaviourExample ex;
    ex.label = row.label;
    ex.animation.video_id = row.video;
    ex.animation.start_frame = row.start_frame;
    const fs::path anim_dir = fs::path(dir) / ("anim_" + row.id);
    for (int t = 0;; ++t) {
        char name[32];
        std::snprintf(name, sizeof(name), "mask_%02d.png", t);
        const fs::path mask_path = anim_dir / name;
        if (!fs::exists(mask_path)) break;
        const GrayImage g = read_gray_png(mask_path.string());
        Mask m(g.width, g.height);
        for (std::size_t i = 0; i < g.px.size(); ++i) m.bits[i] = g.px[i] != 0;
        ex.animation.masks.push_back(std::move(m));
    }
    if (ex.animation.masks.empty())
        throw ValidationError("example '" + row.id + "' has no mask frames in " +
                              anim_dir.string());
    ex.pattern.canvas = read_image((fs::path(dir) / ("pattern_" + row.id + ".png")).string());
    return ex;
}

int cmd_train_baseline(const std::string& examples_dir, const std::string& out_path,
                       const TrainOptions& opts, int workers) {
    StageTimer timer("train-baseline");
    const auto manifest = read_manifest((fs::path(examples_dir) / "manifest.csv").string());
    if (manifest.empty()) throw ValidationError("train-baseline: manifest lists no examples");

    std::set<std::string> labels;
    for (const auto& row : manifest) labels.insert(row.label);
    TrainingSet set;
    set.categories.assign(labels.begin(), labels.end());

    set.features.resize(manifest.size());
    set.labels.resize(manifest.size());
    run_pool(manifest.size(), workers, [&](std::size_t i) {
        const BehaviourExample ex = load_example(examples_dir, manifest[i]);
        set.features[i] = extract_features(ex.animation, ex.pattern);
        const auto it = std::find(set.categories.begin(), set.categories.end(),
                                  manifest[i].label);
        set.labels[i] = static_cast<int>(it - set.categories.begin());
    });

    const CategoriserModel model = train_baseline(set, opts);
    save_model(model, out_path);

    int correct = 0;
    for (std::size_t i = 0; i < set.features.size(); ++i) {
        const auto probs = predict(model, set.features[i]);
        correct += static_cast<int>(std::max_element(probs.begin(), probs.end()) -
                                    probs.begin()) == set.labels[i];
    }
    char extra[128];
    std::snprintf(extra, sizeof(extra), "categories=%zu train_acc=%.3f final_loss=%.6f",
                  set.categories.size(),
                  static_cast<double>(correct) / static_cast<double>(set.features.size()),
                  model.final_loss);
    timer.done(manifest.size(), extra);
    return 0;
}

// ---------------------------------------------------------------- classify

int cmd_classify(const std::string& frames_dir, const std::string& masks_dir,
                 const std::string& model_path, const std::string& out_path, int window,
                 int stride, int workers) {
    StageTimer timer("classify");
    const FrameSequence seq = load_frame_sequence(frames_dir);
    const CategoriserModel model = load_model(model_path);
    const ExternalMaskImport masks(masks_dir);
    const ProbabilityTimeline tl = classify_video(seq, masks, model, window, stride, workers);
    write_timeline_csv(tl, out_path);
    timer.done(tl.times_s.size(), "window=" + std::to_string(window) +
                                      " stride=" + std::to_string(stride));
    return 0;
}

// ------------------------------------------------------------ eval-ethogram

int cmd_eval_ethogram(const std::string& timeline_path, const std::string& gt_path,
                      const std::string& out_path, const std::string& plot_path, double theta_on,
                      double theta_off, double min_dur_s, double iou_min,
                      std::string plot_category) {
    StageTimer timer("eval-ethogram");
    const ProbabilityTimeline tl = read_timeline_csv(timeline_path);
    const std::vector<EthogramInterval> gt = read_ethogram_csv(gt_path);
    check_no_overlap_per_label(gt);

    const std::set<std::string> timeline_cats(tl.categories.begin(), tl.categories.end());
    for (const auto& iv : gt)
        if (!timeline_cats.count(iv.label))
            throw ValidationError("ground-truth label '" + iv.label +
                                  "' is not a timeline category");

    std::vector<std::pair<std::string, EventMatchReport>> per_category;
    for (const auto& category : tl.categories) {
        if (category == kBackgroundLabel) continue;
        const auto pred_events = threshold_events(tl, category, theta_on, theta_off, min_dur_s);
        std::vector<EthogramInterval> gt_events;
        for (const auto& iv : gt)
            if (iv.label == category) gt_events.push_back(iv);
        per_category.push_back({category, match_events(pred_events, gt_events, iou_min)});
    }
    write_match_report_csv(per_category, out_path);

    if (!plot_path.empty()) {
        if (plot_category.empty() && !per_category.empty())
            plot_category = per_category.front().first;
        std::vector<EthogramInterval> gt_events;
        for (const auto& iv : gt)
            if (iv.label == plot_category) gt_events.push_back(iv);
        std::ofstream out(plot_path, std::ios::binary);
        if (!out) throw IoError("cannot write plot: " + plot_path);
        out << render_timeline_svg(tl, gt_events, plot_category);
        if (!out) throw IoError("write failed: " + plot_path);
    }
    timer.done(per_category.size());
    return 0;
}

// ------------------------------------------------------------ bench-scaling

int cmd_bench_scaling(const std::string& workers_csv, int windows, const std::string& out_path,
                      const std::string& plot_path, int reps) {
    StageTimer timer("bench-scaling");
    std::vector<int> counts;
    std::string tok;
    std::istringstream in(workers_csv);
    while (std::getline(in, tok, ',')) {
        try {
            counts.push_back(std::stoi(tok));
        } catch (const std::exception&) {
            throw ValidationError("bench-scaling: cannot parse worker count '" + tok + "'");
        }
    }
    const Workload workload = make_pattern_workload(static_cast<std::size_t>(windows));
    const ScalingBenchReport report = bench_scaling(workload, counts, reps);
    write_bench_csv(report, out_path);
    if (!plot_path.empty()) {
        std::ofstream out(plot_path, std::ios::binary);
        if (!out) throw IoError("cannot write plot: " + plot_path);
        out << render_speedup_svg(report);
    }
    for (const auto& row : report.rows)
        std::fprintf(stderr, "[ethopipe] workers=%d wall_s=%.4f speedup=%.2f imbalance=%.2f\n",
                     row.workers, row.wall_time_s, row.speedup, row.imbalance);
    std::fprintf(stderr, "[ethopipe] plateau_workers=%d observed=%s\n", report.plateau_workers,
                 report.plateau_observed ? "true" : "false");
    timer.done(report.rows.size());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ethopipe: behaviour-analysis pipeline for video-recorded animals"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);
    app.failure_message(CLI::FailureMessage::help);

    RunConfig cfg;
    try {
        cfg = preload_config(argc, argv);
    } catch (const ValidationError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const IoError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }

    const int cfg_workers = cfg.get_int("workers", 1);
    const std::uint64_t cfg_seed = cfg.get_u64("seed", 0);
    std::string config_path;  // consumed by preload; registered so CLI11 accepts it

    auto add_common = [&](CLI::App* sub) {
        sub->set_version_flag("--version", kVersion);
        sub->add_option("--config", config_path, "run-configuration file (key = value lines)");
        return sub;
    };

    // ingest
    std::string in_dataset, in_out;
    CLI::App* ingest = add_common(app.add_subcommand("ingest", "validate and canonicalize an annotation document"));
    ingest->add_option("--dataset", in_dataset, "annotation document (COCO-style subset)")->required();
    ingest->add_option("--out", in_out, "canonical output document")->required();

    // augment
    std::string aug_dataset, aug_images, aug_out;
    AugmentConfig aug_cfg;
    aug_cfg.multiplier = cfg.get_int("multiplier", 2);
    aug_cfg.seed = cfg_seed;
    int aug_workers = cfg_workers;
    std::vector<std::string> aug_disabled;
    CLI::App* augment = add_common(app.add_subcommand("augment", "grow a detector dataset with the fixed transform set"));
    augment->add_option("--dataset", aug_dataset, "annotation document")->required();
    augment->add_option("--images", aug_images, "image root (default: document directory)");
    augment->add_option("--out", aug_out, "output directory")->required();
    CLI::Option* aug_mult_opt = augment->add_option("--multiplier", aug_cfg.multiplier, "augmented copies per source image");
    CLI::Option* aug_seed_opt = augment->add_option("--seed", aug_cfg.seed, "base seed for all randomness");
    augment->add_option("--disable", aug_disabled, "disable a transform (rot90|crop|rotate|grayscale|blur|noise)");
    CLI::Option* aug_workers_opt = augment->add_option("--workers", aug_workers, "worker threads");

    // detect-eval
    std::string de_frames, de_gt, de_pred, de_report;
    int de_workers = cfg_workers;
    CLI::App* detect_eval = add_common(app.add_subcommand("detect-eval", "score predicted masks against ground truth"));
    detect_eval->add_option("--frames", de_frames, "frame directory (frame_%06d.png + video.meta)")->required();
    detect_eval->add_option("--gt", de_gt, "ground-truth annotation document")->required();
    detect_eval->add_option("--pred", de_pred, "predicted sidecar mask directory")->required();
    detect_eval->add_option("--report", de_report, "per-frame CSV report")->required();
    CLI::Option* de_workers_opt = detect_eval->add_option("--workers", de_workers, "worker threads");

    // gen-examples
    std::string ge_frames, ge_masks, ge_ethogram, ge_out;
    int ge_window = cfg.get_int("window", 45);
    int ge_stride = cfg.get_int("stride", 45);
    bool ge_background = cfg.get_bool("background", false);
    int ge_workers = cfg_workers;
    CLI::App* gen_examples = add_common(app.add_subcommand("gen-examples", "cut labelled behaviour examples from a video"));
    gen_examples->add_option("--frames", ge_frames)->required();
    gen_examples->add_option("--masks", ge_masks, "sidecar mask directory")->required();
    gen_examples->add_option("--ethogram", ge_ethogram, "ground-truth CSV start_s,end_s,label")->required();
    gen_examples->add_option("--out", ge_out)->required();
    CLI::Option* ge_window_opt = gen_examples->add_option("--window", ge_window, "frames per example");
    CLI::Option* ge_stride_opt = gen_examples->add_option("--stride", ge_stride, "window grid step");
    gen_examples->add_flag("--background", ge_background, "emit background examples outside all bouts");
    CLI::Option* ge_workers_opt = gen_examples->add_option("--workers", ge_workers, "worker threads");

    // train-baseline
    std::string tb_examples, tb_out;
    TrainOptions tb_opts;
    tb_opts.eta = cfg.get_double("eta", tb_opts.eta);
    tb_opts.iterations = cfg.get_int("iterations", tb_opts.iterations);
    tb_opts.lambda = cfg.get_double("lambda", tb_opts.lambda);
    tb_opts.seed = cfg_seed;
    int tb_workers = cfg_workers;
    CLI::App* train = add_common(app.add_subcommand("train-baseline", "fit the baseline categoriser on generated examples"));
    train->add_option("--examples", tb_examples, "gen-examples output directory")->required();
    train->add_option("--out", tb_out, "model file")->required();
    train->add_option("--eta", tb_opts.eta, "learning rate");
    train->add_option("--iterations", tb_opts.iterations, "gradient-descent iterations");
    train->add_option("--lambda", tb_opts.lambda, "L2 strength");
    train->add_option("--seed", tb_opts.seed, "recorded training seed");
    train->add_option("--workers", tb_workers, "worker threads");

    // classify
    std::string cl_frames, cl_masks, cl_model, cl_out;
    int cl_window = cfg.get_int("window", 45);
    int cl_stride = cfg.get_int("stride", 5);
    int cl_workers = cfg_workers;
    CLI::App* classify = add_common(app.add_subcommand("classify", "sliding-window probability timeline for a video"));
    classify->add_option("--frames", cl_frames)->required();
    classify->add_option("--masks", cl_masks, "sidecar mask directory")->required();
    classify->add_option("--model", cl_model, "model file")->required();
    classify->add_option("--out", cl_out, "timeline CSV")->required();
    CLI::Option* cl_window_opt = classify->add_option("--window", cl_window, "frames per window");
    CLI::Option* cl_stride_opt = classify->add_option("--stride", cl_stride, "window grid step");
    CLI::Option* cl_workers_opt = classify->add_option("--workers", cl_workers, "worker threads");

    // eval-ethogram
    std::string ee_timeline, ee_gt, ee_out, ee_plot, ee_category;
    double ee_theta_on = cfg.get_double("theta_on", 0.5);
    double ee_theta_off = cfg.get_double("theta_off", 0.4);
    double ee_min_dur = cfg.get_double("min_dur_s", 0.5);
    double ee_iou_min = cfg.get_double("iou_min", 0.3);
    CLI::App* eval_eth = add_common(app.add_subcommand("eval-ethogram", "match thresholded events against ground truth"));
    eval_eth->add_option("--timeline", ee_timeline, "timeline CSV")->required();
    eval_eth->add_option("--gt", ee_gt, "ground-truth ethogram CSV")->required();
    eval_eth->add_option("--out", ee_out, "report CSV")->required();
    eval_eth->add_option("--plot", ee_plot, "optional SVG plot path");
    eval_eth->add_option("--category", ee_category, "category to plot (default: first)");
    CLI::Option* ee_on_opt = eval_eth->add_option("--theta-on", ee_theta_on, "event opening threshold");
    CLI::Option* ee_off_opt = eval_eth->add_option("--theta-off", ee_theta_off, "event closing threshold");
    eval_eth->add_option("--min-dur", ee_min_dur, "minimum event duration (s)");
    eval_eth->add_option("--iou-min", ee_iou_min, "matching IoU threshold");

    // bench-scaling
    std::string bs_workers = "1,2,4,8", bs_out, bs_plot;
    int bs_windows = 64, bs_reps = 3;
    CLI::App* bench = add_common(app.add_subcommand("bench-scaling", "worker-pool scaling benchmark"));
    bench->add_option("--workers", bs_workers, "comma-separated worker counts, ascending from 1");
    bench->add_option("--windows", bs_windows, "synthetic pattern windows in the workload");
    bench->add_option("--out", bs_out, "benchmark CSV")->required();
    bench->add_option("--plot", bs_plot, "optional speedup SVG");
    bench->add_option("--reps", bs_reps, "repetitions per worker count (median kept)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*ingest) return cmd_ingest(in_dataset, in_out);
        if (*augment) {
            log_override(aug_mult_opt, cfg, "multiplier");
            log_override(aug_seed_opt, cfg, "seed");
            log_override(aug_workers_opt, cfg, "workers");
            return cmd_augment(aug_dataset, aug_images, aug_out, aug_cfg, aug_disabled,
                               aug_workers);
        }
        if (*detect_eval) {
            log_override(de_workers_opt, cfg, "workers");
            return cmd_detect_eval(de_frames, de_gt, de_pred, de_report, de_workers);
        }
        if (*gen_examples) {
            log_override(ge_window_opt, cfg, "window");
            log_override(ge_stride_opt, cfg, "stride");
            log_override(ge_workers_opt, cfg, "workers");
            return cmd_gen_examples(ge_frames, ge_masks, ge_ethogram, ge_out, ge_window,
                                    ge_stride, ge_background, ge_workers);
        }
        if (*train) return cmd_train_baseline(tb_examples, tb_out, tb_opts, tb_workers);
        if (*classify) {
            log_override(cl_window_opt, cfg, "window");
            log_override(cl_stride_opt, cfg, "stride");
            log_override(cl_workers_opt, cfg, "workers");
            return cmd_classify(cl_frames, cl_masks, cl_model, cl_out, cl_window, cl_stride,
                                cl_workers);
        }
        if (*eval_eth) {
            log_override(ee_on_opt, cfg, "theta_on");
            log_override(ee_off_opt, cfg, "theta_off");
            return cmd_eval_ethogram(ee_timeline, ee_gt, ee_out, ee_plot, ee_theta_on,
                                     ee_theta_off, ee_min_dur, ee_iou_min, ee_category);
        }
        if (*bench) return cmd_bench_scaling(bs_workers, bs_windows, bs_out, bs_plot, bs_reps);
    } catch (const PoolJobError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return e.io_error ? 2 : 1;
    } catch (const IoError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const ValidationError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
