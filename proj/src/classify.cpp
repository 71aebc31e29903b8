#include "ethopipe/classify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "ethopipe/errors.hpp"
#include "ethopipe/imageio.hpp"
#include "ethopipe/parallel.hpp"

namespace ethopipe {

namespace {

struct FrameStat {
    bool present = false;
    int frame = 0;
    double cx = 0, cy = 0;
    double area = 0;
    double aspect = 0;
};

FrameStat mask_stat(const Mask& m, int frame) {
    FrameStat s;
    s.frame = frame;
    double sx = 0, sy = 0;
    std::size_t n = 0;
    for (int y = 0; y < m.height; ++y) {
        for (int x = 0; x < m.width; ++x) {
            if (!m.get(x, y)) continue;
            sx += x + 0.5;
            sy += y + 0.5;
            ++n;
        }
    }
    if (n == 0) return s;
    s.present = true;
    s.cx = sx / static_cast<double>(n);
    s.cy = sy / static_cast<double>(n);
    s.area = static_cast<double>(n);
    const Mask::Box b = m.bbox();
    s.aspect = static_cast<double>(b.w()) / static_cast<double>(b.h());
    return s;
}

double mask_iou(const Mask& a, const Mask& b) {
    std::size_t inter = 0, uni = 0;
    for (std::size_t i = 0; i < a.bits.size(); ++i) {
        const bool pa = a.bits[i] != 0, pb = b.bits[i] != 0;
        inter += pa && pb;
        uni += pa || pb;
    }
    return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

// Recursive pairwise (binary-split) summation. Exact doubling under dataset
// duplication depends on the top-level split landing on the seam, which it
// does for any concatenated copy.
double pairwise_sum(const std::vector<double>& xs, std::size_t lo, std::size_t hi) {
    if (hi - lo == 0) return 0.0;
    if (hi - lo == 1) return xs[lo];
    const std::size_t mid = lo + (hi - lo) / 2;
    return pairwise_sum(xs, lo, mid) + pairwise_sum(xs, mid, hi);
}

}  // namespace

FeatureVector extract_features(const Animation& anim, const MovementPattern& pattern) {
    FeatureVector fv;

    std::vector<FrameStat> stats;
    Mask::Box ubox;
    for (int t = 0; t < anim.length(); ++t) {
        const FrameStat s = mask_stat(anim.masks[t], t);
        if (!s.present) continue;
        stats.push_back(s);
        const Mask::Box b = anim.masks[t].bbox();
        if (!ubox.valid) {
            ubox = b;
        } else {
            ubox.x0 = std::min(ubox.x0, b.x0);
            ubox.y0 = std::min(ubox.y0, b.y0);
            ubox.x1 = std::max(ubox.x1, b.x1);
            ubox.y1 = std::max(ubox.y1, b.y1);
        }
    }

    // ink fraction is defined for any pattern, motion features need >= 2 frames
    std::size_t ink = 0;
    const Image& canvas = pattern.canvas;
    for (std::size_t i = 0; i < canvas.px.size(); i += 3)
        ink += !(canvas.px[i] == 255 && canvas.px[i + 1] == 255 && canvas.px[i + 2] == 255);
    fv.v[6] = canvas.px.empty()
                  ? 0.0
                  : static_cast<double>(ink) / (static_cast<double>(canvas.px.size()) / 3.0);

    if (stats.size() < 2) {
        fv.low_signal = true;
        fv.v[4] = stats.size() == 1 ? stats[0].aspect : 0.0;
        fv.v[7] = 0.5;
        return fv;
    }

    const double diag = std::sqrt(static_cast<double>(ubox.w()) * ubox.w() +
                                  static_cast<double>(ubox.h()) * ubox.h());

    double path = 0, speed_sum = 0, darea_sum = 0;
    for (std::size_t i = 1; i < stats.size(); ++i) {
        const double dx = stats[i].cx - stats[i - 1].cx;
        const double dy = stats[i].cy - stats[i - 1].cy;
        const double d = std::sqrt(dx * dx + dy * dy);
        path += d;
        speed_sum += d / static_cast<double>(stats[i].frame - stats[i - 1].frame);
        darea_sum += std::abs(stats[i].area - stats[i - 1].area);
    }
    const double steps = static_cast<double>(stats.size() - 1);
    const double net_dx = stats.back().cx - stats.front().cx;
    const double net_dy = stats.back().cy - stats.front().cy;
    const double net = std::sqrt(net_dx * net_dx + net_dy * net_dy);

    double area_mean = 0, aspect_mean = 0;
    for (const auto& s : stats) {
        area_mean += s.area;
        aspect_mean += s.aspect;
    }
    area_mean /= static_cast<double>(stats.size());
    aspect_mean /= static_cast<double>(stats.size());
    double area_var = 0;
    for (const auto& s : stats) area_var += (s.area - area_mean) * (s.area - area_mean);
    area_var /= static_cast<double>(stats.size());

    double iou_sum = 0;
    int iou_n = 0;
    for (std::size_t i = 1; i < stats.size(); ++i) {
        if (stats[i].frame != stats[i - 1].frame + 1) continue;  // adjacent frames only
        iou_sum += mask_iou(anim.masks[stats[i - 1].frame], anim.masks[stats[i].frame]);
        ++iou_n;
    }

    fv.v[0] = diag > 0 ? (speed_sum / steps) / diag : 0.0;
    fv.v[1] = path > 0 ? net / path : 0.0;
    fv.v[2] = area_mean > 0 ? std::sqrt(area_var) / area_mean : 0.0;
    fv.v[3] = area_mean > 0 ? (darea_sum / steps) / area_mean : 0.0;
    fv.v[4] = aspect_mean;
    fv.v[5] = iou_n > 0 ? iou_sum / iou_n : 0.0;
    const double abs_dx = std::abs(net_dx), abs_dy = std::abs(net_dy);
    fv.v[7] = (abs_dx + abs_dy) > 0 ? abs_dx / (abs_dx + abs_dy) : 0.5;
    fv.v[1] = std::min(fv.v[1], 1.0);  // guard the fp edge at net == path
    return fv;
}

double softmax_loss_gradient(const std::vector<std::array<double, kFeatureCount + 1>>& inputs,
                             const std::vector<int>& labels, int n_categories, double lambda,
                             const std::vector<double>& weights, std::vector<double>* gradient) {
    const std::size_t n = inputs.size();
    const int K = n_categories;
    const int D = kFeatureCount + 1;
    if (labels.size() != n) throw ValidationError("softmax_loss_gradient: label count mismatch");
    if (static_cast<int>(weights.size()) != K * D)
        throw ValidationError("softmax_loss_gradient: weight size mismatch");

    // Per-example contributions, reduced by pairwise summation per component.
    std::vector<double> losses(n, 0.0);
    std::vector<std::vector<double>> contrib;
    if (gradient) contrib.assign(K * D, std::vector<double>(n, 0.0));

    std::vector<double> scores(K), probs(K);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& x = inputs[i];
        double max_score = -std::numeric_limits<double>::infinity();
        for (int k = 0; k < K; ++k) {
            double s = 0;
            for (int j = 0; j < D; ++j) s += weights[k * D + j] * x[j];
            scores[k] = s;
            max_score = std::max(max_score, s);
        }
        double z = 0;
        for (int k = 0; k < K; ++k) {
            probs[k] = std::exp(scores[k] - max_score);
            z += probs[k];
        }
        for (int k = 0; k < K; ++k) probs[k] /= z;
        losses[i] = -(scores[labels[i]] - max_score - std::log(z));
        if (gradient) {
            for (int k = 0; k < K; ++k) {
                const double delta = probs[k] - (labels[i] == k ? 1.0 : 0.0);
                for (int j = 0; j < D; ++j) contrib[k * D + j][i] = delta * x[j];
            }
        }
    }

    const double inv_n = 1.0 / static_cast<double>(n);
    double loss = pairwise_sum(losses, 0, n) * inv_n;
    if (gradient) {
        gradient->assign(K * D, 0.0);
        for (int k = 0; k < K; ++k)
            for (int j = 0; j < D; ++j)
                (*gradient)[k * D + j] = pairwise_sum(contrib[k * D + j], 0, n) * inv_n;
    }
    // L2 on non-bias weights
    for (int k = 0; k < K; ++k) {
        for (int j = 0; j < D - 1; ++j) {
            loss += 0.5 * lambda * weights[k * D + j] * weights[k * D + j];
            if (gradient) (*gradient)[k * D + j] += lambda * weights[k * D + j];
        }
    }
    return loss;
}

namespace {

std::vector<std::array<double, kFeatureCount + 1>> normalize_inputs(
    const std::vector<FeatureVector>& features, const CategoriserModel& model) {
    std::vector<std::array<double, kFeatureCount + 1>> out(features.size());
    for (std::size_t i = 0; i < features.size(); ++i) {
        for (int j = 0; j < kFeatureCount; ++j)
            out[i][j] = (features[i].v[j] - model.feature_mean[j]) / model.feature_sd[j];
        out[i][kFeatureCount] = 1.0;  // bias
    }
    return out;
}

}  // namespace

CategoriserModel train_baseline(const TrainingSet& set, const TrainOptions& opts) {
    const int K = static_cast<int>(set.categories.size());
    if (K < 2) throw ValidationError("train_baseline: need at least 2 categories");
    if (set.features.size() != set.labels.size())
        throw ValidationError("train_baseline: features and labels differ in length");
    if (set.features.empty()) throw ValidationError("train_baseline: empty training set");
    std::vector<int> per_cat(K, 0);
    for (int y : set.labels) {
        if (y < 0 || y >= K) throw ValidationError("train_baseline: label out of range");
        ++per_cat[y];
    }
    for (int k = 0; k < K; ++k)
        if (per_cat[k] == 0)
            throw ValidationError("train_baseline: category '" + set.categories[k] +
                                  "' has zero examples");
    if (opts.iterations < 1 || opts.eta <= 0)
        throw ValidationError("train_baseline: iterations must be >= 1 and eta > 0");

    CategoriserModel model;
    model.categories = set.categories;
    model.iterations = opts.iterations;
    model.seed = opts.seed;

    const double n = static_cast<double>(set.features.size());
    std::vector<double> col(set.features.size());
    for (int j = 0; j < kFeatureCount; ++j) {
        // pairwise sums keep normalization identical under dataset duplication
        for (std::size_t i = 0; i < col.size(); ++i) col[i] = set.features[i].v[j];
        const double mean = pairwise_sum(col, 0, col.size()) / n;
        for (std::size_t i = 0; i < col.size(); ++i)
            col[i] = (set.features[i].v[j] - mean) * (set.features[i].v[j] - mean);
        const double var = pairwise_sum(col, 0, col.size()) / n;
        const double sd = std::sqrt(var);
        model.feature_mean[j] = mean;
        model.zero_variance[j] = sd < 1e-12;
        model.feature_sd[j] = model.zero_variance[j] ? 1.0 : sd;
    }

    const auto inputs = normalize_inputs(set.features, model);
    const int D = kFeatureCount + 1;

    double eta = opts.eta;
    std::vector<double> w;
    for (int attempt = 0;; ++attempt) {
        w.assign(static_cast<std::size_t>(K) * D, 0.0);
        std::vector<double> grad;
        double prev_loss = std::numeric_limits<double>::infinity();
        bool increased = false;
        for (int it = 0; it < opts.iterations; ++it) {
            const double loss = softmax_loss_gradient(inputs, set.labels, K, opts.lambda, w, &grad);
            if (loss > prev_loss + 1e-12) {
                increased = true;
                break;
            }
            prev_loss = loss;
            for (std::size_t i = 0; i < w.size(); ++i) w[i] -= eta * grad[i];
        }
        if (!increased) break;
        if (attempt >= 1)
            throw ValidationError("train_baseline: loss increased even after halving eta");
        eta /= 2;  // one retry at half the step size
    }

    model.final_loss = softmax_loss_gradient(inputs, set.labels, K, opts.lambda, w, nullptr);
    model.weights.resize(K);
    for (int k = 0; k < K; ++k)
        for (int j = 0; j < D; ++j) model.weights[k][j] = w[k * D + j];
    return model;
}

std::vector<double> predict(const CategoriserModel& model, const FeatureVector& fv) {
    const int K = static_cast<int>(model.categories.size());
    std::vector<double> scores(K);
    double max_score = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < K; ++k) {
        double s = model.weights[k][kFeatureCount];
        for (int j = 0; j < kFeatureCount; ++j)
            s += model.weights[k][j] * (fv.v[j] - model.feature_mean[j]) / model.feature_sd[j];
        scores[k] = s;
        max_score = std::max(max_score, s);
    }
    double z = 0;
    for (int k = 0; k < K; ++k) {
        scores[k] = std::exp(scores[k] - max_score);
        z += scores[k];
    }
    for (int k = 0; k < K; ++k) scores[k] /= z;
    return scores;
}

ProbabilityTimeline classify_frames(int frame_count, int width, int height, double fps,
                                    const DetectorAdapter& adapter,
                                    const CategoriserModel& model, int window, int stride,
                                    int workers) {
    if (window < 2) throw ValidationError("classify_frames: window must be >= 2");
    if (stride < 1) throw ValidationError("classify_frames: stride must be >= 1");
    if (!(fps > 0)) throw ValidationError("classify_frames: fps must be > 0");
    if (frame_count < window)
        throw ValidationError("video shorter than one window (" + std::to_string(frame_count) +
                              " < " + std::to_string(window) + " frames)");

    std::vector<FrameDetection> detections(frame_count);
    run_pool(static_cast<std::size_t>(frame_count), workers, [&](std::size_t i) {
        detections[i] = adapter.detect(static_cast<int>(i), width, height);
    });
    const std::vector<Mask> tracked = track_largest_instance(detections, width, height);

    std::vector<int> starts;
    for (int s = 0; s + window <= frame_count; s += stride) starts.push_back(s);

    ProbabilityTimeline tl;
    tl.categories = model.categories;
    tl.times_s.resize(starts.size());
    tl.probs.resize(starts.size());
    run_pool(starts.size(), workers, [&](std::size_t i) {
        const int s = starts[i];
        Animation anim = extract_window("", tracked, s, window);
        const MovementPattern pattern = render_movement_pattern(anim);
        const FeatureVector fv = extract_features(anim, pattern);
        tl.probs[i] = predict(model, fv);
        tl.times_s[i] = static_cast<double>(s + window - 1) / fps;
    });
    return tl;
}

ProbabilityTimeline classify_video(const FrameSequence& seq, const DetectorAdapter& adapter,
                                   const CategoriserModel& model, int window, int stride,
                                   int workers) {
    if (seq.frame_count() == 0) throw ValidationError("classify_video: empty frame sequence");
    const Image first = read_image(seq.frame_paths[0]);
    return classify_frames(seq.frame_count(), first.width, first.height, seq.fps, adapter, model,
                           window, stride, workers);
}

namespace {

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::vector<std::string> split_ws(const std::string& line) {
    std::istringstream in(line);
    std::vector<std::string> out;
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

}  // namespace

std::string serialize_model(const CategoriserModel& model) {
    std::ostringstream out;
    out << "ethopipe-categoriser v1\n";
    out << "categories " << model.categories.size() << "\n";
    for (const auto& c : model.categories) out << c << "\n";
    out << "feature_means";
    for (double v : model.feature_mean) out << " " << fmt17(v);
    out << "\nfeature_sds";
    for (double v : model.feature_sd) out << " " << fmt17(v);
    out << "\nzero_variance";
    for (bool z : model.zero_variance) out << " " << (z ? 1 : 0);
    out << "\nweights " << model.weights.size() << " " << kFeatureCount + 1 << "\n";
    for (const auto& row : model.weights) {
        for (int j = 0; j <= kFeatureCount; ++j) out << (j ? " " : "") << fmt17(row[j]);
        out << "\n";
    }
    out << "iterations " << model.iterations << "\n";
    out << "final_loss " << fmt17(model.final_loss) << "\n";
    out << "seed " << model.seed << "\n";
    return out.str();
}

CategoriserModel parse_model(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    auto next_line = [&](const char* what) {
        if (!std::getline(in, line))
            throw ValidationError(std::string("model file: unexpected end before ") + what);
        return line;
    };

    if (next_line("header") != "ethopipe-categoriser v1")
        throw ValidationError("model file: unsupported header '" + line + "'");

    CategoriserModel model;
    auto header = split_ws(next_line("categories"));
    if (header.size() != 2 || header[0] != "categories")
        throw ValidationError("model file: expected 'categories <n>'");
    const int K = std::stoi(header[1]);
    if (K < 2) throw ValidationError("model file: need at least 2 categories");
    for (int k = 0; k < K; ++k) model.categories.push_back(next_line("category name"));

    auto read_row = [&](const char* key, int count) {
        auto toks = split_ws(next_line(key));
        if (toks.empty() || toks[0] != key || static_cast<int>(toks.size()) != count + 1)
            throw ValidationError(std::string("model file: expected '") + key + "' row with " +
                                  std::to_string(count) + " values");
        std::vector<double> vals;
        for (int i = 1; i <= count; ++i) vals.push_back(std::stod(toks[i]));
        return vals;
    };

    auto means = read_row("feature_means", kFeatureCount);
    auto sds = read_row("feature_sds", kFeatureCount);
    auto zv = read_row("zero_variance", kFeatureCount);
    for (int j = 0; j < kFeatureCount; ++j) {
        model.feature_mean[j] = means[j];
        model.feature_sd[j] = sds[j];
        model.zero_variance[j] = zv[j] != 0;
        if (!(model.feature_sd[j] > 0))
            throw ValidationError("model file: feature SDs must be positive");
    }

    auto wh = split_ws(next_line("weights"));
    if (wh.size() != 3 || wh[0] != "weights" || std::stoi(wh[1]) != K ||
        std::stoi(wh[2]) != kFeatureCount + 1)
        throw ValidationError("model file: expected 'weights K 9'");
    model.weights.resize(K);
    for (int k = 0; k < K; ++k) {
        auto toks = split_ws(next_line("weight row"));
        if (static_cast<int>(toks.size()) != kFeatureCount + 1)
            throw ValidationError("model file: weight row must have 9 values");
        for (int j = 0; j <= kFeatureCount; ++j) model.weights[k][j] = std::stod(toks[j]);
    }

    auto it = split_ws(next_line("iterations"));
    if (it.size() != 2 || it[0] != "iterations")
        throw ValidationError("model file: expected 'iterations <n>'");
    model.iterations = std::stoi(it[1]);
    auto fl = split_ws(next_line("final_loss"));
    if (fl.size() != 2 || fl[0] != "final_loss")
        throw ValidationError("model file: expected 'final_loss <v>'");
    model.final_loss = std::stod(fl[1]);
    auto sd = split_ws(next_line("seed"));
    if (sd.size() != 2 || sd[0] != "seed")
        throw ValidationError("model file: expected 'seed <n>'");
    model.seed = std::stoull(sd[1]);
    return model;
}

void save_model(const CategoriserModel& model, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write model: " + path);
    out << serialize_model(model);
    if (!out) throw IoError("write failed: " + path);
}

CategoriserModel load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open model: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_model(ss.str());
}

std::string serialize_timeline_csv(const ProbabilityTimeline& tl) {
    std::string out = "time_s";
    for (const auto& c : tl.categories) out += "," + c;
    out += "\n";
    char buf[64];
    for (std::size_t i = 0; i < tl.times_s.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.6f", tl.times_s[i]);
        out += buf;
        for (double p : tl.probs[i]) {
            std::snprintf(buf, sizeof(buf), ",%.9f", p);
            out += buf;
        }
        out += "\n";
    }
    return out;
}

namespace {

std::vector<std::string> split_comma(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace

ProbabilityTimeline parse_timeline_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw ValidationError("timeline: empty file");
    auto header = split_comma(line);
    if (header.size() < 3 || header[0] != "time_s")
        throw ValidationError("timeline: expected header 'time_s,<category>...'");
    ProbabilityTimeline tl;
    tl.categories.assign(header.begin() + 1, header.end());

    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        auto cells = split_comma(line);
        if (cells.size() != header.size())
            throw ValidationError("timeline line " + std::to_string(line_no) +
                                  ": wrong column count");
        std::vector<double> row;
        double t;
        try {
            t = std::stod(cells[0]);
            for (std::size_t i = 1; i < cells.size(); ++i) row.push_back(std::stod(cells[i]));
        } catch (const std::exception&) {
            throw ValidationError("timeline line " + std::to_string(line_no) + ": bad number");
        }
        double sum = 0;
        for (double p : row) sum += p;
        if (std::abs(sum - 1.0) > 1e-6)
            throw ValidationError("timeline line " + std::to_string(line_no) +
                                  ": probabilities sum to " + std::to_string(sum));
        if (!tl.times_s.empty() && t <= tl.times_s.back())
            throw ValidationError("timeline line " + std::to_string(line_no) +
                                  ": times must be strictly increasing");
        tl.times_s.push_back(t);
        tl.probs.push_back(std::move(row));
    }
    return tl;
}

void write_timeline_csv(const ProbabilityTimeline& tl, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write timeline: " + path);
    out << serialize_timeline_csv(tl);
    if (!out) throw IoError("write failed: " + path);
}

ProbabilityTimeline read_timeline_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open timeline: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_timeline_csv(ss.str());
}

std::vector<std::vector<double>> read_external_probabilities(
    const std::string& probs_csv_path, const std::vector<std::string>& manifest_ids,
    const std::vector<std::string>& categories) {
    std::ifstream in(probs_csv_path, std::ios::binary);
    if (!in) throw IoError("cannot open probabilities file: " + probs_csv_path);

    std::string line;
    if (!std::getline(in, line)) throw ValidationError("probabilities file: empty");
    auto header = split_comma(line);
    if (header.size() < 2 || header[0] != "id")
        throw ValidationError("probabilities file: expected header 'id,<category>...'");

    const std::set<std::string> known(categories.begin(), categories.end());
    for (std::size_t i = 1; i < header.size(); ++i)
        if (!known.count(header[i]))
            throw ValidationError("unknown category column '" + header[i] + "'");
    if (header.size() - 1 != known.size())
        throw ValidationError("probabilities file: expected one column per category (" +
                              std::to_string(known.size()) + ")");

    std::map<std::string, std::vector<double>> rows;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        auto cells = split_comma(line);
        if (cells.size() != header.size())
            throw ValidationError("probabilities line " + std::to_string(line_no) +
                                  ": wrong column count");
        std::vector<double> probs(categories.size(), 0.0);
        double sum = 0;
        for (std::size_t i = 1; i < cells.size(); ++i) {
            double v;
            try {
                v = std::stod(cells[i]);
            } catch (const std::exception&) {
                throw ValidationError("probabilities line " + std::to_string(line_no) +
                                      ": bad number");
            }
            const auto pos = std::find(categories.begin(), categories.end(), header[i]);
            probs[static_cast<std::size_t>(pos - categories.begin())] = v;
            sum += v;
        }
        if (std::abs(sum - 1.0) > 1e-6)
            throw ValidationError("probabilities line " + std::to_string(line_no) +
                                  ": row sums to " + std::to_string(sum) + ", expected 1");
        rows[cells[0]] = std::move(probs);
    }

    std::vector<std::vector<double>> out;
    for (const auto& id : manifest_ids) {
        auto it = rows.find(id);
        if (it == rows.end())
            throw ValidationError("probabilities file: missing id '" + id + "'");
        out.push_back(it->second);
    }
    return out;
}

}  // namespace ethopipe
