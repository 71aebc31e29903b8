// make_fixture: generates the synthetic end-to-end fixture used by the
// integration tests and the README walkthrough. One 200-frame "video" of a
// disk-shaped animal whose motion style changes per behaviour bout, plus
// sidecar detector masks, a ground-truth annotation document, an ethogram,
// and a small detector-training dataset for the augment stage.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <CLI11.hpp>

#include "ethopipe/annotations.hpp"
#include "ethopipe/detection.hpp"
#include "ethopipe/ethogram.hpp"
#include "ethopipe/imageio.hpp"
#include "ethopipe/rng.hpp"

namespace fs = std::filesystem;
using namespace ethopipe;

namespace {

struct Options {
    std::string out;
    int frames = 200;
    int width = 320;
    int height = 240;
    double fps = 24.0;
    std::uint64_t seed = 7;
};

// Bout layout on the 45-frame training grid: windows [45,90) and [135,180)
// are pure RG / RH, [0,45) and [90,135) are background.
constexpr double kRgStart = 1.875, kRgEnd = 3.71;
constexpr double kRhStart = 5.625, kRhEnd = 7.5;

PointF animal_centre(int t, const Options& opt, Rng& jitter) {
    const double cx = opt.width / 2.0, cy = opt.height / 2.0;
    const int rg0 = static_cast<int>(kRgStart * opt.fps);        // 45
    const int rg1 = static_cast<int>(kRgEnd * opt.fps) + 1;      // ~90
    const int rh0 = static_cast<int>(kRhStart * opt.fps);        // 135
    const int rh1 = static_cast<int>(kRhEnd * opt.fps);          // 180
    if (t >= rg0 && t < rg1) {
        // RG: fast wide sweep
        const double theta = 0.30 * (t - rg0);
        return {cx + 55.0 * std::cos(theta), cy + 45.0 * std::sin(theta)};
    }
    if (t >= rh0 && t < rh1) {
        // RH: in-place jitter
        return {cx + 60.0 + jitter.uniform(-2.0, 2.0), cy + 20.0 + jitter.uniform(-2.0, 2.0)};
    }
    // background: slow drift
    return {60.0 + 0.35 * t, cy - 40.0 + 12.0 * std::sin(0.02 * t)};
}

Polygon disk_polygon(const PointF& c, double radius, int sides = 24) {
    Polygon p;
    for (int i = 0; i < sides; ++i) {
        const double theta = 2.0 * M_PI * i / sides;
        p.vertices.push_back({c.x + radius * std::cos(theta), c.y + radius * std::sin(theta)});
    }
    return p;
}

Image render_frame(const Mask& animal, const Options& opt, int t) {
    Image img(opt.width, opt.height);
    for (int y = 0; y < opt.height; ++y) {
        for (int x = 0; x < opt.width; ++x) {
            std::uint8_t* p = img.at(x, y);
            if (animal.get(x, y)) {
                p[0] = static_cast<std::uint8_t>(120 + (x * 3 + y * 5) % 24);
                p[1] = static_cast<std::uint8_t>(90 + (x + y) % 16);
                p[2] = static_cast<std::uint8_t>(60 + (x * 7 + y) % 12);
            } else {
                p[0] = static_cast<std::uint8_t>(70 + (x * 13 + y * 7 + t) % 30);
                p[1] = static_cast<std::uint8_t>(110 + (x * 5 + y * 11) % 30);
                p[2] = static_cast<std::uint8_t>(60 + (x + y * 3) % 25);
            }
        }
    }
    return img;
}

Mask erode(const Mask& m) {
    Mask out(m.width, m.height);
    for (int y = 0; y < m.height; ++y)
        for (int x = 0; x < m.width; ++x) {
            if (!m.get(x, y)) continue;
            const bool interior = x > 0 && m.get(x - 1, y) && x < m.width - 1 &&
                                  m.get(x + 1, y) && y > 0 && m.get(x, y - 1) &&
                                  y < m.height - 1 && m.get(x, y + 1);
            if (interior) out.set(x, y, 1);
        }
    return out;
}

Mask dilate(const Mask& m) {
    Mask out = m;
    for (int y = 0; y < m.height; ++y)
        for (int x = 0; x < m.width; ++x) {
            if (m.get(x, y)) continue;
            const bool touch = (x > 0 && m.get(x - 1, y)) || (x < m.width - 1 && m.get(x + 1, y)) ||
                               (y > 0 && m.get(x, y - 1)) || (y < m.height - 1 && m.get(x, y + 1));
            if (touch) out.set(x, y, 1);
        }
    return out;
}

void write_video_fixture(const Options& opt) {
    const fs::path frames_dir = fs::path(opt.out) / "frames";
    const fs::path masks_dir = fs::path(opt.out) / "masks";
    fs::create_directories(frames_dir);
    fs::create_directories(masks_dir);

    Dataset gt;
    gt.categories = {"macaque"};
    Rng jitter(opt.seed, 0x6a69, 0);

    for (int t = 0; t < opt.frames; ++t) {
        const PointF c = animal_centre(t, opt, jitter);
        const double radius = 16.0 + 1.5 * std::sin(0.4 * t);
        const Polygon poly = disk_polygon(c, radius);
        const Mask animal = rasterize_polygon(poly, opt.width, opt.height);

        char name[32];
        std::snprintf(name, sizeof(name), "frame_%06d.png", t);
        write_png((frames_dir / name).string(), render_frame(animal, opt, t));

        // predicted masks: mostly exact, periodically degraded so detect-eval
        // sees under- and over-detections
        Mask pred = animal;
        if (t % 7 == 3) pred = erode(erode(erode(pred)));
        if (t % 11 == 5) pred = dilate(dilate(dilate(pred)));
        write_mask_sidecar(masks_dir.string(), t, {pred});

        gt.images.push_back({t + 1, name, opt.width, opt.height});
        gt.annotations.push_back({t + 1, "macaque", poly});
    }

    std::ofstream meta(frames_dir / "video.meta");
    meta << "fps=" << opt.fps << "\n";

    save_annotation_document(gt, (fs::path(opt.out) / "annotations.json").string());
    write_ethogram_csv({{"RG", kRgStart, kRgEnd}, {"RH", kRhStart, kRhEnd}},
                       (fs::path(opt.out) / "ethogram.csv").string());
}

void write_detector_training_set(const Options& opt) {
    const fs::path dir = fs::path(opt.out) / "detector_train";
    fs::create_directories(dir);

    Dataset d;
    d.categories = {"macaque"};
    Rng rng(opt.seed, 0x7261, 0);
    const int W = 160, H = 120;
    for (int i = 0; i < 12; ++i) {
        char name[32];
        std::snprintf(name, sizeof(name), "train_%02d.png", i);
        d.images.push_back({i + 1, name, W, H});

        Mask all(W, H);
        const int animals = 1 + static_cast<int>(rng.uniform_int(2));
        for (int a = 0; a < animals; ++a) {
            const PointF c{rng.uniform(30.0, W - 30.0), rng.uniform(30.0, H - 30.0)};
            const Polygon poly = disk_polygon(c, rng.uniform(12.0, 22.0), 16);
            d.annotations.push_back({i + 1, "macaque", poly});
            const Mask m = rasterize_polygon(poly, W, H);
            for (std::size_t k = 0; k < m.bits.size(); ++k) all.bits[k] |= m.bits[k];
        }

        Image img(W, H);
        for (int y = 0; y < H; ++y)
            for (int x = 0; x < W; ++x) {
                std::uint8_t* p = img.at(x, y);
                if (all.get(x, y)) {
                    p[0] = static_cast<std::uint8_t>(130 + (x * 3 + y) % 20);
                    p[1] = static_cast<std::uint8_t>(95 + (x + y * 3) % 14);
                    p[2] = static_cast<std::uint8_t>(58 + (x * 5 + y * 7) % 10);
                } else {
                    p[0] = static_cast<std::uint8_t>(80 + (x * 11 + y * 5 + i * 9) % 36);
                    p[1] = static_cast<std::uint8_t>(105 + (x * 7 + y * 13) % 30);
                    p[2] = static_cast<std::uint8_t>(70 + (x * 3 + y * 9) % 26);
                }
            }
        write_png((dir / name).string(), img);
    }
    save_annotation_document(d, (dir / "annotations.json").string());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"make_fixture: generate the synthetic ethopipe demo fixture"};
    Options opt;
    app.add_option("--out", opt.out, "output directory")->required();
    app.add_option("--frames", opt.frames, "video length in frames");
    app.add_option("--width", opt.width);
    app.add_option("--height", opt.height);
    app.add_option("--fps", opt.fps);
    app.add_option("--seed", opt.seed);
    CLI11_PARSE(app, argc, argv);

    try {
        fs::create_directories(opt.out);
        write_video_fixture(opt);
        write_detector_training_set(opt);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    std::fprintf(stderr, "[make_fixture] wrote %d frames to %s\n", opt.frames, opt.out.c_str());
    return 0;
}
