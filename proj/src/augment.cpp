#include "ethopipe/augment.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <unordered_set>

#include "ethopipe/errors.hpp"
#include "ethopipe/parallel.hpp"

namespace ethopipe {

void AugmentConfig::validate() const {
    if (multiplier < 0) throw ValidationError("augment: multiplier must be >= 0");
    if (min_crop_retain < kMinCropRetain || min_crop_retain > 1.0)
        throw ValidationError("augment: crop retain bound must lie in [0.5, 1]");
    if (rotation_range_deg < 0 || rotation_range_deg > kMaxRotationDeg)
        throw ValidationError("augment: rotation range must lie in [0, 35] degrees");
    if (grayscale_prob < 0 || grayscale_prob > kMaxGrayscaleProb)
        throw ValidationError("augment: grayscale probability must lie in [0, 0.10]");
    if (blur_sigma_max < 0 || blur_sigma_max > kMaxBlurSigma)
        throw ValidationError("augment: blur sigma bound must lie in [0, 3.25]");
    if (noise_max_fraction < 0 || noise_max_fraction > kMaxNoiseFraction)
        throw ValidationError("augment: noise fraction bound must lie in [0, 0.04]");
    if (survive_area_fraction < 0 || survive_area_fraction > 1)
        throw ValidationError("augment: survival fraction must lie in [0, 1]");
}

namespace {

PointF map_rot90(const PointF& p, Rot90 variant, double w, double h) {
    switch (variant) {
        case Rot90::CW: return {h - p.y, p.x};
        case Rot90::CCW: return {p.y, w - p.x};
        case Rot90::R180: return {w - p.x, h - p.y};
    }
    return p;
}

std::array<double, 3> bilinear_sample(const Image& img, double sx, double sy) {
    const double u = sx - 0.5, v = sy - 0.5;
    const int i0 = static_cast<int>(std::floor(u));
    const int j0 = static_cast<int>(std::floor(v));
    const double tu = u - i0, tv = v - j0;
    const auto cl = [](int i, int n) { return std::clamp(i, 0, n - 1); };
    const std::uint8_t* p00 = img.at(cl(i0, img.width), cl(j0, img.height));
    const std::uint8_t* p10 = img.at(cl(i0 + 1, img.width), cl(j0, img.height));
    const std::uint8_t* p01 = img.at(cl(i0, img.width), cl(j0 + 1, img.height));
    const std::uint8_t* p11 = img.at(cl(i0 + 1, img.width), cl(j0 + 1, img.height));
    std::array<double, 3> out;
    for (int c = 0; c < 3; ++c)
        out[c] = (1 - tu) * (1 - tv) * p00[c] + tu * (1 - tv) * p10[c] +
                 (1 - tu) * tv * p01[c] + tu * tv * p11[c];
    return out;
}

std::uint8_t to_u8(double v) {
    return static_cast<std::uint8_t>(std::clamp(round_half_up(v), 0, 255));
}

}  // namespace

AnnotatedImage rot90(const AnnotatedImage& src, Rot90 variant) {
    const int W = src.pixels.width, H = src.pixels.height;
    AnnotatedImage out;
    out.pixels = variant == Rot90::R180 ? Image(W, H) : Image(H, W);
    for (int y = 0; y < H; ++y) {
        for (int x = 0; x < W; ++x) {
            const std::uint8_t* s = src.pixels.at(x, y);
            std::uint8_t* d = nullptr;
            switch (variant) {
                case Rot90::CW: d = out.pixels.at(H - 1 - y, x); break;
                case Rot90::CCW: d = out.pixels.at(y, W - 1 - x); break;
                case Rot90::R180: d = out.pixels.at(W - 1 - x, H - 1 - y); break;
            }
            d[0] = s[0];
            d[1] = s[1];
            d[2] = s[2];
        }
    }
    for (const auto& lp : src.polygons) {
        LabelledPolygon t;
        t.category = lp.category;
        for (const PointF& p : lp.polygon.vertices)
            t.polygon.vertices.push_back(map_rot90(p, variant, W, H));
        out.polygons.push_back(std::move(t));
    }
    return out;
}

CropWindow sample_crop_window(int width, int height, double min_retain, Rng& rng) {
    CropWindow win;
    const double uw = rng.uniform(min_retain, 1.0);
    const double uh = rng.uniform(min_retain, 1.0);
    win.w = uw * width;
    win.h = uh * height;
    win.x0 = rng.uniform(0.0, width - win.w);
    win.y0 = rng.uniform(0.0, height - win.h);
    return win;
}

AnnotatedImage crop_zoom(const AnnotatedImage& src, const CropWindow& win,
                         double survive_fraction) {
    const int W = src.pixels.width, H = src.pixels.height;
    if (win.w <= 0 || win.h <= 0 || win.x0 < 0 || win.y0 < 0 || win.x0 + win.w > W + 1e-9 ||
        win.y0 + win.h > H + 1e-9)
        throw ValidationError("crop_zoom: window outside image bounds");

    AnnotatedImage out;
    out.pixels = Image(W, H);
    for (int y = 0; y < H; ++y) {
        for (int x = 0; x < W; ++x) {
            const double sx = win.x0 + (x + 0.5) * win.w / W;
            const double sy = win.y0 + (y + 0.5) * win.h / H;
            const auto v = bilinear_sample(src.pixels, sx, sy);
            std::uint8_t* d = out.pixels.at(x, y);
            d[0] = to_u8(v[0]);
            d[1] = to_u8(v[1]);
            d[2] = to_u8(v[2]);
        }
    }

    const double sx_scale = W / win.w, sy_scale = H / win.h;
    for (const auto& lp : src.polygons) {
        const double orig_area = polygon_area(lp.polygon);
        const Polygon clipped =
            clip_polygon(lp.polygon, win.x0, win.y0, win.x0 + win.w, win.y0 + win.h);
        if (clipped.vertices.size() < 3) continue;
        const double kept = polygon_area(clipped);
        if (kept <= 0 || (orig_area > 0 && kept / orig_area < survive_fraction)) continue;
        LabelledPolygon t;
        t.category = lp.category;
        for (const PointF& p : clipped.vertices)
            t.polygon.vertices.push_back({(p.x - win.x0) * sx_scale, (p.y - win.y0) * sy_scale});
        out.polygons.push_back(std::move(t));
    }
    return out;
}

AnnotatedImage rotate_arbitrary(const AnnotatedImage& src, double angle_deg,
                                double survive_fraction) {
    if (std::abs(angle_deg) > kMaxRotationDeg)
        throw ValidationError("rotation bound exceeded: |" + std::to_string(angle_deg) +
                              "| > 35 degrees");
    const int W = src.pixels.width, H = src.pixels.height;
    const double cx = W / 2.0, cy = H / 2.0;
    const double rad = angle_deg * M_PI / 180.0;
    const double ca = std::cos(rad), sa = std::sin(rad);

    AnnotatedImage out;
    out.pixels = Image(W, H);  // uncovered pixels stay black
    for (int y = 0; y < H; ++y) {
        for (int x = 0; x < W; ++x) {
            const double px = x + 0.5 - cx, py = y + 0.5 - cy;
            // inverse rotation of the output centre back into the source
            const double sx = ca * px + sa * py + cx;
            const double sy = -sa * px + ca * py + cy;
            if (sx < 0 || sx > W || sy < 0 || sy > H) continue;
            const auto v = bilinear_sample(src.pixels, sx, sy);
            std::uint8_t* d = out.pixels.at(x, y);
            d[0] = to_u8(v[0]);
            d[1] = to_u8(v[1]);
            d[2] = to_u8(v[2]);
        }
    }

    for (const auto& lp : src.polygons) {
        const double orig_area = polygon_area(lp.polygon);
        Polygon rotated;
        for (const PointF& p : lp.polygon.vertices)
            rotated.vertices.push_back({ca * (p.x - cx) - sa * (p.y - cy) + cx,
                                        sa * (p.x - cx) + ca * (p.y - cy) + cy});
        const Polygon clipped = clip_polygon(rotated, 0, 0, W, H);
        if (clipped.vertices.size() < 3) continue;
        const double kept = polygon_area(clipped);
        if (kept <= 0 || (orig_area > 0 && kept / orig_area < survive_fraction)) continue;
        out.polygons.push_back({lp.category, clipped});
    }
    return out;
}

Image grayscale(const Image& img) {
    Image out = img;
    for (std::size_t i = 0; i < out.px.size(); i += 3) {
        const double y = 0.299 * out.px[i] + 0.587 * out.px[i + 1] + 0.114 * out.px[i + 2];
        const std::uint8_t g = to_u8(y);
        out.px[i] = out.px[i + 1] = out.px[i + 2] = g;
    }
    return out;
}

Image gaussian_blur(const Image& img, double sigma) {
    if (sigma < 0) throw ValidationError("gaussian_blur: negative sigma");
    if (sigma == 0) return img;

    const int radius = static_cast<int>(std::ceil(3.0 * sigma));
    std::vector<double> kernel(2 * radius + 1);
    double sum = 0;
    for (int k = -radius; k <= radius; ++k) {
        kernel[k + radius] = std::exp(-(static_cast<double>(k) * k) / (2.0 * sigma * sigma));
        sum += kernel[k + radius];
    }
    for (double& w : kernel) w /= sum;

    const auto reflect = [](int i, int n) {
        while (i < 0 || i >= n) {
            if (i < 0) i = -1 - i;
            if (i >= n) i = 2 * n - 1 - i;
        }
        return i;
    };

    const int W = img.width, H = img.height;
    std::vector<double> mid(static_cast<std::size_t>(W) * H * 3);
    for (int y = 0; y < H; ++y) {
        for (int x = 0; x < W; ++x) {
            double acc[3] = {0, 0, 0};
            for (int k = -radius; k <= radius; ++k) {
                const std::uint8_t* s = img.at(reflect(x + k, W), y);
                const double wk = kernel[k + radius];
                acc[0] += wk * s[0];
                acc[1] += wk * s[1];
                acc[2] += wk * s[2];
            }
            double* d = &mid[3 * (static_cast<std::size_t>(y) * W + x)];
            d[0] = acc[0];
            d[1] = acc[1];
            d[2] = acc[2];
        }
    }
    Image out(W, H);
    for (int y = 0; y < H; ++y) {
        for (int x = 0; x < W; ++x) {
            double acc[3] = {0, 0, 0};
            for (int k = -radius; k <= radius; ++k) {
                const double* s = &mid[3 * (static_cast<std::size_t>(reflect(y + k, H)) * W + x)];
                const double wk = kernel[k + radius];
                acc[0] += wk * s[0];
                acc[1] += wk * s[1];
                acc[2] += wk * s[2];
            }
            std::uint8_t* d = out.at(x, y);
            d[0] = to_u8(acc[0]);
            d[1] = to_u8(acc[1]);
            d[2] = to_u8(acc[2]);
        }
    }
    return out;
}

Image pixel_noise(const Image& img, double fraction, Rng& rng) {
    if (fraction < 0 || fraction > kMaxNoiseFraction)
        throw ValidationError("noise bound exceeded: fraction " + std::to_string(fraction) +
                              " outside [0, 0.04]");
    Image out = img;
    const std::size_t total = static_cast<std::size_t>(img.width) * img.height;
    const std::size_t n = static_cast<std::size_t>(round_half_up(fraction * static_cast<double>(total)));
    std::unordered_set<std::size_t> chosen;
    chosen.reserve(n * 2);
    while (chosen.size() < n) {
        const std::size_t idx = rng.uniform_int(total);
        if (!chosen.insert(idx).second) continue;
        std::uint8_t* p = out.px.data() + 3 * idx;
        p[0] = static_cast<std::uint8_t>(rng.uniform_int(256));
        p[1] = static_cast<std::uint8_t>(rng.uniform_int(256));
        p[2] = static_cast<std::uint8_t>(rng.uniform_int(256));
    }
    return out;
}

AugmentPlan plan_for_item(const AugmentConfig& cfg, int image_id, int copy_index, int width,
                          int height) {
    Rng rng(cfg.seed, static_cast<std::uint64_t>(image_id),
            static_cast<std::uint64_t>(copy_index));
    AugmentPlan plan;
    plan.item_seed = rng.next_u64();
    if (cfg.enable_rot90) {
        plan.apply_rot90 = rng.bernoulli(0.5);
        if (plan.apply_rot90)
            plan.rot90_variant = static_cast<Rot90>(rng.uniform_int(3));
    }
    if (cfg.enable_crop) {
        plan.apply_crop = true;
        // rot90 CW/CCW swaps dimensions before the crop runs
        const bool swapped =
            plan.apply_rot90 && plan.rot90_variant != Rot90::R180;
        plan.crop = sample_crop_window(swapped ? height : width, swapped ? width : height,
                                       cfg.min_crop_retain, rng);
    }
    if (cfg.enable_rotate) {
        plan.apply_rotate = true;
        plan.rotate_deg = rng.uniform(-cfg.rotation_range_deg, cfg.rotation_range_deg);
    }
    if (cfg.enable_grayscale) plan.apply_grayscale = rng.bernoulli(cfg.grayscale_prob);
    if (cfg.enable_blur) {
        plan.apply_blur = true;
        plan.blur_sigma = rng.uniform(0.0, cfg.blur_sigma_max);
    }
    if (cfg.enable_noise) {
        plan.apply_noise = true;
        plan.noise_fraction = rng.uniform(0.0, cfg.noise_max_fraction);
    }
    return plan;
}

AugmentedImage augment_item(const Image& pixels, const std::vector<LabelledPolygon>& polygons,
                            const AugmentConfig& cfg, int image_id, int copy_index) {
    const AugmentPlan plan = plan_for_item(cfg, image_id, copy_index, pixels.width, pixels.height);

    AnnotatedImage cur{pixels, polygons};
    std::string log;
    char buf[96];
    if (plan.apply_rot90) {
        cur = rot90(cur, plan.rot90_variant);
        log += plan.rot90_variant == Rot90::CW    ? "rot90=cw;"
               : plan.rot90_variant == Rot90::CCW ? "rot90=ccw;"
                                                  : "rot90=180;";
    }
    if (plan.apply_crop) {
        cur = crop_zoom(cur, plan.crop, cfg.survive_area_fraction);
        std::snprintf(buf, sizeof(buf), "crop=%.4f,%.4f,%.4f,%.4f;", plan.crop.x0, plan.crop.y0,
                      plan.crop.w, plan.crop.h);
        log += buf;
    }
    if (plan.apply_rotate) {
        cur = rotate_arbitrary(cur, plan.rotate_deg, cfg.survive_area_fraction);
        std::snprintf(buf, sizeof(buf), "rotate=%.4f;", plan.rotate_deg);
        log += buf;
    }
    if (plan.apply_grayscale) {
        cur.pixels = grayscale(cur.pixels);
        log += "grayscale;";
    }
    if (plan.apply_blur) {
        cur.pixels = gaussian_blur(cur.pixels, plan.blur_sigma);
        std::snprintf(buf, sizeof(buf), "blur=%.4f;", plan.blur_sigma);
        log += buf;
    }
    if (plan.apply_noise) {
        Rng noise_rng(plan.item_seed, 0x6e6f6973, 0);
        cur.pixels = pixel_noise(cur.pixels, plan.noise_fraction, noise_rng);
        std::snprintf(buf, sizeof(buf), "noise=%.4f;", plan.noise_fraction);
        log += buf;
    }

    AugmentedImage out;
    out.pixels = std::move(cur.pixels);
    out.polygons = std::move(cur.polygons);
    out.provenance = {image_id, copy_index, plan.item_seed, std::move(log)};
    return out;
}

DatasetAugmentation augment_dataset(const Dataset& input, const std::vector<Image>& pixels,
                                    const AugmentConfig& cfg, int workers) {
    cfg.validate();
    if (pixels.size() != input.images.size())
        throw ValidationError("augment_dataset: need pixel data for every image record");
    for (std::size_t i = 0; i < input.images.size(); ++i)
        if (pixels[i].width != input.images[i].width ||
            pixels[i].height != input.images[i].height)
            throw ValidationError("augment_dataset: pixels do not match record dimensions for "
                                  "image id " + std::to_string(input.images[i].id));

    DatasetAugmentation out;
    out.dataset.categories = input.categories;
    out.dataset.images = input.images;
    out.pixels = pixels;
    for (const auto& rec : input.images) out.provenance.push_back({rec.id, -1, 0, ""});
    out.dataset.annotations = input.annotations;

    int max_id = 0;
    for (const auto& rec : input.images) max_id = std::max(max_id, rec.id);

    const std::size_t n_items = input.images.size() * static_cast<std::size_t>(cfg.multiplier);
    std::vector<AugmentedImage> items(n_items);
    run_pool(n_items, workers, [&](std::size_t idx) {
        const std::size_t si = idx / cfg.multiplier;
        const int k = static_cast<int>(idx % cfg.multiplier);
        const ImageRecord& rec = input.images[si];
        std::vector<LabelledPolygon> polys;
        for (const auto* ann : input.annotations_for(rec.id))
            polys.push_back({ann->category, ann->polygon});
        items[idx] = augment_item(pixels[si], polys, cfg, rec.id, k);
    });

    // deterministic merge in item-index order
    for (std::size_t idx = 0; idx < n_items; ++idx) {
        const std::size_t si = idx / cfg.multiplier;
        const int k = static_cast<int>(idx % cfg.multiplier);
        const ImageRecord& src = input.images[si];
        AugmentedImage& item = items[idx];

        ImageRecord rec;
        rec.id = max_id + 1 + static_cast<int>(idx);
        const std::filesystem::path p(src.path);
        rec.path = (p.parent_path() / (p.stem().string() + "_aug" + std::to_string(k) + ".png"))
                       .string();
        rec.width = item.pixels.width;
        rec.height = item.pixels.height;
        out.dataset.images.push_back(rec);
        out.pixels.push_back(std::move(item.pixels));
        out.provenance.push_back(item.provenance);
        for (auto& lp : item.polygons)
            out.dataset.annotations.push_back({rec.id, lp.category, std::move(lp.polygon)});
    }
    return out;
}

}  // namespace ethopipe
