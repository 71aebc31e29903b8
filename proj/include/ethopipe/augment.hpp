#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ethopipe/annotations.hpp"
#include "ethopipe/image.hpp"
#include "ethopipe/rng.hpp"

namespace ethopipe {

// Hard transform bounds. AugmentConfig values may be tightened below these
// but can never exceed them, and the per-transform operations reject
// arguments beyond them outright.
inline constexpr double kMinCropRetain = 0.5;       // crop keeps >= 50% of each dimension
inline constexpr double kMaxRotationDeg = 35.0;     // -35 .. +35 degrees
inline constexpr double kMaxGrayscaleProb = 0.10;   // applied to 10% of images
inline constexpr double kMaxBlurSigma = 3.25;       // "6.5 pixels" = kernel radius ~ 2 sigma
inline constexpr double kMaxNoiseFraction = 0.04;   // up to 4% of pixels replaced

struct AugmentConfig {
    int multiplier = 2;          // augmented copies per source image
    std::uint64_t seed = 0;
    bool enable_rot90 = true;
    bool enable_crop = true;
    bool enable_rotate = true;
    bool enable_grayscale = true;
    bool enable_blur = true;
    bool enable_noise = true;
    double min_crop_retain = kMinCropRetain;
    double rotation_range_deg = kMaxRotationDeg;
    double grayscale_prob = kMaxGrayscaleProb;
    double blur_sigma_max = kMaxBlurSigma;
    double noise_max_fraction = kMaxNoiseFraction;
    double survive_area_fraction = 0.10;  // clipped polygons below this share are dropped

    /// Throws when a bound is outside its permitted range.
    void validate() const;
};

struct LabelledPolygon {
    std::string category;
    Polygon polygon;
};

struct AnnotatedImage {
    Image pixels;
    std::vector<LabelledPolygon> polygons;
};

enum class Rot90 { CW, CCW, R180 };

/// 90-degree family. Point maps (W, H = source dims, continuous coords):
/// CW (x,y)->(H-y, x), CCW (x,y)->(y, W-x), 180 (x,y)->(W-x, H-y).
AnnotatedImage rot90(const AnnotatedImage& src, Rot90 variant);

/// Axis-aligned crop window in source coordinates, rescaled back to the
/// source dimensions by bilinear sampling.
struct CropWindow {
    double x0 = 0, y0 = 0, w = 0, h = 0;
};

/// Window with each dimension an independently drawn fraction in
/// [min_retain, 1] of the source, position uniform among valid placements.
CropWindow sample_crop_window(int width, int height, double min_retain, Rng& rng);

/// Crop + zoom. Polygons are clipped to the window then scaled; polygons
/// retaining less than survive_fraction of their pre-transform area drop out.
AnnotatedImage crop_zoom(const AnnotatedImage& src, const CropWindow& win,
                         double survive_fraction);

/// Rotation about the image centre; canvas keeps the source dimensions,
/// uncovered pixels black, bilinear sampling. |angle| above the Table-1
/// bound is rejected.
AnnotatedImage rotate_arbitrary(const AnnotatedImage& src, double angle_deg,
                                double survive_fraction = 0.10);

/// Y = round(0.299 R + 0.587 G + 0.114 B) replicated to all channels.
Image grayscale(const Image& img);

/// Separable Gaussian, kernel radius ceil(3*sigma), reflected border.
/// sigma = 0 is the identity; negative sigma is rejected.
Image gaussian_blur(const Image& img, double sigma);

/// Replaces exactly round_half_up(fraction * W * H) distinct pixels with
/// uniform random RGB values. Fractions above the Table-1 bound are rejected.
Image pixel_noise(const Image& img, double fraction, Rng& rng);

/// Everything one augmented copy will do, sampled up front so tests can
/// audit the draws. All randomness derives from (seed, image id, copy
/// index); the plan is independent of traversal and worker order.
struct AugmentPlan {
    bool apply_rot90 = false;
    Rot90 rot90_variant = Rot90::CW;
    bool apply_crop = false;
    CropWindow crop;
    bool apply_rotate = false;
    double rotate_deg = 0;
    bool apply_grayscale = false;
    bool apply_blur = false;
    double blur_sigma = 0;
    bool apply_noise = false;
    double noise_fraction = 0;
    std::uint64_t item_seed = 0;
};

AugmentPlan plan_for_item(const AugmentConfig& cfg, int image_id, int copy_index, int width,
                          int height);

struct Provenance {
    int source_image_id = -1;
    int copy_index = -1;  // -1 marks a pass-through original
    std::uint64_t item_seed = 0;
    std::string transform_log;
};

struct AugmentedImage {
    Image pixels;
    std::vector<LabelledPolygon> polygons;
    Provenance provenance;
};

/// Applies the plan's transforms in the fixed order rot90, crop/zoom,
/// rotation, grayscale, blur, noise.
AugmentedImage augment_item(const Image& pixels, const std::vector<LabelledPolygon>& polygons,
                            const AugmentConfig& cfg, int image_id, int copy_index);

/// In-memory dataset augmentation: all originals plus cfg.multiplier copies
/// per source image, byte-identical for every worker count.
struct DatasetAugmentation {
    Dataset dataset;                     // records parallel to `pixels`
    std::vector<Image> pixels;
    std::vector<Provenance> provenance;
};

DatasetAugmentation augment_dataset(const Dataset& input, const std::vector<Image>& pixels,
                                    const AugmentConfig& cfg, int workers = 1);

}  // namespace ethopipe
