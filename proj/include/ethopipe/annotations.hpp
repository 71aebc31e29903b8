#pragma once

#include <string>
#include <vector>

#include "ethopipe/image.hpp"

namespace ethopipe {

/// Ordered vertex list in pixel coordinates; sub-pixel precision allowed.
/// Self-intersecting polygons are accepted and interpreted by the even-odd
/// rule (real annotation exports contain them).
struct Polygon {
    std::vector<PointF> vertices;

    bool operator==(const Polygon&) const = default;
};

struct ImageRecord {
    int id = 0;
    std::string path;
    int width = 0;
    int height = 0;

    bool operator==(const ImageRecord&) const = default;
};

struct InstanceAnnotation {
    int image_id = 0;
    std::string category;
    Polygon polygon;

    bool operator==(const InstanceAnnotation&) const = default;
};

struct Dataset {
    std::vector<ImageRecord> images;
    std::vector<InstanceAnnotation> annotations;
    std::vector<std::string> categories;  // label set, document order

    const ImageRecord* find_image(int id) const;
    std::vector<const InstanceAnnotation*> annotations_for(int image_id) const;

    bool operator==(const Dataset&) const = default;
};

/// |shoelace sum| / 2. Throws on fewer than 3 vertices. Note that for
/// self-intersecting polygons this is the signed-loop area, not the
/// even-odd raster area.
double polygon_area(const Polygon& p);

/// Binary raster of p on a width x height grid: a pixel is set iff its
/// centre (x+0.5, y+0.5) lies inside p under the even-odd rule. Pixels
/// outside image bounds are never set.
Mask rasterize_polygon(const Polygon& p, int width, int height);

/// Sutherland-Hodgman clip against the axis-aligned rectangle
/// [x0,x1] x [y0,y1]. Returns an empty polygon when nothing survives.
Polygon clip_polygon(const Polygon& p, double x0, double y0, double x1, double y1);

/// Parse the documented COCO-style subset: images (id, file_name, width,
/// height), categories (id, name), annotations (image_id, category_id,
/// single-ring polygon segmentation). Unknown fields are ignored, never
/// rejected. Polygons are clipped to their image bounds on ingest.
Dataset parse_annotation_document(const std::string& json_text);

/// Canonical re-serialization: stable key order, category/annotation ids
/// renumbered 1..N in document order, coordinates at 6-decimal precision.
/// write -> read -> write is byte-identical.
std::string serialize_annotation_document(const Dataset& d);

Dataset load_annotation_document(const std::string& path);
void save_annotation_document(const Dataset& d, const std::string& path);

}  // namespace ethopipe
