#include "ethopipe/annotations.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "ethopipe/errors.hpp"

namespace ethopipe {

const ImageRecord* Dataset::find_image(int id) const {
    for (const auto& rec : images)
        if (rec.id == id) return &rec;
    return nullptr;
}

std::vector<const InstanceAnnotation*> Dataset::annotations_for(int image_id) const {
    std::vector<const InstanceAnnotation*> out;
    for (const auto& ann : annotations)
        if (ann.image_id == image_id) out.push_back(&ann);
    return out;
}

double polygon_area(const Polygon& p) {
    const auto& v = p.vertices;
    if (v.size() < 3) throw ValidationError("degenerate polygon: fewer than 3 vertices");
    double s = 0.0;
    for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++)
        s += v[j].x * v[i].y - v[i].x * v[j].y;
    return std::abs(s) / 2.0;
}

Mask rasterize_polygon(const Polygon& p, int width, int height) {
    const auto& v = p.vertices;
    if (v.size() < 3) throw ValidationError("degenerate polygon: fewer than 3 vertices");
    if (width < 1 || height < 1) throw ValidationError("rasterize_polygon: grid must be at least 1x1");

    Mask m(width, height);
    const std::size_t n = v.size();
    std::vector<double> xs;
    for (int y = 0; y < height; ++y) {
        const double cy = y + 0.5;
        xs.clear();
        for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
            const PointF& a = v[j];
            const PointF& b = v[i];
            if ((b.y > cy) != (a.y > cy))
                xs.push_back(b.x + (cy - b.y) / (a.y - b.y) * (a.x - b.x));
        }
        std::sort(xs.begin(), xs.end());
        // Even-odd: a centre is inside iff it falls in [xs[2k], xs[2k+1]).
        for (std::size_t k = 0; k + 1 < xs.size(); k += 2) {
            int x0 = static_cast<int>(std::ceil(xs[k] - 0.5));
            int x1 = static_cast<int>(std::ceil(xs[k + 1] - 0.5));
            x0 = std::max(x0, 0);
            x1 = std::min(x1, width);
            for (int x = x0; x < x1; ++x) m.set(x, y, 1);
        }
    }
    return m;
}

Polygon clip_polygon(const Polygon& p, double x0, double y0, double x1, double y1) {
    // One pass per half-plane; axis 0 = x, axis 1 = y.
    struct Plane {
        int axis;
        double bound;
        bool keep_ge;
    };
    const Plane planes[4] = {{0, x0, true}, {0, x1, false}, {1, y0, true}, {1, y1, false}};

    std::vector<PointF> poly = p.vertices;
    for (const Plane& pl : planes) {
        if (poly.empty()) break;
        auto coord = [&](const PointF& q) { return pl.axis == 0 ? q.x : q.y; };
        auto inside = [&](const PointF& q) {
            return pl.keep_ge ? coord(q) >= pl.bound : coord(q) <= pl.bound;
        };
        auto intersect = [&](const PointF& a, const PointF& b) {
            const double t = (pl.bound - coord(a)) / (coord(b) - coord(a));
            PointF r{a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)};
            if (pl.axis == 0)
                r.x = pl.bound;
            else
                r.y = pl.bound;
            return r;
        };
        std::vector<PointF> out;
        for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
            const PointF& cur = poly[i];
            const PointF& prev = poly[j];
            const bool ci = inside(cur), pi = inside(prev);
            if (ci) {
                if (!pi) out.push_back(intersect(prev, cur));
                out.push_back(cur);
            } else if (pi) {
                out.push_back(intersect(prev, cur));
            }
        }
        poly = std::move(out);
    }

    // Drop consecutive duplicates produced by corner grazing.
    std::vector<PointF> dedup;
    for (const PointF& q : poly) {
        if (!dedup.empty() && std::abs(dedup.back().x - q.x) < 1e-12 &&
            std::abs(dedup.back().y - q.y) < 1e-12)
            continue;
        dedup.push_back(q);
    }
    while (dedup.size() > 1 && std::abs(dedup.front().x - dedup.back().x) < 1e-12 &&
           std::abs(dedup.front().y - dedup.back().y) < 1e-12)
        dedup.pop_back();

    Polygon out;
    if (dedup.size() >= 3) out.vertices = std::move(dedup);
    return out;
}

namespace {

using nlohmann::json;

const json& require(const json& obj, const char* key, const char* where) {
    auto it = obj.find(key);
    if (it == obj.end())
        throw ValidationError(std::string("malformed annotation document: missing '") + key +
                              "' in " + where);
    return *it;
}

int require_int(const json& obj, const char* key, const char* where) {
    const json& v = require(obj, key, where);
    if (!v.is_number_integer())
        throw ValidationError(std::string("malformed annotation document: '") + key + "' in " +
                              where + " must be an integer");
    return v.get<int>();
}

std::string require_string(const json& obj, const char* key, const char* where) {
    const json& v = require(obj, key, where);
    if (!v.is_string())
        throw ValidationError(std::string("malformed annotation document: '") + key + "' in " +
                              where + " must be a string");
    return v.get<std::string>();
}

std::string fmt6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

}  // namespace

Dataset parse_annotation_document(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ValidationError(std::string("malformed annotation document: ") + e.what());
    }
    if (!doc.is_object())
        throw ValidationError("malformed annotation document: top level must be an object");

    Dataset d;
    std::set<int> image_ids;
    const json& images = require(doc, "images", "document");
    if (!images.is_array())
        throw ValidationError("malformed annotation document: 'images' must be an array");
    for (const json& im : images) {
        ImageRecord rec;
        rec.id = require_int(im, "id", "image record");
        rec.path = require_string(im, "file_name", "image record");
        rec.width = require_int(im, "width", "image record");
        rec.height = require_int(im, "height", "image record");
        if (rec.width < 1 || rec.height < 1)
            throw ValidationError("non-positive image dimensions for image id " +
                                  std::to_string(rec.id));
        if (!image_ids.insert(rec.id).second)
            throw ValidationError("duplicate image id " + std::to_string(rec.id));
        d.images.push_back(std::move(rec));
    }

    std::map<int, std::string> category_by_id;
    const json& cats = require(doc, "categories", "document");
    if (!cats.is_array())
        throw ValidationError("malformed annotation document: 'categories' must be an array");
    for (const json& c : cats) {
        const int id = require_int(c, "id", "category record");
        std::string name = require_string(c, "name", "category record");
        if (!category_by_id.emplace(id, name).second)
            throw ValidationError("duplicate category id " + std::to_string(id));
        d.categories.push_back(std::move(name));
    }

    const json& anns = require(doc, "annotations", "document");
    if (!anns.is_array())
        throw ValidationError("malformed annotation document: 'annotations' must be an array");
    for (const json& a : anns) {
        InstanceAnnotation ann;
        ann.image_id = require_int(a, "image_id", "annotation record");
        const ImageRecord* rec = d.find_image(ann.image_id);
        if (!rec)
            throw ValidationError("dangling image reference: annotation refers to image id " +
                                  std::to_string(ann.image_id));
        const int cat_id = require_int(a, "category_id", "annotation record");
        auto cit = category_by_id.find(cat_id);
        if (cit == category_by_id.end())
            throw ValidationError("unknown category id " + std::to_string(cat_id));
        ann.category = cit->second;

        const json& seg = require(a, "segmentation", "annotation record");
        if (!seg.is_array() || seg.empty() || !seg[0].is_array())
            throw ValidationError(
                "malformed annotation document: 'segmentation' must be a non-empty array of "
                "coordinate rings");
        if (seg.size() != 1)
            throw ValidationError(
                "multi-ring segmentation not supported by the documented subset");
        const json& ring = seg[0];
        if (ring.size() % 2 != 0)
            throw ValidationError("malformed annotation document: odd segmentation length");
        Polygon poly;
        for (std::size_t i = 0; i + 1 < ring.size(); i += 2) {
            if (!ring[i].is_number() || !ring[i + 1].is_number())
                throw ValidationError(
                    "malformed annotation document: segmentation must contain numbers");
            poly.vertices.push_back({ring[i].get<double>(), ring[i + 1].get<double>()});
        }
        if (poly.vertices.size() < 3)
            throw ValidationError("degenerate polygon: fewer than 3 vertices (image id " +
                                  std::to_string(ann.image_id) + ")");

        ann.polygon = clip_polygon(poly, 0.0, 0.0, rec->width, rec->height);
        if (ann.polygon.vertices.size() < 3 || polygon_area(ann.polygon) <= 0.0)
            throw ValidationError("annotation has zero area after clipping to image bounds "
                                  "(image id " + std::to_string(ann.image_id) + ")");
        d.annotations.push_back(std::move(ann));
    }
    return d;
}

std::string serialize_annotation_document(const Dataset& d) {
    std::map<std::string, int> cat_id;
    for (const std::string& c : d.categories)
        if (!cat_id.count(c)) cat_id[c] = static_cast<int>(cat_id.size()) + 1;

    std::ostringstream out;
    out << "{\"images\":[";
    for (std::size_t i = 0; i < d.images.size(); ++i) {
        const ImageRecord& r = d.images[i];
        out << (i ? ",\n" : "\n") << "{\"id\":" << r.id << ",\"file_name\":\"" << r.path
            << "\",\"width\":" << r.width << ",\"height\":" << r.height << "}";
    }
    out << (d.images.empty() ? "]" : "\n]");

    out << ",\"annotations\":[";
    for (std::size_t i = 0; i < d.annotations.size(); ++i) {
        const InstanceAnnotation& a = d.annotations[i];
        auto it = cat_id.find(a.category);
        if (it == cat_id.end())
            throw ValidationError("annotation category '" + a.category +
                                  "' is not in the dataset label set");
        out << (i ? ",\n" : "\n") << "{\"id\":" << i + 1 << ",\"image_id\":" << a.image_id
            << ",\"category_id\":" << it->second << ",\"segmentation\":[[";
        for (std::size_t k = 0; k < a.polygon.vertices.size(); ++k) {
            const PointF& v = a.polygon.vertices[k];
            out << (k ? "," : "") << fmt6(v.x) << "," << fmt6(v.y);
        }
        out << "]]}";
    }
    out << (d.annotations.empty() ? "]" : "\n]");

    out << ",\"categories\":[";
    {
        std::size_t i = 0;
        std::map<int, std::string> by_id;
        for (const auto& [name, id] : cat_id) by_id[id] = name;
        for (const auto& [id, name] : by_id)
            out << (i++ ? ",\n" : "\n") << "{\"id\":" << id << ",\"name\":\"" << name << "\"}";
        out << (by_id.empty() ? "]" : "\n]");
    }
    out << "}\n";
    return out.str();
}

Dataset load_annotation_document(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open annotation document: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_annotation_document(ss.str());
}

void save_annotation_document(const Dataset& d, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write annotation document: " + path);
    out << serialize_annotation_document(d);
    if (!out) throw IoError("write failed: " + path);
}

}  // namespace ethopipe
