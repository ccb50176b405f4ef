#include "dh/annotate/coco.hpp"

#include <nlohmann/json.hpp>

namespace dh::annotate {

std::string coco_json(const std::vector<CocoImage>& images) {
    nlohmann::json j;
    auto categories = nlohmann::json::array();
    for (int i = 0; i < docx::kCategoryCount; ++i)
        categories.push_back(
            {{"id", i + 1}, {"name", docx::category_name(docx::Category(i))}});
    j["categories"] = std::move(categories);

    auto jimages = nlohmann::json::array();
    auto annotations = nlohmann::json::array();
    int annotation_id = 1;
    for (const auto& img : images) {
        jimages.push_back({{"id", img.id},
                           {"file_name", img.file_name},
                           {"width", img.width},
                           {"height", img.height}});
        for (const auto& b : img.boxes) {
            annotations.push_back({{"id", annotation_id++},
                                   {"image_id", img.id},
                                   {"category_id", int(b.category) + 1},
                                   {"bbox", {b.box.x, b.box.y, b.box.w, b.box.h}},
                                   {"area", b.box.area()},
                                   {"iscrowd", 0}});
        }
    }
    j["images"] = std::move(jimages);
    j["annotations"] = std::move(annotations);
    return j.dump() + "\n";
}

}  // namespace dh::annotate
