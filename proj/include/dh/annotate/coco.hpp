#pragma once

#include <string>
#include <vector>

#include "dh/annotate/annotator.hpp"

namespace dh::annotate {

struct CocoImage {
    int id = 0;
    std::string file_name;
    int width = 0;
    int height = 0;
    std::vector<BoxAnnotation> boxes;
};

// COCO object-detection schema: images, the 30 categories (ids 1..30 in
// SemanticCategory order), annotations with [x,y,w,h] boxes and iscrowd=0.
std::string coco_json(const std::vector<CocoImage>& images);

}  // namespace dh::annotate
