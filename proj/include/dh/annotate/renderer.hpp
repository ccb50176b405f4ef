#pragma once

#include <memory>
#include <string>
#include <vector>

#include "dh/core/bytes.hpp"
#include "dh/core/image.hpp"

namespace dh::annotate {

struct RenderOptions {
    int dpi = 150;
    int max_pages = 150;
    int timeout_seconds = 120;
};

enum class RenderStatus { Ok, TooManyPages, Crashed, Timeout };

struct RenderResult {
    RenderStatus status = RenderStatus::Crashed;
    std::vector<Image> pages;  // lossless page rasters
    Bytes pdf;                 // intermediate PDF
    int page_count = 0;
    std::string detail;
};

// Adapter over whatever turns a document into page images plus a PDF. The
// deterministic mock implementation keeps CI hermetic; the external one
// shells out to a headless office converter.
class Renderer {
public:
    virtual ~Renderer() = default;
    virtual RenderResult render(const Bytes& container_bytes, const RenderOptions& options) = 0;
};

struct ExternalRendererConfig {
    // "{in}" -> input file, "{outdir}" -> output directory, "{dpi}" -> dpi.
    std::string convert_command = "soffice --headless --convert-to pdf --outdir {outdir} {in}";
    std::string raster_command = "pdftoppm -r {dpi} -png {in} {outdir}/page";
};

std::unique_ptr<Renderer> make_external_renderer(const ExternalRendererConfig& config);

}  // namespace dh::annotate
