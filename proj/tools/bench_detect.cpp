// Benchmark comparing the OpenMP detection kernel against the serial
// reference on synthetic pages.
#include <chrono>
#include <cstdio>
#include <random>

#include "dh/annotate/detect.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace dh;
using namespace dh::annotate;

namespace {

Image synthetic_page(std::mt19937_64& rng, const ColorMap& colors, int w, int h, int rects) {
    Image img(w, h);
    std::uniform_int_distribution<int> cat(0, docx::kCategoryCount - 1);
    std::uniform_int_distribution<int> px(0, w - 120);
    std::uniform_int_distribution<int> py(0, h - 60);
    std::uniform_int_distribution<int> pw(20, 110);
    std::uniform_int_distribution<int> ph(8, 50);
    for (int i = 0; i < rects; ++i) {
        auto category = docx::Category(cat(rng));
        img.fill_rect(Rect{px(rng), py(rng), pw(rng), ph(rng)}, colors.color_of(category));
    }
    return img;
}

template <typename Fn>
double time_ms(Fn&& fn, int repeats) {
    auto start = std::chrono::steady_clock::now();
    for (int i = 0; i < repeats; ++i) fn();
    auto end = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(end - start).count() / repeats;
}

}  // namespace

int main(int argc, char** argv) {
    int pages = argc > 1 ? std::atoi(argv[1]) : 6;
    int repeats = argc > 2 ? std::atoi(argv[2]) : 3;
    ColorMap colors;
    DetectParams params;
    std::mt19937_64 rng(42);

#ifdef _OPENMP
    std::printf("OpenMP: %d threads\n", omp_get_max_threads());
#else
    std::printf("OpenMP: not enabled in this build\n");
#endif
    std::printf("%-10s %-12s %-12s %-10s %s\n", "page", "parallel ms", "serial ms", "speedup",
                "boxes");

    double total_par = 0, total_ser = 0;
    for (int p = 0; p < pages; ++p) {
        Image page = synthetic_page(rng, colors, 1275, 1650, 40 + 10 * p);
        std::vector<CategoryBox> parallel_boxes, serial_boxes;
        double par = time_ms([&] { parallel_boxes = detect_bboxes(page, colors, params); },
                             repeats);
        double ser = time_ms(
            [&] { serial_boxes = detect_bboxes_reference(page, colors, params); }, repeats);
        if (parallel_boxes != serial_boxes) {
            std::fprintf(stderr, "MISMATCH on page %d: %zu vs %zu boxes\n", p,
                         parallel_boxes.size(), serial_boxes.size());
            return 1;
        }
        total_par += par;
        total_ser += ser;
        std::printf("%-10d %-12.2f %-12.2f %-10.2f %zu\n", p, par, ser, ser / par,
                    parallel_boxes.size());
    }
    std::printf("%-10s %-12.2f %-12.2f %-10.2f\n", "total", total_par, total_ser,
                total_ser / total_par);
    return 0;
}
