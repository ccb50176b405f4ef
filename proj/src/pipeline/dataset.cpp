#include "dh/pipeline/dataset.hpp"

#include <algorithm>
#include <random>

#include <nlohmann/json.hpp>

#include "dh/annotate/coco.hpp"
#include "dh/core/fsutil.hpp"
#include "dh/core/hex.hpp"
#include "dh/core/sha256.hpp"

namespace dh::pipeline {

namespace stdfs = std::filesystem;

namespace {

struct PageRef {
    const quality::DocMeta* meta;
    const annotate::PageAnnotation* page;
};

std::string shard_name(std::size_t index) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "shard_%04u", unsigned(index));
    return buf;
}

std::string page_file_name(const PageRef& ref) {
    return ref.meta->hash + "_" + std::to_string(ref.page->page_index) + ".png";
}

}  // namespace

EmitResult emit_dataset(const stdfs::path& out_dir, const std::vector<quality::DocMeta>& metas,
                        const std::map<std::string, std::vector<annotate::PageAnnotation>>& anns,
                        const quality::FilterSpec& filter, std::size_t shard_size,
                        std::uint64_t seed) {
    EmitResult result;
    quality::FilterOutcome filtered = quality::apply_filters(metas, filter);
    for (const auto& [predicate, count] : filtered.rejected_by_predicate)
        result.rejected_by_predicate[predicate] = count;
    result.accepted_docs = filtered.accepted.size();

    std::vector<PageRef> pages;
    for (std::size_t idx : filtered.accepted) {
        const quality::DocMeta& meta = metas[idx];
        auto it = anns.find(meta.hash);
        if (it == anns.end()) continue;
        for (const auto& page : it->second) pages.push_back(PageRef{&meta, &page});
    }
    // Seeded shuffle is the only randomness in the pipeline.
    std::mt19937_64 rng(seed);
    std::shuffle(pages.begin(), pages.end(), rng);
    result.pages = pages.size();

    stdfs::path dataset_dir = out_dir / "dataset";
    std::error_code ec;
    stdfs::remove_all(dataset_dir, ec);
    stdfs::create_directories(dataset_dir);

    const std::size_t shard_count = pages.empty() ? 0 : (pages.size() + shard_size - 1) / shard_size;
    nlohmann::json manifest;
    manifest["pages"] = pages.size();
    manifest["documents"] = result.accepted_docs;
    auto manifest_shards = nlohmann::json::array();

    for (std::size_t s = 0; s < shard_count; ++s) {
        const std::string name = shard_name(s);
        stdfs::path shard_dir = dataset_dir / name;
        stdfs::create_directories(shard_dir / "images");

        std::size_t begin = s * shard_size;
        std::size_t end = std::min(pages.size(), begin + shard_size);

        std::vector<annotate::CocoImage> coco_images;
        std::string meta_jsonl;
        for (std::size_t i = begin; i < end; ++i) {
            const PageRef& ref = pages[i];
            const std::string file_name = page_file_name(ref);
            stdfs::path src = out_dir / "pages" / file_name;
            if (stdfs::exists(src))
                fs::write_file(shard_dir / "images" / file_name, fs::read_file(src));
            annotate::CocoImage img;
            img.id = int(i - begin) + 1;
            img.file_name = "images/" + file_name;
            img.width = ref.page->width;
            img.height = ref.page->height;
            img.boxes = ref.page->boxes;
            coco_images.push_back(std::move(img));

            nlohmann::json row{
                {"hash", ref.meta->hash},
                {"page_index", ref.page->page_index},
                {"file_name", "images/" + file_name},
                {"language", ref.meta->language.code},
                {"language_confidence", ref.meta->language.confidence},
                {"word_count", ref.meta->stats.word_count},
            };
            if (std::size_t(ref.page->page_index) < ref.meta->page_languages.size())
                row["page_language"] =
                    ref.meta->page_languages[std::size_t(ref.page->page_index)].code;
            if (ref.meta->perplexity) row["perplexity"] = *ref.meta->perplexity;
            if (ref.meta->reliability) row["reliability"] = *ref.meta->reliability;
            meta_jsonl += row.dump() + "\n";
        }
        fs::write_file(shard_dir / "annotations.json", annotate::coco_json(coco_images));
        fs::write_file(shard_dir / "meta.jsonl", meta_jsonl);

        // Shard hash over sorted relative paths and their content hashes.
        std::vector<std::string> lines;
        for (const auto& entry : stdfs::recursive_directory_iterator(shard_dir)) {
            if (!entry.is_regular_file()) continue;
            std::string rel = stdfs::relative(entry.path(), shard_dir).generic_string();
            lines.push_back(rel + " " + Sha256::hex_digest(fs::read_file(entry.path())));
        }
        std::sort(lines.begin(), lines.end());
        Sha256 hasher;
        for (const auto& line : lines) hasher.update(line + "\n");
        manifest_shards.push_back({{"name", name},
                                   {"pages", end - begin},
                                   {"sha256", to_hex(hasher.finish())}});
    }
    manifest["shards"] = std::move(manifest_shards);
    fs::write_file(dataset_dir / "manifest.json", manifest.dump(2) + "\n");
    result.shards = shard_count;
    return result;
}

}  // namespace dh::pipeline
