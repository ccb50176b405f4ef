#pragma once

#include <filesystem>
#include <map>

#include "dh/annotate/annotator.hpp"
#include "dh/quality/filters.hpp"

namespace dh::pipeline {

struct EmitResult {
    std::size_t accepted_docs = 0;
    std::size_t pages = 0;
    std::size_t shards = 0;
    std::map<std::string, std::size_t> rejected_by_predicate;
};

// Filters documents, shuffles pages with the seed, and writes
// dataset/shard_NNNN/{annotations.json, meta.jsonl, images/}, then
// dataset/manifest.json with per-shard content hashes.
EmitResult emit_dataset(const std::filesystem::path& out_dir,
                        const std::vector<quality::DocMeta>& metas,
                        const std::map<std::string, std::vector<annotate::PageAnnotation>>& anns,
                        const quality::FilterSpec& filter, std::size_t shard_size,
                        std::uint64_t seed);

}  // namespace dh::pipeline
