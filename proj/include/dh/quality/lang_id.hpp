#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace dh::quality {

struct LanguageGuess {
    std::string code = "und";
    double confidence = 0.0;
};

// Character 1..3-gram frequency profile (top 300 by frequency, rank order).
struct LanguageProfile {
    std::string code;
    std::vector<std::string> grams;  // most frequent first
};

LanguageProfile train_profile(const std::string& code, const std::string& text);

std::string profile_to_text(const LanguageProfile& profile);
LanguageProfile profile_from_text(const std::string& text);

// Rank-order (out-of-place) classifier over loaded profiles. The built-in set
// covers a handful of common languages; production deployments can point the
// pipeline at profile files trained on bigger corpora.
class LanguageClassifier {
public:
    static LanguageClassifier with_builtin_profiles();
    static LanguageClassifier from_directory(const std::filesystem::path& dir);

    void add(LanguageProfile profile);
    std::size_t size() const { return profiles_.size(); }

    // Texts shorter than 20 characters return ("und", 0). Confidence is the
    // normalized margin between the best and second-best profile distance.
    LanguageGuess identify(const std::string& text) const;

private:
    std::vector<LanguageProfile> profiles_;
};

}  // namespace dh::quality
