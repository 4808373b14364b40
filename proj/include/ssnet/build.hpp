#ifndef SSNET_BUILD_HPP
#define SSNET_BUILD_HPP

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "ssnet/model.hpp"

namespace ssnet {

enum class RtPairRule { Mean, Min, Max };

struct SsnConfig {
    std::int64_t time_window = 7 * 86400;  // seconds
    std::int64_t min_interval = 1;         // clamp floor for the elapsed time
    RtPairRule rt_pair_rule = RtPairRule::Mean;

    void validate() const;
};

struct BotFilterConfig {
    double degree_z_threshold = 3.5;
    double density_z_threshold = 3.5;
    std::int64_t density_bin = 3600;  // seconds

    void validate() const;
};

// Per paper: max retweet_count over its events, divided by the corpus max.
// All-zero corpora map every paper to 1.0 so weights reduce to pure time
// decay. Throws on empty input.
std::map<std::string, double> normalize_retweets(const std::vector<MentionEvent>& events);

// Weight of one co-mention pair. Elapsed time is clamped below by
// min_interval; pairs at or beyond the window contribute exactly 0.
double pair_weight(std::int64_t t_i, std::int64_t t_j, double rt_norm_pair, const SsnConfig& cfg);

double combine_rt(double rt_a, double rt_b, RtPairRule rule);

// Co-mention edge set: for each user, each unordered pair of distinct papers
// that user mentioned (earliest mention per paper), summed across users.
EdgeSet build_ssn(const std::vector<MentionEvent>& events, const SsnConfig& cfg);

// Weight-1 edge between every pair of papers sharing at least one
// normalized author name (case-folded, whitespace-collapsed exact match).
EdgeSet build_coauthorship(const std::map<std::string, PaperRecord>& papers);

std::string normalize_author_name(const std::string& name);

struct BotRemoval {
    std::string user_id;
    std::string metric;  // "degree" or "density"
    double score = 0.0;
    double threshold = 0.0;
};

struct BotFilterResult {
    std::vector<MentionEvent> kept;
    std::vector<BotRemoval> removed;
};

// Removes users whose distinct-paper degree or peak posting rate is an
// outlier under a median/MAD modified z-score. Fewer than 3 distinct users:
// nothing is removed.
BotFilterResult filter_bots(const std::vector<MentionEvent>& events, const BotFilterConfig& cfg);

// `user_id,metric,score,threshold` with a header row.
void write_bot_audit_csv(const std::vector<BotRemoval>& removed, std::ostream& out);

}  // namespace ssnet

#endif
