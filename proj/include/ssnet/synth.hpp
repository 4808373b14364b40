#ifndef SSNET_SYNTH_HPP
#define SSNET_SYNTH_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ssnet/model.hpp"

namespace ssnet {

enum class RtDistribution { Zero, Uniform, PowerLaw };
enum class AttachmentMode { Uniform, Preferential };

struct SynthConfig {
    int n_papers = 100;
    int n_users = 50;
    int n_blocks = 4;
    double p_in = 0.3;
    double p_out = 0.01;
    int mentions_per_user = 8;
    int bot_count = 0;
    double bot_rate_multiplier = 50.0;
    RtDistribution rt_distribution = RtDistribution::Zero;
    double rt_param = 0.0;  // Uniform: max count; PowerLaw: exponent
    // Uniform: papers within the chosen block are equally likely.
    // Preferential: a copy process — with probability `innovation` the next
    // unused paper is introduced, otherwise a uniformly random past mention
    // is copied. Paper popularity then follows a power law with exponent
    // 1 + 1/(1 - innovation).
    AttachmentMode attachment = AttachmentMode::Uniform;
    double innovation = 1.0 / 3.0;
    std::int64_t time_window = 7 * 86400;
    std::uint64_t seed = 0;

    void validate() const;
};

struct SynthOutput {
    std::vector<MentionEvent> events;
    std::map<std::string, int> block_of_paper;  // ground truth, every paper
    std::vector<std::string> bot_users;
};

// Fully deterministic: identical config => byte-identical events. Papers are
// assigned round-robin to blocks; each user has a home block and picks it
// with probability proportional to p_in (other blocks p_out); a user's
// mentions all fall inside one time window. Bots mention uniformly at
// bot_rate_multiplier times the base rate within a single hour.
SynthOutput generate_stream(const SynthConfig& cfg);

// Discrete power-law samples by inverse CDF over a precomputed normalized
// tail (truncated far out); seeded deterministic.
std::vector<int> sample_power_law(double gamma, int x_min, std::size_t n, std::uint64_t seed);

// Writes the mention stream in the ingest input format.
void write_stream_jsonl(const std::vector<MentionEvent>& events, const std::string& path);
void write_ground_truth_csv(const SynthOutput& out, const std::string& path);

}  // namespace ssnet

#endif
