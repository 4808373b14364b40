#include "ssnet/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <stdexcept>

#include <json.hpp>

#include "ssnet/ingest.hpp"

namespace ssnet {

void SynthConfig::validate() const {
    if (n_papers < 1 || n_users < 0 || n_blocks < 1) throw std::invalid_argument("synth: bad sizes");
    if (n_blocks > n_papers) throw std::invalid_argument("synth: more blocks than papers");
    if (!(0.0 <= p_out && p_out < p_in && p_in <= 1.0)) {
        throw std::invalid_argument("synth: need 0 <= p_out < p_in <= 1");
    }
    if (mentions_per_user < 0 || bot_count < 0) throw std::invalid_argument("synth: negative counts");
    if (time_window <= 0) throw std::invalid_argument("synth: time_window must be > 0");
    if (attachment == AttachmentMode::Preferential && !(innovation > 0.0 && innovation < 1.0)) {
        throw std::invalid_argument("synth: innovation must lie in (0, 1)");
    }
    if (rt_distribution == RtDistribution::PowerLaw && rt_param <= 1.0) {
        throw std::invalid_argument("synth: power-law rt needs exponent > 1");
    }
}

namespace {

std::string paper_id_for(int index) {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "1401.%05d", index + 1);
    return buf;
}

constexpr std::int64_t kBaseEpoch = 1394582400;  // 2014-03-12T00:00:00Z

std::uint64_t draw_retweets(const SynthConfig& cfg, std::mt19937_64& rng) {
    switch (cfg.rt_distribution) {
        case RtDistribution::Zero:
            return 0;
        case RtDistribution::Uniform: {
            std::uniform_int_distribution<std::uint64_t> d(0, static_cast<std::uint64_t>(std::max(0.0, cfg.rt_param)));
            return d(rng);
        }
        case RtDistribution::PowerLaw: {
            // One draw from the shared sampler would reseed; inline inverse
            // CDF on a short table instead.
            std::uniform_real_distribution<double> u(0.0, 1.0);
            double x = u(rng);
            // P(X >= k) ~ k^(1-gamma); invert the continuous approximation.
            double val = std::pow(1.0 - x, -1.0 / (cfg.rt_param - 1.0));
            return static_cast<std::uint64_t>(std::min(val, 1e6));
        }
    }
    return 0;
}

}  // namespace

SynthOutput generate_stream(const SynthConfig& cfg) {
    cfg.validate();
    std::mt19937_64 rng(cfg.seed);
    SynthOutput out;

    std::vector<std::vector<int>> papers_in_block(static_cast<std::size_t>(cfg.n_blocks));
    for (int p = 0; p < cfg.n_papers; ++p) {
        int block = p % cfg.n_blocks;
        out.block_of_paper[paper_id_for(p)] = block;
        papers_in_block[static_cast<std::size_t>(block)].push_back(p);
    }

    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<std::vector<int>> history(static_cast<std::size_t>(cfg.n_blocks));
    std::vector<std::size_t> next_unused(static_cast<std::size_t>(cfg.n_blocks), 0);

    auto pick_paper = [&](int block) -> int {
        const auto& pool = papers_in_block[static_cast<std::size_t>(block)];
        if (cfg.attachment == AttachmentMode::Uniform) {
            std::uniform_int_distribution<std::size_t> d(0, pool.size() - 1);
            return pool[d(rng)];
        }
        auto& hist = history[static_cast<std::size_t>(block)];
        auto& next = next_unused[static_cast<std::size_t>(block)];
        int paper;
        if (hist.empty() || (next < pool.size() && unit(rng) < cfg.innovation)) {
            paper = pool[next++];
        } else {
            std::uniform_int_distribution<std::size_t> d(0, hist.size() - 1);
            paper = hist[d(rng)];
        }
        hist.push_back(paper);
        return paper;
    };

    double p_home = cfg.p_in / (cfg.p_in + (cfg.n_blocks - 1) * cfg.p_out);
    std::int64_t spread = std::max<std::int64_t>(1, cfg.time_window / 2);

    for (int u = 0; u < cfg.n_users; ++u) {
        char name[24];
        std::snprintf(name, sizeof(name), "user%04d", u);
        int home = u % cfg.n_blocks;
        std::int64_t base = kBaseEpoch + static_cast<std::int64_t>(u) * 7;
        for (int k = 0; k < cfg.mentions_per_user; ++k) {
            int block = home;
            if (cfg.n_blocks > 1 && unit(rng) >= p_home) {
                std::uniform_int_distribution<int> d(0, cfg.n_blocks - 2);
                int other = d(rng);
                block = other >= home ? other + 1 : other;
            }
            int paper = pick_paper(block);
            MentionEvent ev;
            ev.user_id = name;
            ev.paper_id = paper_id_for(paper);
            std::uniform_int_distribution<std::int64_t> dt(0, spread - 1);
            ev.timestamp = base + dt(rng);
            ev.retweet_count = draw_retweets(cfg, rng);
            out.events.push_back(std::move(ev));
        }
    }

    int bot_mentions = static_cast<int>(std::lround(cfg.mentions_per_user * cfg.bot_rate_multiplier));
    for (int b = 0; b < cfg.bot_count; ++b) {
        char name[24];
        std::snprintf(name, sizeof(name), "bot%04d", b);
        out.bot_users.emplace_back(name);
        std::int64_t base = kBaseEpoch + 1000 + b;
        for (int k = 0; k < bot_mentions; ++k) {
            std::uniform_int_distribution<int> dp(0, cfg.n_papers - 1);
            MentionEvent ev;
            ev.user_id = name;
            ev.paper_id = paper_id_for(dp(rng));
            std::uniform_int_distribution<std::int64_t> dt(0, 3599);
            ev.timestamp = base + dt(rng);
            ev.retweet_count = draw_retweets(cfg, rng);
            out.events.push_back(std::move(ev));
        }
    }
    return out;
}

std::vector<int> sample_power_law(double gamma, int x_min, std::size_t n, std::uint64_t seed) {
    if (gamma <= 1.0) throw std::invalid_argument("sample_power_law: gamma must be > 1");
    if (x_min < 1) throw std::invalid_argument("sample_power_law: x_min must be >= 1");
    if (n < 1) throw std::invalid_argument("sample_power_law: n must be >= 1");

    // Truncate where the remaining tail mass is negligible relative to the
    // head; capped so gamma close to 1 stays bounded.
    constexpr std::size_t kMaxTable = 2'000'000;
    std::vector<double> cumulative;
    cumulative.reserve(1024);
    double total = 0.0;
    for (std::size_t i = 0; i < kMaxTable; ++i) {
        double k = static_cast<double>(x_min) + static_cast<double>(i);
        total += std::pow(k, -gamma);
        cumulative.push_back(total);
        // Integral bound on the remaining mass.
        double remaining = std::pow(k + 1.0, 1.0 - gamma) / (gamma - 1.0);
        if (i > 16 && remaining < 1e-10 * total) break;
    }
    for (double& c : cumulative) c /= total;

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<int> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        double u = unit(rng);
        auto it = std::lower_bound(cumulative.begin(), cumulative.end(), u);
        std::size_t idx = it == cumulative.end() ? cumulative.size() - 1
                                                 : static_cast<std::size_t>(it - cumulative.begin());
        out.push_back(x_min + static_cast<int>(idx));
    }
    return out;
}

void write_stream_jsonl(const std::vector<MentionEvent>& events, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    for (const auto& ev : events) {
        nlohmann::json j;
        j["user_id"] = ev.user_id;
        j["timestamp"] = format_iso8601_utc(ev.timestamp);
        j["urls"] = {std::string("http://arxiv.org/abs/") + ev.paper_id + "v1"};
        j["retweet_count"] = ev.retweet_count;
        out << j.dump() << '\n';
    }
}

void write_ground_truth_csv(const SynthOutput& synth, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "kind,id,block\n";
    for (const auto& [paper, block] : synth.block_of_paper) {
        out << "paper," << paper << ',' << block << '\n';
    }
    for (const auto& bot : synth.bot_users) {
        out << "bot," << bot << ",\n";
    }
}

}  // namespace ssnet
