#include "ssnet/build.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <ostream>
#include <set>
#include <stdexcept>

#include "ssnet/graph_io.hpp"

namespace ssnet {

void SsnConfig::validate() const {
    if (time_window <= 0) throw std::invalid_argument("time_window must be > 0");
    if (min_interval < 1) throw std::invalid_argument("min_interval must be >= 1s");
    if (min_interval >= time_window) throw std::invalid_argument("min_interval must be < time_window");
}

void BotFilterConfig::validate() const {
    if (degree_z_threshold <= 0 || density_z_threshold <= 0) {
        throw std::invalid_argument("bot-filter thresholds must be > 0");
    }
    if (density_bin <= 0) throw std::invalid_argument("density_bin must be > 0");
}

std::map<std::string, double> normalize_retweets(const std::vector<MentionEvent>& events) {
    if (events.empty()) throw std::invalid_argument("normalize_retweets: no events");
    std::map<std::string, std::uint64_t> raw;
    for (const auto& ev : events) {
        auto& v = raw[ev.paper_id];
        v = std::max(v, ev.retweet_count);
    }
    std::uint64_t corpus_max = 0;
    for (const auto& [id, v] : raw) corpus_max = std::max(corpus_max, v);

    std::map<std::string, double> out;
    for (const auto& [id, v] : raw) {
        out[id] = corpus_max == 0 ? 1.0 : static_cast<double>(v) / static_cast<double>(corpus_max);
    }
    return out;
}

double combine_rt(double rt_a, double rt_b, RtPairRule rule) {
    switch (rule) {
        case RtPairRule::Mean: return 0.5 * (rt_a + rt_b);
        case RtPairRule::Min: return std::min(rt_a, rt_b);
        case RtPairRule::Max: return std::max(rt_a, rt_b);
    }
    return 0.0;
}

double pair_weight(std::int64_t t_i, std::int64_t t_j, double rt_norm_pair, const SsnConfig& cfg) {
    std::int64_t elapsed = std::max(std::llabs(t_j - t_i), static_cast<long long>(cfg.min_interval));
    if (elapsed >= cfg.time_window) return 0.0;
    return rt_norm_pair / std::sqrt(static_cast<double>(elapsed));
}

EdgeSet build_ssn(const std::vector<MentionEvent>& events, const SsnConfig& cfg) {
    cfg.validate();
    EdgeSet ssn("ssn");
    if (events.empty()) return ssn;

    auto rt_norm = normalize_retweets(events);

    // user -> paper -> earliest mention timestamp
    std::map<std::string, std::map<std::string, std::int64_t>> first_mention;
    for (const auto& ev : events) {
        auto [it, inserted] = first_mention[ev.user_id].emplace(ev.paper_id, ev.timestamp);
        if (!inserted) it->second = std::min(it->second, ev.timestamp);
    }

    for (const auto& [user, papers] : first_mention) {
        for (auto i = papers.begin(); i != papers.end(); ++i) {
            for (auto j = std::next(i); j != papers.end(); ++j) {
                double rt = combine_rt(rt_norm.at(i->first), rt_norm.at(j->first), cfg.rt_pair_rule);
                double w = pair_weight(i->second, j->second, rt, cfg);
                if (w > 0.0) ssn.add_weight(i->first, j->first, w);
            }
        }
    }
    return ssn;
}

std::string normalize_author_name(const std::string& name) {
    std::string out;
    bool pending_space = false;
    for (unsigned char c : name) {
        if (std::isspace(c)) {
            if (!out.empty()) pending_space = true;
            continue;
        }
        if (pending_space) {
            out += ' ';
            pending_space = false;
        }
        out += static_cast<char>(std::tolower(c));
    }
    return out;
}

EdgeSet build_coauthorship(const std::map<std::string, PaperRecord>& papers) {
    EdgeSet coauth("coauthorship");
    std::map<std::string, std::vector<std::string>> by_author;  // name -> paper ids (sorted)
    for (const auto& [id, rec] : papers) {
        for (const auto& author : rec.authors) {
            std::string norm = normalize_author_name(author);
            if (!norm.empty()) by_author[norm].push_back(id);
        }
    }
    std::set<EdgeSet::Key> linked;
    for (const auto& [author, ids] : by_author) {
        for (std::size_t i = 0; i < ids.size(); ++i) {
            for (std::size_t j = i + 1; j < ids.size(); ++j) {
                if (ids[i] == ids[j]) continue;
                linked.insert(EdgeSet::make_key(ids[i], ids[j]));
            }
        }
    }
    for (const auto& key : linked) coauth.add_weight(key.first, key.second, 1.0);
    return coauth;
}

namespace {

// 0.6745 (x - median) / MAD; falls back to the mean absolute deviation when
// MAD degenerates to 0 (majority of values identical).
std::vector<double> modified_z_scores(const std::vector<double>& values) {
    std::vector<double> sorted = values;
    std::sort(sorted.begin(), sorted.end());
    auto median_of = [](const std::vector<double>& v) {
        std::size_t n = v.size();
        return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
    };
    double median = median_of(sorted);

    std::vector<double> abs_dev(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) abs_dev[i] = std::fabs(values[i] - median);
    std::vector<double> dev_sorted = abs_dev;
    std::sort(dev_sorted.begin(), dev_sorted.end());
    double mad = median_of(dev_sorted);

    // Both metrics are integer counts, so a scale below one unit is noise;
    // without the floor a single user at median+1 in an otherwise uniform
    // population scores as an extreme outlier.
    double scale = mad;
    double factor = 0.6745;
    if (scale <= 0.0) {
        for (double d : abs_dev) scale += d;
        scale /= static_cast<double>(abs_dev.size());
        factor = 0.7979;
    }
    scale = std::max(scale, 1.0);

    std::vector<double> scores(values.size(), 0.0);
    for (std::size_t i = 0; i < values.size(); ++i) {
        scores[i] = factor * (values[i] - median) / scale;
    }
    return scores;
}

}  // namespace

BotFilterResult filter_bots(const std::vector<MentionEvent>& events, const BotFilterConfig& cfg) {
    cfg.validate();
    BotFilterResult result;

    std::map<std::string, std::set<std::string>> papers_of;
    std::map<std::string, std::map<std::int64_t, std::size_t>> bins_of;  // user -> bin -> count
    for (const auto& ev : events) {
        papers_of[ev.user_id].insert(ev.paper_id);
        bins_of[ev.user_id][ev.timestamp / cfg.density_bin]++;
    }

    if (papers_of.size() < 3) {
        result.kept = events;
        return result;
    }

    std::vector<std::string> users;
    std::vector<double> degrees, peak_rates;
    for (const auto& [user, papers] : papers_of) {
        users.push_back(user);
        degrees.push_back(static_cast<double>(papers.size()));
        std::size_t peak = 0;
        for (const auto& [bin, count] : bins_of[user]) peak = std::max(peak, count);
        peak_rates.push_back(static_cast<double>(peak));
    }

    auto degree_z = modified_z_scores(degrees);
    auto density_z = modified_z_scores(peak_rates);

    std::set<std::string> removed_users;
    for (std::size_t i = 0; i < users.size(); ++i) {
        if (degree_z[i] > cfg.degree_z_threshold) {
            result.removed.push_back({users[i], "degree", degree_z[i], cfg.degree_z_threshold});
            removed_users.insert(users[i]);
        }
        if (density_z[i] > cfg.density_z_threshold) {
            result.removed.push_back({users[i], "density", density_z[i], cfg.density_z_threshold});
            removed_users.insert(users[i]);
        }
    }

    for (const auto& ev : events) {
        if (!removed_users.count(ev.user_id)) result.kept.push_back(ev);
    }
    return result;
}

void write_bot_audit_csv(const std::vector<BotRemoval>& removed, std::ostream& out) {
    out << "user_id,metric,score,threshold\n";
    for (const auto& r : removed) {
        out << r.user_id << ',' << r.metric << ',' << format_double(r.score) << ','
            << format_double(r.threshold) << '\n';
    }
}

}  // namespace ssnet
