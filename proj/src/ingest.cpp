#include "ssnet/ingest.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <regex>
#include <sstream>
#include <thread>

#include <json.hpp>

#ifndef SSNET_NO_HTTP
#define CPPHTTPLIB_NO_EXCEPTIONS
#include <httplib.h>
#endif

namespace ssnet {

using nlohmann::json;

namespace {

// abs/pdf path, new-style (NNNN.NNNNN) or old-style (archive/NNNNNNN) id,
// optional version suffix, optional .pdf extension.
const std::regex kArxivUrl(
    R"(^https?://(?:www\.|export\.)?arxiv\.org/(?:abs|pdf)/((?:\d{4}\.\d{4,5})|(?:[a-z\-]+(?:\.[A-Z]{2})?/\d{7}))(?:v\d+)?(?:\.pdf)?/?(?:[?#].*)?$)",
    std::regex::ECMAScript);

std::vector<std::string> json_string_array(const json& j) {
    std::vector<std::string> out;
    for (const auto& item : j) out.push_back(item.get<std::string>());
    return out;
}

}  // namespace

std::optional<std::string> try_normalize_link(const std::string& url) {
    std::smatch m;
    if (!std::regex_match(url, m, kArxivUrl)) return std::nullopt;
    return m[1].str();
}

std::string normalize_link(const std::string& url) {
    auto id = try_normalize_link(url);
    if (!id) throw std::invalid_argument("not a paper link: " + url);
    return *id;
}

std::optional<std::int64_t> parse_iso8601_utc(const std::string& text) {
    int y, mo, d, h, mi, s;
    char tail[8] = {0};
    if (std::sscanf(text.c_str(), "%d-%d-%dT%d:%d:%d%7s", &y, &mo, &d, &h, &mi, &s, tail) < 6) {
        return std::nullopt;
    }
    if (tail[0] != '\0' && std::string(tail) != "Z" && std::string(tail) != "+00:00") {
        return std::nullopt;
    }
    if (mo < 1 || mo > 12 || d < 1 || d > 31 || h > 23 || mi > 59 || s > 60) return std::nullopt;
    std::tm tm{};
    tm.tm_year = y - 1900;
    tm.tm_mon = mo - 1;
    tm.tm_mday = d;
    tm.tm_hour = h;
    tm.tm_min = mi;
    tm.tm_sec = s;
    return static_cast<std::int64_t>(timegm(&tm));
}

std::string format_iso8601_utc(std::int64_t epoch_seconds) {
    std::time_t t = static_cast<std::time_t>(epoch_seconds);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::vector<MentionEvent> parse_mentions(
    std::istream& in, ParseStats& stats,
    const std::function<std::string(const std::string&)>& url_transform) {
    std::vector<MentionEvent> events;
    std::set<std::tuple<std::string, std::string, std::int64_t>> seen;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        ++stats.lines_read;
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object() || !j.contains("user_id") ||
            !j.contains("timestamp") || !j.contains("urls") || !j.contains("retweet_count") ||
            !j["urls"].is_array() || !j["retweet_count"].is_number_integer() ||
            j["retweet_count"].get<std::int64_t>() < 0) {
            ++stats.malformed_lines;
            continue;
        }
        auto ts = parse_iso8601_utc(j["timestamp"].get<std::string>());
        if (!ts) {
            ++stats.malformed_lines;
            continue;
        }
        MentionEvent base;
        base.user_id = j["user_id"].get<std::string>();
        base.timestamp = *ts;
        base.retweet_count = j["retweet_count"].get<std::uint64_t>();
        for (const auto& raw_url : j["urls"]) {
            if (!raw_url.is_string()) {
                ++stats.urls_skipped;
                continue;
            }
            std::string url = raw_url.get<std::string>();
            if (url_transform) url = url_transform(url);
            auto id = try_normalize_link(url);
            if (!id) {
                ++stats.urls_skipped;
                continue;
            }
            if (!seen.emplace(base.user_id, *id, base.timestamp).second) continue;
            MentionEvent ev = base;
            ev.paper_id = *id;
            events.push_back(std::move(ev));
        }
    }
    return events;
}

std::vector<MentionEvent> parse_mentions_file(const std::string& path, ParseStats& stats) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open mention stream: " + path);
    return parse_mentions(in, stats);
}

std::string paper_record_to_json(const PaperRecord& rec) {
    json j;
    j["paper_id"] = rec.paper_id;
    j["title"] = rec.title;
    j["authors"] = rec.authors;
    j["primary_category"] = rec.primary_category;
    j["published"] = rec.published;
    j["summary"] = rec.summary;
    if (rec.citation_count) j["citation_count"] = *rec.citation_count;
    if (rec.citation_cluster_id) j["cluster_id"] = *rec.citation_cluster_id;
    j["enriched"] = rec.enriched;
    return j.dump();
}

PaperRecord paper_record_from_json(const std::string& line) {
    json j = json::parse(line);
    PaperRecord rec;
    rec.paper_id = j.at("paper_id").get<std::string>();
    rec.title = j.value("title", "");
    if (j.contains("authors")) rec.authors = json_string_array(j["authors"]);
    rec.primary_category = j.value("primary_category", "");
    rec.published = j.value("published", "");
    rec.summary = j.value("summary", "");
    if (j.contains("citation_count")) rec.citation_count = j["citation_count"].get<std::uint64_t>();
    if (j.contains("cluster_id")) rec.citation_cluster_id = j["cluster_id"].get<std::string>();
    rec.enriched = j.value("enriched", !rec.title.empty());
    return rec;
}

FixtureMetadataClient::FixtureMetadataClient(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open metadata fixture: " + path);
    load(in);
}

FixtureMetadataClient::FixtureMetadataClient(std::istream& in) { load(in); }

void FixtureMetadataClient::load(std::istream& in) {
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        PaperRecord rec = paper_record_from_json(line);
        rec.enriched = true;
        records_[rec.paper_id] = std::move(rec);
    }
}

std::optional<PaperRecord> FixtureMetadataClient::fetch(const std::string& paper_id) {
    auto it = records_.find(paper_id);
    if (it == records_.end()) return std::nullopt;
    return it->second;
}

FixtureCitationClient::FixtureCitationClient(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open citation fixture: " + path);
    load(in);
}

FixtureCitationClient::FixtureCitationClient(std::istream& in) { load(in); }

void FixtureCitationClient::load(std::istream& in) {
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        json j = json::parse(line);
        CitationInfo info;
        info.citation_count = j.at("citation_count").get<std::uint64_t>();
        info.cluster_id = j.value("cluster_id", "");
        records_[j.at("paper_id").get<std::string>()] = std::move(info);
    }
}

std::optional<CitationClient::CitationInfo> FixtureCitationClient::fetch(const std::string& paper_id) {
    auto it = records_.find(paper_id);
    if (it == records_.end()) return std::nullopt;
    return it->second;
}

ArxivMetadataClient::ArxivMetadataClient(std::string host) : host_(std::move(host)) {}

std::optional<PaperRecord> ArxivMetadataClient::fetch(const std::string& paper_id) {
#ifdef SSNET_NO_HTTP
    (void)paper_id;
    return std::nullopt;
#else
    httplib::Client client(host_, 80);
    client.set_read_timeout(15);
    std::string path = "/api/query?id_list=" + paper_id + "&max_results=1";
    for (int attempt = 0; attempt < 3; ++attempt) {
        if (attempt > 0) std::this_thread::sleep_for(std::chrono::seconds(1 << (attempt - 1)));
        auto res = client.Get(path);
        if (!res || res->status != 200) continue;
        const std::string& body = res->body;
        auto field = [&](const std::string& open, const std::string& close) -> std::string {
            auto start = body.find(open);
            if (start == std::string::npos) return {};
            start += open.size();
            auto stop = body.find(close, start);
            if (stop == std::string::npos) return {};
            return body.substr(start, stop - start);
        };
        PaperRecord rec;
        rec.paper_id = paper_id;
        // Skip past the feed-level <title> into the first <entry>.
        auto entry = body.find("<entry>");
        if (entry == std::string::npos) return std::nullopt;
        std::string entry_body = body.substr(entry);
        auto entry_field = [&](const std::string& open, const std::string& close) -> std::string {
            auto start = entry_body.find(open);
            if (start == std::string::npos) return {};
            start += open.size();
            auto stop = entry_body.find(close, start);
            if (stop == std::string::npos) return {};
            return entry_body.substr(start, stop - start);
        };
        (void)field;
        rec.title = entry_field("<title>", "</title>");
        rec.summary = entry_field("<summary>", "</summary>");
        rec.published = entry_field("<published>", "</published>");
        auto cat = entry_body.find("<arxiv:primary_category");
        if (cat != std::string::npos) {
            auto term = entry_body.find("term=\"", cat);
            if (term != std::string::npos) {
                term += 6;
                rec.primary_category = entry_body.substr(term, entry_body.find('"', term) - term);
            }
        }
        std::size_t pos = 0;
        while ((pos = entry_body.find("<name>", pos)) != std::string::npos) {
            pos += 6;
            auto stop = entry_body.find("</name>", pos);
            if (stop == std::string::npos) break;
            rec.authors.push_back(entry_body.substr(pos, stop - pos));
            pos = stop;
        }
        if (rec.title.empty()) return std::nullopt;
        rec.enriched = true;
        return rec;
    }
    return std::nullopt;
#endif
}

std::map<std::string, PaperRecord> enrich_metadata(const std::set<std::string>& paper_ids,
                                                   MetadataClient& client,
                                                   const std::string& cache_path) {
    std::map<std::string, PaperRecord> cached;
    if (!cache_path.empty()) {
        std::ifstream in(cache_path);
        std::string line;
        while (in && std::getline(in, line)) {
            if (line.empty()) continue;
            PaperRecord rec = paper_record_from_json(line);
            cached[rec.paper_id] = std::move(rec);
        }
    }

    std::map<std::string, PaperRecord> result;
    std::vector<const PaperRecord*> newly_fetched;
    for (const auto& id : paper_ids) {  // ordered by paper_id: deterministic
        auto hit = cached.find(id);
        if (hit != cached.end() && hit->second.enriched) {
            result[id] = hit->second;
            continue;
        }
        auto fetched = client.fetch(id);
        if (fetched) {
            fetched->paper_id = id;
            fetched->enriched = true;
            result[id] = std::move(*fetched);
        } else {
            PaperRecord stub;
            stub.paper_id = id;
            stub.enriched = false;
            result[id] = std::move(stub);
        }
        newly_fetched.push_back(&result[id]);
    }

    if (!cache_path.empty() && !newly_fetched.empty()) {
        std::ofstream out(cache_path, std::ios::app);
        for (const PaperRecord* rec : newly_fetched) {
            if (rec->enriched) out << paper_record_to_json(*rec) << '\n';
        }
    }
    return result;
}

void enrich_citations(std::map<std::string, PaperRecord>& papers, CitationClient& client,
                      const std::string& cache_path) {
    std::map<std::string, CitationClient::CitationInfo> cached;
    if (!cache_path.empty()) {
        std::ifstream in(cache_path);
        std::string line;
        while (in && std::getline(in, line)) {
            if (line.empty()) continue;
            json j = json::parse(line);
            CitationClient::CitationInfo info;
            info.citation_count = j.at("citation_count").get<std::uint64_t>();
            info.cluster_id = j.value("cluster_id", "");
            cached[j.at("paper_id").get<std::string>()] = std::move(info);
        }
    }

    std::ofstream cache_out;
    if (!cache_path.empty()) cache_out.open(cache_path, std::ios::app);
    for (auto& [id, rec] : papers) {
        if (rec.citation_count) continue;
        std::optional<CitationClient::CitationInfo> info;
        auto hit = cached.find(id);
        if (hit != cached.end()) {
            info = hit->second;
        } else {
            info = client.fetch(id);
            if (info && cache_out.is_open()) {
                json j;
                j["paper_id"] = id;
                j["citation_count"] = info->citation_count;
                j["cluster_id"] = info->cluster_id;
                cache_out << j.dump() << '\n';
            }
        }
        if (info) {
            rec.citation_count = info->citation_count;
            if (!info->cluster_id.empty()) rec.citation_cluster_id = info->cluster_id;
        }
    }
}

void write_paper_records(const std::map<std::string, PaperRecord>& papers, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    for (const auto& [id, rec] : papers) out << paper_record_to_json(rec) << '\n';
}

std::map<std::string, PaperRecord> read_paper_records(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::map<std::string, PaperRecord> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        PaperRecord rec = paper_record_from_json(line);
        out[rec.paper_id] = std::move(rec);
    }
    return out;
}

void write_events(const std::vector<MentionEvent>& events, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    for (const auto& ev : events) {
        json j;
        j["user_id"] = ev.user_id;
        j["paper_id"] = ev.paper_id;
        j["timestamp"] = ev.timestamp;
        j["retweet_count"] = ev.retweet_count;
        out << j.dump() << '\n';
    }
}

std::vector<MentionEvent> read_events(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::vector<MentionEvent> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        json j = json::parse(line);
        MentionEvent ev;
        ev.user_id = j.at("user_id").get<std::string>();
        ev.paper_id = j.at("paper_id").get<std::string>();
        ev.timestamp = j.at("timestamp").get<std::int64_t>();
        ev.retweet_count = j.at("retweet_count").get<std::uint64_t>();
        out.push_back(std::move(ev));
    }
    return out;
}

}  // namespace ssnet
