#ifndef SSNET_INGEST_HPP
#define SSNET_INGEST_HPP

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ssnet/model.hpp"

namespace ssnet {

// "http://arxiv.org/abs/1409.0210v1" -> "1409.0210". Accepts abs/ and pdf/
// paths, either scheme, optional www/export host prefixes, old-style
// archive/NNNNNNN ids, and strips trailing version suffixes. Returns nullopt
// for anything that is not a paper link.
std::optional<std::string> try_normalize_link(const std::string& url);

// Throwing variant; message names the offending URL.
std::string normalize_link(const std::string& url);

// Timestamp helpers shared by ingest and the CLI.
std::optional<std::int64_t> parse_iso8601_utc(const std::string& text);
std::string format_iso8601_utc(std::int64_t epoch_seconds);

struct ParseStats {
    std::size_t lines_read = 0;
    std::size_t malformed_lines = 0;
    std::size_t urls_skipped = 0;  // URLs that were not paper links
};

// Input is line-delimited JSON: {"user_id", "timestamp" (ISO-8601 UTC),
// "urls" (array), "retweet_count"}. Malformed lines are counted and skipped;
// duplicate (user, paper, timestamp) triples are dropped. An optional URL
// pre-transformer runs before normalization (hook for link lengthening).
std::vector<MentionEvent> parse_mentions(
    std::istream& in, ParseStats& stats,
    const std::function<std::string(const std::string&)>& url_transform = {});

std::vector<MentionEvent> parse_mentions_file(const std::string& path, ParseStats& stats);

class MetadataClient {
public:
    virtual ~MetadataClient() = default;
    // nullopt when the id cannot be resolved.
    virtual std::optional<PaperRecord> fetch(const std::string& paper_id) = 0;
};

class CitationClient {
public:
    struct CitationInfo {
        std::uint64_t citation_count = 0;
        std::string cluster_id;
    };
    virtual ~CitationClient() = default;
    virtual std::optional<CitationInfo> fetch(const std::string& paper_id) = 0;
};

// Deterministic fixture-backed clients. Fixture files are line-delimited JSON
// keyed by "paper_id"; the metadata schema matches PaperRecord, the citation
// schema is {"paper_id", "citation_count", "cluster_id"}. The enrichment
// cache uses the same schema, so caches double as fixtures.
class FixtureMetadataClient : public MetadataClient {
public:
    explicit FixtureMetadataClient(const std::string& path);
    explicit FixtureMetadataClient(std::istream& in);
    std::optional<PaperRecord> fetch(const std::string& paper_id) override;

private:
    void load(std::istream& in);
    std::map<std::string, PaperRecord> records_;
};

class FixtureCitationClient : public CitationClient {
public:
    explicit FixtureCitationClient(const std::string& path);
    explicit FixtureCitationClient(std::istream& in);
    std::optional<CitationInfo> fetch(const std::string& paper_id) override;

private:
    void load(std::istream& in);
    std::map<std::string, CitationInfo> records_;
};

// Live client for the public arXiv query API (Atom feed). Retries 3 times
// with exponential backoff starting at 1s.
class ArxivMetadataClient : public MetadataClient {
public:
    explicit ArxivMetadataClient(std::string host = "export.arxiv.org");
    std::optional<PaperRecord> fetch(const std::string& paper_id) override;

private:
    std::string host_;
};

// Resolves every id through the client; unresolved ids become stub records
// with enriched=false. When cache_path is non-empty, previously cached
// records are reused and new ones appended.
std::map<std::string, PaperRecord> enrich_metadata(const std::set<std::string>& paper_ids,
                                                   MetadataClient& client,
                                                   const std::string& cache_path = {});

// Fills citation_count / citation_cluster_id in place; misses leave the
// fields absent. Never drops or renames papers.
void enrich_citations(std::map<std::string, PaperRecord>& papers, CitationClient& client,
                      const std::string& cache_path = {});

// PaperRecord <-> JSON line used by fixtures, caches and stage artifacts.
std::string paper_record_to_json(const PaperRecord& rec);
PaperRecord paper_record_from_json(const std::string& line);

void write_paper_records(const std::map<std::string, PaperRecord>& papers, const std::string& path);
std::map<std::string, PaperRecord> read_paper_records(const std::string& path);

// Canonical parsed-event artifact: {"user_id","paper_id","timestamp","retweet_count"}
// per line, timestamp in epoch seconds.
void write_events(const std::vector<MentionEvent>& events, const std::string& path);
std::vector<MentionEvent> read_events(const std::string& path);

}  // namespace ssnet

#endif
