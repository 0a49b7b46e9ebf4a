#include "trendscope/report.h"

#include <algorithm>
#include <cstdio>
#include <fstream>

#include "trendscope/csv.h"
#include "trendscope/trends.h"

namespace trendscope::report {

namespace {

std::string pct1(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f", v);
    return buf;
}

void write_file(const std::filesystem::path& path, const std::string& body) {
    std::ofstream os(path, std::ios::binary);
    if (!os) fail(ErrorKind::Io, "cannot write " + path.string());
    os << body;
}

double share(std::int64_t kept, std::int64_t total) {
    return total > 0 ? filtering::round1(100.0 * static_cast<double>(kept) / static_cast<double>(total)) : 0.0;
}

}  // namespace

YearlyTable yearly_table(const std::map<int, std::int64_t>& corpus_counts,
                         const std::map<int, std::int64_t>& kept_counts) {
    for (const auto& [y, k] : kept_counts) {
        auto it = corpus_counts.find(y);
        if (it == corpus_counts.end() || k > it->second) {
            fail(ErrorKind::Internal, "kept count for " + std::to_string(y) + " exceeds the corpus count");
        }
    }
    YearlyTable t;
    for (const auto& [y, total] : corpus_counts) {
        auto it = kept_counts.find(y);
        const std::int64_t kept = it == kept_counts.end() ? 0 : it->second;
        t.rows.push_back({y, total, share(kept, total), kept});
        t.total += total;
        t.kept += kept;
    }
    t.pct = share(t.kept, t.total);
    return t;
}

std::string yearly_table_csv(const YearlyTable& table) {
    std::string out = "year,total,pct,kept\n";
    for (const auto& r : table.rows) {
        out += std::to_string(r.year) + "," + std::to_string(r.total) + "," + pct1(r.pct) + "," + std::to_string(r.kept) + "\n";
    }
    out += "total," + std::to_string(table.total) + "," + pct1(table.pct) + "," + std::to_string(table.kept) + "\n";
    return out;
}

void emit_yearly_table(const std::filesystem::path& path, const YearlyTable& table) {
    write_file(path, yearly_table_csv(table));
}

std::vector<KeywordRow> keyword_frequency(const filtering::TopicLexicon& lexicon, const filtering::HitCounts& hits,
                                          const std::vector<int>& years) {
    struct Item {
        std::size_t entry;
        std::int64_t total;
    };
    std::vector<Item> items;
    for (std::size_t e = 0; e < lexicon.entries().size(); ++e) {
        auto it = hits.per_entry.find(e);
        items.push_back({e, it == hits.per_entry.end() ? 0 : it->second});
    }
    std::sort(items.begin(), items.end(), [&](const Item& a, const Item& b) {
        if (a.total != b.total) return a.total > b.total;
        return lexicon.entries()[a.entry].surface < lexicon.entries()[b.entry].surface;
    });
    std::vector<KeywordRow> rows;
    for (const auto& item : items) {
        const auto by_year = hits.per_entry_year.find(item.entry);
        for (int y : years) {
            std::int64_t c = 0;
            if (by_year != hits.per_entry_year.end()) {
                if (auto yc = by_year->second.find(y); yc != by_year->second.end()) c = yc->second;
            }
            rows.push_back({lexicon.entries()[item.entry].surface, y, c});
        }
    }
    return rows;
}

void emit_keyword_frequency(const std::filesystem::path& csv_path, const std::filesystem::path& json_path,
                            const std::vector<KeywordRow>& rows) {
    std::string body = "keyword,year,count\n";
    nlohmann::ordered_json j = nlohmann::ordered_json::array();
    for (const auto& r : rows) {
        body += csv::join_row({r.keyword, std::to_string(r.year), std::to_string(r.count)}) + "\n";
        j.push_back({{"keyword", r.keyword}, {"year", r.year}, {"count", r.count}});
    }
    write_file(csv_path, body);
    write_file(json_path, j.dump(2) + "\n");
}

void emit_cluster_table(const std::filesystem::path& path, const std::vector<clustering::ClusterSummary>& summaries) {
    std::string body = "cluster_id,name,size,top_terms,keywords\n";
    for (const auto& s : summaries) {
        std::string terms;
        for (const auto& t : s.top_terms) terms += (terms.empty() ? "" : "|") + t.term;
        std::string keywords;
        for (const auto& k : s.keywords) keywords += (keywords.empty() ? "" : "|") + k;
        body += csv::join_row({std::to_string(s.cluster_id), s.name, std::to_string(s.size), terms, keywords}) + "\n";
    }
    write_file(path, body);
}

nlohmann::ordered_json to_json(const sentiment::EvalMetrics& m) {
    nlohmann::ordered_json j;
    j["evaluated"] = m.evaluated;
    j["accuracy"] = m.accuracy;
    auto& pc = j["per_class"] = nlohmann::ordered_json::object();
    for (int c = 0; c < 3; ++c) {
        const auto& cm = m.per_class[c];
        pc[std::string(sentiment::to_string(static_cast<sentiment::Label>(c)))] = {
            {"precision", cm.precision}, {"recall", cm.recall}, {"f1", cm.f1}, {"support", cm.support}};
    }
    j["confusion"] = m.confusion;
    return j;
}

nlohmann::ordered_json to_json(const RunReport& r) {
    nlohmann::ordered_json j;
    j["config"] = r.config;
    j["counts"] = {{"ingested", r.counts.ingested},         {"rejected", r.counts.rejected},
                   {"country_kept", r.counts.country_kept}, {"topic_kept", r.counts.topic_kept},
                   {"clustered", r.counts.clustered},       {"noise", r.counts.noise}};
    auto& rows = j["yearly"] = nlohmann::ordered_json::array();
    for (const auto& y : r.yearly.rows) rows.push_back({{"year", y.year}, {"total", y.total}, {"pct", y.pct}, {"kept", y.kept}});
    j["yearly_footer"] = {{"total", r.yearly.total}, {"pct", r.yearly.pct}, {"kept", r.yearly.kept}};
    if (r.sentiment_shares) {
        j["sentiment_shares"] = {{"positive", r.sentiment_shares->positive},
                                 {"negative", r.sentiment_shares->negative},
                                 {"neutral", r.sentiment_shares->neutral}};
    }
    if (r.evaluation) j["evaluation"] = to_json(*r.evaluation);
    auto& cl = j["clusters"] = nlohmann::ordered_json::array();
    for (const auto& s : r.clusters) {
        nlohmann::ordered_json terms = nlohmann::ordered_json::array();
        for (const auto& t : s.top_terms) terms.push_back(t.term);
        cl.push_back({{"cluster_id", s.cluster_id}, {"name", s.name}, {"size", s.size}, {"top_terms", terms}, {"keywords", s.keywords}});
    }
    j["artifacts"] = r.artifacts;
    j["warnings"] = r.warnings;
    return j;
}

}  // namespace trendscope::report
