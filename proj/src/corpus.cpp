#include "trendscope/corpus.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <chrono>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "trendscope/csv.h"

namespace trendscope::corpus {

using nlohmann::json;

namespace {

std::string lower_ascii(std::string_view s) {
    std::string out(s);
    for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

std::string clean_hashtag(std::string_view tag) {
    auto t = trim(tag);
    std::size_t i = 0;
    while (i < t.size() && t[i] == '#') ++i;
    return lower_ascii(std::string_view(t).substr(i));
}

const char* kCountFields[] = {"likes", "comments", "shares", "saves"};

std::optional<std::int64_t>& count_slot(Engagement& e, int idx) {
    switch (idx) {
        case 0: return e.likes;
        case 1: return e.comments;
        case 2: return e.shares;
        default: return e.saves;
    }
}

std::optional<std::int64_t> count_value(const Engagement& e, int idx) {
    switch (idx) {
        case 0: return e.likes;
        case 1: return e.comments;
        case 2: return e.shares;
        default: return e.saves;
    }
}

void check_count(std::int64_t v, const char* name) {
    if (v < 0) fail(ErrorKind::Data, std::string(name) + " is negative");
    if (v > kMaxCount) fail(ErrorKind::Data, std::string(name) + " exceeds supported range");
}

std::optional<std::int64_t> parse_count_text(std::string_view s, const char* name) {
    auto t = trim(s);
    if (t.empty() || t == "null" || t == "NULL") return std::nullopt;
    std::int64_t v = 0;
    auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || p != t.data() + t.size()) {
        fail(ErrorKind::Data, std::string(name) + " is not an integer: " + t);
    }
    check_count(v, name);
    return v;
}

void validate(const RawPost& post, const TimeRange& range) {
    if (post.id.empty()) fail(ErrorKind::Data, "missing id");
    if (post.timestamp < range.start || post.timestamp >= range.end) {
        fail(ErrorKind::Data, "timestamp outside corpus range: " + format_timestamp(post.timestamp));
    }
}

int days_in_month(int y, int m) {
    using namespace std::chrono;
    return static_cast<int>(static_cast<unsigned>(
        year_month_day_last{year{y} / month{static_cast<unsigned>(m)} / last}.day()));
}

}  // namespace

std::string_view to_string(Platform p) {
    switch (p) {
        case Platform::X: return "X";
        case Platform::Facebook: return "Facebook";
        case Platform::Instagram: return "Instagram";
        case Platform::TikTok: return "TikTok";
        case Platform::GoogleNews: return "GoogleNews";
        case Platform::Reddit: return "Reddit";
        case Platform::Other: return "Other";
    }
    return "Other";
}

Platform parse_platform(std::string_view s) {
    auto l = lower_ascii(trim(s));
    if (l == "x" || l == "twitter") return Platform::X;
    if (l == "facebook") return Platform::Facebook;
    if (l == "instagram") return Platform::Instagram;
    if (l == "tiktok" || l == "tik-tok") return Platform::TikTok;
    if (l == "googlenews" || l == "google news" || l == "google_news") return Platform::GoogleNews;
    if (l == "reddit") return Platform::Reddit;
    return Platform::Other;
}

EngagementMetrics Engagement::resolved() const {
    return {likes.value_or(0), comments.value_or(0), shares.value_or(0), saves.value_or(0)};
}

Corpus make_corpus(std::vector<RawPost> posts) {
    Corpus c;
    c.posts = std::move(posts);
    c.counts = yearly_counts(c.posts);
    return c;
}

Format detect_format(const std::filesystem::path& path) {
    auto ext = lower_ascii(path.extension().string());
    return ext == ".csv" ? Format::Csv : Format::Jsonl;
}

std::optional<Format> parse_format(std::string_view s) {
    auto l = lower_ascii(s);
    if (l == "jsonl" || l == "json") return Format::Jsonl;
    if (l == "csv") return Format::Csv;
    return std::nullopt;
}

TimeRange TimeRange::years(int first, int last) {
    return {make_timestamp(first, 1, 1), make_timestamp(last + 1, 1, 1)};
}

TimeRange TimeRange::dates(std::string_view first_day, std::string_view last_day) {
    auto a = parse_timestamp(first_day);
    auto b = parse_timestamp(last_day);
    if (!a || !b) fail(ErrorKind::Usage, "invalid corpus range date");
    return {*a, *b + 86400};
}

// ---------------------------------------------------------------------------
// time

std::int64_t make_timestamp(int y, int mo, int d, int h, int mi, int s) {
    using namespace std::chrono;
    sys_days day = year{y} / month{static_cast<unsigned>(mo)} / std::chrono::day{static_cast<unsigned>(d)};
    return day.time_since_epoch().count() * 86400LL + h * 3600LL + mi * 60LL + s;
}

std::optional<std::int64_t> parse_timestamp(std::string_view iso) {
    auto t = trim(iso);
    std::string_view s = t;
    auto num = [&](std::size_t pos, std::size_t len, int& out) {
        if (pos + len > s.size()) return false;
        for (std::size_t k = pos; k < pos + len; ++k)
            if (!std::isdigit(static_cast<unsigned char>(s[k]))) return false;
        std::from_chars(s.data() + pos, s.data() + pos + len, out);
        return true;
    };
    int y = 0, mo = 0, d = 0, h = 0, mi = 0, sec = 0;
    if (!num(0, 4, y) || s.size() < 10 || s[4] != '-' || !num(5, 2, mo) || s[7] != '-' ||
        !num(8, 2, d)) {
        return std::nullopt;
    }
    if (mo < 1 || mo > 12 || d < 1 || d > days_in_month(y, mo)) return std::nullopt;
    std::size_t pos = 10;
    std::int64_t offset = 0;
    if (pos < s.size()) {
        if (s[pos] != 'T' && s[pos] != 't' && s[pos] != ' ') return std::nullopt;
        ++pos;
        if (!num(pos, 2, h) || pos + 2 >= s.size() || s[pos + 2] != ':' || !num(pos + 3, 2, mi)) {
            return std::nullopt;
        }
        pos += 5;
        if (pos < s.size() && s[pos] == ':') {
            if (!num(pos + 1, 2, sec)) return std::nullopt;
            pos += 3;
        }
        if (h > 23 || mi > 59 || sec > 60) return std::nullopt;
        // fractional seconds are truncated
        if (pos < s.size() && (s[pos] == '.' || s[pos] == ',')) {
            ++pos;
            std::size_t digits = 0;
            while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
                ++pos;
                ++digits;
            }
            if (digits == 0) return std::nullopt;
        }
        if (pos < s.size()) {
            if (s[pos] == 'Z' || s[pos] == 'z') {
                ++pos;
            } else if (s[pos] == '+' || s[pos] == '-') {
                int sign = s[pos] == '-' ? -1 : 1;
                int oh = 0, om = 0;
                if (!num(pos + 1, 2, oh)) return std::nullopt;
                pos += 3;
                if (pos < s.size() && s[pos] == ':') ++pos;
                if (pos < s.size()) {
                    if (!num(pos, 2, om)) return std::nullopt;
                    pos += 2;
                }
                offset = sign * (oh * 3600LL + om * 60LL);
            } else {
                return std::nullopt;
            }
        }
        if (pos != s.size()) return std::nullopt;
    }
    return make_timestamp(y, mo, d, h, mi, sec) - offset;
}

namespace {
std::chrono::year_month_day civil(std::int64_t ts) {
    using namespace std::chrono;
    auto days = ts >= 0 ? ts / 86400 : (ts - 86399) / 86400;
    return year_month_day{sys_days{std::chrono::days{days}}};
}
}  // namespace

int year_of(std::int64_t ts) { return static_cast<int>(civil(ts).year()); }

int month_of(std::int64_t ts) { return static_cast<int>(static_cast<unsigned>(civil(ts).month())); }

std::string format_timestamp(std::int64_t ts) {
    auto ymd = civil(ts);
    auto days = ts >= 0 ? ts / 86400 : (ts - 86399) / 86400;
    auto rem = ts - days * 86400;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                  static_cast<int>(rem / 3600), static_cast<int>(rem / 60 % 60),
                  static_cast<int>(rem % 60));
    return buf;
}

// ---------------------------------------------------------------------------
// records

nlohmann::ordered_json to_json(const RawPost& post) {
    nlohmann::ordered_json j;
    j["id"] = post.id;
    j["platform"] = to_string(post.platform);
    j["timestamp"] = format_timestamp(post.timestamp);
    j["text"] = post.text;
    j["geo"] = post.geo ? nlohmann::ordered_json(*post.geo) : nlohmann::ordered_json(nullptr);
    j["hashtags"] = post.hashtags;
    auto put = [&](const char* key, const std::optional<std::int64_t>& v) {
        j[key] = v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
    };
    put("likes", post.engagement.likes);
    put("comments", post.engagement.comments);
    put("shares", post.engagement.shares);
    put("saves", post.engagement.saves);
    j["lang"] = post.lang ? nlohmann::ordered_json(*post.lang) : nlohmann::ordered_json(nullptr);
    return j;
}

RawPost post_from_json(const json& obj) {
    if (!obj.is_object()) fail(ErrorKind::Data, "record is not a JSON object");
    RawPost p;
    auto id = obj.find("id");
    if (id == obj.end() || id->is_null()) fail(ErrorKind::Data, "missing id");
    if (id->is_string()) p.id = id->get<std::string>();
    else if (id->is_number_integer()) p.id = std::to_string(id->get<std::int64_t>());
    else fail(ErrorKind::Data, "id is not a string");
    if (p.id.empty()) fail(ErrorKind::Data, "missing id");

    auto platform = obj.find("platform");
    if (platform != obj.end() && platform->is_string()) p.platform = parse_platform(platform->get<std::string>());

    auto ts = obj.find("timestamp");
    if (ts == obj.end() || !ts->is_string()) fail(ErrorKind::Data, "missing timestamp");
    auto parsed = parse_timestamp(ts->get<std::string>());
    if (!parsed) fail(ErrorKind::Data, "invalid timestamp: " + ts->get<std::string>());
    p.timestamp = *parsed;

    auto text = obj.find("text");
    if (text == obj.end() || !text->is_string()) fail(ErrorKind::Data, "missing text");
    p.text = text->get<std::string>();

    auto geo = obj.find("geo");
    if (geo != obj.end() && !geo->is_null()) {
        if (!geo->is_string()) fail(ErrorKind::Data, "geo is not a string");
        auto g = trim(geo->get<std::string>());
        if (!g.empty()) p.geo = g;
    }

    auto tags = obj.find("hashtags");
    if (tags != obj.end() && !tags->is_null()) {
        if (!tags->is_array()) fail(ErrorKind::Data, "hashtags is not an array");
        for (const auto& t : *tags) {
            if (!t.is_string()) fail(ErrorKind::Data, "hashtag is not a string");
            auto c = clean_hashtag(t.get<std::string>());
            if (!c.empty()) p.hashtags.push_back(std::move(c));
        }
    }

    for (int k = 0; k < 4; ++k) {
        auto it = obj.find(kCountFields[k]);
        if (it == obj.end() || it->is_null()) continue;
        if (!it->is_number_integer()) fail(ErrorKind::Data, std::string(kCountFields[k]) + " is not an integer");
        auto v = it->get<std::int64_t>();
        check_count(v, kCountFields[k]);
        count_slot(p.engagement, k) = v;
    }

    auto lang = obj.find("lang");
    if (lang != obj.end() && !lang->is_null()) {
        if (!lang->is_string()) fail(ErrorKind::Data, "lang is not a string");
        auto l = trim(lang->get<std::string>());
        if (!l.empty()) p.lang = l;
    }
    return p;
}

std::string to_jsonl(const std::vector<RawPost>& posts) {
    std::string out;
    for (const auto& p : posts) {
        out += to_json(p).dump();
        out.push_back('\n');
    }
    return out;
}

void write_jsonl(const std::filesystem::path& path, const std::vector<RawPost>& posts) {
    std::ofstream os(path, std::ios::binary);
    if (!os) fail(ErrorKind::Io, "cannot write " + path.string());
    os << to_jsonl(posts);
}

// ---------------------------------------------------------------------------
// ingestion

namespace {

struct Collector {
    const IngestOptions& opts;
    std::vector<RawPost> posts;
    std::vector<Reject> rejects;
    std::unordered_set<std::string> seen;
    std::size_t records = 0;

    void accept(RawPost post, int line) {
        ++records;
        try {
            validate(post, opts.range);
        } catch (const Error& e) {
            rejects.push_back({line, e.what()});
            return;
        }
        if (!seen.insert(post.id).second) {
            rejects.push_back({line, "duplicate id: " + post.id});
            return;
        }
        posts.push_back(std::move(post));
    }

    void reject(int line, std::string reason) {
        ++records;
        rejects.push_back({line, std::move(reason)});
    }
};

void parse_jsonl(std::string_view text, Collector& col) {
    std::size_t start = 0;
    int line = 0;
    while (start <= text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        ++line;
        auto raw = text.substr(start, end - start);
        start = end + 1;
        if (trim(raw).empty()) {
            if (end == text.size()) break;
            continue;
        }
        json obj;
        try {
            obj = json::parse(raw);
        } catch (const json::exception&) {
            col.reject(line, "invalid JSON");
            if (end == text.size()) break;
            continue;
        }
        try {
            col.accept(post_from_json(obj), line);
        } catch (const Error& e) {
            col.reject(line, e.what());
        }
        if (end == text.size()) break;
    }
}

void parse_csv(std::string_view text, Collector& col) {
    auto records = csv::parse(text);
    if (records.empty()) return;
    const auto& header = records.front();
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < header.fields.size(); ++i) index[lower_ascii(trim(header.fields[i]))] = i;
    for (const char* required : {"id", "timestamp", "text"}) {
        if (!index.count(required)) {
            fail(ErrorKind::Data, std::string("CSV header lacks required column '") + required + "'");
        }
    }
    auto field = [&](const csv::Record& r, const char* name) -> std::optional<std::string> {
        auto it = index.find(name);
        if (it == index.end() || it->second >= r.fields.size()) return std::nullopt;
        return r.fields[it->second];
    };
    for (std::size_t k = 1; k < records.size(); ++k) {
        const auto& r = records[k];
        if (!r.well_formed) {
            col.reject(r.line, "malformed CSV quoting");
            continue;
        }
        if (r.fields.size() != header.fields.size()) {
            col.reject(r.line, "expected " + std::to_string(header.fields.size()) + " fields, got " +
                                   std::to_string(r.fields.size()));
            continue;
        }
        try {
            RawPost p;
            p.id = trim(field(r, "id").value_or(""));
            if (p.id.empty()) fail(ErrorKind::Data, "missing id");
            p.platform = parse_platform(field(r, "platform").value_or(""));
            auto ts = field(r, "timestamp").value_or("");
            auto parsed = parse_timestamp(ts);
            if (!parsed) fail(ErrorKind::Data, "invalid timestamp: " + ts);
            p.timestamp = *parsed;
            p.text = field(r, "text").value_or("");
            if (auto g = field(r, "geo"); g && !trim(*g).empty()) p.geo = trim(*g);
            if (auto tags = field(r, "hashtags"); tags && !trim(*tags).empty()) {
                for (auto& t : split(*tags, '|')) {
                    auto c = clean_hashtag(t);
                    if (!c.empty()) p.hashtags.push_back(std::move(c));
                }
            }
            for (int i = 0; i < 4; ++i) {
                if (auto v = field(r, kCountFields[i])) {
                    count_slot(p.engagement, i) = parse_count_text(*v, kCountFields[i]);
                }
            }
            if (auto l = field(r, "lang"); l && !trim(*l).empty()) p.lang = trim(*l);
            col.accept(std::move(p), r.line);
        } catch (const Error& e) {
            col.reject(r.line, e.what());
        }
    }
}

}  // namespace

Corpus ingest_text(std::string_view text, Format format, const std::string& source,
                   const IngestOptions& opts) {
    Collector col{opts, {}, {}, {}, 0};
    if (format == Format::Jsonl) parse_jsonl(text, col);
    else parse_csv(text, col);

    if (col.records > 0 && col.rejects.size() * 2 > col.records) {
        std::ostringstream msg;
        msg << source << ": " << col.rejects.size() << " of " << col.records
            << " records are malformed; samples:";
        for (std::size_t i = 0; i < std::min(opts.error_samples, col.rejects.size()); ++i) {
            msg << " [line " << col.rejects[i].line << ": " << col.rejects[i].reason << "]";
        }
        fail(ErrorKind::Data, msg.str());
    }

    Corpus c = make_corpus(std::move(col.posts));
    c.rejects = std::move(col.rejects);
    c.provenance.sources.push_back(source);
    c.provenance.ingested_at = std::chrono::duration_cast<std::chrono::seconds>(
                                   std::chrono::system_clock::now().time_since_epoch())
                                   .count();
    if (col.records == 0) c.warnings.push_back(source + ": input contains no records");
    for (const auto& r : c.rejects) {
        c.warnings.push_back(source + ":" + std::to_string(r.line) + ": rejected: " + r.reason);
    }
    return c;
}

Corpus ingest(const std::filesystem::path& path, Format format, const IngestOptions& opts) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::Io, "cannot read input file: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) fail(ErrorKind::Io, "error reading input file: " + path.string());
    return ingest_text(ss.str(), format, path.string(), opts);
}

// ---------------------------------------------------------------------------
// imputation

std::optional<ImputeField> parse_impute_field(std::string_view s) {
    auto l = lower_ascii(trim(s));
    if (l == "geo") return ImputeField::Geo;
    if (l == "likes" || l == "engagement.likes") return ImputeField::Likes;
    if (l == "comments" || l == "engagement.comments") return ImputeField::Comments;
    if (l == "shares" || l == "engagement.shares") return ImputeField::Shares;
    if (l == "saves" || l == "engagement.saves") return ImputeField::Saves;
    return std::nullopt;
}

std::string_view to_string(ImputeField f) {
    switch (f) {
        case ImputeField::Geo: return "geo";
        case ImputeField::Likes: return "likes";
        case ImputeField::Comments: return "comments";
        case ImputeField::Shares: return "shares";
        case ImputeField::Saves: return "saves";
    }
    return "";
}

namespace {

/// Mode of a frequency table; std::map ordering makes the first maximum the smallest value.
template <typename T>
std::optional<T> mode_of(const std::map<T, std::int64_t>& freq) {
    std::optional<T> best;
    std::int64_t best_count = 0;
    for (const auto& [value, count] : freq) {
        if (count > best_count) {
            best = value;
            best_count = count;
        }
    }
    return best;
}

template <typename T, typename Get, typename Set>
std::int64_t impute_one(std::vector<RawPost>& posts, Get get, Set set, std::optional<T> default_value) {
    std::map<Platform, std::map<T, std::int64_t>> per_platform;
    std::map<T, std::int64_t> global;
    for (const auto& p : posts) {
        if (auto v = get(p)) {
            ++per_platform[p.platform][*v];
            ++global[*v];
        }
    }
    auto global_mode = mode_of(global);
    if (!global_mode) global_mode = default_value;
    std::map<Platform, std::optional<T>> modes;
    for (const auto& [platform, freq] : per_platform) modes[platform] = mode_of(freq);

    std::int64_t filled = 0;
    for (auto& p : posts) {
        if (get(p)) continue;
        std::optional<T> value;
        if (auto it = modes.find(p.platform); it != modes.end()) value = it->second;
        if (!value) value = global_mode;
        if (value) {
            set(p, *value);
            ++filled;
        }
    }
    return filled;
}

}  // namespace

ImputeResult impute_missing(const Corpus& corpus, const std::set<ImputeField>& fields) {
    ImputeResult result;
    result.corpus = corpus;
    auto& posts = result.corpus.posts;
    for (auto field : fields) {
        std::int64_t filled = 0;
        if (field == ImputeField::Geo) {
            filled = impute_one<std::string>(
                posts, [](const RawPost& p) { return p.geo; },
                [](RawPost& p, const std::string& v) { p.geo = v; }, std::nullopt);
        } else {
            int idx = static_cast<int>(field) - static_cast<int>(ImputeField::Likes);
            filled = impute_one<std::int64_t>(
                posts,
                [idx](const RawPost& p) { return count_value(p.engagement, idx); },
                [idx](RawPost& p, std::int64_t v) { count_slot(p.engagement, idx) = v; },
                std::int64_t{0});
        }
        result.imputed[field] = filled;
    }
    return result;
}

std::map<int, std::int64_t> yearly_counts(const std::vector<RawPost>& posts) {
    std::map<int, std::int64_t> out;
    for (const auto& p : posts) ++out[year_of(p.timestamp)];
    return out;
}

std::map<int, std::int64_t> yearly_counts(const Corpus& corpus) { return yearly_counts(corpus.posts); }

}  // namespace trendscope::corpus
