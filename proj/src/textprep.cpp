#include "trendscope/textprep.h"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "trendscope/unicode.h"

namespace trendscope::textprep {

namespace u = trendscope::unicode;

namespace {

bool is_word_char(char32_t c) { return u::is_letter(c) || u::is_mark(c) || u::is_digit(c) || c == U'_'; }

bool ascii_alpha(char32_t c) { return (c >= U'a' && c <= U'z') || (c >= U'A' && c <= U'Z'); }

char32_t ascii_lower(char32_t c) { return (c >= U'A' && c <= U'Z') ? c + 32 : c; }

// Length of a URL starting at i (scheme:// or www.), running to the next whitespace.
std::size_t url_length(const std::u32string& s, std::size_t i) {
    if (i > 0 && is_word_char(s[i - 1])) return 0;
    std::size_t j = i;
    bool is_url = false;
    if (j < s.size() && ascii_alpha(s[j])) {
        ++j;
        while (j < s.size() && (ascii_alpha(s[j]) || (s[j] >= U'0' && s[j] <= U'9') || s[j] == U'+' ||
                                s[j] == U'.' || s[j] == U'-')) {
            ++j;
        }
        if (j + 2 < s.size() && s[j] == U':' && s[j + 1] == U'/' && s[j + 2] == U'/') is_url = true;
    }
    if (!is_url && i + 4 <= s.size() && ascii_lower(s[i]) == U'w' && ascii_lower(s[i + 1]) == U'w' &&
        ascii_lower(s[i + 2]) == U'w' && s[i + 3] == U'.') {
        is_url = true;
    }
    if (!is_url) return 0;
    std::size_t end = i;
    while (end < s.size() && !u::is_space(s[end])) ++end;
    return end - i;
}

bool is_tashkeel(char32_t c) {
    return (c >= 0x064B && c <= 0x065F) || c == 0x0670 || (c >= 0x06D6 && c <= 0x06DC) ||
           (c >= 0x06DF && c <= 0x06E4) || c == 0x06E7 || c == 0x06E8 || (c >= 0x06EA && c <= 0x06ED);
}

std::string read_file(const std::filesystem::path& path, const char* what) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::Io, std::string("cannot read ") + what + ": " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

std::string remove_noise(std::string_view text) {
    auto s = u::decode(text);
    for (auto& c : s) {
        if (c == 0x2019 || c == 0x2018 || c == 0x02BC) c = U'\'';
    }
    // Pass 1: blank out URLs and emoji.
    std::vector<bool> removed(s.size(), false);
    for (std::size_t i = 0; i < s.size();) {
        if (auto len = url_length(s, i); len > 0) {
            std::fill(removed.begin() + static_cast<long>(i), removed.begin() + static_cast<long>(i + len), true);
            i += len;
            continue;
        }
        if (u::is_emoji(s[i])) removed[i] = true;
        ++i;
    }
    // Pass 2: keep the allowed alphabet, collapse separators.
    std::u32string out;
    out.reserve(s.size());
    bool pending_space = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        char32_t c = s[i];
        if (removed[i] || u::is_space(c)) {
            pending_space = true;
            continue;
        }
        bool keep = u::is_letter(c) || u::is_mark(c) || u::is_digit(c) || c == U'_' || c == U'\'';
        if (c == U'#') {
            bool at_word_start = out.empty() || pending_space;
            bool next_is_word = i + 1 < s.size() && !removed[i + 1] && is_word_char(s[i + 1]);
            keep = at_word_start && next_is_word;
        }
        if (!keep) {
            pending_space = true;
            continue;
        }
        if (pending_space && !out.empty()) out.push_back(U' ');
        pending_space = false;
        out.push_back(c);
    }
    return u::encode(out);
}

std::string normalize(std::string_view text, std::optional<std::string_view> /*lang*/) {
    auto s = u::nfc(u::case_fold(u::nfc(u::decode(text))));
    std::u32string out;
    out.reserve(s.size());
    for (char32_t c : s) {
        if (is_tashkeel(c) || c == 0x0640) continue;
        switch (c) {
            case 0x0622: case 0x0623: case 0x0625: case 0x0671: case 0x0672: case 0x0673:
                out.push_back(0x0627);
                continue;
            case 0x0629:
                out.push_back(0x0647);
                continue;
            case 0x0649:
                out.push_back(0x064A);
                continue;
            default:
                break;
        }
        if (c >= 0x80 && u::is_digit(c)) {
            out.push_back(static_cast<char32_t>(u::ascii_digit(c)));
            continue;
        }
        out.push_back(c);
    }
    return u::encode(out);
}

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    auto s = u::decode(text);
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && u::is_space(s[i])) ++i;
        std::size_t j = i;
        while (j < s.size() && !u::is_space(s[j])) ++j;
        if (j > i) {
            std::u32string tok = s.substr(i, j - i);
            std::size_t b = 0;
            std::size_t e = tok.size();
            bool hash = tok[0] == U'#';
            if (hash) b = 1;
            while (b < e && tok[b] == U'\'') ++b;
            while (e > b && tok[e - 1] == U'\'') --e;
            std::u32string body = tok.substr(b, e - b);
            bool has_alnum = std::any_of(body.begin(), body.end(),
                                         [](char32_t c) { return u::is_letter(c) || u::is_digit(c); });
            if (has_alnum) tokens.push_back((hash ? "#" : "") + u::encode(body));
        }
        i = j;
    }
    return tokens;
}

std::string detect_language(std::string_view token) { return u::contains_arabic(token) ? "ar" : "en"; }

// ---------------------------------------------------------------------------
// stop words

void StopWordList::add(const std::string& lang, std::string_view word) {
    auto w = normalize(trim(word));
    if (!w.empty()) sets_[lang].insert(std::move(w));
}

void StopWordList::load(const std::string& lang, const std::filesystem::path& path) {
    auto text = read_file(path, "stop-word list");
    sets_[lang];
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        auto t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        add(lang, t);
    }
}

bool StopWordList::contains(const std::string& lang, std::string_view word) const {
    auto it = sets_.find(lang);
    return it != sets_.end() && it->second.count(std::string(word)) > 0;
}

std::size_t StopWordList::size(const std::string& lang) const {
    auto it = sets_.find(lang);
    return it == sets_.end() ? 0 : it->second.size();
}

std::vector<std::string> filter_stopwords(const std::vector<std::string>& tokens,
                                          const StopWordList& stoplist, std::string_view lang,
                                          Warnings* warnings) {
    std::string fixed;
    bool per_token = lang == "auto";
    if (!per_token) {
        fixed = std::string(lang);
        if (!stoplist.has_language(fixed)) {
            if (warnings) warnings->push_back("no stop list for language '" + fixed + "', using English");
            fixed = "en";
        }
    }
    std::vector<std::string> out;
    out.reserve(tokens.size());
    for (const auto& t : tokens) {
        if (is_hashtag(t)) {
            out.push_back(t);
            continue;
        }
        const std::string& l = per_token ? detect_language(t) : fixed;
        if (!stoplist.contains(l, t)) out.push_back(t);
    }
    return out;
}

// ---------------------------------------------------------------------------
// stemming and lemmas

std::string arabic_light_stem(std::string_view word) {
    auto w = u::decode(word);
    if (w.size() < 3) return std::string(word);
    auto starts = [&](std::u32string_view p) { return w.size() >= p.size() && std::u32string_view(w).substr(0, p.size()) == p; };
    auto ends = [&](std::u32string_view p) {
        return w.size() >= p.size() && std::u32string_view(w).substr(w.size() - p.size()) == p;
    };
    // conjunction waw, if at least three letters remain
    if (starts(U"و") && w.size() >= 4) w.erase(0, 1);
    // definite article, alone or fused with a preposition/conjunction
    static const std::u32string_view kArticles[] = {
        U"وال", U"بال", U"كال",
        U"فال", U"لل",       U"ال"};
    for (auto a : kArticles) {
        if (starts(a) && w.size() - a.size() >= 2) {
            w.erase(0, a.size());
            break;
        }
    }
    // one pass over the suffix list, in order
    static const std::u32string_view kSuffixes[] = {U"ها", U"ان", U"ات",
                                                    U"ون", U"ين", U"ه",
                                                    U"ة"};
    for (auto s : kSuffixes) {
        if (ends(s) && w.size() - s.size() >= 2) w.erase(w.size() - s.size());
    }
    return u::encode(w);
}

std::string stem(std::string_view token, std::string_view lang) {
    if (is_hashtag(token)) return std::string(token);
    if (u::length(token) < 3) return std::string(token);
    std::string l = lang == "auto" ? detect_language(token) : std::string(lang);
    if (l == "ar") return arabic_light_stem(token);
    if (u::is_ascii_lower_alpha(token)) return porter_stem(token);
    return std::string(token);
}

void LemmaTable::add(std::string_view surface, std::string_view lemma) {
    auto s = normalize(trim(surface));
    auto l = normalize(trim(lemma));
    if (s.empty() || l.empty()) fail(ErrorKind::Data, "empty lemma table entry");
    auto& table = tables_[detect_language(s)];
    if (s != l) {
        if (auto it = table.find(l); it != table.end() && it->second != l) {
            fail(ErrorKind::Data, "lemma table cycle: '" + l + "' is itself mapped to '" + it->second + "'");
        }
        for (const auto& [k, v] : table) {
            if (v == s && k != s) {
                fail(ErrorKind::Data, "lemma table cycle: '" + s + "' is the lemma of '" + k + "'");
            }
        }
    }
    table[s] = l;
}

void LemmaTable::load(const std::filesystem::path& path) {
    auto text = read_file(path, "lemma table");
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty() || trim(line)[0] == '#') continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos) {
            fail(ErrorKind::Data, path.string() + ":" + std::to_string(lineno) + ": expected surface<TAB>lemma");
        }
        add(line.substr(0, tab), line.substr(tab + 1));
    }
}

std::optional<std::string> LemmaTable::lookup(const std::string& lang, std::string_view surface) const {
    auto t = tables_.find(lang);
    if (t == tables_.end()) return std::nullopt;
    auto it = t->second.find(std::string(surface));
    if (it == t->second.end()) return std::nullopt;
    return it->second;
}

std::size_t LemmaTable::size() const {
    std::size_t n = 0;
    for (const auto& [lang, t] : tables_) n += t.size();
    return n;
}

std::string lemmatize(std::string_view token, const LemmaTable& table, std::string_view lang) {
    if (is_hashtag(token)) return std::string(token);
    std::string l = lang == "auto" ? detect_language(token) : std::string(lang);
    if (auto hit = table.lookup(l, token)) return *hit;
    return stem(token, l);
}

std::vector<std::string> ngrams(const std::vector<std::string>& tokens) {
    std::vector<std::string> out;
    const auto n = tokens.size();
    if (n >= 2) out.reserve((n - 1) + (n >= 3 ? n - 2 : 0));
    for (std::size_t i = 0; i + 1 < n; ++i) out.push_back(tokens[i] + ' ' + tokens[i + 1]);
    for (std::size_t i = 0; i + 2 < n; ++i) out.push_back(tokens[i] + ' ' + tokens[i + 1] + ' ' + tokens[i + 2]);
    return out;
}

// ---------------------------------------------------------------------------
// composition

Preprocessor::Preprocessor(StopWordList stopwords, LemmaTable lemmas, PreprocessConfig config)
    : stopwords_(std::move(stopwords)), lemmas_(std::move(lemmas)), config_(std::move(config)) {}

Preprocessor Preprocessor::from_files(const std::filesystem::path& stop_en,
                                      const std::filesystem::path& stop_ar,
                                      const std::filesystem::path& lemmas, PreprocessConfig config) {
    StopWordList stop;
    stop.load("en", stop_en);
    stop.load("ar", stop_ar);
    LemmaTable table;
    if (!lemmas.empty()) table.load(lemmas);
    return Preprocessor(std::move(stop), std::move(table), std::move(config));
}

std::vector<std::string> Preprocessor::terms(std::string_view phrase) const {
    return finish(tokenize(normalize(remove_noise(phrase))));
}

std::vector<std::string> Preprocessor::finish(const std::vector<std::string>& tokens) const {
    auto kept = filter_stopwords(tokens, stopwords_, config_.default_lang);
    std::vector<std::string> out;
    out.reserve(kept.size());
    for (const auto& t : kept) {
        auto lemma = lemmatize(t, lemmas_);
        // a lemma may itself be a stop word ("being" -> "be")
        if (!is_hashtag(lemma) && stopwords_.contains(detect_language(lemma), lemma)) continue;
        out.push_back(std::move(lemma));
    }
    return out;
}

std::string Preprocessor::key(std::string_view phrase) const {
    auto t = terms(phrase);
    std::string out;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (i) out.push_back(' ');
        out += t[i];
    }
    return out;
}

CleanPost Preprocessor::preprocess(const corpus::RawPost& post) const {
    CleanPost c;
    static_cast<corpus::RawPost&>(c) = post;
    c.cleaned_text = normalize(remove_noise(post.text), post.lang);
    c.tokens = finish(tokenize(c.cleaned_text));
    c.ngrams = ngrams(c.tokens);
    c.token_count = c.tokens.size();

    std::vector<std::string> tags;
    auto push_tag = [&](std::string tag) {
        if (!tag.empty() && std::find(tags.begin(), tags.end(), tag) == tags.end()) tags.push_back(std::move(tag));
    };
    for (const auto& h : post.hashtags) {
        auto n = normalize(remove_noise(h));
        n.erase(std::remove(n.begin(), n.end(), '#'), n.end());
        n.erase(std::remove(n.begin(), n.end(), ' '), n.end());
        push_tag(std::move(n));
    }
    for (const auto& t : tokenize(c.cleaned_text)) {
        if (is_hashtag(t)) push_tag(t.substr(1));
    }
    c.hashtags = std::move(tags);
    return c;
}

std::vector<CleanPost> preprocess_all(const Preprocessor& prep, const std::vector<corpus::RawPost>& posts) {
    std::vector<CleanPost> out;
    out.reserve(posts.size());
    for (const auto& p : posts) out.push_back(prep.preprocess(p));
    return out;
}

// ---------------------------------------------------------------------------
// serialisation

nlohmann::ordered_json to_json(const CleanPost& post) {
    auto j = corpus::to_json(post);
    j["cleaned_text"] = post.cleaned_text;
    j["tokens"] = post.tokens;
    j["ngrams"] = post.ngrams;
    return j;
}

CleanPost clean_post_from_json(const nlohmann::json& obj) {
    CleanPost c;
    static_cast<corpus::RawPost&>(c) = corpus::post_from_json(obj);
    // hashtags are already normalized; keep them verbatim
    c.hashtags.clear();
    if (auto it = obj.find("hashtags"); it != obj.end() && it->is_array()) {
        for (const auto& h : *it) c.hashtags.push_back(h.get<std::string>());
    }
    c.cleaned_text = obj.value("cleaned_text", std::string());
    if (auto it = obj.find("tokens"); it != obj.end()) c.tokens = it->get<std::vector<std::string>>();
    if (auto it = obj.find("ngrams"); it != obj.end()) c.ngrams = it->get<std::vector<std::string>>();
    else c.ngrams = ngrams(c.tokens);
    c.token_count = c.tokens.size();
    return c;
}

void write_clean_jsonl(const std::filesystem::path& path, const std::vector<CleanPost>& posts) {
    std::ofstream os(path, std::ios::binary);
    if (!os) fail(ErrorKind::Io, "cannot write " + path.string());
    for (const auto& p : posts) os << to_json(p).dump() << '\n';
}

std::vector<CleanPost> read_clean_jsonl(const std::filesystem::path& path) {
    auto text = read_file(path, "preprocessed posts");
    std::vector<CleanPost> out;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        try {
            out.push_back(clean_post_from_json(nlohmann::json::parse(line)));
        } catch (const nlohmann::json::exception& e) {
            fail(ErrorKind::Data, path.string() + ":" + std::to_string(lineno) + ": " + e.what());
        } catch (const Error& e) {
            fail(ErrorKind::Data, path.string() + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return out;
}

}  // namespace trendscope::textprep
