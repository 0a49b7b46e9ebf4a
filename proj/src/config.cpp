#include "trendscope/config.h"

#include <charconv>
#include <fstream>
#include <sstream>

#include "trendscope/common.h"

namespace trendscope {

namespace {

const std::string kDataDir = TRENDSCOPE_DATA_DIR;

bool is_known_key(const std::string& key, const std::map<std::string, std::string>& known) {
    return known.count(key) > 0 || key.rfind("cluster_name.", 0) == 0;
}

}  // namespace

Config Config::defaults() {
    Config c;
    auto& v = c.values_;
    // inputs
    v["input"] = "";
    v["format"] = "auto";
    v["data_dir"] = kDataDir;
    v["lexicon"] = kDataDir + "/sustainability_lexicon.txt";
    v["sentiment_lexicon"] = kDataDir + "/sentiment_lexicon.tsv";
    v["stopwords_en"] = kDataDir + "/stopwords_en.txt";
    v["stopwords_ar"] = kDataDir + "/stopwords_ar.txt";
    v["lemmas"] = kDataDir + "/lemmas.tsv";
    v["external_vectors"] = "";
    v["external_scores"] = "";
    v["gold_sentiment"] = "";
    v["coverage_policy"] = "warn";
    v["out"] = "out";
    v["seed"] = "42";
    // corpus
    v["range_start"] = "2018-01-01";
    v["range_end"] = "2024-12-31";
    v["impute_fields"] = "geo,likes,comments,shares,saves";
    // filtering
    v["geo_names"] = "saudi arabia,ksa";
    v["hashtag_keys"] = "ksa,saudi";
    v["city_names"] = "riyadh,jeddah,dammam,mecca,medina,neom";
    // features
    v["dimension"] = "256";
    // sentiment
    v["tau"] = "0.1";
    v["split_ratios"] = "0.8,0.1,0.1";
    // clustering
    v["min_cluster_size"] = "15";
    v["min_samples"] = "15";
    v["metric"] = "cosine";
    v["lambda_eps"] = "1e-12";
    v["top_k"] = "10";
    // trends
    v["bucket"] = "year";
    v["horizon"] = "3";
    v["horizon_start"] = "";
    v["model"] = "ols";
    v["lr"] = "0.05";
    v["epochs"] = "500";
    v["window"] = "4";
    v["hidden"] = "16";
    v["clip_norm"] = "1.0";
    return c;
}

Config Config::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::Io, "cannot read config file: " + path.string());
    Config c = defaults();
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        auto eq = t.find('=');
        if (eq == std::string::npos) {
            fail(ErrorKind::Usage,
                 path.string() + ":" + std::to_string(lineno) + ": expected key = value");
        }
        auto key = trim(std::string_view(t).substr(0, eq));
        auto value = trim(std::string_view(t).substr(eq + 1));
        if (!is_known_key(key, c.values_)) {
            fail(ErrorKind::Usage,
                 path.string() + ":" + std::to_string(lineno) + ": unknown config key '" + key + "'");
        }
        c.values_[key] = value;
    }
    return c;
}

void Config::set(const std::string& key, const std::string& value) {
    if (!is_known_key(key, values_)) fail(ErrorKind::Usage, "unknown config key '" + key + "'");
    values_[key] = value;
}

bool Config::has(const std::string& key) const { return values_.count(key) > 0; }

std::string Config::get(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) fail(ErrorKind::Usage, "missing config key '" + key + "'");
    return it->second;
}

double Config::get_double(const std::string& key) const {
    auto s = get(key);
    try {
        std::size_t pos = 0;
        double d = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return d;
    } catch (const std::exception&) {
        fail(ErrorKind::Usage, "config key '" + key + "' is not a number: " + s);
    }
}

std::int64_t Config::get_int(const std::string& key) const {
    auto s = get(key);
    std::int64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) {
        fail(ErrorKind::Usage, "config key '" + key + "' is not an integer: " + s);
    }
    return v;
}

std::uint64_t Config::get_u64(const std::string& key) const {
    auto s = get(key);
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) {
        fail(ErrorKind::Usage, "config key '" + key + "' is not an unsigned integer: " + s);
    }
    return v;
}

bool Config::get_bool(const std::string& key) const {
    auto s = get(key);
    if (s == "true" || s == "1" || s == "yes") return true;
    if (s == "false" || s == "0" || s == "no") return false;
    fail(ErrorKind::Usage, "config key '" + key + "' is not a boolean: " + s);
}

std::vector<std::string> Config::get_list(const std::string& key) const {
    std::vector<std::string> out;
    auto s = get(key);
    if (trim(s).empty()) return out;
    for (auto& part : split(s, ',')) {
        auto t = trim(part);
        if (!t.empty()) out.push_back(t);
    }
    return out;
}

std::map<std::string, std::string> Config::with_prefix(const std::string& prefix) const {
    std::map<std::string, std::string> out;
    for (const auto& [k, v] : values_) {
        if (k.rfind(prefix, 0) == 0) out.emplace(k.substr(prefix.size()), v);
    }
    return out;
}

std::string Config::dump() const {
    std::ostringstream os;
    for (const auto& [k, v] : values_) os << k << " = " << v << '\n';
    return os.str();
}

}  // namespace trendscope
