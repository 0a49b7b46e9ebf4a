#include "trendscope/synth.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <set>

namespace trendscope::synth {

namespace {

// Plain modulo and 53-bit doubles keep the stream identical across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}
    std::size_t below(std::size_t n) { return static_cast<std::size_t>(gen_() % n); }
    double unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
    bool chance(double p) { return unit() < p; }
    template <class T>
    const T& pick(const std::vector<T>& v) { return v[below(v.size())]; }
    template <class T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
    }

private:
    std::mt19937_64 gen_;
};

const std::vector<std::string> kPositive = {"great", "excellent", "رائع"};
const std::vector<std::string> kNegative = {"terrible", "awful", "كارثة"};
const std::vector<std::string> kFiller = {"today", "news", "update", "announced", "report", "week", "people",
                                          "year", "plan", "city", "official", "local"};
const std::vector<std::string> kStopFiller = {"the", "is", "of", "and", "this", "for", "a", "with"};
const std::vector<std::string> kChatter = {"football", "match", "coffee", "weekend", "traffic", "movie", "recipe",
                                           "phone", "music", "shopping", "restaurant", "exam", "holiday", "weather",
                                           "game", "family", "friends", "travel", "concert", "market", "fashion",
                                           "series", "dinner", "camera", "league", "goal", "ticket", "mall"};
const std::vector<std::string> kSaudiGeo = {"Saudi Arabia", "KSA"};
const std::vector<std::string> kSaudiTags = {"#KSA", "#Saudi"};
const std::vector<std::string> kSaudiCities = {"Riyadh", "Jeddah", "Dammam", "NEOM"};
const std::vector<std::string> kOtherGeo = {"Egypt", "United Arab Emirates", "United States", "United Kingdom",
                                            "India", "Jordan", "Pakistan", "Germany"};
const corpus::Platform kPlatforms[] = {corpus::Platform::X,          corpus::Platform::Facebook,
                                       corpus::Platform::Instagram,  corpus::Platform::TikTok,
                                       corpus::Platform::GoogleNews, corpus::Platform::Reddit};

bool mentions_saudi_place(const std::string& phrase) {
    return phrase.find("NEOM") != std::string::npos || phrase.find("نيوم") != std::string::npos;
}

// Hashtags inside a text, lowercased without '#'.
std::vector<std::string> hashtags_of(const std::string& text) {
    std::vector<std::string> out;
    for (const auto& w : split(text, ' ')) {
        if (w.size() > 1 && w[0] == '#') {
            std::string t = w.substr(1);
            for (auto& c : t) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
            out.push_back(t);
        }
    }
    return out;
}

struct Draft {
    std::string text;
    std::optional<std::string> geo;
};

// Keyword phrase for template `t`. Phrases that name Saudi places are skipped when `offshore`.
const std::string& pick_phrase(const SynthTemplate& t, Rng& rng, bool offshore) {
    for (;;) {
        const auto& p = rng.pick(t.phrases);
        if (!offshore || !mentions_saudi_place(p)) return p;
    }
}

std::string join_words(const std::vector<std::string>& words) {
    std::string text;
    for (const auto& w : words) text += (text.empty() ? "" : " ") + w;
    return text;
}

// A topical post: keyword phrase, then the template's core vocabulary in a fixed order so
// that posts of one template share their n-grams, then sentiment, filler and location cue.
std::vector<std::string> topic_words(const SynthTemplate& t, Rng& rng, bool offshore) {
    std::vector<std::string> words{pick_phrase(t, rng, offshore)};
    for (int rep = 0; rep < 2; ++rep) words.insert(words.end(), t.vocabulary.begin(), t.vocabulary.end());
    return words;
}

void add_sentiment(std::vector<std::string>& words, sentiment::Label label) {
    if (label == sentiment::Label::Neutral) return;
    const auto& pool = label == sentiment::Label::Positive ? kPositive : kNegative;
    words.insert(words.end(), pool.begin(), pool.end());
}

void add_filler(std::vector<std::string>& words, Rng& rng) {
    words.push_back(rng.pick(kStopFiller));
    words.push_back(rng.pick(kFiller));
}

// Saudi attribution: explicit geo, or no geo plus a hashtag or city mention.
void add_saudi_cue(std::vector<std::string>& words, Draft& d, Rng& rng) {
    const double r = rng.unit();
    if (r < 0.6) {
        d.geo = rng.pick(kSaudiGeo);
    } else if (r < 0.85) {
        words.push_back(rng.pick(kSaudiTags));
    } else {
        words.push_back("in");
        words.push_back(rng.pick(kSaudiCities));
    }
}

corpus::Engagement engagement(Rng& rng, int year_offset, double base, double missing_rate) {
    const double growth = 1.0 + 0.15 * year_offset;
    auto draw = [&](double scale) -> std::optional<std::int64_t> {
        if (rng.chance(missing_rate)) return std::nullopt;
        return static_cast<std::int64_t>(std::floor(base * scale * growth * (0.5 + rng.unit())));
    };
    corpus::Engagement e;
    e.likes = draw(1.0);
    e.comments = draw(0.2);
    e.shares = draw(0.1);
    e.saves = draw(0.05);
    return e;
}

}  // namespace

std::vector<std::int64_t> apportion(std::int64_t n, const std::vector<double>& weights) {
    const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    std::vector<std::int64_t> out(weights.size(), 0);
    if (weights.empty() || n <= 0 || !(total > 0.0)) return out;
    std::vector<double> rem(weights.size());
    std::int64_t assigned = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        const double q = weights[i] / total * static_cast<double>(n);
        out[i] = static_cast<std::int64_t>(std::floor(q));
        rem[i] = q - std::floor(q);
        assigned += out[i];
    }
    std::vector<std::size_t> order(weights.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return rem[a] > rem[b]; });
    for (std::size_t k = 0; assigned < n; ++k, ++assigned) ++out[order[k % order.size()]];
    return out;
}

SynthSpec SynthSpec::defaults() {
    SynthSpec s;
    s.totals = {3000, 3500, 4000, 5000, 5500, 4500, 4500};
    s.shares = {0.08, 0.10, 0.12, 0.15, 0.18, 0.20, 0.22};
    s.templates = {
        {"Renewable Energy Initiatives",
         {"#RenewableEnergy", "#CleanEnergy", "#SolarPower", "Renewable energy", "Solar power", "Wind energy",
          "Sakaka solar plant", "Dumat Al Jandal wind farm", "NEOM eco-city project", "#الطاقة_المتجددة",
          "#الطاقة_النظيفة", "#الطاقة_الشمسية"},
         {"solar", "panels", "turbines", "megawatts", "grid", "electricity", "photovoltaic"}},
        {"Vision 2030 and Economic Growth",
         {"#Vision2030", "Vision 2030", "National Transformation Program", "Economic diversification",
          "Sustainable growth", "Green economy transition", "#رؤية_2030", "#نيوم", "#الاقتصاد_الأخضر"},
         {"economy", "investment", "reforms", "jobs", "tourism", "development", "diversify"}},
        {"Environmental Protection",
         {"#SaudiGreenInitiative", "#SGI", "Saudi Green Initiative", "SGI", "#GreenSaudi", "#SustainableSaudi",
          "Afforestation", "#AfforestationProject", "#DesertificationControl", "#Desertification",
          "Land and sea protection", "30% land and sea protection by 2030", "10 billion trees planting initiative",
          "New Afforestation Campaign", "#المبادرة_السعودية_الخضراء", "#استدامة_السعودية"},
         {"trees", "forests", "desert", "biodiversity", "reserves", "seedlings", "wildlife"}},
        {"Climate Action and Carbon Reduction",
         {"#ClimateAction", "#CircularCarbonEconomy", "Circular Carbon Economy", "#NetZero2060", "#CarbonCapture",
          "Carbon capture and storage", "CCS", "Emissions reduction", "Climate change mitigation",
          "Net zero emissions by 2060", "#الاقتصاد_الدائري_للكربون", "#صافي_الصفير_2060", "#احتجاز_الكربون"},
         {"emissions", "carbon", "warming", "hydrogen", "footprint", "methane", "decarbonization"}},
    };
    return s;
}

void SynthSpec::validate() const {
    if (totals.empty() || totals.size() != shares.size()) {
        fail(ErrorKind::Usage, "synth spec needs one share per yearly total");
    }
    for (std::size_t i = 0; i < totals.size(); ++i) {
        if (totals[i] < 0) fail(ErrorKind::Usage, "negative yearly total");
        if (!(shares[i] >= 0.0 && shares[i] <= 1.0)) {
            fail(ErrorKind::Usage, "infeasible share " + std::to_string(shares[i]) + " for " +
                                       std::to_string(first_year + static_cast<int>(i)));
        }
    }
    const double mix = positive + negative + neutral;
    if (positive < 0 || negative < 0 || neutral < 0 || std::abs(mix - 1.0) > 1e-9) {
        fail(ErrorKind::Usage, "sentiment mix must be non-negative and sum to 1");
    }
    if (templates.size() < 2) fail(ErrorKind::Usage, "synth spec needs at least 2 templates");
    for (const auto& t : templates) {
        if (t.phrases.empty() || t.vocabulary.empty()) fail(ErrorKind::Usage, "template '" + t.name + "' is empty");
    }
    if (!(noise_fraction >= 0.0 && noise_fraction < 1.0)) fail(ErrorKind::Usage, "noise fraction outside [0, 1)");
}

SynthCorpus generate(const SynthSpec& spec) {
    spec.validate();
    Rng rng(spec.seed);

    struct Slot {
        int year;
        bool topical;
    };
    std::vector<std::int64_t> kept(spec.totals.size());
    std::vector<Slot> slots;
    for (std::size_t y = 0; y < spec.totals.size(); ++y) {
        kept[y] = std::llround(spec.shares[y] * static_cast<double>(spec.totals[y]));
        for (std::int64_t k = 0; k < spec.totals[y]; ++k) slots.push_back({spec.first_year + static_cast<int>(y), k < kept[y]});
    }
    const std::int64_t n_topical = std::accumulate(kept.begin(), kept.end(), std::int64_t{0});

    // exact aggregate labels, then shuffled onto the topical posts
    std::vector<sentiment::Label> labels;
    const auto mix = apportion(n_topical, {spec.positive, spec.negative, spec.neutral});
    for (int c = 0; c < 3; ++c) labels.insert(labels.end(), static_cast<std::size_t>(mix[c]), static_cast<sentiment::Label>(c));
    rng.shuffle(labels);
    std::vector<int> template_ids;
    const auto n_noise = static_cast<std::int64_t>(std::llround(spec.noise_fraction * static_cast<double>(n_topical)));
    const auto per_template = apportion(n_topical - n_noise, std::vector<double>(spec.templates.size(), 1.0));
    template_ids.assign(static_cast<std::size_t>(n_noise), -1);
    for (std::size_t t = 0; t < per_template.size(); ++t) {
        template_ids.insert(template_ids.end(), static_cast<std::size_t>(per_template[t]), static_cast<int>(t));
    }
    rng.shuffle(template_ids);

    struct Generated {
        corpus::RawPost post;
        std::optional<sentiment::Label> label;
        int template_id = -1;
    };
    std::vector<Generated> gen;
    gen.reserve(slots.size());
    std::size_t topical_i = 0;
    for (const auto& slot : slots) {
        Generated g;
        Draft d;
        std::vector<std::string> words;
        const int yoff = slot.year - spec.first_year;
        double base = 20.0;
        if (slot.topical) {
            const auto label = labels[topical_i];
            const int tid = template_ids[topical_i];
            ++topical_i;
            if (tid >= 0) {
                words = topic_words(spec.templates[static_cast<std::size_t>(tid)], rng, false);
            } else {
                // mixed post: half of the core vocabulary from each of two templates
                const std::size_t a = rng.below(spec.templates.size());
                const std::size_t b = (a + 1 + rng.below(spec.templates.size() - 1)) % spec.templates.size();
                const auto& ta = spec.templates[a];
                const auto& tb = spec.templates[b];
                words.push_back(pick_phrase(ta, rng, false));
                words.insert(words.end(), ta.vocabulary.begin(), ta.vocabulary.begin() + static_cast<std::ptrdiff_t>(ta.vocabulary.size() / 2));
                words.insert(words.end(), tb.vocabulary.begin() + static_cast<std::ptrdiff_t>(tb.vocabulary.size() / 2), tb.vocabulary.end());
            }
            add_sentiment(words, label);
            add_filler(words, rng);
            add_saudi_cue(words, d, rng);
            g.label = label;
            g.template_id = tid;
            base = 40.0 + 10.0 * (tid < 0 ? 0 : tid);
        } else if (rng.chance(0.5)) {
            // Saudi chatter: passes the country filter, not the topic filter
            for (int k = 0; k < 4; ++k) words.push_back(rng.pick(kChatter));
            add_filler(words, rng);
            add_saudi_cue(words, d, rng);
        } else {
            // elsewhere: sometimes on topic, never attributable to Saudi Arabia
            if (rng.chance(spec.offshore_keyword_rate)) {
                words = topic_words(rng.pick(spec.templates), rng, true);
            } else {
                for (int k = 0; k < 4; ++k) words.push_back(rng.pick(kChatter));
            }
            add_filler(words, rng);
            d.geo = rng.pick(kOtherGeo);
        }
        d.text = join_words(words);

        auto& p = g.post;
        p.platform = kPlatforms[rng.below(std::size(kPlatforms))];
        const std::int64_t start = corpus::make_timestamp(slot.year, 1, 1);
        const std::int64_t span = corpus::make_timestamp(slot.year + 1, 1, 1) - start;
        p.timestamp = start + static_cast<std::int64_t>(rng.below(static_cast<std::size_t>(span)));
        p.text = d.text;
        p.geo = d.geo;
        p.hashtags = hashtags_of(d.text);
        p.engagement = engagement(rng, yoff, base, spec.missing_rate);
        gen.push_back(std::move(g));
    }

    std::stable_sort(gen.begin(), gen.end(),
                     [](const Generated& a, const Generated& b) { return a.post.timestamp < b.post.timestamp; });
    SynthCorpus out;
    out.posts.reserve(gen.size());
    char id[32];
    for (std::size_t i = 0; i < gen.size(); ++i) {
        std::snprintf(id, sizeof id, "p%06zu", i + 1);
        gen[i].post.id = id;
        if (gen[i].label) {
            out.gold_sentiment.emplace_back(id, *gen[i].label);
            out.gold_clusters.emplace_back(id, gen[i].template_id);
        }
        out.posts.push_back(std::move(gen[i].post));
    }
    return out;
}

void write(const SynthCorpus& corpus, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) fail(ErrorKind::Io, "cannot create " + dir.string() + ": " + ec.message());
    corpus::write_jsonl(dir / "posts.jsonl", corpus.posts);
    std::ofstream gs(dir / "gold_sentiment.tsv", std::ios::binary);
    std::ofstream gc(dir / "gold_clusters.tsv", std::ios::binary);
    if (!gs || !gc) fail(ErrorKind::Io, "cannot write gold files in " + dir.string());
    for (const auto& [id, l] : corpus.gold_sentiment) gs << id << '\t' << sentiment::to_string(l) << '\n';
    for (const auto& [id, t] : corpus.gold_clusters) gc << id << '\t' << t << '\n';
}

}  // namespace trendscope::synth
