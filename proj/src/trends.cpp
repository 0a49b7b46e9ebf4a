#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>

#include "trendscope/corpus.h"
#include "trendscope/csv.h"
#include "trendscope/trends.h"

namespace trendscope::trends {

Bucket parse_bucket(const std::string& s) {
    if (s == "year") return Bucket::Year;
    if (s == "month") return Bucket::Month;
    fail(ErrorKind::Config, "unknown bucket '" + s + "' (expected year or month)");
}

std::string to_string(Bucket b) { return b == Bucket::Year ? "year" : "month"; }

ModelKind parse_model(const std::string& s) {
    if (s == "ols") return ModelKind::Ols;
    if (s == "lstm") return ModelKind::Lstm;
    fail(ErrorKind::Config, "unknown model '" + s + "' (expected ols or lstm)");
}

std::string to_string(ModelKind m) { return m == ModelKind::Ols ? "ols" : "lstm"; }

Period Period::next() const { return advance(1); }

Period Period::advance(std::int64_t steps) const {
    if (month == 0) return {static_cast<int>(year + steps), 0};
    const std::int64_t o = ordinal() + steps;
    return {static_cast<int>(o / 12), static_cast<int>(o % 12) + 1};
}

std::string Period::str() const {
    if (month == 0) return std::to_string(year);
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d", year, month);
    return buf;
}

Period period_of(std::int64_t timestamp, Bucket bucket) {
    const int y = corpus::year_of(timestamp);
    return bucket == Bucket::Year ? Period{y, 0} : Period{y, corpus::month_of(timestamp)};
}

Period parse_period(const std::string& s, Bucket bucket) {
    int y = 0;
    int m = 0;
    const char* end = s.data() + s.size();
    auto r = std::from_chars(s.data(), end, y);
    bool ok = r.ec == std::errc{};
    if (ok && bucket == Bucket::Month) {
        ok = r.ptr != end && *r.ptr == '-';
        if (ok) r = std::from_chars(r.ptr + 1, end, m);
        ok = ok && r.ec == std::errc{} && m >= 1 && m <= 12;
    }
    if (!ok || r.ptr != end) fail(ErrorKind::Config, "bad period '" + s + "' for " + to_string(bucket) + " buckets");
    return {y, m};
}

std::string format_number(double v) {
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

std::vector<TrendSeries> build_series(const std::vector<textprep::CleanPost>& posts,
                                      const std::vector<double>& sentiments, const std::vector<int>& labels,
                                      Bucket bucket, Warnings* warnings) {
    if (posts.size() != sentiments.size() || posts.size() != labels.size()) {
        fail(ErrorKind::Internal, "build_series: posts, sentiments and labels differ in length");
    }
    struct Acc {
        double sentiment = 0.0;
        std::int64_t count = 0;
        std::int64_t engagement = 0;
    };
    std::map<int, std::map<Period, Acc>> acc;
    for (std::size_t i = 0; i < posts.size(); ++i) {
        if (labels[i] < 0) continue;
        auto& a = acc[labels[i]][period_of(posts[i].timestamp, bucket)];
        a.sentiment += sentiments[i];
        ++a.count;
        a.engagement += posts[i].engagement.resolved().total();
    }
    std::vector<TrendSeries> out;
    if (acc.empty()) {
        if (warnings) warnings->push_back("no clustered posts: trend series are empty");
        return out;
    }
    for (const auto& [cid, periods] : acc) {
        TrendSeries s;
        s.cluster_id = cid;
        s.bucket = bucket;
        const Period first = periods.begin()->first;
        const Period last = periods.rbegin()->first;
        for (Period p = first; p <= last; p = p.next()) {
            TrendPoint pt;
            pt.period = p;
            if (auto it = periods.find(p); it != periods.end()) {
                const auto& a = it->second;
                pt.post_count = a.count;
                pt.mean_sentiment = std::clamp(a.sentiment / static_cast<double>(a.count), -1.0, 1.0);
                pt.engagement_total = a.engagement;
                pt.engagement_mean = static_cast<double>(a.engagement) / static_cast<double>(a.count);
            }
            s.points.push_back(pt);
        }
        out.push_back(std::move(s));
    }
    return out;
}

namespace {

struct MetricSpec {
    const char* name;
    double (*value)(const TrendPoint&);
    double lo;
    double hi;
};

const MetricSpec kMetrics[] = {
    {"sentiment", [](const TrendPoint& p) { return *p.mean_sentiment; }, -1.0, 1.0},
    {"engagement_total", [](const TrendPoint& p) { return static_cast<double>(p.engagement_total); }, 0.0,
     std::numeric_limits<double>::infinity()},
    {"engagement_mean", [](const TrendPoint& p) { return p.engagement_mean; }, 0.0,
     std::numeric_limits<double>::infinity()},
};

}  // namespace

std::vector<Forecast> forecast_all(const std::vector<TrendSeries>& series, const ForecastOptions& options,
                                   Warnings* warnings) {
    std::vector<Forecast> out;
    for (const auto& s : series) {
        if (s.points.empty()) continue;
        const Period first = s.points.front().period;
        const Period start = options.horizon_start.value_or(s.points.back().period.next());
        // occupied periods before the forecast start; empty ones are skipped, not zero-filled
        std::vector<const TrendPoint*> hist;
        for (const auto& p : s.points) {
            if (p.post_count > 0 && p.period < start) hist.push_back(&p);
        }
        for (std::size_t mi = 0; mi < std::size(kMetrics); ++mi) {
            const auto& metric = kMetrics[mi];
            const std::string tag = "cluster " + std::to_string(s.cluster_id) + " " + metric.name;
            Forecast f;
            f.cluster_id = s.cluster_id;
            f.metric = metric.name;
            f.model = options.model;
            for (std::size_t h = 0; h < options.horizon; ++h) f.periods.push_back(start.advance(static_cast<std::int64_t>(h)));
            if (hist.size() < 2) {
                if (warnings) warnings->push_back(tag + ": fewer than 2 history points, no forecast");
                continue;
            }
            f.history_end = hist.back()->period;
            std::vector<double> x;
            std::vector<double> y;
            for (const auto* p : hist) {
                x.push_back(static_cast<double>(p->period.ordinal() - first.ordinal()));
                y.push_back(metric.value(*p));
            }
            const auto clamp = std::make_pair(metric.lo, metric.hi);
            if (options.model == ModelKind::Lstm && y.size() < options.lstm.window + 2) {
                if (warnings) {
                    warnings->push_back(tag + ": " + std::to_string(y.size()) + " points is too short for the LSTM (needs " +
                                        std::to_string(options.lstm.window + 2) + "), using OLS");
                }
                f.model = ModelKind::Ols;
            }
            if (f.model == ModelKind::Ols) {
                const auto fit = fit_ols(x, y);
                const double start_x = static_cast<double>(start.ordinal() - first.ordinal());
                f.values = forecast_ols(fit, start_x - 1.0, options.horizon, clamp);
            } else {
                LstmConfig cfg = options.lstm;
                cfg.seed = options.lstm.seed + static_cast<std::uint64_t>(s.cluster_id) * 31 + mi;
                const auto model = train_lstm(y, cfg);
                const auto skip = static_cast<std::size_t>(start.ordinal() - f.history_end.ordinal() - 1);
                auto rolled = forecast_lstm(model, y, skip + options.horizon, clamp);
                f.values.assign(rolled.begin() + static_cast<std::ptrdiff_t>(skip), rolled.end());
            }
            for (double v : f.values) {
                if (!std::isfinite(v)) fail(ErrorKind::Internal, tag + ": non-finite forecast");
            }
            out.push_back(std::move(f));
        }
    }
    return out;
}

void write_trends_csv(const std::filesystem::path& path, const std::vector<TrendSeries>& series,
                      const std::vector<Forecast>& forecasts) {
    std::ofstream os(path, std::ios::binary);
    if (!os) fail(ErrorKind::Io, "cannot write " + path.string());
    os << "cluster_id,period,metric,value,kind,model\n";
    auto row = [&](int cid, const Period& p, const std::string& metric, const std::string& value, const char* kind,
                   const std::string& model) {
        os << csv::join_row({std::to_string(cid), p.str(), metric, value, kind, model}) << '\n';
    };
    for (const auto& s : series) {
        for (const auto& p : s.points) {
            if (p.mean_sentiment) row(s.cluster_id, p.period, "sentiment", format_number(*p.mean_sentiment), "history", "");
            row(s.cluster_id, p.period, "post_count", std::to_string(p.post_count), "history", "");
            row(s.cluster_id, p.period, "engagement_total", std::to_string(p.engagement_total), "history", "");
            if (p.post_count > 0) {
                row(s.cluster_id, p.period, "engagement_mean", format_number(p.engagement_mean), "history", "");
            }
        }
        for (const auto& f : forecasts) {
            if (f.cluster_id != s.cluster_id) continue;
            for (std::size_t i = 0; i < f.values.size(); ++i) {
                row(f.cluster_id, f.periods[i], f.metric, format_number(f.values[i]), "forecast", to_string(f.model));
            }
        }
    }
}

}  // namespace trendscope::trends
