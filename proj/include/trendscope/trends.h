#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "trendscope/common.h"
#include "trendscope/textprep.h"

namespace trendscope::trends {

enum class Bucket { Year, Month };

Bucket parse_bucket(const std::string& s);
std::string to_string(Bucket b);

struct Period {
    int year = 0;
    int month = 0;  // 1..12 for monthly buckets, 0 for yearly

    /// Ordinal on a single axis: year for yearly buckets, year*12 + month-1 for monthly.
    std::int64_t ordinal() const { return month == 0 ? year : std::int64_t{year} * 12 + (month - 1); }
    Period next() const;
    Period advance(std::int64_t steps) const;
    std::string str() const;  // "2024" or "2024-03"
    auto operator<=>(const Period&) const = default;
};

Period period_of(std::int64_t timestamp, Bucket bucket);
/// Parses "2024" or "2024-03" according to `bucket`.
Period parse_period(const std::string& s, Bucket bucket);

struct TrendPoint {
    Period period;
    std::optional<double> mean_sentiment;  // absent for empty periods
    std::int64_t post_count = 0;
    std::int64_t engagement_total = 0;
    double engagement_mean = 0.0;
};

struct TrendSeries {
    int cluster_id = 0;
    Bucket bucket = Bucket::Year;
    std::vector<TrendPoint> points;  // strictly increasing periods, gaps filled with empty points
};

/// `sentiments` and `labels` align with `posts`. Noise (-1) is excluded.
std::vector<TrendSeries> build_series(const std::vector<textprep::CleanPost>& posts,
                                      const std::vector<double>& sentiments, const std::vector<int>& labels,
                                      Bucket bucket, Warnings* warnings = nullptr);

// ---------------------------------------------------------------------------
// OLS

struct OlsFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    std::size_t n = 0;
};

/// Closed-form least squares. Throws Error(Data) on fewer than 2 points or all-equal x.
OlsFit fit_ols(const std::vector<double>& x, const std::vector<double>& y);

/// Predictions at last_index+1 .. last_index+horizon, optionally clamped.
std::vector<double> forecast_ols(const OlsFit& fit, double last_index, std::size_t horizon,
                                 std::optional<std::pair<double, double>> clamp = std::nullopt);

// ---------------------------------------------------------------------------
// LSTM

struct LstmConfig {
    std::size_t window = 4;
    std::size_t hidden = 16;
    double lr = 0.05;
    std::size_t epochs = 500;
    double clip_norm = 1.0;
    std::uint64_t seed = 42;
};

struct Sample {
    std::vector<double> x;  // length W
    double y = 0.0;
};

/// Single-layer LSTM with a linear head. Gate order in every block: input, forget, output, candidate.
/// Flat parameter layout: Wx[4H] | Wh[4H*H] (row-major, gate rows) | b[4H] | Wy[H] | by.
struct LstmModel {
    LstmConfig config;
    std::vector<double> params;
    double scale_min = 0.0;  // min-max scaling of the training series onto [-1, 1]
    double scale_max = 0.0;
    std::vector<double> loss_history;  // loss before each epoch, then the final loss

    std::size_t hidden() const { return config.hidden; }
    static std::size_t param_count(std::size_t hidden) { return 4 * hidden + 4 * hidden * hidden + 4 * hidden + hidden + 1; }

    double scale(double v) const;
    double unscale(double v) const;
};

/// Uniform(-1/sqrt(H), 1/sqrt(H)) weights, zero biases except the forget gate at +1.
LstmModel init_lstm(const LstmConfig& config);

double lstm_predict(const LstmModel& model, const std::vector<double>& window);

/// Sliding windows of length W over an already scaled series.
std::vector<Sample> make_windows(const std::vector<double>& series, std::size_t window);

/// loss_scale * mean squared error and its gradient with respect to `params` (BPTT).
double lstm_loss_and_gradients(const LstmModel& model, const std::vector<Sample>& batch, std::vector<double>* grad,
                               double loss_scale = 1.0);

/// Max over parameters of |analytic - numeric| / max(|analytic|, |numeric|, floor), central differences.
double lstm_gradient_check(const LstmModel& model, const std::vector<Sample>& batch, double step = 1e-5,
                           double floor = 1e-6);

/// Full-batch gradient descent on MSE with gradient-norm clipping. Requires values.size() >= W + 2.
LstmModel train_lstm(const std::vector<double>& values, const LstmConfig& config);

/// Autoregressive rollout of `horizon` steps from the last W history values (original units).
std::vector<double> forecast_lstm(const LstmModel& model, const std::vector<double>& history, std::size_t horizon,
                                  std::optional<std::pair<double, double>> clamp = std::nullopt);

// ---------------------------------------------------------------------------
// forecasts

enum class ModelKind { Ols, Lstm };
ModelKind parse_model(const std::string& s);
std::string to_string(ModelKind m);

struct Forecast {
    int cluster_id = 0;
    std::string metric;  // sentiment | engagement_total | engagement_mean
    ModelKind model = ModelKind::Ols;
    std::vector<Period> periods;
    std::vector<double> values;
    Period history_end;
};

struct ForecastOptions {
    ModelKind model = ModelKind::Ols;
    std::size_t horizon = 3;
    std::optional<Period> horizon_start;  // default: first period after the history
    LstmConfig lstm;
};

/// Forecasts sentiment, engagement_total and engagement_mean for every series.
/// Empty periods are skipped when fitting. Series too short for the LSTM fall back to OLS.
std::vector<Forecast> forecast_all(const std::vector<TrendSeries>& series, const ForecastOptions& options,
                                   Warnings* warnings = nullptr);

/// `cluster_id,period,metric,value,kind,model`
void write_trends_csv(const std::filesystem::path& path, const std::vector<TrendSeries>& series,
                      const std::vector<Forecast>& forecasts);

std::string format_number(double v);

}  // namespace trendscope::trends
