#pragma once

#include <filesystem>
#include <string>

#include "trendscope/config.h"
#include "trendscope/report.h"

namespace trendscope::pipeline {

enum class Stage {
    Ingest,
    Impute,
    Preprocess,
    CountryFilter,
    TopicFilter,
    Embed,
    Sentiment,
    Cluster,
    Label,
    Trends,
    Forecasts,
    Emit,
};

std::string to_string(Stage s);

/// Runs every stage up to and including `until`, writing that prefix's artifacts
/// into the configured output directory. Files are written with a `.partial`
/// suffix and renamed once all stages succeed; the report is written last.
/// A failing stage throws an Error whose message starts with `stage <name>:`.
report::RunReport run_pipeline(const Config& config, Stage until = Stage::Emit);

/// Recomputes the yearly table from a run's `post_stages.csv`.
report::YearlyTable yearly_table_from_stages(const std::filesystem::path& post_stages_csv);

}  // namespace trendscope::pipeline
