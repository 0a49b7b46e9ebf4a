// trendscope command-line front end.
#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include "trendscope/common.h"
#include "trendscope/config.h"
#include "trendscope/pipeline.h"
#include "trendscope/synth.h"

using namespace trendscope;

namespace {

void print_summary(const report::RunReport& r) {
    std::printf("ingested %lld, rejected %lld, country-kept %lld, topic-kept %lld, clustered %lld, noise %lld\n",
                static_cast<long long>(r.counts.ingested), static_cast<long long>(r.counts.rejected),
                static_cast<long long>(r.counts.country_kept), static_cast<long long>(r.counts.topic_kept),
                static_cast<long long>(r.counts.clustered), static_cast<long long>(r.counts.noise));
    if (!r.yearly.rows.empty()) {
        std::printf("sustainability share %.1f%% (%lld of %lld)\n", r.yearly.pct, static_cast<long long>(r.yearly.kept),
                    static_cast<long long>(r.yearly.total));
    }
    if (r.sentiment_shares) {
        std::printf("sentiment positive %.1f%%, negative %.1f%%, neutral %.1f%%\n", 100 * r.sentiment_shares->positive,
                    100 * r.sentiment_shares->negative, 100 * r.sentiment_shares->neutral);
    }
    for (const auto& c : r.clusters) std::printf("cluster %d \"%s\" size %zu\n", c.cluster_id, c.name.c_str(), c.size);
    for (const auto& w : r.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sustainability trend mining over pre-crawled social-media posts"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    std::string out_dir;
    std::string input;
    std::vector<std::string> overrides;
    std::uint64_t seed = 0;
    app.add_option("--config", config_path, "key = value config file")->check(CLI::ExistingFile);
    auto* seed_opt = app.add_option("--seed", seed, "seed for every random choice");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--set", overrides, "override a config key (key=value)");

    const std::vector<std::pair<const char*, pipeline::Stage>> stages = {
        {"run", pipeline::Stage::Emit},
        {"ingest", pipeline::Stage::Ingest},
        {"preprocess", pipeline::Stage::Preprocess},
        {"filter", pipeline::Stage::TopicFilter},
        {"embed", pipeline::Stage::Embed},
        {"sentiment", pipeline::Stage::Sentiment},
        {"cluster", pipeline::Stage::Label},
        {"trends", pipeline::Stage::Emit},
    };
    std::vector<std::pair<CLI::App*, pipeline::Stage>> stage_cmds;
    for (const auto& [name, stage] : stages) {
        auto* sub = app.add_subcommand(name, std::string("run the pipeline through ") + pipeline::to_string(stage));
        sub->add_option("input", input, "input corpus (.jsonl or .csv)");
        stage_cmds.emplace_back(sub, stage);
    }
    stage_cmds.front().first->description("run the full pipeline");
    auto* report_cmd = app.add_subcommand("report", "recompute the yearly table from a run's post_stages.csv");
    auto* synth_cmd = app.add_subcommand("synth", "generate the synthetic acceptance corpus");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : exit_code_for(ErrorKind::Usage);
    }

    try {
        Config cfg = config_path.empty() ? Config::defaults() : Config::load(config_path);
        for (const auto& kv : overrides) {
            auto eq = kv.find('=');
            if (eq == std::string::npos) fail(ErrorKind::Usage, "--set expects key=value, got '" + kv + "'");
            cfg.set(trim(kv.substr(0, eq)), trim(kv.substr(eq + 1)));
        }
        if (*seed_opt) cfg.set("seed", std::to_string(seed));
        if (!out_dir.empty()) cfg.set("out", out_dir);
        if (!input.empty()) cfg.set("input", input);

        if (synth_cmd->parsed()) {
            auto spec = synth::SynthSpec::defaults();
            spec.seed = cfg.get_u64("seed");
            auto corpus = synth::generate(spec);
            synth::write(corpus, cfg.get("out"));
            std::printf("wrote %zu posts (%zu on topic) to %s\n", corpus.posts.size(), corpus.gold_sentiment.size(),
                        cfg.get("out").c_str());
            return 0;
        }
        if (report_cmd->parsed()) {
            auto table = pipeline::yearly_table_from_stages(std::filesystem::path(cfg.get("out")) / "post_stages.csv");
            std::cout << report::yearly_table_csv(table);
            return 0;
        }
        for (const auto& [sub, stage] : stage_cmds) {
            if (sub->parsed()) {
                print_summary(pipeline::run_pipeline(cfg, stage));
                return 0;
            }
        }
        return exit_code_for(ErrorKind::Usage);
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return exit_code_for(ErrorKind::Internal);
    }
}
