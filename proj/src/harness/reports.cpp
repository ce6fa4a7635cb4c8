#include <dpg/harness/reports.hpp>

#include <dpg/harness/io.hpp>
#include <dpg/harness/svg.hpp>

#include <cmath>
#include <filesystem>
#include <map>

namespace dpg {

namespace fs = std::filesystem;

namespace {

Json finite_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

}  // namespace

std::string gradient_quality_csv(const GradientQualityReport& report) {
  CsvWriter csv({"iteration", "budget", "mean_pairwise_cosine", "ci_low", "ci_high",
                 "cosine_to_reference", "ref_ci_low", "ref_ci_high"});
  for (const auto& row : report.rows) {
    csv.cell(report.checkpoint_iteration).cell(static_cast<long long>(row.budget))
        .cell(row.pairwise.mean).cell(row.pairwise.ci_low).cell(row.pairwise.ci_high)
        .cell(row.to_reference.mean).cell(row.to_reference.ci_low).cell(row.to_reference.ci_high);
    csv.end_row();
  }
  return csv.str();
}

OutputItem make_output(const GradientQualityReport& report, const std::string& config_hash) {
  OutputItem item{"gradient_quality", config_hash, report.checkpoint_iteration, gradient_quality_csv(report), {}, {}};
  svg::Series pairwise{"pairwise", {}, {}, {}, {}};
  svg::Series reference{"to reference", {}, {}, {}, {}};
  Json marker = nullptr;
  for (const auto& row : report.rows) {
    const auto b = static_cast<double>(row.budget);
    pairwise.x.push_back(b);
    pairwise.y.push_back(row.pairwise.mean);
    pairwise.low.push_back(row.pairwise.ci_low);
    pairwise.high.push_back(row.pairwise.ci_high);
    reference.x.push_back(b);
    reference.y.push_back(row.to_reference.mean);
    reference.low.push_back(row.to_reference.ci_low);
    reference.high.push_back(row.to_reference.ci_high);
    if (row.marker) marker = row.budget;
  }
  svg::LineChart chart{"Gradient estimate quality (iteration " + std::to_string(report.checkpoint_iteration) + ")",
                       "state-action pairs", "mean cosine similarity", {pairwise, reference}, {}, {}, true};
  if (!marker.is_null()) chart.vertical.push_back({marker.get<double>(), "2K"});
  item.figures.emplace_back("cosine", svg::render(chart));
  item.metadata = {{"reference_budget", report.reference_budget}, {"marker_budget", marker}, {"flags", report.flags}};
  return item;
}

OutputItem make_output(const StepVarianceReport& report, const std::string& config_hash) {
  CsvWriter csv({"iteration", "algorithm", "repeats", "rejected", "mean_step_cosine", "ci_low", "ci_high",
                 "mean_pairwise_kl", "kl_ci_low", "kl_ci_high"});
  csv.cell(report.checkpoint_iteration).cell(to_string(report.algorithm)).cell(report.repeats)
      .cell(report.rejected).cell(report.step_cosine.mean).cell(report.step_cosine.ci_low)
      .cell(report.step_cosine.ci_high).cell(report.pairwise_kl.mean).cell(report.pairwise_kl.ci_low)
      .cell(report.pairwise_kl.ci_high);
  csv.end_row();
  OutputItem item{"step_variance", config_hash, report.checkpoint_iteration, csv.str(), {}, {}};
  svg::BarChart chart{"Update step variance", "value", {"step cosine", "pairwise KL"},
                      {{report.step_cosine.mean, report.pairwise_kl.mean}}, {to_string(report.algorithm)}};
  item.figures.emplace_back("bars", svg::render(chart));
  return item;
}

OutputItem make_output(const std::vector<ValueQualityReport>& reports, const std::string& config_hash) {
  CsvWriter csv({"iteration", "split", "gae_loss_mre", "returns_mre"});
  svg::BarChart chart{"Value prediction MRE", "mean relative error", {}, {{}, {}}, {"GAE targets", "returns"}};
  int iteration = 0;
  for (const auto& r : reports) {
    csv.cell(r.checkpoint_iteration).cell(to_string(r.split)).cell(r.gae_loss_mre).cell(r.returns_mre);
    csv.end_row();
    chart.labels.push_back(to_string(r.split));
    chart.values[0].push_back(r.gae_loss_mre);
    chart.values[1].push_back(r.returns_mre);
    iteration = r.checkpoint_iteration;
  }
  OutputItem item{"value_quality", config_hash, iteration, csv.str(), {}, {}};
  item.figures.emplace_back("mre", svg::render(chart));
  return item;
}

OutputItem make_output(const BaselineVarianceReport& report, const std::string& config_hash) {
  CsvWriter csv({"iteration", "baseline", "budget", "mean_pairwise_cosine", "ci_low", "ci_high"});
  std::map<Baseline, svg::Series> series;
  for (const auto& row : report.rows) {
    csv.cell(report.checkpoint_iteration).cell(to_string(row.baseline)).cell(static_cast<long long>(row.budget))
        .cell(row.pairwise.mean).cell(row.pairwise.ci_low).cell(row.pairwise.ci_high);
    csv.end_row();
    auto& s = series[row.baseline];
    s.name = to_string(row.baseline);
    s.x.push_back(static_cast<double>(row.budget));
    s.y.push_back(row.pairwise.mean);
    s.low.push_back(row.pairwise.ci_low);
    s.high.push_back(row.pairwise.ci_high);
  }
  OutputItem item{"baselines", config_hash, report.checkpoint_iteration, csv.str(), {}, {}};
  svg::LineChart chart{"Gradient quality by baseline", "state-action pairs", "mean pairwise cosine", {}, {}, {}, true};
  for (auto& [kind, s] : series) chart.series.push_back(s);
  item.figures.emplace_back("cosine", svg::render(chart));
  return item;
}

OutputItem make_output(const LandscapeGrid& grid, const std::string& config_hash) {
  CsvWriter csv({"iteration", "step", "random", "surrogate", "true_reward", "true_ci_low", "true_ci_high",
                 "pairs", "flagged"});
  svg::Heatmap surrogate{"Surrogate reward landscape", "step direction", "random direction",
                         grid.step_axis, grid.random_axis, {}, {}};
  svg::Heatmap truth = surrogate;
  truth.title = "True reward landscape";
  for (const auto& cell : grid.cells) {
    csv.cell(grid.checkpoint_iteration).cell(cell.step).cell(cell.random).cell(cell.surrogate)
        .cell(cell.true_reward.mean).cell(cell.true_reward.ci_low).cell(cell.true_reward.ci_high)
        .cell(static_cast<long long>(cell.pairs)).cell(cell.flagged);
    csv.end_row();
    surrogate.values.push_back(cell.surrogate);
    surrogate.flagged.push_back(cell.flagged);
    truth.values.push_back(cell.true_reward.mean);
  }
  OutputItem item{"landscape", config_hash, grid.checkpoint_iteration, csv.str(), {}, {}};
  item.figures.emplace_back("surrogate", svg::render(surrogate));
  item.figures.emplace_back("true", svg::render(truth));
  item.metadata = {{"random_direction_norm", grid.random_direction.norm()}};
  return item;
}

OutputItem make_output(const std::vector<TrustRegionRow>& rows, const std::string& config_hash, int iteration) {
  std::string csv;
  {
    CsvWriter w({"iteration", "split", "mean_reward", "max_ratio", "mean_kl", "max_kl", "ratio_threshold",
                 "kl_delta"});
    for (const auto& r : rows) {
      w.cell(r.iteration).cell(to_string(r.split)).cell(r.mean_reward).cell(r.max_ratio).cell(r.mean_kl)
          .cell(r.max_kl).cell(r.ratio_threshold).cell(r.kl_delta);
      w.end_row();
    }
    csv = w.str();
  }
  OutputItem item{"trust_region", config_hash, iteration, csv, {}, {}};
  svg::Series ratio_train{"train", {}, {}, {}, {}};
  svg::Series ratio_held{"heldout", {}, {}, {}, {}};
  svg::Series mean_kl{"mean KL", {}, {}, {}, {}};
  svg::Series max_kl{"max KL", {}, {}, {}, {}};
  svg::Series reward{"mean reward", {}, {}, {}, {}};
  double threshold = 1.2;
  double delta = 0.01;
  for (const auto& r : rows) {
    const auto x = static_cast<double>(r.iteration);
    auto& ratio = r.split == Split::train ? ratio_train : ratio_held;
    ratio.x.push_back(x);
    ratio.y.push_back(r.max_ratio);
    if (r.split == Split::train) {
      mean_kl.x.push_back(x);
      mean_kl.y.push_back(r.mean_kl);
      max_kl.x.push_back(x);
      max_kl.y.push_back(r.max_kl);
      reward.x.push_back(x);
      reward.y.push_back(r.mean_reward);
    }
    threshold = r.ratio_threshold;
    delta = r.kl_delta;
  }
  item.figures.emplace_back("max_ratio", svg::render(svg::LineChart{
      "Maximum ratio", "iteration", "max ratio", {ratio_train, ratio_held}, {}, {{threshold, "1+eps"}}, false}));
  item.figures.emplace_back("kl", svg::render(svg::LineChart{
      "KL divergence", "iteration", "KL", {mean_kl, max_kl}, {}, {{delta, "delta"}}, false}));
  item.figures.emplace_back("reward", svg::render(svg::LineChart{
      "Mean reward", "iteration", "reward", {reward}, {}, {}, false}));
  return item;
}

OutputItem make_output(const OptimaProbeReport& report, const std::string& config_hash) {
  CsvWriter csv({"ratio", "objective", "derivative"});
  svg::Series obj{"objective", {}, {}, {}, {}};
  svg::Series der{"derivative", {}, {}, {}, {}};
  for (const auto& p : report.points) {
    csv.cell(p.ratio).cell(p.objective).cell(p.derivative);
    csv.end_row();
    obj.x.push_back(p.ratio);
    obj.y.push_back(p.objective);
    der.x.push_back(p.ratio);
    der.y.push_back(p.derivative);
  }
  OutputItem item{"optima_probe", config_hash, 0, csv.str(), {}, {}};
  item.figures.emplace_back("objective", svg::render(svg::LineChart{
      "Clipped objective for one pair", "ratio", "value", {obj, der},
      {{1.0 - report.eps, "1-eps"}, {1.0 + report.eps, "1+eps"}}, {}, false}));
  item.metadata = {{"eps", report.eps},
                   {"advantage", report.advantage},
                   {"plateau_low", report.plateau_low},
                   {"plateau_high", report.plateau_high},
                   {"plateau_constant", report.plateau_constant},
                   {"boundaries", report.boundaries},
                   {"boundaries_in_trust_region", report.boundaries_in_trust_region},
                   {"theorem_holds", report.theorem_holds}};
  return item;
}

OutputItem make_output(const RunRecord& record) {
  OutputItem item{"training", record.config_hash, static_cast<int>(record.reports.size()),
                  step_reports_csv(record.reports), {}, {}};
  svg::Series reward{"seed " + std::to_string(record.seed), {}, {}, {}, {}};
  for (const auto& r : record.reports) {
    reward.x.push_back(r.iteration);
    reward.y.push_back(r.mean_reward);
  }
  item.figures.emplace_back("reward", svg::render(svg::LineChart{
      "Mean reward: " + to_string(record.config.agent.algorithm) + " on " + to_string(record.config.agent.env.name),
      "iteration", "mean episode reward", {reward}, {}, {}, false}));
  item.metadata = {{"seed", record.seed}, {"status", to_string(record.status)},
                   {"final_reward", finite_or_null(record.final_reward(record.config.final_reward_window))}};
  return item;
}

OutputItem make_output(const AblationSummary& summary) {
  OutputItem item{"ablation", summary.config_hash, 0, ablation_selected_csv(summary), {}, {}};
  std::vector<svg::Histogram> panels;
  for (int a = 0; a < OptimizationToggles::kAblationAxes; ++a) {
    svg::Histogram h;
    h.title = OptimizationToggles::kAxisNames[static_cast<std::size_t>(a)];
    h.x_label = "final reward";
    for (const auto& part : summary.partitions) {
      if (part.axis == a) h.groups.emplace_back(part.on ? "on" : "off", part.rewards);
    }
    panels.push_back(h);
  }
  item.figures.emplace_back("histograms", svg::render_panels(panels, "Final reward of selected agents by optimization"));
  item.metadata = {{"selected_count", summary.selected.size()}, {"warnings", summary.warnings}};
  return item;
}

std::vector<std::string> emit_outputs(const std::vector<OutputItem>& items, const std::string& dir,
                                      const OutputFormats& formats) {
  std::vector<std::string> written;
  if (items.empty()) return written;
  ensure_writable_dir(dir);
  for (const auto& item : items) {
    const std::string tail = "_" + item.config_hash + "_iter" + std::to_string(item.iteration);
    Json manifest = item.metadata;
    manifest["kind"] = item.kind;
    manifest["config_hash"] = item.config_hash;
    manifest["iteration"] = item.iteration;
    manifest["files"] = Json::array();
    auto emit = [&](const std::string& name, const std::string& text) {
      const std::string path = (fs::path(dir) / name).string();
      write_file_atomic(path, text);
      written.push_back(path);
      manifest["files"].push_back(name);
    };
    if (formats.csv) emit(item.kind + tail + ".csv", item.csv);
    if (formats.svg) {
      for (const auto& [suffix, svg_text] : item.figures) emit(item.kind + "_" + suffix + tail + ".svg", svg_text);
    }
    if (formats.json) {
      const std::string name = item.kind + tail + ".json";
      manifest["files"].push_back(name);
      const std::string path = (fs::path(dir) / name).string();
      write_file_atomic(path, manifest.dump(2) + "\n");
      written.push_back(path);
    }
  }
  return written;
}

}  // namespace dpg
