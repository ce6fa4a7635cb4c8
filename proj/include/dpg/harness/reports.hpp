#pragma once

#include <dpg/diagnostics/gradients.hpp>
#include <dpg/diagnostics/landscape.hpp>
#include <dpg/diagnostics/trust_region.hpp>
#include <dpg/diagnostics/value.hpp>
#include <dpg/harness/ablation.hpp>

#include <string>
#include <utility>
#include <vector>

namespace dpg {

// One rendered report: a CSV table, any number of SVG figures and a JSON
// manifest entry.
struct OutputItem {
  std::string kind;
  std::string config_hash;
  int iteration = 0;
  std::string csv;
  std::vector<std::pair<std::string, std::string>> figures;  // (name suffix, svg)
  Json metadata = Json::object();
};

OutputItem make_output(const GradientQualityReport& report, const std::string& config_hash);
OutputItem make_output(const StepVarianceReport& report, const std::string& config_hash);
OutputItem make_output(const std::vector<ValueQualityReport>& reports, const std::string& config_hash);
OutputItem make_output(const BaselineVarianceReport& report, const std::string& config_hash);
OutputItem make_output(const LandscapeGrid& grid, const std::string& config_hash);
OutputItem make_output(const std::vector<TrustRegionRow>& rows, const std::string& config_hash,
                       int iteration);
OutputItem make_output(const OptimaProbeReport& report, const std::string& config_hash);
OutputItem make_output(const RunRecord& record);
OutputItem make_output(const AblationSummary& summary);

std::string gradient_quality_csv(const GradientQualityReport& report);

struct OutputFormats {
  bool csv = true;
  bool json = true;
  bool svg = true;
};

// Writes <kind>_<hash>_iter<iteration>.{csv,json} and
// <kind>_<figure>_<hash>_iter<iteration>.svg into `dir`. Checks that `dir` is
// writable before rendering anything. Returns the written paths.
std::vector<std::string> emit_outputs(const std::vector<OutputItem>& items, const std::string& dir,
                                      const OutputFormats& formats = {});

}  // namespace dpg
