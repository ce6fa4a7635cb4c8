#include <dpg/numerics/mlp.hpp>

#include <cstdio>

namespace dpg {

std::string hex64(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

std::string param_id(const ParamVector& params) {
  return hex64(fnv1a(params.data(), sizeof(double) * static_cast<std::size_t>(params.size())));
}

MlpSpec MlpSpec::make(Index input, const std::vector<Index>& hidden, Index output) {
  MlpSpec spec;
  spec.widths.push_back(input);
  spec.widths.insert(spec.widths.end(), hidden.begin(), hidden.end());
  spec.widths.push_back(output);
  spec.activations.assign(hidden.size(), Activation::tanh);
  spec.activations.push_back(Activation::identity);
  spec.validate();
  return spec;
}

Index MlpSpec::param_count() const {
  Index n = 0;
  for (std::size_t k = 0; k + 1 < widths.size(); ++k) n += widths[k + 1] * (widths[k] + 1);
  return n;
}

std::vector<LayerBlock> MlpSpec::layout() const {
  std::vector<LayerBlock> blocks;
  blocks.reserve(widths.size());
  Index offset = 0;
  for (std::size_t k = 0; k + 1 < widths.size(); ++k) {
    LayerBlock blk;
    blk.rows = widths[k + 1];
    blk.cols = widths[k];
    blk.weight_offset = offset;
    blk.bias_offset = offset + blk.rows * blk.cols;
    offset = blk.bias_offset + blk.rows;
    blocks.push_back(blk);
  }
  return blocks;
}

void MlpSpec::validate() const {
  if (widths.size() < 2) throw InvalidArgument("MlpSpec: need at least two widths");
  for (Index w : widths) {
    if (w <= 0) throw InvalidArgument("MlpSpec: widths must be positive");
  }
  if (activations.size() + 1 != widths.size()) {
    throw InvalidArgument("MlpSpec: one activation per weight layer");
  }
  if (activations.back() != Activation::identity) {
    throw InvalidArgument("MlpSpec: output activation must be identity");
  }
}

}  // namespace dpg
