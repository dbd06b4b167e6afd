#pragma once

#include <filesystem>
#include <iosfwd>

#include "vvpinn/pinn.hpp"

namespace vvpinn {

/// Training configuration plus the reference mesh resolution.
struct ExperimentConfig {
  TrainConfig train;
  std::size_t ref_cells = kDefaultReferenceCells;
};

/// Flat `key = value` text (TOML subset): `#` comments, blank lines, bare or
/// quoted values. Every key is optional; unknown keys are rejected.
/// Keys: epsilon, learning_rate, epochs, w_res, w_ic, w_bc, n_interior,
/// n_initial, n_boundary, seed, T, ref_cells.
ExperimentConfig parse_config(std::istream& is);
ExperimentConfig load_config(const std::filesystem::path& path);

void write_config(std::ostream& os, const ExperimentConfig& cfg);

}  // namespace vvpinn
