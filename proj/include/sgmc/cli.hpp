#pragma once

#include <string>
#include <vector>

#include "sgmc/config.hpp"
#include "sgmc/diagnostics.hpp"

namespace sgmc::cli {

/// Standard panel for martingale certification: catalog test functions over
/// the leading modes, three windows over the horizon, F_0-measurable weights.
struct MpPanel {
    std::vector<TestFunction> fs;
    std::vector<std::pair<int, int>> windows;
    std::vector<WeightSpec> weights;
};
MpPanel standard_mp_panel(const SpectralBasis& basis, const SimConfig& sim);

/// Panel of bounded test functions for weak-distance diagnostics.
std::vector<TestFunction> weak_panel(const SpectralBasis& basis);

/// Command entry points; each writes its artifacts plus a MANIFEST under the
/// config's output directory and returns the process exit status (0 iff every
/// selected pass flag is true).
int cmd_simulate(const RunConfig& cfg, bool quiet);
int cmd_heat_demo(const RunConfig& cfg, bool quiet);
int cmd_verify_mp(const RunConfig& cfg, bool quiet);
int cmd_tightness(const RunConfig& cfg, bool quiet);
int cmd_feller(const RunConfig& cfg, bool quiet);
int cmd_galerkin_scan(const RunConfig& cfg, bool quiet);
int cmd_factorization(const RunConfig& cfg, bool quiet);

/// Full argv entry: subcommand, --config/--seed/--out/--paths/--quiet flags,
/// SGMC_OUT fallback for the output directory.
int run_main(int argc, const char* const* argv);

}  // namespace sgmc::cli
