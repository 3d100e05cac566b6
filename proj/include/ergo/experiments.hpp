#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "ergo/config.hpp"

namespace ergo {

struct RunOutcome {
    bool ok = false;            // every requested verdict passed, no blow-ups
    std::string error;          // non-empty on (partial) failure
    nlohmann::json summary;     // contents of the experiment's summary document
    std::vector<std::string> outputs;  // file names written under output_dir
};

/// Executes one experiment, writing its CSV curves, summary document and the
/// run manifest under cfg.output_dir. Partial failures still write what
/// completed plus an error section in the manifest.
RunOutcome run_experiment(const RunConfig& cfg);

/// The manifest body (config snapshot, seed, versions, outputs, status).
nlohmann::json make_manifest(const RunConfig& cfg, const RunOutcome& outcome);

} // namespace ergo
