#pragma once

#include <string>
#include <vector>

namespace seizureml {

/// Entry point behind the seizure-bench binary. Subcommands: run (full
/// pipeline + report emission), eda (summary statistics + correlation CSV),
/// predict (score feature rows with a saved model), synth (write the
/// deterministic surrogate dataset). Returns 0 on success; prints a
/// stage-tagged message to stderr and returns nonzero on failure.
int cli_main(int argc, const char* const* argv);

/// Convenience overload for tests; args exclude the program name.
int cli_main(const std::vector<std::string>& args);

}  // namespace seizureml
