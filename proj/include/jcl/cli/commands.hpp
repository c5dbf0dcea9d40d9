// commands.hpp — jcl_run subcommands

#pragma once

#include "jcl/cli/config.hpp"
#include "jcl/cli/output.hpp"

#include <cstddef>
#include <functional>

namespace jcl::cli {

enum ExitCode : int { kOk = 0, kConfigError = 2, kSolverError = 3, kPartial = 4 };

// Calls f(i) for i in [0, n) on a pool of worker threads (0: hardware concurrency).
// Callers write into slot i, so results come out in index order.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& f);

// Parameter points of a sweep, expanded over gamma_a_list (outer) and the sweep grid (inner).
std::vector<SystemParams> sweep_points(const RunConfig& c);

struct TableResult {
    Table table;
    std::size_t points{0};
    std::size_t failed{0};
};

TableResult steady_table(const RunConfig& c);
TableResult regimes_table(const RunConfig& c);
TableResult transitions_table(const RunConfig& c);

struct SpectrumOutput {
    Table table;                 // omega, S
    nlohmann::json sidecar;      // weights, lines, validity flags
};
SpectrumOutput spectrum_output(const RunConfig& c);

struct MollowOutput {
    Table spectrum;              // omega, S_incoherent
    Table visibility;            // delta, gamma_phi, V, defined
    nlohmann::json sidecar;
};
MollowOutput mollow_output(const RunConfig& c);

int run_command(const RunConfig& c);

// Entry point of jcl_run.
int run(int argc, char** argv);

}  // namespace jcl::cli
