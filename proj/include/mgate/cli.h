#ifndef MGATE_CLI_H
#define MGATE_CLI_H

#include <ostream>
#include <string>
#include <vector>

#include "mgate/config.h"
#include "mgate/table.h"

namespace mgate {

/// Runs `mgate <subcommand> --config <path|preset:NAME> [--out <path>] [--seed <u64>] [--format csv|json]`.
///
/// Results go to `out` (or the output path), diagnostics to `err`. Errors are
/// reported on `err` as one JSON object and mapped to exit codes 2 (config),
/// 3 (regime), 4 (numerical) and 5 (I/O).
int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

std::vector<std::string> subcommand_names();

/// Subcommand bodies, usable without the argument parser.
Table evaluate_table(const RunConfig &c);
Table truth_table_table(const RunConfig &c);
Table sweep_table(const RunConfig &c, unsigned threads = 0);
Table match_velocities_table(const RunConfig &c);
Table solve_length_table(const RunConfig &c);
Table monte_carlo_table(const RunConfig &c, unsigned threads = 0);

struct OracleCheckRow {
    std::string check;
    int points;
    double max_relative_deviation;
    double tolerance;
    bool pass() const { return max_relative_deviation <= tolerance; }
};

/// Analytic-versus-oracle comparisons around the config's operating point:
/// a 10 x 10 grid of (Delta12, Omega3) with pump dominance above 1e3, the
/// cross-Kerr part of both susceptibilities, and the tuner-off limit.
std::vector<OracleCheckRow> oracle_check(const RunConfig &c);
Table oracle_check_table(const std::vector<OracleCheckRow> &rows);

}  // namespace mgate

#endif
