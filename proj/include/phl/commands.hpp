#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>

#include <json.hpp>

#include "phl/config.hpp"
#include "phl/connection.hpp"
#include "phl/field.hpp"

namespace phl {

enum ExitCode : int {
    exit_ok = 0,
    exit_check_failed = 1,  // verify: some invariant failed; other commands: numerical failure
    exit_not_converged = 2,
    exit_io = 3,
    exit_validation = 4,
};

struct CommandOptions {
    std::filesystem::path config;
    std::optional<std::filesystem::path> out;  // overrides report.out
    bool json = false;
    std::optional<double> tol;                 // overrides solver.tol
    bool corrupt = false;
    bool check_anchor = false;
    std::optional<std::size_t> probe_injectivity;
    // moduli arguments
    int m = 0;
    int genus = 0;
    int degree = 0;
};

// Output directory: --out if given, else report.out resolved against the config directory.
std::filesystem::path output_dir(const RunConfig& config, const CommandOptions& options);

// The field selected by geometry.field. For "solved" the metric is read back from u.csv in the
// output directory; constant data with a uniform solution yields a ConstantField.
std::shared_ptr<const HiggsField> make_field(const RunConfig& config, const std::filesystem::path& out_dir);

int cmd_solve(const CommandOptions& options, std::ostream& log);
int cmd_verify(const CommandOptions& options, std::ostream& log);
int cmd_immerse(const CommandOptions& options, std::ostream& log);
int cmd_seq(const CommandOptions& options, std::ostream& log);
int cmd_gauss(const CommandOptions& options, std::ostream& log);
int cmd_devmap(const CommandOptions& options, std::ostream& log);
int cmd_moduli(const CommandOptions& options, std::ostream& log);

nlohmann::json moduli_json(int m, int genus, int degree);

// Dispatches by name and maps exceptions onto the exit-code contract; messages go to err.
int run_command(const std::string& name, const CommandOptions& options, std::ostream& log, std::ostream& err);

}  // namespace phl
