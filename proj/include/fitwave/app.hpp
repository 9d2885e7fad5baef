#pragma once

#include <string>

#include "fitwave/config.hpp"
#include "fitwave/csv.hpp"

#include "json.hpp"

namespace fitwave::app {

struct CommandResult {
    std::string name;
    Table table;
    nlohmann::json summary;
    bool pass = true;

    std::string csv() const { return table.to_csv(); }
    std::string json_text() const { return summary.dump(2) + "\n"; }
};

// Subcommands: simulate | sweep | couple-check | tail-check | width-exp |
// prop-check | oracle-check. Throws std::invalid_argument on unknown names
// or invalid configuration.
CommandResult run_command(const std::string& subcommand, const RunConfig& cfg);

} // namespace fitwave::app
