#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace fitwave {

// Shortest round-trip decimal representation; CSV outputs are byte-stable
// across runs and worker counts.
std::string format_double(double value);

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    void add_row(std::vector<std::string> row) { rows.push_back(std::move(row)); }
    std::string to_csv() const;
};

} // namespace fitwave
