#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cychom/io.hpp"

namespace cychom {

enum class Status { pass, fail, unstabilized };

struct Verdict {
    std::string name;
    Status status = Status::pass;
    std::string detail;

    friend bool operator==(const Verdict&, const Verdict&) = default;
};

// Dimensions indexed by degree from 0.
struct Series {
    std::string name;
    std::vector<std::size_t> dims;

    friend bool operator==(const Series&, const Series&) = default;
};

struct PeriodicEntry {
    std::string name;
    int parity = 0;
    std::size_t dim = 0;
    bool stabilized = false;

    friend bool operator==(const PeriodicEntry&, const PeriodicEntry&) = default;
};

struct Report {
    std::string command;
    std::string input;
    int window = 0;
    std::vector<Series> series;
    std::vector<PeriodicEntry> periodic;
    std::vector<Verdict> verdicts;
    double seconds = 0;

    // 0 when every verdict passes, 2 on any failure, 3 when the only
    // shortfalls are unstabilized periodic towers.
    int exit_status() const;
    void verdict(std::string name, bool ok, std::string detail = {});
};

std::string render_table(const Report& r);
std::string render_json(const Report& r);
// Inverse of render_json.
Report parse_report_json(const std::string& text);

struct CommandOptions {
    int window = 6;
    // Name of a loop; restricts to its conjugation class.
    std::optional<std::string> component;
    // Second factor for ez-check; defaults to the input itself.
    std::optional<GroupoidDocument> partner;
    // Upper bound on the bicyclic grid size for ez-check.
    std::size_t ez_budget = 400000;
    // Upper bound on the summed module dimensions fed to the spectral sequence.
    std::size_t spectral_budget = 12000;
};

const std::vector<std::string>& command_names();
// Throws std::invalid_argument for unknown commands or unusable options.
Report run_command(const std::string& command, const GroupoidDocument& doc, const CommandOptions& opts,
                   const std::string& input_label = {});

}  // namespace cychom
