#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "noisyodds/table.hpp"

namespace noisyodds::cli {

/// Everything needed to re-run a command: its name, every flag value and the seed.
struct RunManifest {
    std::string command;
    nlohmann::ordered_json parameters = nlohmann::ordered_json::object();
    std::uint64_t seed = 0;
    std::string artifact_version;
    std::vector<std::string> output_paths;

    nlohmann::ordered_json to_json() const
    {
        return {{"command", command},
                {"parameters", parameters},
                {"seed", seed},
                {"artifact_version", artifact_version},
                {"output_paths", output_paths}};
    }
};

/// Records every option of a subcommand, given or defaulted, as strings.
inline nlohmann::ordered_json collect_parameters(const CLI::App& sub)
{
    auto params = nlohmann::ordered_json::object();
    for (const CLI::Option* opt : sub.get_options()) {
        const std::string name = opt->get_single_name();
        if (name == "help") {
            continue;
        }
        if (opt->count() > 0) {
            const auto& results = opt->results();
            if (opt->get_expected_max() > 1 || results.size() > 1) {
                params[name] = results;
            } else {
                params[name] = results.empty() ? std::string{} : results.front();
            }
        } else {
            params[name] = opt->get_default_str();
        }
    }
    return params;
}

inline std::string sidecar_path(const std::string& csv_path)
{
    return csv_path + ".json";
}

/// Writes `table` to `path` with its manifest beside it, or to stdout when
/// `path` is empty (no manifest then).
inline void emit(const Table& table, const std::string& path, RunManifest manifest)
{
    if (path.empty()) {
        table.write_csv(std::cout);
        return;
    }
    if (const auto parent = std::filesystem::path(path).parent_path(); !parent.empty()) {
        std::filesystem::create_directories(parent);
    }
    {
        std::ofstream out(path);
        if (!out) {
            throw std::runtime_error("cannot open " + path + " for writing");
        }
        table.write_csv(out);
    }
    manifest.output_paths.push_back(path);
    std::ofstream side(sidecar_path(path));
    side << manifest.to_json().dump(2) << '\n';
}

inline void write_manifest(const RunManifest& manifest, const std::string& path)
{
    std::ofstream side(path);
    side << manifest.to_json().dump(2) << '\n';
}

}  // namespace noisyodds::cli
