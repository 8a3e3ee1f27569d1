#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "config.hpp"
#include "json.hpp"

namespace rmedge::cli {

// Files land under a temporary name and are renamed into place; the manifest is written last.
class RunOutput {
public:
    RunOutput(std::filesystem::path dir, std::string run_id);
    void write(const std::string& name, const std::string& content);
    void finish(const nlohmann::json& manifest_fields);
    const std::string& id() const { return id_; }
    const std::filesystem::path& dir() const { return dir_; }

private:
    std::filesystem::path dir_;
    std::string id_;
    nlohmann::json files_ = nlohmann::json::array();
};

struct CommandResult {
    nlohmann::json summary;
    nlohmann::json streams = nlohmann::json::array();  // {tag, first_index, count}
    bool numerical_failure = false;
    std::string failure;
};

CommandResult run_command(const ExperimentConfig& c, RunOutput& out);

}  // namespace rmedge::cli
