#ifndef CLMF_EXPERIMENT_HPP
#define CLMF_EXPERIMENT_HPP

#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace clmf {

// Schema violation in an experiment config (exit status 2).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::vector<std::string> problems);
    const std::vector<std::string>& problems() const { return problems_; }

private:
    std::vector<std::string> problems_;
};

struct RunOptions {
    std::string out_dir;                 // empty: config "output", env CLMF_OUT_DIR, then "clmf_out"
    std::optional<std::uint64_t> seed;   // overrides the config seed
    std::optional<int> threads;          // overrides env CLMF_THREADS and the config
};

const std::vector<std::string>& pipeline_names();

// Fills every default the pipeline uses; throws ConfigError on schema problems.
nlohmann::json resolve_config(const std::string& command, const nlohmann::json& config, const RunOptions& opts);

// Runs one pipeline and writes its artifacts plus manifest.json.
// Returns 0 when every check passed, 1 when a check failed; throws ConfigError
// for schema problems and other exceptions for runtime failures.
int run_pipeline(const std::string& command, const nlohmann::json& config, const RunOptions& opts, std::ostream& log);

// Wraps run_pipeline and maps failures onto exit codes 2 / 1.
int run(const std::string& command, const std::string& config_path, const RunOptions& opts, std::ostream& log);

std::uint64_t fnv1a64(const std::string& text);

}  // namespace clmf

#endif
