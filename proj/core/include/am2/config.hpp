#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "am2/diagram.hpp"
#include "am2/simulate.hpp"

namespace am2 {

/// Invalid or ill-typed run configuration; the message names the offending
/// key or bound.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SimulateConfig {
    SystemState x0;
    std::optional<double> t_end;  // default: 200/D
    double rtol = 1e-8;
    double atol = 1e-10;
    int samples = 512;
};

struct DiagramConfig {
    AxisSpec axis1, axis2;
};

struct VerifyConfig {
    std::uint64_t seed = 42;
    int draws = 100;
};

struct OutputConfig {
    std::filesystem::path dir = "out";
    bool csv = true;
    bool json = true;
    bool svg = true;
};

/// One fully validated experiment definition. Unknown keys are rejected at
/// load so that configs stay diffable and typo-proof.
struct RunConfig {
    int schema_version = 1;
    ModelParams params;
    std::optional<SimulateConfig> simulate;
    std::optional<DiagramConfig> diagram;
    VerifyConfig verify;
    OutputConfig output;

    explicit RunConfig(ModelParams p) : params(std::move(p)) {}
};

RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::filesystem::path& file);

}  // namespace am2
