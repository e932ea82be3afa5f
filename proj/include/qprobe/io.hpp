#pragma once

// JSON schemas shared by the CLI and the fixtures. Complex matrices are
// nested arrays of [re, im] pairs in row-major order; doubles are written
// with round-trip precision so files re-load bit-exactly.

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qprobe/channels.hpp"
#include "qprobe/linalg.hpp"
#include "qprobe/probe.hpp"
#include "qprobe/reconstruct.hpp"
#include "qprobe/tomography.hpp"

namespace qprobe::io {

using nlohmann::json;

json matrix_to_json(const CMatrix& m);
CMatrix matrix_from_json(const json& j);

// { "dim": int, "rho": matrix }
json state_to_json(const DensityMatrix& rho);
DensityMatrix state_from_json(const json& j);

// { "label": str, "dim": int, "kraus": [matrix, ...] }
json channel_to_json(const KrausChannel& ch);
KrausChannel channel_from_json(const json& j);

// { "dim": int, "p_matrix": matrix }
json probe_to_json(const ProbeState& ps);
ProbeState probe_from_json(const json& j);

// { "probe": probe, "side": "first"|"second", "source": {...}, "rho_out": matrix }
json probe_output_to_json(const ProbeOutput& po);
ProbeOutput probe_output_from_json(const json& j);

json estimate_to_json(const TomographyEstimate& est);

struct RunReport {
    std::string command;
    json inputs = json::object();
    json metrics = json::object();  // finite reals only; *_ms keys are timings
    std::vector<std::string> artifacts;
    std::uint64_t seed = 0;

    void validate() const;  // every metric finite
};

json report_to_json(const RunReport& report);
RunReport report_from_json(const json& j);

json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const json& j);

}  // namespace qprobe::io
