#include "qprobe/io.hpp"

#include <cmath>
#include <fstream>

namespace qprobe::io {

namespace {

const json& require(const json& j, const char* key, const char* schema) {
    auto it = j.find(key);
    if (it == j.end())
        throw ParamError(std::string(schema) + ": missing key '" + key + "'");
    return *it;
}

Side side_from_string(const std::string& s, const char* schema) {
    if (s == "first") return Side::First;
    if (s == "second") return Side::Second;
    throw ParamError(std::string(schema) + ": side must be 'first' or 'second', got '" + s + "'");
}

}  // namespace

json matrix_to_json(const CMatrix& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            row.push_back({m(i, j).real(), m(i, j).imag()});
        rows.push_back(std::move(row));
    }
    return rows;
}

CMatrix matrix_from_json(const json& j) {
    if (!j.is_array() || j.empty()) throw ParamError("matrix: expected non-empty array of rows");
    const auto rows = j.size();
    const auto cols = j.at(0).size();
    CMatrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        const json& row = j.at(r);
        if (!row.is_array() || row.size() != cols)
            throw ParamError("matrix: ragged rows");
        for (std::size_t c = 0; c < cols; ++c) {
            const json& e = row.at(c);
            if (!e.is_array() || e.size() != 2 || !e.at(0).is_number() || !e.at(1).is_number())
                throw ParamError("matrix: entries must be [re, im] pairs");
            m(r, c) = Complex(e.at(0).get<double>(), e.at(1).get<double>());
        }
    }
    if (!all_finite(m)) throw ParamError("matrix: non-finite entries");
    return m;
}

json state_to_json(const DensityMatrix& rho) {
    return {{"dim", rho.dim()}, {"rho", matrix_to_json(rho.matrix())}};
}

DensityMatrix state_from_json(const json& j) {
    const int dim = require(j, "dim", "state").get<int>();
    CMatrix m = matrix_from_json(require(j, "rho", "state"));
    if (m.rows() != dim)
        throw ParamError("state: dim field " + std::to_string(dim) + " vs matrix " +
                         std::to_string(m.rows()));
    return DensityMatrix(std::move(m));
}

json channel_to_json(const KrausChannel& ch) {
    json kraus = json::array();
    for (const auto& k : ch.kraus()) kraus.push_back(matrix_to_json(k));
    return {{"label", ch.label()}, {"dim", ch.dim()}, {"kraus", std::move(kraus)}};
}

KrausChannel channel_from_json(const json& j) {
    const int dim = require(j, "dim", "channel").get<int>();
    const json& kraus_json = require(j, "kraus", "channel");
    if (!kraus_json.is_array()) throw ParamError("channel: kraus must be an array");
    std::vector<CMatrix> kraus;
    kraus.reserve(kraus_json.size());
    for (const auto& k : kraus_json) kraus.push_back(matrix_from_json(k));
    return KrausChannel(dim, std::move(kraus), j.value("label", std::string{}));
}

json probe_to_json(const ProbeState& ps) {
    return {{"dim", ps.dim()}, {"p_matrix", matrix_to_json(ps.p_matrix())}};
}

ProbeState probe_from_json(const json& j) {
    const int dim = require(j, "dim", "probe").get<int>();
    CMatrix m = matrix_from_json(require(j, "p_matrix", "probe"));
    if (m.rows() != dim)
        throw ParamError("probe: dim field " + std::to_string(dim) + " vs matrix " +
                         std::to_string(m.rows()));
    return probe_from_matrix(m);
}

json probe_output_to_json(const ProbeOutput& po) {
    json source;
    if (po.source.kind == SourceKind::Exact) {
        source = {{"kind", "exact"}};
    } else {
        source = {{"kind", "tomography"}, {"shots", po.source.shots}, {"seed", po.source.seed}};
    }
    return {{"probe", probe_to_json(po.probe)},
            {"side", po.side == Side::First ? "first" : "second"},
            {"source", std::move(source)},
            {"rho_out", matrix_to_json(po.rho_out.matrix())}};
}

ProbeOutput probe_output_from_json(const json& j) {
    ProbeState probe = probe_from_json(require(j, "probe", "probe_output"));
    const Side side =
        side_from_string(require(j, "side", "probe_output").get<std::string>(), "probe_output");
    const json& src = require(j, "source", "probe_output");
    const std::string kind = require(src, "kind", "probe_output.source").get<std::string>();
    ProbeSource source;
    if (kind == "exact") {
        source = ProbeSource::exact();
    } else if (kind == "tomography") {
        source = ProbeSource::tomography(
            require(src, "shots", "probe_output.source").get<long long>(),
            require(src, "seed", "probe_output.source").get<std::uint64_t>());
    } else {
        throw ParamError("probe_output.source: unknown kind '" + kind + "'");
    }
    DensityMatrix rho_out(matrix_from_json(require(j, "rho_out", "probe_output")));
    return ProbeOutput(std::move(probe), std::move(rho_out), side, source);
}

json estimate_to_json(const TomographyEstimate& est) {
    return {{"estimate", matrix_to_json(est.estimate.matrix())},
            {"dim", est.dim},
            {"shots", est.shots_per_setting},
            {"seed", est.seed},
            {"negative_mass", est.negative_mass},
            {"settings_count", est.settings_count}};
}

void RunReport::validate() const {
    for (const auto& [key, value] : metrics.items()) {
        if (!value.is_number() || !std::isfinite(value.get<double>()))
            throw ParamError("RunReport: metric '" + key + "' is not a finite number");
    }
}

json report_to_json(const RunReport& report) {
    report.validate();
    return {{"command", report.command},
            {"inputs", report.inputs},
            {"metrics", report.metrics},
            {"artifacts", report.artifacts},
            {"seed", report.seed}};
}

RunReport report_from_json(const json& j) {
    RunReport r;
    r.command = require(j, "command", "report").get<std::string>();
    r.inputs = require(j, "inputs", "report");
    r.metrics = require(j, "metrics", "report");
    r.artifacts = require(j, "artifacts", "report").get<std::vector<std::string>>();
    r.seed = require(j, "seed", "report").get<std::uint64_t>();
    r.validate();
    return r;
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParamError("cannot open '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ParamError("cannot parse '" + path + "': " + e.what());
    }
    return j;
}

void write_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw ParamError("cannot write '" + path + "'");
    out << j.dump(2) << "\n";
}

}  // namespace qprobe::io
