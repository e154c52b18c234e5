// io.hpp — JSON sweep configs, CSV/JSON result serialization, and the run
// manifest. Undefined values are written as the literal NA in CSV and null
// in JSON; doubles round-trip (17 significant digits).

#pragma once

#include "sweep.hpp"
#include "version.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>

namespace hyrad {

using json = nlohmann::json;

// -------------------------------- formatting -----------------------------------

inline std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::string fmt_optional(const std::optional<double>& v) {
    return v ? fmt_double(*v) : std::string("NA");
}

// --------------------------------- config --------------------------------------

inline std::vector<double> parse_j_values(const json& j) {
    if (j.is_number()) return {j.get<double>()};
    if (j.is_array()) {
        auto vals = j.get<std::vector<double>>();
        if (vals.empty()) throw std::invalid_argument("config: empty j list");
        return vals;
    }
    if (j.is_object()) {
        Range r{j.at("min").get<double>(), j.at("max").get<double>(), j.at("points").get<int>()};
        return r.grid();
    }
    throw std::invalid_argument("config: j must be a number, list, or {min,max,points}");
}

inline SweepConfig parse_sweep_config(const json& root) {
    SweepConfig cfg;
    const auto& d = root.at("delta");
    cfg.delta_range = {d.at("min").get<double>(), d.at("max").get<double>(),
                       d.at("points").get<int>()};
    cfg.j_values = parse_j_values(root.at("j"));
    cfg.omega = root.value("omega", 1.0);
    cfg.gamma_c = root.value("gamma_c", 10.0);
    cfg.gamma_m = root.value("gamma_m", 10.0);
    if (root.contains("cutoffs")) {
        const auto& c = root.at("cutoffs");
        if (c.is_string()) {
            if (c.get<std::string>() != "auto")
                throw std::invalid_argument("config: cutoffs must be \"auto\" or [Nc, Nm]");
            cfg.cutoffs.auto_converge = true;
        } else if (c.is_array() && c.size() == 2) {
            cfg.cutoffs.auto_converge = false;
            cfg.cutoffs.cavity = c.at(0).get<int>();
            cfg.cutoffs.mech = c.at(1).get<int>();
        } else {
            throw std::invalid_argument("config: cutoffs must be \"auto\" or [Nc, Nm]");
        }
    }
    cfg.cutoffs.tol = root.value("cutoff_tol", 1e-6);
    cfg.cutoffs.ceiling = root.value("cutoff_ceiling", 12);
    cfg.convention =
        convention_from_string(root.value("dissipator_convention", std::string("paper")));
    cfg.workers = root.value("workers", default_workers());
    cfg.verify_uniqueness = root.value("verify_uniqueness", false);
    cfg.validate();
    return cfg;
}

inline SweepConfig load_sweep_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open " + path);
    json root;
    in >> root;
    return parse_sweep_config(root);
}

inline json config_to_json(const SweepConfig& cfg) {
    json root;
    root["delta"] = {{"min", cfg.delta_range.min},
                     {"max", cfg.delta_range.max},
                     {"points", cfg.delta_range.points}};
    root["j"] = cfg.j_values;
    root["omega"] = cfg.omega;
    root["gamma_c"] = cfg.gamma_c;
    root["gamma_m"] = cfg.gamma_m;
    if (cfg.cutoffs.auto_converge)
        root["cutoffs"] = "auto";
    else
        root["cutoffs"] = {cfg.cutoffs.cavity, cfg.cutoffs.mech};
    root["cutoff_tol"] = cfg.cutoffs.tol;
    root["cutoff_ceiling"] = cfg.cutoffs.ceiling;
    root["dissipator_convention"] = to_string(cfg.convention);
    root["workers"] = cfg.workers;
    root["verify_uniqueness"] = cfg.verify_uniqueness;
    return root;
}

// --------------------------------- records -------------------------------------

inline json observables_to_json(const ObservableSet& o) {
    auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
    return json{{"mean_photon", o.mean_photon},
                {"mean_phonon", o.mean_phonon},
                {"g2_photon", opt(o.g2_photon)},
                {"g2_phonon", opt(o.g2_phonon)},
                {"g2_cross", opt(o.g2_cross)},
                {"log_negativity", o.log_negativity},
                {"solver_residual", o.solver_residual},
                {"cavity_cutoff", o.cavity_cutoff},
                {"mech_cutoff", o.mech_cutoff}};
}

inline json record_to_json(const SweepRecord& r) {
    json out{{"delta", r.delta},
             {"j", r.j},
             {"cavity_cutoff", r.cavity_cutoff},
             {"mech_cutoff", r.mech_cutoff},
             {"one_atom", r.one_atom ? observables_to_json(*r.one_atom) : json(nullptr)},
             {"two_atom", r.two_atom ? observables_to_json(*r.two_atom) : json(nullptr)},
             {"radiance", r.radiance ? json(*r.radiance) : json(nullptr)},
             {"classification", r.classification}};
    if (!r.error.empty()) out["error"] = r.error;
    return out;
}

inline std::string record_flags(const SweepRecord& r) {
    std::vector<std::string> flags;
    auto undef = [](const std::optional<ObservableSet>& o) {
        return o && (!o->g2_photon || !o->g2_phonon || !o->g2_cross);
    };
    if (undef(r.one_atom)) flags.push_back("g2_1_undefined");
    if (undef(r.two_atom)) flags.push_back("g2_2_undefined");
    if (!r.radiance && r.error.empty()) flags.push_back("radiance_undefined");
    if (!r.error.empty()) {
        std::string msg = r.error;
        for (char& c : msg)
            if (c == ',' || c == '\n') c = ';';
        flags.push_back("error:" + msg);
    }
    if (flags.empty()) return "ok";
    std::string out = flags.front();
    for (std::size_t i = 1; i < flags.size(); ++i) out += ";" + flags[i];
    return out;
}

inline const char* k_csv_header =
    "delta,j,n1,m1,g2n_1,g2m_1,g2nm_1,en_1,n2,m2,g2n_2,g2m_2,g2nm_2,en_2,radiance,flags";

inline std::string record_to_csv_row(const SweepRecord& r) {
    auto obs_cols = [](const std::optional<ObservableSet>& o) {
        if (!o) return std::string("NA,NA,NA,NA,NA,NA");
        return fmt_double(o->mean_photon) + "," + fmt_double(o->mean_phonon) + "," +
               fmt_optional(o->g2_photon) + "," + fmt_optional(o->g2_phonon) + "," +
               fmt_optional(o->g2_cross) + "," + fmt_double(o->log_negativity);
    };
    return fmt_double(r.delta) + "," + fmt_double(r.j) + "," + obs_cols(r.one_atom) + "," +
           obs_cols(r.two_atom) + "," + fmt_optional(r.radiance) + "," + record_flags(r);
}

inline void write_csv(const std::string& path, const std::vector<SweepRecord>& records) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file " + path);
    out << k_csv_header << "\n";
    for (const auto& r : records) out << record_to_csv_row(r) << "\n";
}

inline void write_json_records(const std::string& path, const std::vector<SweepRecord>& records) {
    json arr = json::array();
    for (const auto& r : records) arr.push_back(record_to_json(r));
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file " + path);
    out << arr.dump(2) << "\n";
}

// Matrix-format file for 2-D maps: first row is the delta grid, first column
// the J values, cells the selected field.
inline void write_matrix_csv(const std::string& path, const SweepGrid& grid,
                             const std::string& field) {
    auto cell = [&](const SweepRecord& r) -> std::string {
        if (field == "radiance") return fmt_optional(r.radiance);
        if (field == "n1") return r.one_atom ? fmt_double(r.one_atom->mean_photon) : "NA";
        if (field == "n2") return r.two_atom ? fmt_double(r.two_atom->mean_photon) : "NA";
        if (field == "en1") return r.one_atom ? fmt_double(r.one_atom->log_negativity) : "NA";
        if (field == "en2") return r.two_atom ? fmt_double(r.two_atom->log_negativity) : "NA";
        throw std::invalid_argument("write_matrix_csv: unknown field " + field);
    };
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file " + path);
    out << "j\\delta";
    for (double d : grid.deltas) out << "," << fmt_double(d);
    out << "\n";
    for (std::size_t ji = 0; ji < grid.j_values.size(); ++ji) {
        out << fmt_double(grid.j_values[ji]);
        for (std::size_t di = 0; di < grid.deltas.size(); ++di)
            out << "," << cell(grid.at(ji, di));
        out << "\n";
    }
}

// --------------------------------- manifest ------------------------------------

struct RunManifest {
    json config_echo;
    std::string convention;
    std::vector<std::array<double, 3>> cutoffs_per_j;  // {j, cavity, mech}
    double residual_max = 0.0;
    double residual_mean = 0.0;
    std::size_t points = 0;
    std::size_t failed_points = 0;
    double wall_time_seconds = 0.0;
};

inline RunManifest make_manifest(const SweepConfig& cfg, const std::vector<SweepRecord>& records,
                                 double wall_time_seconds) {
    RunManifest m;
    m.config_echo = config_to_json(cfg);
    m.convention = to_string(cfg.convention);
    m.wall_time_seconds = wall_time_seconds;
    m.points = records.size();
    double sum = 0.0;
    std::size_t count = 0;
    std::vector<double> seen_j;
    for (const auto& r : records) {
        if (!r.error.empty()) ++m.failed_points;
        for (const auto& obs : {r.one_atom, r.two_atom}) {
            if (!obs) continue;
            m.residual_max = std::max(m.residual_max, obs->solver_residual);
            sum += obs->solver_residual;
            ++count;
        }
        if (std::find(seen_j.begin(), seen_j.end(), r.j) == seen_j.end()) {
            seen_j.push_back(r.j);
            m.cutoffs_per_j.push_back({r.j, static_cast<double>(r.cavity_cutoff),
                                       static_cast<double>(r.mech_cutoff)});
        }
    }
    if (count > 0) m.residual_mean = sum / static_cast<double>(count);
    return m;
}

inline json manifest_to_json(const RunManifest& m) {
    json cut = json::array();
    for (const auto& c : m.cutoffs_per_j)
        cut.push_back({{"j", c[0]}, {"cavity", static_cast<int>(c[1])}, {"mech", static_cast<int>(c[2])}});
    return json{{"version", k_version},
                {"dissipator_convention", m.convention},
                {"config", m.config_echo},
                {"cutoffs_per_j", cut},
                {"solver_residual", {{"max", m.residual_max}, {"mean", m.residual_mean}}},
                {"points", m.points},
                {"failed_points", m.failed_points},
                {"wall_time_seconds", m.wall_time_seconds}};
}

inline void write_manifest(const std::string& path, const RunManifest& m) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file " + path);
    out << manifest_to_json(m).dump(2) << "\n";
}

}  // namespace hyrad
