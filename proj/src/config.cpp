#include "brane/config.hpp"

#include "brane/errors.hpp"

#include <cmath>
#include <fstream>
#include <set>

namespace brane {

namespace {

using nlohmann::json;

void only_keys(const json& obj, const std::string& where, const std::set<std::string>& allowed)
{
    if (!obj.is_object()) {
        throw ConfigError(where + ": expected an object");
    }
    for (const auto& [key, value] : obj.items()) {
        if (!allowed.contains(key)) {
            throw ConfigError((where.empty() ? key : where + "." + key) + ": unknown key");
        }
    }
}

double number(const json& v, const std::string& field)
{
    if (!v.is_number()) {
        throw ConfigError(field + ": expected a number");
    }
    const double x = v.get<double>();
    if (!std::isfinite(x)) {
        throw ConfigError(field + ": must be finite");
    }
    return x;
}

long integer(const json& v, const std::string& field)
{
    if (!v.is_number_integer()) {
        throw ConfigError(field + ": expected an integer");
    }
    return v.get<long>();
}

bool boolean(const json& v, const std::string& field)
{
    if (!v.is_boolean()) {
        throw ConfigError(field + ": expected true or false");
    }
    return v.get<bool>();
}

const json& array(const json& v, const std::string& field)
{
    if (!v.is_array()) {
        throw ConfigError(field + ": expected an array");
    }
    return v;
}

std::vector<FourierMode> modes(const json& v, const std::string& field)
{
    std::vector<FourierMode> out;
    std::size_t k = 0;
    for (const auto& item : array(v, field)) {
        const std::string where = field + "[" + std::to_string(k++) + "]";
        only_keys(item, where, {"component", "wave", "amplitude", "phase"});
        FourierMode mode;
        if (!item.contains("wave") || !item.contains("amplitude")) {
            throw ConfigError(where + ": needs wave and amplitude");
        }
        if (item.contains("component")) {
            mode.component = static_cast<int>(integer(item["component"], where + ".component"));
        }
        for (const auto& w : array(item["wave"], where + ".wave")) {
            mode.wave.push_back(static_cast<int>(integer(w, where + ".wave")));
        }
        mode.amplitude = number(item["amplitude"], where + ".amplitude");
        if (item.contains("phase")) {
            mode.phase = number(item["phase"], where + ".phase");
        }
        out.push_back(std::move(mode));
    }
    return out;
}

McfSettings parse_mcf(const json& v)
{
    only_keys(v, "mcf",
              {"dt", "substeps", "shape", "radius", "circle_points", "theta_end", "outputs",
               "dtheta_factor"});
    McfSettings s;
    if (v.contains("dt")) {
        s.dt.clear();
        for (const auto& x : array(v["dt"], "mcf.dt")) {
            const double d = number(x, "mcf.dt");
            if (!(d > 0.0)) {
                throw ConfigError("mcf.dt: entries must be positive");
            }
            s.dt.push_back(d);
        }
        if (s.dt.empty()) {
            throw ConfigError("mcf.dt: needs at least one entry");
        }
    }
    if (v.contains("substeps")) {
        s.substeps = static_cast<int>(integer(v["substeps"], "mcf.substeps"));
        if (s.substeps < 1) {
            throw ConfigError("mcf.substeps: must be at least 1");
        }
    }
    if (v.contains("shape")) {
        if (!v["shape"].is_string()) {
            throw ConfigError("mcf.shape: expected a string");
        }
        s.shape = v["shape"].get<std::string>();
        if (s.shape != "graph" && s.shape != "circle") {
            throw ConfigError("mcf.shape: must be \"graph\" or \"circle\"");
        }
    }
    if (v.contains("radius")) {
        s.radius = number(v["radius"], "mcf.radius");
        if (!(s.radius > 0.0)) {
            throw ConfigError("mcf.radius: must be positive");
        }
    }
    if (v.contains("circle_points")) {
        s.circle_points = static_cast<int>(integer(v["circle_points"], "mcf.circle_points"));
        if (s.circle_points < 8) {
            throw ConfigError("mcf.circle_points: must be at least 8");
        }
    }
    if (v.contains("theta_end")) {
        s.theta_end = number(v["theta_end"], "mcf.theta_end");
        if (!(s.theta_end > 0.0)) {
            throw ConfigError("mcf.theta_end: must be positive");
        }
    }
    if (v.contains("outputs")) {
        s.outputs = static_cast<int>(integer(v["outputs"], "mcf.outputs"));
        if (s.outputs < 1) {
            throw ConfigError("mcf.outputs: must be at least 1");
        }
    }
    if (v.contains("dtheta_factor")) {
        s.dtheta_factor = number(v["dtheta_factor"], "mcf.dtheta_factor");
        if (!(s.dtheta_factor > 0.0)) {
            throw ConfigError("mcf.dtheta_factor: must be positive");
        }
    }
    return s;
}

} // namespace

RunConfig parse_config(const json& doc)
{
    only_keys(doc, "",
              {"schema", "m", "n", "grid", "scheme", "t_end", "output_cadence", "initial_data",
               "timelike_margin", "oracle_compare", "mcf_compare", "mcf", "snapshots", "seed",
               "output_dir", "threads"});
    if (!doc.contains("schema")) {
        throw ConfigError("schema: missing (expected 1)");
    }
    if (integer(doc["schema"], "schema") != 1) {
        throw ConfigError("schema: unsupported version (expected 1)");
    }
    for (const char* key : {"m", "n", "grid", "t_end", "output_cadence"}) {
        if (!doc.contains(key)) {
            throw ConfigError(std::string(key) + ": missing");
        }
    }
    RunConfig c;
    SolverConfig& s = c.solver;
    s.m = static_cast<int>(integer(doc["m"], "m"));
    s.n = static_cast<int>(integer(doc["n"], "n"));

    const json& grid = doc["grid"];
    only_keys(grid, "grid", {"sizes", "lengths"});
    if (!grid.contains("sizes") || !grid.contains("lengths")) {
        throw ConfigError("grid: needs sizes and lengths");
    }
    for (const auto& x : array(grid["sizes"], "grid.sizes")) {
        s.sizes.push_back(static_cast<int>(integer(x, "grid.sizes")));
    }
    for (const auto& x : array(grid["lengths"], "grid.lengths")) {
        s.lengths.push_back(number(x, "grid.lengths"));
    }

    if (doc.contains("scheme")) {
        const json& sc = doc["scheme"];
        only_keys(sc, "scheme", {"order", "cfl", "filter"});
        if (sc.contains("order")) {
            s.scheme.order = static_cast<int>(integer(sc["order"], "scheme.order"));
        }
        if (sc.contains("cfl")) {
            s.scheme.cfl = number(sc["cfl"], "scheme.cfl");
        }
        if (sc.contains("filter")) {
            s.scheme.filter = number(sc["filter"], "scheme.filter");
        }
    }
    if (doc.contains("threads")) {
        s.scheme.threads = static_cast<int>(integer(doc["threads"], "threads"));
    }
    s.t_end = number(doc["t_end"], "t_end");
    s.output_cadence = number(doc["output_cadence"], "output_cadence");
    if (doc.contains("timelike_margin")) {
        s.timelike_margin = number(doc["timelike_margin"], "timelike_margin");
    }
    if (doc.contains("initial_data")) {
        const json& init = doc["initial_data"];
        only_keys(init, "initial_data", {"height", "velocity"});
        if (init.contains("height")) {
            s.initial.height = modes(init["height"], "initial_data.height");
        }
        if (init.contains("velocity")) {
            s.initial.velocity = modes(init["velocity"], "initial_data.velocity");
        }
    }
    if (doc.contains("oracle_compare")) {
        s.oracle_compare = boolean(doc["oracle_compare"], "oracle_compare");
    }
    if (doc.contains("mcf_compare")) {
        c.mcf_compare = boolean(doc["mcf_compare"], "mcf_compare");
    }
    if (doc.contains("mcf")) {
        c.mcf = parse_mcf(doc["mcf"]);
    }
    if (doc.contains("snapshots")) {
        c.snapshots = boolean(doc["snapshots"], "snapshots");
    }
    if (doc.contains("seed")) {
        const long seed = integer(doc["seed"], "seed");
        if (seed < 0) {
            throw ConfigError("seed: must be non-negative");
        }
        c.seed = static_cast<std::uint64_t>(seed);
    }
    if (doc.contains("output_dir")) {
        if (!doc["output_dir"].is_string()) {
            throw ConfigError("output_dir: expected a string");
        }
        c.output_dir = doc["output_dir"].get<std::string>();
    }
    validate(s);
    return c;
}

RunConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("config: cannot open " + path.string());
    }
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config: malformed JSON in " + path.string() + ": " + e.what());
    }
    return parse_config(doc);
}

nlohmann::json to_json(const RunConfig& c)
{
    const SolverConfig& s = c.solver;
    auto modes_json = [](const std::vector<FourierMode>& list) {
        json out = json::array();
        for (const auto& mode : list) {
            out.push_back({{"component", mode.component},
                           {"wave", mode.wave},
                           {"amplitude", mode.amplitude},
                           {"phase", mode.phase}});
        }
        return out;
    };
    json doc;
    doc["schema"] = 1;
    doc["m"] = s.m;
    doc["n"] = s.n;
    doc["grid"] = {{"sizes", s.sizes}, {"lengths", s.lengths}};
    doc["scheme"] = {{"order", s.scheme.order}, {"cfl", s.scheme.cfl}, {"filter", s.scheme.filter}};
    doc["threads"] = s.scheme.threads;
    doc["t_end"] = s.t_end;
    doc["output_cadence"] = s.output_cadence;
    doc["timelike_margin"] = s.timelike_margin;
    doc["initial_data"] = {{"height", modes_json(s.initial.height)},
                           {"velocity", modes_json(s.initial.velocity)}};
    doc["oracle_compare"] = s.oracle_compare;
    doc["mcf_compare"] = c.mcf_compare;
    doc["mcf"] = {{"dt", c.mcf.dt},
                  {"substeps", c.mcf.substeps},
                  {"shape", c.mcf.shape},
                  {"radius", c.mcf.radius},
                  {"circle_points", c.mcf.circle_points},
                  {"theta_end", c.mcf.theta_end},
                  {"outputs", c.mcf.outputs},
                  {"dtheta_factor", c.mcf.dtheta_factor}};
    doc["snapshots"] = c.snapshots;
    doc["seed"] = c.seed;
    doc["output_dir"] = c.output_dir;
    return doc;
}

} // namespace brane
