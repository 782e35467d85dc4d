#include "am2/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace am2 {

using nlohmann::json;

namespace {

void require_keys(const json& obj, const std::string& where,
                  const std::set<std::string>& allowed) {
    if (!obj.is_object()) throw ConfigError(where + " must be an object");
    for (const auto& [key, value] : obj.items()) {
        if (!allowed.contains(key)) {
            throw ConfigError("unknown key \"" + key + "\" in " + where);
        }
    }
}

double get_number(const json& obj, const std::string& where, const std::string& key) {
    if (!obj.contains(key)) throw ConfigError(where + " is missing \"" + key + "\"");
    const json& v = obj.at(key);
    if (!v.is_number()) throw ConfigError(where + "." + key + " must be a number");
    return v.get<double>();
}

double get_number_or(const json& obj, const std::string& where, const std::string& key,
                     double fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number()) throw ConfigError(where + "." + key + " must be a number");
    return v.get<double>();
}

GrowthLaw parse_law(const json& obj, const std::string& where, GrowthKind expected) {
    if (!obj.is_object() || !obj.contains("kind")) {
        throw ConfigError(where + " must be an object with a \"kind\"");
    }
    const std::string kind = obj.at("kind").get<std::string>();
    if (kind == "monod") {
        require_keys(obj, where, {"kind", "m1", "K1"});
        if (expected != GrowthKind::MonotoneBounded) {
            throw ConfigError(where + ": a monod law is monotone; a unimodal law is required here");
        }
        return GrowthLaw::monod(get_number(obj, where, "m1"), get_number(obj, where, "K1"));
    }
    if (kind == "haldane") {
        require_keys(obj, where, {"kind", "m2", "K2", "KI"});
        if (expected != GrowthKind::Unimodal) {
            throw ConfigError(where + ": a haldane law is unimodal; a monotone law is required here");
        }
        return GrowthLaw::haldane(get_number(obj, where, "m2"), get_number(obj, where, "K2"),
                                  get_number(obj, where, "KI"));
    }
    throw ConfigError(where + ".kind must be \"monod\" or \"haldane\"");
}

AxisSpec parse_axis(const json& obj, const std::string& where) {
    require_keys(obj, where, {"name", "min", "max", "n"});
    AxisSpec axis;
    if (!obj.contains("name")) throw ConfigError(where + " is missing \"name\"");
    axis.axis = axis_from_string(obj.at("name").get<std::string>());
    axis.lo = get_number(obj, where, "min");
    axis.hi = get_number(obj, where, "max");
    const double n = get_number(obj, where, "n");
    axis.n = static_cast<int>(n);
    if (axis.n < 2 || axis.n != n) throw ConfigError(where + ".n must be an integer >= 2");
    if (!(axis.lo < axis.hi)) throw ConfigError(where + ": min must be below max");
    switch (axis.axis) {
        case OperatingAxis::D:
            if (!(axis.lo > 0.0)) throw ConfigError(where + ": D range must be positive");
            break;
        case OperatingAxis::R:
            if (!(axis.lo > 0.0 && axis.hi < 1.0)) {
                throw ConfigError(where + ": r range must stay inside (0,1)");
            }
            break;
        case OperatingAxis::S1in:
        case OperatingAxis::S2in:
            if (!(axis.lo >= 0.0)) throw ConfigError(where + ": feed range must be nonnegative");
            break;
    }
    return axis;
}

}  // namespace

RunConfig parse_config(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& ex) {
        throw ConfigError(std::string("config is not valid JSON: ") + ex.what());
    }
    require_keys(root, "config",
                 {"schema_version", "model", "simulate", "diagram", "verify", "output"});
    if (!root.contains("schema_version") || !root.at("schema_version").is_number_integer()) {
        throw ConfigError("config needs an integer \"schema_version\"");
    }
    const int version = root.at("schema_version").get<int>();
    if (version != 1) {
        throw ConfigError("unsupported schema_version " + std::to_string(version));
    }
    if (!root.contains("model")) throw ConfigError("config is missing \"model\"");

    const json& m = root.at("model");
    require_keys(m, "model",
                 {"mu1", "mu2", "k1", "k2", "k3", "alpha", "D", "r", "S1in", "S2in"});
    if (!m.contains("mu1") || !m.contains("mu2")) {
        throw ConfigError("model needs growth laws \"mu1\" and \"mu2\"");
    }
    GrowthLaw mu1 = parse_law(m.at("mu1"), "model.mu1", GrowthKind::MonotoneBounded);
    GrowthLaw mu2 = parse_law(m.at("mu2"), "model.mu2", GrowthKind::Unimodal);

    ModelParams params = [&] {
        try {
            return ModelParams(get_number(m, "model", "k1"), get_number(m, "model", "k2"),
                               get_number(m, "model", "k3"), get_number(m, "model", "alpha"),
                               get_number(m, "model", "D"), get_number(m, "model", "r"),
                               get_number(m, "model", "S1in"), get_number(m, "model", "S2in"),
                               std::move(mu1), std::move(mu2));
        } catch (const std::invalid_argument& ex) {
            throw ConfigError(std::string("model: ") + ex.what());
        }
    }();

    RunConfig cfg(std::move(params));
    cfg.schema_version = version;

    if (root.contains("simulate")) {
        const json& s = root.at("simulate");
        require_keys(s, "simulate", {"x0", "t_end", "rtol", "atol", "samples"});
        SimulateConfig sim;
        if (!s.contains("x0")) throw ConfigError("simulate is missing \"x0\"");
        const json& x0 = s.at("x0");
        if (!x0.is_array() || x0.size() != kStateDim) {
            throw ConfigError("simulate.x0 must be an array of 8 concentrations");
        }
        for (std::size_t i = 0; i < kStateDim; ++i) {
            if (!x0[i].is_number()) throw ConfigError("simulate.x0 entries must be numbers");
            sim.x0[i] = x0[i].get<double>();
            if (!(sim.x0[i] >= 0.0)) throw ConfigError("simulate.x0 entries must be nonnegative");
        }
        if (s.contains("t_end")) {
            sim.t_end = get_number(s, "simulate", "t_end");
            if (!(*sim.t_end > 0.0)) throw ConfigError("simulate.t_end must be positive");
        }
        sim.rtol = get_number_or(s, "simulate", "rtol", sim.rtol);
        sim.atol = get_number_or(s, "simulate", "atol", sim.atol);
        if (!(sim.rtol > 0.0 && sim.rtol <= 1e-2) || !(sim.atol > 0.0 && sim.atol <= 1e-2)) {
            throw ConfigError("simulate tolerances must lie in (0, 1e-2]");
        }
        const double samples = get_number_or(s, "simulate", "samples", sim.samples);
        sim.samples = static_cast<int>(samples);
        if (sim.samples < 2 || sim.samples != samples) {
            throw ConfigError("simulate.samples must be an integer >= 2");
        }
        cfg.simulate = std::move(sim);
    }

    if (root.contains("diagram")) {
        const json& d = root.at("diagram");
        require_keys(d, "diagram", {"axis1", "axis2"});
        if (!d.contains("axis1") || !d.contains("axis2")) {
            throw ConfigError("diagram needs \"axis1\" and \"axis2\"");
        }
        DiagramConfig dia;
        dia.axis1 = parse_axis(d.at("axis1"), "diagram.axis1");
        dia.axis2 = parse_axis(d.at("axis2"), "diagram.axis2");
        if (dia.axis1.axis == dia.axis2.axis) {
            throw ConfigError("diagram axes must be distinct");
        }
        cfg.diagram = dia;
    }

    if (root.contains("verify")) {
        const json& v = root.at("verify");
        require_keys(v, "verify", {"seed", "draws"});
        if (v.contains("seed")) {
            if (!v.at("seed").is_number_unsigned() && !v.at("seed").is_number_integer()) {
                throw ConfigError("verify.seed must be an unsigned integer");
            }
            cfg.verify.seed = v.at("seed").get<std::uint64_t>();
        }
        if (v.contains("draws")) {
            const double draws = get_number(v, "verify", "draws");
            cfg.verify.draws = static_cast<int>(draws);
            if (cfg.verify.draws < 0 || cfg.verify.draws != draws) {
                throw ConfigError("verify.draws must be a nonnegative integer");
            }
        }
    }

    if (root.contains("output")) {
        const json& o = root.at("output");
        require_keys(o, "output", {"dir", "formats"});
        if (o.contains("dir")) {
            cfg.output.dir = o.at("dir").get<std::string>();
        }
        if (o.contains("formats")) {
            const json& f = o.at("formats");
            if (!f.is_array()) throw ConfigError("output.formats must be an array");
            cfg.output.csv = cfg.output.json = cfg.output.svg = false;
            for (const auto& item : f) {
                const std::string fmt = item.get<std::string>();
                if (fmt == "csv") cfg.output.csv = true;
                else if (fmt == "json") cfg.output.json = true;
                else if (fmt == "svg") cfg.output.svg = true;
                else throw ConfigError("output.formats: unknown format \"" + fmt + "\"");
            }
        }
    }
    return cfg;
}

RunConfig load_config(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw ConfigError("cannot read config file " + file.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

}  // namespace am2
