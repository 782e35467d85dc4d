#include "am2/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>

#include <nlohmann/json.hpp>

namespace am2::io {

using nlohmann::json;

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

json json_double(double v) {
    if (std::isfinite(v)) return v;
    return format_double(v);  // nlohmann rejects non-finite numbers
}

json params_json(const ModelParams& p) {
    json laws;
    auto law_json = [](const GrowthLaw& law) {
        json j;
        j["kind"] = law.name();
        for (const auto& [name, value] : law.parameters()) j[name] = value;
        return j;
    };
    json out;
    out["mu1"] = law_json(p.mu1);
    out["mu2"] = law_json(p.mu2);
    out["k1"] = p.k1;
    out["k2"] = p.k2;
    out["k3"] = p.k3;
    out["alpha"] = p.alpha;
    out["D"] = p.D;
    out["r"] = p.r;
    out["S1in"] = p.S1in;
    out["S2in"] = p.S2in;
    return out;
}

std::string join(const std::vector<std::string>& items, char sep) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += sep;
        out += items[i];
    }
    return out;
}

// Small deterministic palette keyed by a string hash.
std::string color_for(const std::string& key) {
    std::uint64_t h = 1469598103934665603ULL;  // FNV-1a
    for (char c : key) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ULL;
    }
    if (key.empty()) return "#d9d9d9";
    const double hue = static_cast<double>(h % 360);
    const double sat = 0.55, light = 0.62;
    // HSL -> RGB
    const double c = (1 - std::abs(2 * light - 1)) * sat;
    const double hp = hue / 60.0;
    const double x = c * (1 - std::abs(std::fmod(hp, 2.0) - 1));
    double r = 0, g = 0, b = 0;
    if (hp < 1) { r = c; g = x; }
    else if (hp < 2) { r = x; g = c; }
    else if (hp < 3) { g = c; b = x; }
    else if (hp < 4) { g = x; b = c; }
    else if (hp < 5) { r = x; b = c; }
    else { r = c; b = x; }
    const double m = light - c / 2;
    char buf[8];
    std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", static_cast<int>((r + m) * 255),
                  static_cast<int>((g + m) * 255), static_cast<int>((b + m) * 255));
    return buf;
}

}  // namespace

std::string equilibria_csv(const ModelParams& p, const std::vector<ClassifiedEquilibrium>& eqs) {
    std::string out =
        "label,i,j,k,l,branch,exists,marginal,violated,"
        "s11,x11,s21,x21,s12,x12,s22,x22,residual,"
        "verdict,table_verdict,agreement,hopf,"
        "tr_j1_top,det_j1_top,tr_j1_bot,det_j1_bot,tr_j3_1,det_j3_1,tr_j3_3,det_j3_3,"
        "x12_star,x22_star,x2m,d,phi1,phi2,F,root_count,tangency\n";
    for (const auto& ce : eqs) {
        const auto& e = ce.eq;
        out += e.label.str();
        out += ',' + std::to_string(e.label.i) + ',' + std::to_string(e.label.j) + ',' +
               std::to_string(e.label.k) + ',' + std::to_string(e.label.l) + ',' +
               std::to_string(e.label.branch);
        out += e.exists ? ",true" : ",false";
        out += e.marginal ? ",true" : ",false";
        out += ',';
        std::string v = e.violated;
        for (char& c : v) {
            if (c == ',') c = ';';
        }
        out += v;
        for (std::size_t i = 0; i < kStateDim; ++i) out += ',' + format_double(e.state[i]);
        out += ',' + (e.exists ? format_double(residual(p, e)) : std::string("nan"));
        if (ce.verdict) {
            const auto& sv = *ce.verdict;
            out += ',';
            out += to_string(sv.numeric);
            out += ',';
            out += to_string(sv.table);
            out += sv.agreement ? ",true" : ",false";
            out += sv.hopf ? ",true" : ",false";
            for (const auto& b : sv.blocks) {
                out += ',' + format_double(b.tr) + ',' + format_double(b.det);
            }
        } else {
            out += ",,,,";
            for (int i = 0; i < 8; ++i) out += ",nan";
        }
        out += ',' + format_double(e.x12_star) + ',' + format_double(e.x22_star);
        out += ',' + format_double(e.x2m) + ',' + format_double(e.d);
        out += ',' + format_double(e.phi1) + ',' + format_double(e.phi2) + ',' + format_double(e.F);
        out += ',' + std::to_string(e.root_count);
        out += e.tangency ? ",true" : ",false";
        out += '\n';
    }
    return out;
}

std::string equilibria_json(const ModelParams& p, const std::vector<ClassifiedEquilibrium>& eqs) {
    json root;
    root["params"] = params_json(p);
    json list = json::array();
    for (const auto& ce : eqs) {
        const auto& e = ce.eq;
        json je;
        je["label"] = e.label.str();
        je["indices"] = {e.label.i, e.label.j, e.label.k, e.label.l};
        je["branch"] = e.label.branch;
        je["exists"] = e.exists;
        je["marginal"] = e.marginal;
        if (!e.violated.empty()) je["violated"] = e.violated;
        if (e.exists) {
            json st = json::array();
            for (std::size_t i = 0; i < kStateDim; ++i) st.push_back(json_double(e.state[i]));
            je["state"] = st;
            je["residual"] = json_double(residual(p, e));
        }
        json diag;
        diag["x12_star"] = json_double(e.x12_star);
        diag["x22_star"] = json_double(e.x22_star);
        diag["x2m"] = json_double(e.x2m);
        diag["d"] = json_double(e.d);
        diag["phi1"] = json_double(e.phi1);
        diag["phi2"] = json_double(e.phi2);
        diag["F"] = json_double(e.F);
        diag["root_count"] = e.root_count;
        diag["tangency"] = e.tangency;
        je["diagnostics"] = diag;
        if (ce.verdict) {
            const auto& sv = *ce.verdict;
            json jv;
            jv["verdict"] = to_string(sv.numeric);
            jv["table_verdict"] = to_string(sv.table);
            jv["agreement"] = sv.agreement;
            jv["hopf_candidate"] = sv.hopf;
            jv["numeric_margin"] = json_double(sv.numeric_margin);
            jv["table_margin"] = json_double(sv.table_margin);
            json blocks = json::array();
            const char* names[4] = {"J1_top", "J1_bottom", "J3_1", "J3_3"};
            for (int b = 0; b < 4; ++b) {
                json jb;
                jb["block"] = names[b];
                jb["trace"] = json_double(sv.blocks[static_cast<std::size_t>(b)].tr);
                jb["det"] = json_double(sv.blocks[static_cast<std::size_t>(b)].det);
                jb["eig_re"] = {json_double(sv.blocks[static_cast<std::size_t>(b)].eig1.real()),
                                json_double(sv.blocks[static_cast<std::size_t>(b)].eig2.real())};
                jb["eig_im"] = {json_double(sv.blocks[static_cast<std::size_t>(b)].eig1.imag()),
                                json_double(sv.blocks[static_cast<std::size_t>(b)].eig2.imag())};
                blocks.push_back(jb);
            }
            jv["blocks"] = blocks;
            je["stability"] = jv;
        }
        list.push_back(je);
    }
    root["equilibria"] = list;
    return root.dump(2) + "\n";
}

std::string trajectory_csv(const Trajectory& traj) {
    std::string out = "t,s11,x11,s21,x21,s12,x12,s22,x22\n";
    for (std::size_t s = 0; s < traj.times.size(); ++s) {
        out += format_double(traj.times[s]);
        for (std::size_t i = 0; i < kStateDim; ++i) {
            out += ',' + format_double(traj.states[s][i]);
        }
        out += '\n';
    }
    return out;
}

std::string simulation_report_json(const ModelParams& p, const Trajectory& traj,
                                   const ConvergenceReport& conv,
                                   const std::vector<InvariantViolation>& violations) {
    json root;
    root["params"] = params_json(p);
    json ji;
    ji["accepted_steps"] = traj.accepted_steps;
    ji["rejected_steps"] = traj.rejected_steps;
    ji["rtol"] = traj.rtol;
    ji["atol"] = traj.atol;
    ji["t_end"] = traj.times.empty() ? 0.0 : traj.times.back();
    ji["stiffness_failure"] = traj.stiffness_failure;
    if (traj.stiffness_failure) ji["failure_time"] = traj.failure_time;
    root["integrator"] = ji;

    json jc;
    jc["target"] = conv.target ? json(*conv.target) : json(nullptr);
    jc["final_distance"] = json_double(conv.final_distance);
    jc["tail_monotone"] = conv.tail_monotone;
    root["convergence"] = jc;

    json jv = json::array();
    for (const auto& v : violations) {
        jv.push_back({{"t", json_double(v.t)},
                      {"kind", v.kind},
                      {"value", json_double(v.value)},
                      {"bound", json_double(v.bound)}});
    }
    root["invariant_violations"] = jv;
    return root.dump(2) + "\n";
}

std::string grid_csv(const RegionGrid& grid) {
    std::string out = "i,j,";
    out += to_string(grid.axis1.axis);
    out += ',';
    out += to_string(grid.axis2.axis);
    out += ",existing,les,hopf,boundary,failed\n";
    for (int j = 0; j < grid.axis2.n; ++j) {
        for (int i = 0; i < grid.axis1.n; ++i) {
            const CellSignature& c = grid.at(i, j);
            out += std::to_string(i) + ',' + std::to_string(j);
            out += ',' + format_double(grid.axis1.value(i));
            out += ',' + format_double(grid.axis2.value(j));
            out += ',' + join(c.existing, ';');
            out += ',' + join(c.les, ';');
            out += c.hopf ? ",true" : ",false";
            out += c.boundary ? ",true" : ",false";
            out += c.failed ? ",true" : ",false";
            out += '\n';
        }
    }
    return out;
}

std::string grid_svg(const RegionGrid& grid, const std::vector<BoundaryCurve>& curves) {
    const int n1 = grid.axis1.n;
    const int n2 = grid.axis2.n;
    const double plot_w = 640.0, plot_h = 640.0;
    const double margin = 60.0, legend_w = 360.0;
    const double width = margin * 2 + plot_w + legend_w;
    const double height = margin * 2 + plot_h;
    const double cw = plot_w / n1;
    const double ch = plot_h / n2;

    auto fx = [&](double v) {
        return margin + plot_w * (v - grid.axis1.lo) / (grid.axis1.hi - grid.axis1.lo);
    };
    auto fy = [&](double v) {  // y grows downward in SVG
        return margin + plot_h * (grid.axis2.hi - v) / (grid.axis2.hi - grid.axis2.lo);
    };
    auto num = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.6g", v);
        return std::string(buf);
    };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width) + "\" height=\"" +
           num(height) + "\" viewBox=\"0 0 " + num(width) + " " + num(height) + "\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    std::map<std::string, std::string> legend;  // les key -> color
    for (int j = 0; j < n2; ++j) {
        for (int i = 0; i < n1; ++i) {
            const CellSignature& c = grid.at(i, j);
            const std::string key = join(c.les, ';');
            const std::string color = c.failed ? "#000000" : color_for(key);
            legend.emplace(c.failed ? "(failed)" : (key.empty() ? "(none LES)" : key), color);
            const double x = fx(grid.axis1.value(i)) - cw / 2;
            const double y = fy(grid.axis2.value(j)) - ch / 2;
            svg += "<rect x=\"" + num(x) + "\" y=\"" + num(y) + "\" width=\"" + num(cw) +
                   "\" height=\"" + num(ch) + "\" fill=\"" + color + "\"";
            if (c.boundary) svg += " stroke=\"#888888\" stroke-width=\"0.5\"";
            if (c.hopf) svg += " fill-opacity=\"0.55\"";
            svg += "/>\n";
        }
    }

    for (const auto& curve : curves) {
        svg += "<polyline fill=\"none\" stroke=\"#222222\" stroke-width=\"1.5\" points=\"";
        for (const auto& [a, b] : curve.points) {
            svg += num(fx(a)) + "," + num(fy(b)) + " ";
        }
        svg += "\"><title>" + curve.name + "</title></polyline>\n";
    }

    // frame and axis labels
    svg += "<rect x=\"" + num(margin) + "\" y=\"" + num(margin) + "\" width=\"" + num(plot_w) +
           "\" height=\"" + num(plot_h) + "\" fill=\"none\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + num(margin + plot_w / 2) + "\" y=\"" + num(height - 15) +
           "\" text-anchor=\"middle\" font-size=\"14\">" + to_string(grid.axis1.axis) + " [" +
           num(grid.axis1.lo) + ", " + num(grid.axis1.hi) + "]</text>\n";
    svg += "<text x=\"18\" y=\"" + num(margin + plot_h / 2) +
           "\" text-anchor=\"middle\" font-size=\"14\" transform=\"rotate(-90 18 " +
           num(margin + plot_h / 2) + ")\">" + to_string(grid.axis2.axis) + " [" +
           num(grid.axis2.lo) + ", " + num(grid.axis2.hi) + "]</text>\n";

    double ly = margin;
    const double lx = margin + plot_w + 20;
    svg += "<text x=\"" + num(lx) + "\" y=\"" + num(ly) + "\" font-size=\"13\">LES sets</text>\n";
    ly += 10;
    for (const auto& [key, color] : legend) {
        svg += "<rect x=\"" + num(lx) + "\" y=\"" + num(ly) + "\" width=\"14\" height=\"14\" fill=\"" +
               color + "\" stroke=\"black\" stroke-width=\"0.4\"/>\n";
        svg += "<text x=\"" + num(lx + 20) + "\" y=\"" + num(ly + 11) + "\" font-size=\"11\">" +
               key + "</text>\n";
        ly += 20;
    }
    svg += "</svg>\n";
    return svg;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << content;
    if (!out) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace am2::io
