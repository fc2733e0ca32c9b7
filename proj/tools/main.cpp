#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <se2geo/se2geo.h>

#include "svg.hpp"

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr int kExitInvalid = 2;
constexpr int kExitIo = 3;

int report_error() {
    std::fprintf(stderr, "error: %s\n", se2g_last_error());
    return kExitInvalid;
}

int write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        std::fprintf(stderr, "error: cannot open %s for writing\n", path.c_str());
        return kExitIo;
    }
    f << content;
    f.close();
    if (f.fail()) {
        std::fprintf(stderr, "error: failed writing %s\n", path.c_str());
        return kExitIo;
    }
    return 0;
}

// Prints a C-API JSON string and releases it.
int emit_json(char* s) {
    std::printf("%s\n", s);
    se2g_string_free(s);
    return 0;
}

struct ConfigFlags {
    se2g_search_config cfg{};
    std::string file;
    bool ci = false;
    CLI::Option* o_na = nullptr;
    CLI::Option* o_nh = nullptr;
    CLI::Option* o_hm = nullptr;
    CLI::Option* o_hz = nullptr;
    CLI::Option* o_ts = nullptr;
    CLI::Option* o_dl = nullptr;
    CLI::Option* o_sp = nullptr;
    CLI::Option* o_ci = nullptr;
};

void add_config_flags(CLI::App* cmd, ConfigFlags& f) {
    se2g_search_config_default(&f.cfg);
    f.o_ci = cmd->add_flag("--ci", f.ci, "start from the reduced search preset");
    f.o_na = cmd->add_option("--n-alpha", f.cfg.n_alpha, "covector grid count along the circle");
    f.o_nh = cmd->add_option("--n-h3", f.cfg.n_h3, "covector grid count along h3");
    f.o_hm = cmd->add_option("--h3-max", f.cfg.h3_max, "half-width of the h3 range");
    f.o_hz = cmd->add_option("--horizon", f.cfg.horizon, "search horizon");
    f.o_ts = cmd->add_option("--time-step", f.cfg.time_step, "integration step of the search");
    f.o_dl = cmd->add_option("--delta", f.cfg.delta, "endpoint matching radius");
    f.o_sp = cmd->add_option("--separation", f.cfg.covector_separation,
                             "minimum covector distance for a distinct match");
    cmd->add_option("--config", f.file, "JSON file with search parameters (flags win)");
}

// Precedence: built-in defaults, then --ci preset, then config file, then flags.
int resolve_config(ConfigFlags& f) {
    se2g_search_config base{};
    if (f.ci)
        se2g_search_config_ci(&base);
    else
        se2g_search_config_default(&base);

    if (!f.file.empty()) {
        std::ifstream in(f.file);
        if (!in) {
            std::fprintf(stderr, "error: cannot read %s\n", f.file.c_str());
            return kExitIo;
        }
        ordered_json j;
        try {
            in >> j;
            if (j.contains("n_alpha")) base.n_alpha = j["n_alpha"].get<int>();
            if (j.contains("n_h3")) base.n_h3 = j["n_h3"].get<int>();
            if (j.contains("h3_max")) base.h3_max = j["h3_max"].get<double>();
            if (j.contains("horizon")) base.horizon = j["horizon"].get<double>();
            if (j.contains("time_step")) base.time_step = j["time_step"].get<double>();
            if (j.contains("delta")) base.delta = j["delta"].get<double>();
            if (j.contains("covector_separation"))
                base.covector_separation = j["covector_separation"].get<double>();
        } catch (const std::exception& e) {
            std::fprintf(stderr, "error: %s: %s\n", f.file.c_str(), e.what());
            return kExitInvalid;
        }
    }

    if (f.o_na->count() == 0) f.cfg.n_alpha = base.n_alpha;
    if (f.o_nh->count() == 0) f.cfg.n_h3 = base.n_h3;
    if (f.o_hm->count() == 0) f.cfg.h3_max = base.h3_max;
    if (f.o_hz->count() == 0) f.cfg.horizon = base.horizon;
    if (f.o_ts->count() == 0) f.cfg.time_step = base.time_step;
    if (f.o_dl->count() == 0) f.cfg.delta = base.delta;
    if (f.o_sp->count() == 0) f.cfg.covector_separation = base.covector_separation;
    return 0;
}

void add_plot_flags(CLI::App* cmd, PlotSpec& spec) {
    cmd->add_option("--plot-width", spec.width, "SVG width in pixels");
    cmd->add_option("--plot-height", spec.height, "SVG height in pixels");
    cmd->add_option("--plot-margin", spec.margin, "SVG margin in pixels");
    cmd->add_option("--plot-stroke", spec.stroke, "curve stroke width");
    cmd->add_flag("--no-axes", [&spec](size_t) { spec.axes = false; }, "omit axis lines");
    cmd->add_flag("--no-markers", [&spec](size_t) { spec.cusp_markers = false; },
                  "omit cusp markers");
}

std::vector<double> fetch_events(const se2g_geodesic* g, bool cusps, int* degenerate) {
    size_t count = 0;
    auto fn = cusps ? se2g_geodesic_cusps : se2g_geodesic_inflections;
    fn(g, nullptr, 0, &count, degenerate);
    std::vector<double> times(count);
    if (count) fn(g, times.data(), count, &count, degenerate);
    return times;
}

int run_geodesic(double h1, double h2, double h3, double T, double step,
                 const std::string& out_csv, const std::string& out_svg, bool as_json,
                 const PlotSpec& spec) {
    se2g_geodesic* g = nullptr;
    if (se2g_geodesic_create(h1, h2, h3, T, step, &g) != SE2G_OK) return report_error();

    const size_t n = se2g_geodesic_count(g);
    int degenerate = 0;
    std::vector<double> cusps = fetch_events(g, true, &degenerate);
    std::vector<double> inflections = fetch_events(g, false, nullptr);
    const char* token = nullptr;
    double first[7], last[7];
    se2g_geodesic_sample(g, 0, first);
    se2g_geodesic_sample(g, n - 1, last);
    if (se2g_classify(first[4], first[5], first[6], &token) != SE2G_OK) {
        se2g_geodesic_free(g);
        return report_error();
    }

    if (!out_csv.empty()) {
        char* csv = nullptr;
        if (se2g_geodesic_csv(g, &csv) != SE2G_OK) {
            se2g_geodesic_free(g);
            return report_error();
        }
        std::string content(csv);
        se2g_string_free(csv);
        if (int rc = write_file(out_csv, content)) {
            se2g_geodesic_free(g);
            return rc;
        }
    }

    if (!out_svg.empty()) {
        std::vector<std::array<double, 2>> pts(n);
        double row[7];
        for (size_t i = 0; i < n; ++i) {
            se2g_geodesic_sample(g, i, row);
            pts[i] = {row[1], row[2]};
        }
        std::vector<std::array<double, 2>> marks;
        for (double t : cusps) {
            size_t idx = static_cast<size_t>(std::llround(t / step));
            if (idx >= n) idx = n - 1;
            marks.push_back(pts[idx]);
        }
        if (int rc = write_file(out_svg, render_curve_svg(pts, marks, spec))) {
            se2g_geodesic_free(g);
            return rc;
        }
    }
    se2g_geodesic_free(g);

    if (as_json) {
        ordered_json j;
        j["p"] = {first[4], first[5], first[6]};
        j["T"] = T;
        j["step"] = step;
        j["class"] = token;
        j["samples"] = n;
        j["endpoint"] = {last[1], last[2], last[3]};
        j["cusps"] = cusps;
        j["inflections"] = inflections;
        j["degenerate_projection"] = degenerate != 0;
        std::printf("%s\n", j.dump(2).c_str());
    } else {
        std::printf("class: %s\n", token);
        std::printf("samples: %zu\n", n);
        std::printf("endpoint: %.12g %.12g %.12g\n", last[1], last[2], last[3]);
        std::printf("cusps (%zu):", cusps.size());
        for (double t : cusps) std::printf(" %.6f", t);
        std::printf("\n");
        std::printf("inflections (%zu):", inflections.size());
        for (double t : inflections) std::printf(" %.6f", t);
        std::printf("\n");
        std::printf("degenerate projection: %s\n", degenerate ? "yes" : "no");
    }
    return 0;
}

int run_orbit(const double gen[3], const double base[3], double s_min, double s_max, int samples,
              const std::string& out_csv, const std::string& out_svg, const PlotSpec& spec) {
    char* js = nullptr;
    if (se2g_orbit_projection_json(gen, base, &js) != SE2G_OK) return report_error();

    if (!out_csv.empty() || !out_svg.empty()) {
        if (samples < 2 || s_max <= s_min) {
            std::fprintf(stderr, "error: need samples >= 2 and s-max > s-min\n");
            se2g_string_free(js);
            return kExitInvalid;
        }
        std::string csv = "s,x,y,theta\n";
        std::vector<std::array<double, 2>> pts(samples);
        char line[160];
        for (int i = 0; i < samples; ++i) {
            const double s = s_min + (s_max - s_min) * i / (samples - 1);
            double g[3];
            if (se2g_orbit_point(gen, base, s, g) != SE2G_OK) {
                se2g_string_free(js);
                return report_error();
            }
            pts[i] = {g[0], g[1]};
            std::snprintf(line, sizeof(line), "%.17g,%.17g,%.17g,%.17g\n", s, g[0], g[1], g[2]);
            csv += line;
        }
        if (!out_csv.empty())
            if (int rc = write_file(out_csv, csv)) {
                se2g_string_free(js);
                return rc;
            }
        if (!out_svg.empty())
            if (int rc = write_file(out_svg, render_curve_svg(pts, {}, spec))) {
                se2g_string_free(js);
                return rc;
            }
    }
    return emit_json(js);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sub-Riemannian geodesics on the group of planar motions"};
    app.require_subcommand(1);

    // geodesic
    auto* cmd_geo = app.add_subcommand("geodesic", "integrate a geodesic and plot its projection");
    double h1 = 1.0, h2 = 0.0, h3 = 0.0, T = 10.0, step = 1e-3, tau = 0.0;
    std::string out_csv, out_svg;
    bool as_json = false;
    PlotSpec spec;
    cmd_geo->add_option("--h1", h1, "initial covector h1")->required();
    cmd_geo->add_option("--h2", h2, "initial covector h2")->required();
    cmd_geo->add_option("--h3", h3, "initial covector h3")->required();
    cmd_geo->add_option("--T,--horizon", T, "integration time");
    cmd_geo->add_option("--step", step, "integration step");
    cmd_geo->add_option("--out-csv", out_csv, "write trajectory CSV here");
    cmd_geo->add_option("--out-svg", out_svg, "write projection SVG here");
    cmd_geo->add_flag("--json", as_json, "JSON output");
    add_plot_flags(cmd_geo, spec);

    // classify
    auto* cmd_cls = app.add_subcommand("classify", "print the geodesic class of a covector");
    cmd_cls->add_option("--h1", h1, "covector h1")->required();
    cmd_cls->add_option("--h2", h2, "covector h2")->required();
    cmd_cls->add_option("--h3", h3, "covector h3")->required();
    cmd_cls->add_flag("--json", as_json, "JSON output");

    // orbit
    auto* cmd_orb = app.add_subcommand("orbit", "one-parameter isometry orbit and its projection");
    double gen[3] = {0.0, 0.0, 1.0};
    double base[3] = {0.0, 0.0, 0.0};
    double s_min = -5.0, s_max = 5.0;
    int samples = 1001;
    cmd_orb->add_option("--a", gen[0], "generator E13 coefficient")->required();
    cmd_orb->add_option("--b", gen[1], "generator E23 coefficient")->required();
    cmd_orb->add_option("--c", gen[2], "generator rotation coefficient")->required();
    cmd_orb->add_option("--base-x", base[0], "base point x");
    cmd_orb->add_option("--base-y", base[1], "base point y");
    cmd_orb->add_option("--base-theta", base[2], "base point theta");
    cmd_orb->add_option("--s-min", s_min, "parameter range start");
    cmd_orb->add_option("--s-max", s_max, "parameter range end");
    cmd_orb->add_option("--samples", samples, "points for CSV/SVG sampling");
    cmd_orb->add_option("--out-csv", out_csv, "write orbit CSV here");
    cmd_orb->add_option("--out-svg", out_svg, "write projection SVG here");
    add_plot_flags(cmd_orb, spec);

    // homogeneity
    auto* cmd_hom = app.add_subcommand("homogeneity", "sweep the covector grid for homogeneity");
    int n_alpha = 720, n_h3 = 200, geo_samples = 0;
    double h3_max = 4.0, eps = 1e-9, hom_T = 10.0, hom_step = 1e-3;
    std::string hom_config;
    cmd_hom->add_option("--n-alpha", n_alpha, "grid count along the circle");
    cmd_hom->add_option("--n-h3", n_h3, "grid count along h3");
    cmd_hom->add_option("--h3-max", h3_max, "half-width of the h3 range");
    cmd_hom->add_option("--eps", eps, "equilibrium matching tolerance");
    cmd_hom->add_option("--samples", geo_samples, "non-homogeneous covectors to fit geometrically");
    cmd_hom->add_option("--T,--horizon", hom_T, "confirmation time range");
    cmd_hom->add_option("--step", hom_step, "confirmation integration step");
    cmd_hom->add_option("--config", hom_config, "JSON file with sweep parameters (flags win)");
    cmd_hom->add_flag("--json", as_json, "JSON output (default)");

    // cut-time
    auto* cmd_cut = app.add_subcommand("cut-time", "first-Maxwell-point estimate for a covector");
    ConfigFlags cut_cfg;
    cmd_cut->add_option("--h1", h1, "covector h1")->required();
    cmd_cut->add_option("--h2", h2, "covector h2")->required();
    cmd_cut->add_option("--h3", h3, "covector h3")->required();
    add_config_flags(cmd_cut, cut_cfg);
    cmd_cut->add_flag("--json", as_json, "JSON output (default)");

    // equioptimality
    auto* cmd_eqo = app.add_subcommand("equioptimality",
                                       "cut-time invariance under the covector flow");
    std::vector<double> taus;
    ConfigFlags eqo_cfg;
    cmd_eqo->add_option("--h1", h1, "covector h1")->required();
    cmd_eqo->add_option("--h2", h2, "covector h2")->required();
    cmd_eqo->add_option("--h3", h3, "covector h3")->required();
    cmd_eqo->add_option("--tau", taus, "flow times (repeatable)");
    add_config_flags(cmd_eqo, eqo_cfg);
    cmd_eqo->add_flag("--json", as_json, "JSON output (default)");

    // shift-check
    auto* cmd_sft = app.add_subcommand("shift-check",
                                       "deviation of the flowed geodesic from the shifted one");
    double sft_T = 5.0, sft_step = 1e-3;
    cmd_sft->add_option("--h1", h1, "covector h1")->required();
    cmd_sft->add_option("--h2", h2, "covector h2")->required();
    cmd_sft->add_option("--h3", h3, "covector h3")->required();
    cmd_sft->add_option("--tau", tau, "flow time")->required();
    cmd_sft->add_option("--T,--horizon", sft_T, "comparison time range");
    cmd_sft->add_option("--step", sft_step, "integration step");
    cmd_sft->add_flag("--json", as_json, "JSON output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInvalid;
    }

    if (cmd_geo->parsed()) return run_geodesic(h1, h2, h3, T, step, out_csv, out_svg, as_json, spec);

    if (cmd_cls->parsed()) {
        const char* token = nullptr;
        if (se2g_classify(h1, h2, h3, &token) != SE2G_OK) return report_error();
        if (as_json) {
            ordered_json j;
            j["class"] = token;
            std::printf("%s\n", j.dump(2).c_str());
        } else {
            std::printf("%s\n", token);
        }
        return 0;
    }

    if (cmd_orb->parsed()) return run_orbit(gen, base, s_min, s_max, samples, out_csv, out_svg, spec);

    if (cmd_hom->parsed()) {
        if (!hom_config.empty()) {
            std::ifstream in(hom_config);
            if (!in) {
                std::fprintf(stderr, "error: cannot read %s\n", hom_config.c_str());
                return kExitIo;
            }
            ordered_json j;
            try {
                in >> j;
                if (j.contains("n_alpha") && !cmd_hom->count("--n-alpha"))
                    n_alpha = j["n_alpha"].get<int>();
                if (j.contains("n_h3") && !cmd_hom->count("--n-h3")) n_h3 = j["n_h3"].get<int>();
                if (j.contains("h3_max") && !cmd_hom->count("--h3-max"))
                    h3_max = j["h3_max"].get<double>();
                if (j.contains("eps") && !cmd_hom->count("--eps")) eps = j["eps"].get<double>();
                if (j.contains("samples") && !cmd_hom->count("--samples"))
                    geo_samples = j["samples"].get<int>();
                if (j.contains("T") && !cmd_hom->count("--T")) hom_T = j["T"].get<double>();
                if (j.contains("step") && !cmd_hom->count("--step"))
                    hom_step = j["step"].get<double>();
            } catch (const std::exception& e) {
                std::fprintf(stderr, "error: %s: %s\n", hom_config.c_str(), e.what());
                return kExitInvalid;
            }
        }
        char* js = nullptr;
        if (se2g_homogeneity_sweep_json(n_alpha, n_h3, h3_max, eps, geo_samples, hom_T, hom_step,
                                        &js) != SE2G_OK)
            return report_error();
        return emit_json(js);
    }

    if (cmd_cut->parsed()) {
        if (int rc = resolve_config(cut_cfg)) return rc;
        char* js = nullptr;
        if (se2g_cut_time_json(h1, h2, h3, &cut_cfg.cfg, &js) != SE2G_OK) return report_error();
        return emit_json(js);
    }

    if (cmd_eqo->parsed()) {
        if (int rc = resolve_config(eqo_cfg)) return rc;
        if (taus.empty()) taus = {0.0, 0.5, 1.0, 2.0};
        char* js = nullptr;
        if (se2g_equioptimality_json(h1, h2, h3, taus.data(), taus.size(), &eqo_cfg.cfg, &js) !=
            SE2G_OK)
            return report_error();
        return emit_json(js);
    }

    if (cmd_sft->parsed()) {
        double dev = 0.0;
        if (se2g_shift_identity_check(h1, h2, h3, tau, sft_T, sft_step, &dev) != SE2G_OK)
            return report_error();
        if (as_json) {
            ordered_json j;
            j["p"] = {h1, h2, h3};
            j["tau"] = tau;
            j["T"] = sft_T;
            j["deviation"] = dev;
            std::printf("%s\n", j.dump(2).c_str());
        } else {
            std::printf("max deviation: %.6e\n", dev);
        }
        return 0;
    }

    return kExitInvalid;
}
