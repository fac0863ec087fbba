#include "isd/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "isd/charfit.hpp"
#include "isd/conditioning.hpp"
#include "isd/config.hpp"
#include "isd/control.hpp"
#include "isd/errors.hpp"
#include "isd/excitation.hpp"
#include "isd/report.hpp"
#include "isd/trace_io.hpp"
#include "isd/transducer.hpp"

namespace isd {

namespace {

struct Common {
    std::string config_path;
    std::vector<std::string> overrides;
};

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--config", c.config_path, "config file (key = value lines)");
    sub->add_option("--set", c.overrides, "override a config key, key=value (repeatable)");
}

Config load_config(const Common& c) {
    Config cfg = c.config_path.empty() ? Config{} : Config::load(c.config_path);
    if (const char* env = std::getenv("ISD_SEED"); env && *env) cfg.set("run.seed", env);
    for (const auto& kv : c.overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
        cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    cfg.validate();
    return cfg;
}

// A relative static.curve path is taken from the config file's directory.
SensorParams load_sensor(const Config& cfg, const Common& c) {
    SensorParams p = cfg.sensor();
    if (const auto& curve = cfg.text("static.curve"); !curve.empty()) {
        std::filesystem::path path = curve;
        if (path.is_relative() && !c.config_path.empty()) {
            path = std::filesystem::path(c.config_path).parent_path() / path;
        }
        p.static_curve = piecewise_from_json(parse_json(read_file(path)));
    }
    return p;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Static-dynamic triboelectric pressure sensor simulator", "isd"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kToolVersion));

    Common common;
    std::function<void()> action;

    auto* gen = app.add_subcommand("gen", "excitation config -> pressure trace CSV");
    add_common(gen, common);
    std::string gen_out;
    gen->add_option("--out", gen_out, "pressure CSV")->required();
    gen->callback([&] {
        action = [&] {
            const Config cfg = load_config(common);
            write_trace(gen_out, generate(cfg.excitation()));
        };
    });

    auto* sim = app.add_subcommand("sim", "pressure CSV -> DC and AC voltage CSVs");
    add_common(sim, common);
    std::string sim_in, sim_dc, sim_ac;
    sim->add_option("--in", sim_in, "pressure CSV")->required();
    sim->add_option("--dc", sim_dc, "DC voltage CSV")->required();
    sim->add_option("--ac", sim_ac, "AC voltage CSV")->required();
    sim->callback([&] {
        action = [&] {
            const Config cfg = load_config(common);
            const Trace pressure = read_trace(sim_in, Channel::PressurePa);
            const auto res = simulate(pressure, load_sensor(cfg, common), cfg.charge_excitation(), cfg.dynamics());
            write_trace(sim_dc, res.dc);
            write_trace(sim_ac, res.ac);
        };
    });

    auto* cond = app.add_subcommand("condition", "AC voltage CSV -> RC-shaped pulse CSV");
    add_common(cond, common);
    std::string cond_in, cond_out;
    cond->add_option("--in", cond_in, "AC voltage CSV")->required();
    cond->add_option("--out", cond_out, "shaped voltage CSV")->required();
    cond->callback([&] {
        action = [&] {
            const Config cfg = load_config(common);
            write_trace(cond_out, shape_pulse(read_trace(cond_in, Channel::VoltageAC), cfg.conditioning()));
        };
    });

    auto* harv = app.add_subcommand("harvest", "config -> storage capacitor voltage CSV");
    add_common(harv, common);
    std::string harv_out;
    harv->add_option("--out", harv_out, "storage voltage CSV")->required();
    harv->callback([&] {
        action = [&] {
            const Config cfg = load_config(common);
            write_trace(harv_out, harvest(cfg.harvest()));
        };
    });

    auto* fit = app.add_subcommand("fit", "pressure-voltage CSV -> fit JSON");
    add_common(fit, common);
    std::string fit_in, fit_out, fit_mode = "static";
    fit->add_option("--in", fit_in, "CSV with pressure_kpa,voltage_v")->required();
    fit->add_option("--out", fit_out, "fit JSON")->required();
    fit->add_option("--mode", fit_mode, "static or dynamic")
        ->check(CLI::IsMember({"static", "dynamic"}));
    fit->callback([&] {
        action = [&] {
            const Config cfg = load_config(common);
            PVSamples data = read_pv(fit_in);
            data.mode = fit_mode == "dynamic" ? ResponseMode::Dynamic : ResponseMode::Static;
            Json j;
            if (cfg.text("fit.model") == "piecewise") {
                j = fit_to_json(fit_piecewise(data, static_cast<int>(cfg.integer("fit.segments"))));
            } else {
                j = fit_to_json(fit_exponential(data), cfg.numbers("fit.report_pressures_pa"));
            }
            j["run"] = run_metadata(cfg);
            write_file_atomic(fit_out, dump_json(j));
        };
    });

    auto* cls = app.add_subcommand("classify", "DC and AC CSVs -> events JSON");
    add_common(cls, common);
    std::string cls_dc, cls_ac, cls_out;
    cls->add_option("--dc", cls_dc, "DC voltage CSV")->required();
    cls->add_option("--ac", cls_ac, "AC voltage CSV")->required();
    cls->add_option("--out", cls_out, "events JSON")->required();
    cls->callback([&] {
        action = [&] {
            const Config cfg = load_config(common);
            const auto events = classify(read_trace(cls_dc, Channel::VoltageDC),
                                         read_trace(cls_ac, Channel::VoltageAC), cfg.classifier());
            Json j = events_to_json(events);
            j["run"] = run_metadata(cfg);
            write_file_atomic(cls_out, dump_json(j));
        };
    });

    auto* ctl = app.add_subcommand("control", "events or traces -> command log and hand trajectory");
    add_common(ctl, common);
    std::string ctl_dc, ctl_ac, ctl_events, ctl_log, ctl_hand;
    ctl->add_option("--dc", ctl_dc, "DC voltage CSV")->required();
    auto* ac_opt = ctl->add_option("--ac", ctl_ac, "AC voltage CSV (classified on the fly)");
    auto* ev_opt = ctl->add_option("--events", ctl_events, "events JSON from classify");
    ac_opt->excludes(ev_opt);
    ctl->add_option("--log", ctl_log, "command log (JSON lines)")->required();
    ctl->add_option("--hand", ctl_hand, "hand trajectory CSV")->required();
    ctl->callback([&] {
        if (ctl_ac.empty() && ctl_events.empty()) {
            throw CLI::ValidationError("control", "one of --ac or --events is required");
        }
        action = [&] {
            const Config cfg = load_config(common);
            const Trace dc = read_trace(ctl_dc, Channel::VoltageDC);
            const auto events = ctl_events.empty()
                                    ? classify(dc, read_trace(ctl_ac, Channel::VoltageAC), cfg.classifier())
                                    : events_from_json(parse_json(read_file(ctl_events)));
            const auto delivered = transmit(map_control(events, dc, cfg.mapping()), cfg.channel());
            write_file_atomic(ctl_log, format_command_log(delivered));
            write_file_atomic(ctl_hand, format_hand_trajectory(actuate(delivered, HandState{}, cfg.actuator())));
        };
    });

    auto* rep = app.add_subcommand("report", "aggregate metrics and artifacts -> report JSON");
    add_common(rep, common);
    std::string rep_out, rep_step;
    std::vector<std::string> rep_fits, rep_artifacts;
    rep->add_option("--out", rep_out, "report JSON")->required();
    rep->add_option("--fit", rep_fits, "fit JSON to include (repeatable)");
    rep->add_option("--step", rep_step, "DC step-response CSV for rise/fall times");
    rep->add_option("--artifact", rep_artifacts, "artifact path to list (repeatable)");
    rep->callback([&] {
        action = [&] {
            const Config cfg = load_config(common);
            Json metrics;
            Json fits = Json::array();
            for (const auto& path : rep_fits) {
                Json j = parse_json(read_file(path));
                j.erase("run");
                j["source"] = path;
                fits.push_back(std::move(j));
            }
            metrics["fits"] = fits;
            if (!rep_step.empty()) {
                const auto rt = extract_response_times(read_trace(rep_step, Channel::VoltageDC));
                metrics["response_times"] = {{"rise_s", rt.rise}, {"fall_s", rt.fall}};
            }
            const double criterion = cfg.number("detection.criterion");
            const double limit = detection_limit(load_sensor(cfg, common), cfg.dynamics(), criterion,
                                                 cfg.detection_grid());
            metrics["detection_limit"] = {{"criterion", criterion},
                                          {"noise_rms_v", cfg.number("dynamics.noise_rms_v")},
                                          {"pressure_pa", std::isfinite(limit) ? Json(limit) : Json(nullptr)}};
            Json artifacts = Json::array();
            for (const auto& a : rep_artifacts) artifacts.push_back(a);
            if (!rep_step.empty()) artifacts.push_back(rep_step);
            const Json report = {{"run", run_metadata(cfg)}, {"metrics", metrics}, {"artifacts", artifacts}};
            write_file_atomic(rep_out, dump_json(report));
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        if (code != 0) {
            err << app.help();
            return 1;
        }
        return 0;
    }

    try {
        action();
        return 0;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const IoError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace isd
