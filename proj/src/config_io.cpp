#include "zbwg/config_io.hpp"

#include "zbwg/dispersion.hpp"
#include "zbwg/errors.hpp"
#include "zbwg/numerics.hpp"
#include "zbwg/version.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

namespace zbwg {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) {
        return {};
    }
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) {
            throw std::invalid_argument("trailing characters");
        }
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config: cannot parse '" + value + "' as a number for key " + key);
    }
}

int parse_int(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const long v = std::stol(value, &pos);
        if (pos != value.size()) {
            throw std::invalid_argument("trailing characters");
        }
        return static_cast<int>(v);
    } catch (const std::exception&) {
        throw ConfigError("config: cannot parse '" + value + "' as an integer for key " + key);
    }
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "1" || value == "true" || value == "yes" || value == "on") return true;
    if (value == "0" || value == "false" || value == "no" || value == "off") return false;
    throw ConfigError("config: cannot parse '" + value + "' as a boolean for key " + key);
}

std::string basename_of(const std::string& path) {
    const auto slash = path.find_last_of("/\\");
    return (slash == std::string::npos) ? path : path.substr(slash + 1);
}

void set_key(ResolvedConfig& c, const std::string& key, const std::string& value) {
    if (key == "n_guides") c.lattice.n_guides = parse_int(key, value);
    else if (key == "spacing_a") c.lattice.spacing_a = parse_double(key, value);
    else if (key == "kappa") c.lattice.kappa = parse_double(key, value);
    else if (key == "sigma_r") c.lattice.sigma_r = parse_double(key, value);
    else if (key == "gain_ratio_r") c.lattice.gain_ratio_r = parse_double(key, value);
    else if (key == "omega") c.lattice.omega = parse_double(key, value);
    else if (key == "omega0") c.lattice.omega0 = parse_double(key, value);
    else if (key == "wavelength") c.lattice.wavelength = parse_double(key, value);
    else if (key == "n_substrate") c.lattice.n_substrate = parse_double(key, value);
    else if (key == "spot_size") c.lattice.spot_size = parse_double(key, value);
    else if (key == "z_max") c.plan.z_max = parse_double(key, value);
    else if (key == "step") c.plan.step = parse_double(key, value);
    else if (key == "sample_every") c.plan.sample_every = parse_int(key, value);
    else if (key == "divergence_cutoff") c.plan.divergence_cutoff = parse_double(key, value);
    else if (key == "k_nodes") c.k_nodes = parse_int(key, value);
    else if (key == "quadrature_check") c.quadrature_check = parse_bool(key, value);
    else if (key == "compare_window_zb_periods") c.compare_window_zb_periods = parse_double(key, value);
    else if (key == "compare_tolerance") c.compare_tolerance = parse_double(key, value);
    else if (key == "axis_x") c.axis_x.axis = axis_from_name(value);
    else if (key == "axis_x_min") c.axis_x.min = parse_double(key, value);
    else if (key == "axis_x_max") c.axis_x.max = parse_double(key, value);
    else if (key == "axis_x_count") c.axis_x.count = parse_int(key, value);
    else if (key == "axis_y") c.axis_y.axis = axis_from_name(value);
    else if (key == "axis_y_min") c.axis_y.min = parse_double(key, value);
    else if (key == "axis_y_max") c.axis_y.max = parse_double(key, value);
    else if (key == "axis_y_count") c.axis_y.count = parse_int(key, value);
    else if (key == "low_omega_floor") c.low_omega_floor = parse_double(key, value);
    else if (key == "q_count") c.q_count = parse_int(key, value);
    else throw ConfigError("config: unknown key '" + key + "'");
}

ordered_json to_json(const ResolvedConfig& c) {
    ordered_json j;
    j["n_guides"] = c.lattice.n_guides;
    j["spacing_a"] = c.lattice.spacing_a;
    j["kappa"] = c.lattice.kappa;
    j["sigma_r"] = c.lattice.sigma_r;
    j["gain_ratio_r"] = c.lattice.gain_ratio_r;
    j["omega"] = c.lattice.omega;
    j["omega0"] = c.lattice.omega0;
    j["wavelength"] = c.lattice.wavelength;
    j["n_substrate"] = c.lattice.n_substrate;
    j["spot_size"] = c.lattice.spot_size;
    j["z_max"] = c.plan.z_max;
    j["step"] = c.plan.step;
    j["sample_every"] = c.plan.sample_every;
    j["divergence_cutoff"] = c.plan.divergence_cutoff;
    j["k_nodes"] = c.k_nodes;
    j["quadrature_check"] = c.quadrature_check;
    j["compare_window_zb_periods"] = c.compare_window_zb_periods;
    j["compare_tolerance"] = c.compare_tolerance;
    j["axis_x"] = axis_name(c.axis_x.axis);
    j["axis_x_min"] = c.axis_x.min;
    j["axis_x_max"] = c.axis_x.max;
    j["axis_x_count"] = c.axis_x.count;
    j["axis_y"] = axis_name(c.axis_y.axis);
    j["axis_y_min"] = c.axis_y.min;
    j["axis_y_max"] = c.axis_y.max;
    j["axis_y_count"] = c.axis_y.count;
    j["low_omega_floor"] = c.low_omega_floor;
    j["q_count"] = c.q_count;
    return j;
}

ResolvedConfig from_json_object(const ordered_json& obj) {
    ResolvedConfig c;
    for (const auto& [key, value] : obj.items()) {
        std::string text;
        if (value.is_string()) {
            text = value.get<std::string>();
        } else if (value.is_boolean()) {
            text = value.get<bool>() ? "true" : "false";
        } else {
            std::ostringstream oss;
            oss << std::setprecision(17) << value.dump();
            text = oss.str();
        }
        set_key(c, key, text);
    }
    return c;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) {
        throw ConfigError("cannot open for writing: " + path);
    }
    out << std::setprecision(17);
    return out;
}

void preamble(std::ofstream& out, const std::string& what, const std::string& out_prefix) {
    out << "# zbwg " << what << " v" << kToolVersion << "\n";
    out << "# manifest: " << basename_of(out_prefix) << "_manifest.json\n";
}

std::string termination_name(Termination t) {
    return t == Termination::Diverged ? "diverged" : "completed";
}

// Analytic prediction sampled on the same z grid the simulation reports.
std::vector<double> sample_times(const PropagationPlan& plan) {
    const double dz = plan.step * plan.sample_every;
    std::vector<double> times;
    const long n = static_cast<long>(std::floor(plan.z_max / dz + 1e-9));
    times.reserve(n + 2);
    for (long j = 0; j <= n; ++j) {
        times.push_back(static_cast<double>(j) * dz);
    }
    if (times.back() < plan.z_max - 1e-12) {
        times.push_back(plan.z_max);
    }
    return times;
}

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

void finish_manifest(const std::string& command, const ResolvedConfig& config,
                     const Timer& timer, Termination termination,
                     CommandOutcome& outcome, const std::string& out_prefix) {
    RunManifest manifest;
    manifest.command = command;
    manifest.tool_version = kToolVersion;
    manifest.duration_seconds = timer.seconds();
    manifest.termination = termination_name(termination);
    manifest.config = config;
    for (const auto& f : outcome.files) {
        manifest.outputs.push_back(basename_of(f));
    }
    const std::string path = out_prefix + "_manifest.json";
    write_manifest(manifest, path);
    outcome.files.push_back(path);
    outcome.termination = termination;
}

} // namespace

SweepSpec ResolvedConfig::sweep_spec() const {
    SweepSpec spec;
    spec.x = axis_x;
    spec.y = axis_y;
    spec.base_config = lattice;
    spec.plan = plan;
    return spec;
}

void apply_override(ResolvedConfig& config, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) {
        throw ConfigError("override must look like key=value, got '" + assignment + "'");
    }
    const std::string key = trim(assignment.substr(0, eq));
    const std::string value = trim(assignment.substr(eq + 1));
    if (key.empty() || value.empty()) {
        throw ConfigError("override must look like key=value, got '" + assignment + "'");
    }
    set_key(config, key, value);
}

ResolvedConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
    ResolvedConfig config;
    if (!path.empty()) {
        std::ifstream in(path);
        if (!in) {
            throw ConfigError("cannot open config file: " + path);
        }
        std::stringstream buffer;
        buffer << in.rdbuf();
        const std::string text = buffer.str();
        const auto first = text.find_first_not_of(" \t\r\n");
        if (first != std::string::npos && text[first] == '{') {
            config = config_from_json(text);
        } else {
            config = ResolvedConfig{};
            std::istringstream lines(text);
            std::string line;
            int lineno = 0;
            while (std::getline(lines, line)) {
                ++lineno;
                const auto hash = line.find('#');
                if (hash != std::string::npos) {
                    line = line.substr(0, hash);
                }
                line = trim(line);
                if (line.empty()) {
                    continue;
                }
                try {
                    apply_override(config, line);
                } catch (const ConfigError& e) {
                    throw ConfigError(path + ":" + std::to_string(lineno) + ": " + e.what());
                }
            }
        }
    }
    for (const auto& o : overrides) {
        apply_override(config, o);
    }
    return config;
}

std::string config_to_json(const ResolvedConfig& config) {
    return to_json(config).dump(2);
}

ResolvedConfig config_from_json(const std::string& json_text) {
    ordered_json j;
    try {
        j = ordered_json::parse(json_text);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }
    if (j.contains("config")) {
        return from_json_object(j["config"]);
    }
    return from_json_object(j);
}

void write_manifest(const RunManifest& manifest, const std::string& path) {
    ordered_json j;
    j["command"] = manifest.command;
    j["tool_version"] = manifest.tool_version;
    j["duration_seconds"] = manifest.duration_seconds;
    j["termination"] = manifest.termination;
    j["config"] = to_json(manifest.config);
    j["outputs"] = manifest.outputs;
    auto out = open_out(path);
    out << j.dump(2) << "\n";
}

CommandOutcome cmd_simulate(const ResolvedConfig& config, const std::string& out_prefix) {
    Timer timer;
    config.lattice.validate();
    config.plan.validate(config.lattice.omega);
    const FieldState initial = initial_gaussian_field(config.lattice);

    TrajectoryRecorder recorder;
    std::vector<double> map_z;
    std::vector<std::vector<double>> map_rows;
    const Observer observer = [&](const FieldState& state) {
        recorder.record(state);
        map_z.push_back(state.z);
        std::vector<double> row(state.amplitudes.size());
        for (std::size_t j = 0; j < state.amplitudes.size(); ++j) {
            row[j] = std::norm(state.amplitudes[j]);
        }
        map_rows.push_back(std::move(row));
    };

    const PropagationResult result = propagate(config.lattice, config.plan, initial, observer);
    const Trajectory traj = recorder.take(result);

    CommandOutcome outcome;
    {
        auto out = open_out(out_prefix + "_trajectory.csv");
        preamble(out, "trajectory", out_prefix);
        out << "# units: z in 1/kappa; positions and widths in guide spacings;"
               " total_intensity relative to the launch intensity\n";
        out << "z,center_of_mass,total_intensity,width,participation_ratio,sublattice_a,sublattice_b\n";
        for (std::size_t j = 0; j < traj.z_samples.size(); ++j) {
            out << traj.z_samples[j] << ',' << traj.center_of_mass[j] << ','
                << traj.total_intensity[j] << ',' << traj.width[j] << ','
                << traj.participation_ratio[j] << ',' << traj.sublattice_a[j] << ','
                << traj.sublattice_b[j] << "\n";
        }
        outcome.files.push_back(out_prefix + "_trajectory.csv");
    }
    {
        auto out = open_out(out_prefix + "_intensity_map.csv");
        preamble(out, "intensity map", out_prefix);
        out << "# rows: z sample; columns: z then |a_n|^2 per guide (n = 0.."
            << config.lattice.n_guides - 1 << ")\n";
        out << "z";
        for (int j = 0; j < config.lattice.n_guides; ++j) {
            out << ",guide_" << j;
        }
        out << "\n";
        for (std::size_t r = 0; r < map_rows.size(); ++r) {
            out << map_z[r];
            for (const double v : map_rows[r]) {
                out << ',' << v;
            }
            out << "\n";
        }
        outcome.files.push_back(out_prefix + "_intensity_map.csv");
    }
    finish_manifest("simulate", config, timer, result.termination, outcome, out_prefix);
    return outcome;
}

CommandOutcome cmd_analytic(const ResolvedConfig& config, const std::string& out_prefix) {
    Timer timer;
    const DiracMapping mapping = map_lattice_to_dirac(config.lattice);
    const SpectralGrid grid = make_spectral_grid(mapping.envelope_width, config.k_nodes);
    const std::vector<double> times = sample_times(config.plan);

    PredictionOptions options;
    options.check_quadrature = config.quadrature_check;
    const DiracPrediction pred = prediction(mapping.params, grid, times, options);

    CommandOutcome outcome;
    auto out = open_out(out_prefix + "_prediction.csv");
    preamble(out, "analytic prediction", out_prefix);
    out << "# units: t in 1/kappa; xi in unit cells (2a); xi_expectation_a in guide spacings\n";
    out << "t,xi_expectation,xi_expectation_a,xi_drift_re,xi_drift_im,xi_zb_re,xi_zb_im,"
           "xi_im_re,xi_im_im,psi_norm_sq,zb_kernel_re,zb_kernel_im\n";
    for (std::size_t j = 0; j < pred.t.size(); ++j) {
        out << pred.t[j] << ',' << pred.xi_expectation[j] << ','
            << 2.0 * pred.xi_expectation[j] << ',' << pred.xi_drift[j].real() << ','
            << pred.xi_drift[j].imag() << ',' << pred.xi_zb[j].real() << ','
            << pred.xi_zb[j].imag() << ',' << pred.xi_im[j].real() << ','
            << pred.xi_im[j].imag() << ',' << pred.psi_norm_sq[j] << ','
            << pred.zb_kernel[j].real() << ',' << pred.zb_kernel[j].imag() << "\n";
    }
    outcome.files.push_back(out_prefix + "_prediction.csv");
    finish_manifest("analytic", config, timer, Termination::Completed, outcome, out_prefix);
    return outcome;
}

CommandOutcome cmd_compare(const ResolvedConfig& config, const std::string& out_prefix) {
    Timer timer;
    config.lattice.validate();
    config.plan.validate(config.lattice.omega);

    const Trajectory traj = run_trajectory(config.lattice, config.plan);

    const DiracMapping mapping = map_lattice_to_dirac(config.lattice);
    const SpectralGrid grid = make_spectral_grid(mapping.envelope_width, config.k_nodes);
    PredictionOptions options;
    options.check_quadrature = config.quadrature_check;
    const DiracPrediction pred = prediction(mapping.params, grid, traj.z_samples, options);

    // Comparison window: the stated number of trembling periods 2pi/(2 sigma_r).
    double window_z = traj.z_samples.back();
    if (config.lattice.sigma_r > 0.0) {
        window_z = std::min(window_z, config.compare_window_zb_periods * M_PI / config.lattice.sigma_r);
    }

    std::vector<double> win_z, win_sim, win_dev;
    double rms = 0.0;
    for (std::size_t j = 0; j < traj.z_samples.size(); ++j) {
        if (traj.z_samples[j] > window_z + 1e-12) {
            break;
        }
        const double dev = traj.center_of_mass[j] - 2.0 * pred.xi_expectation[j];
        win_z.push_back(traj.z_samples[j]);
        win_sim.push_back(traj.center_of_mass[j]);
        win_dev.push_back(dev);
        rms += dev * dev;
    }
    if (win_z.size() < 4) {
        throw ConfigError("compare: fewer than 4 samples inside the comparison window");
    }
    rms = std::sqrt(rms / static_cast<double>(win_z.size()));

    const std::vector<double> flat = detrend(win_z, win_sim);
    double lo = flat[0], hi = flat[0];
    for (const double v : flat) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    const double amplitude = 0.5 * (hi - lo);
    const double ratio = (amplitude > 0.0) ? rms / amplitude
                                           : std::numeric_limits<double>::infinity();

    CommandOutcome outcome;
    {
        auto out = open_out(out_prefix + "_compare.csv");
        preamble(out, "simulation vs analytic comparison", out_prefix);
        out << "# units: z in 1/kappa; positions in guide spacings\n";
        out << "z,sim_center_of_mass,analytic_position,deviation\n";
        for (std::size_t j = 0; j < traj.z_samples.size(); ++j) {
            const double ana = 2.0 * pred.xi_expectation[j];
            out << traj.z_samples[j] << ',' << traj.center_of_mass[j] << ',' << ana << ','
                << traj.center_of_mass[j] - ana << "\n";
        }
        outcome.files.push_back(out_prefix + "_compare.csv");
    }
    {
        ordered_json j;
        j["window_z"] = window_z;
        j["window_zb_periods"] = config.compare_window_zb_periods;
        j["samples_in_window"] = win_z.size();
        j["rms_deviation"] = rms;
        j["zb_amplitude"] = amplitude;
        j["rms_over_amplitude"] = ratio;
        j["tolerance"] = config.compare_tolerance;
        j["documented_deviation"] = (ratio > config.compare_tolerance);
        j["termination"] = termination_name(traj.termination);
        auto out = open_out(out_prefix + "_metrics.json");
        out << j.dump(2) << "\n";
        outcome.files.push_back(out_prefix + "_metrics.json");
    }
    finish_manifest("compare", config, timer, traj.termination, outcome, out_prefix);
    return outcome;
}

CommandOutcome cmd_sweep(const ResolvedConfig& config, const std::string& out_prefix,
                         ExecMode mode, int workers) {
    Timer timer;
    const SweepSpec spec = config.sweep_spec();
    PhaseDiagram diagram = run_sweep(spec, mode, workers);

    std::string valley_note;
    try {
        diagram.valleys = detect_valleys(diagram, config.low_omega_floor);
    } catch (const std::exception& e) {
        valley_note = e.what();
    }

    CommandOutcome outcome;
    const int nx = spec.x.count;
    const int ny = spec.y.count;
    {
        auto out = open_out(out_prefix + "_grid.csv");
        preamble(out, "phase diagram grid", out_prefix);
        out << "# value: log10(max total intensity / launch intensity)\n";
        out << "# x axis: " << axis_name(spec.x.axis) << " min=" << spec.x.min
            << " max=" << spec.x.max << " count=" << nx << "\n";
        out << "# y axis: " << axis_name(spec.y.axis) << " min=" << spec.y.min
            << " max=" << spec.y.max << " count=" << ny << "\n";
        out << "# first row: x values; first column: y values\n";
        for (int ix = 0; ix < nx; ++ix) {
            out << ',' << diagram.x_values[ix];
        }
        out << "\n";
        for (int iy = 0; iy < ny; ++iy) {
            out << diagram.y_values[iy];
            for (int ix = 0; ix < nx; ++ix) {
                out << ',' << diagram.at(ix, iy).log10_max;
            }
            out << "\n";
        }
        outcome.files.push_back(out_prefix + "_grid.csv");
    }
    {
        auto out = open_out(out_prefix + "_class.csv");
        preamble(out, "phase diagram classification", out_prefix);
        out << "# codes: 0 pseudo-PT, 1 PT-breaking, 2 PT-breaking recorded from a non-finite cell\n";
        for (int ix = 0; ix < nx; ++ix) {
            out << ',' << diagram.x_values[ix];
        }
        out << "\n";
        for (int iy = 0; iy < ny; ++iy) {
            out << diagram.y_values[iy];
            for (int ix = 0; ix < nx; ++ix) {
                const PhaseCell& c = diagram.at(ix, iy);
                out << ',' << (c.non_finite ? 2 : (c.phase == PhaseClass::PtBreaking ? 1 : 0));
            }
            out << "\n";
        }
        outcome.files.push_back(out_prefix + "_class.csv");
    }
    {
        auto out = open_out(out_prefix + "_boundary.csv");
        preamble(out, "pseudo-PT boundary", out_prefix);
        out << "# boundary: first breaking " << axis_name(spec.y.axis)
            << " per column (nan when the column never breaks)\n";
        out << axis_name(spec.x.axis) << ",boundary_" << axis_name(spec.y.axis) << "\n";
        for (int ix = 0; ix < nx; ++ix) {
            out << diagram.x_values[ix] << ',' << diagram.boundary_y[ix] << "\n";
        }
        outcome.files.push_back(out_prefix + "_boundary.csv");
    }
    {
        ordered_json j;
        if (diagram.valleys) {
            j["positions"] = diagram.valleys->positions;
            j["inverse_ratios"] = diagram.valleys->inverse_ratios;
            j["base_frequency"] = diagram.valleys->base_frequency;
        } else {
            j["positions"] = ordered_json::array();
            j["inverse_ratios"] = ordered_json::array();
            j["note"] = valley_note;
        }
        j["low_omega_floor"] = config.low_omega_floor;
        auto out = open_out(out_prefix + "_valleys.json");
        out << j.dump(2) << "\n";
        outcome.files.push_back(out_prefix + "_valleys.json");
    }
    finish_manifest("sweep", config, timer, Termination::Completed, outcome, out_prefix);
    return outcome;
}

CommandOutcome cmd_dispersion(const ResolvedConfig& config, const std::string& out_prefix) {
    Timer timer;
    config.lattice.validate();
    if (config.q_count < 2) {
        throw ConfigError("dispersion: q_count must be >= 2");
    }
    const double sigma_r = config.lattice.sigma_r;
    const double sigma_i = config.lattice.gain_ratio_r * sigma_r;

    CommandOutcome outcome;
    auto out = open_out(out_prefix + "_dispersion.csv");
    preamble(out, "Bloch dispersion", out_prefix);
    out << "# q in units of 1/a over [0, pi]; omega in units of kappa; plus branch only"
           " (minus branch is its negative)\n";
    out << "# hermitian: sigma = sigma_r; complex: sigma = sigma_r (1 + i r) at the"
           " modulation peak; expansion: first order in sigma_i\n";
    out << "q,hermitian_re,hermitian_im,complex_re,complex_im,expansion_re,expansion_im\n";
    for (int i = 0; i < config.q_count; ++i) {
        BlochPoint herm;
        herm.q = M_PI * static_cast<double>(i) / static_cast<double>(config.q_count - 1);
        herm.sigma = cplx(sigma_r, 0.0);
        herm.omega_pm = dispersion_exact(1.0, herm.sigma, herm.q);

        BlochPoint full;
        full.q = herm.q;
        full.sigma = cplx(sigma_r, sigma_i);
        full.omega_pm = dispersion_exact(1.0, full.sigma, full.q);

        cplx expanded(std::numeric_limits<double>::quiet_NaN(),
                      std::numeric_limits<double>::quiet_NaN());
        try {
            expanded = dispersion_small_imag(1.0, sigma_r, sigma_i, herm.q).first;
        } catch (const ExpansionError&) {
            // outside the expansion's validity region; leave the columns as nan
        }
        out << herm.q << ',' << herm.omega_pm.first.real() << ',' << herm.omega_pm.first.imag()
            << ',' << full.omega_pm.first.real() << ',' << full.omega_pm.first.imag() << ','
            << expanded.real() << ',' << expanded.imag() << "\n";
    }
    outcome.files.push_back(out_prefix + "_dispersion.csv");
    finish_manifest("dispersion", config, timer, Termination::Completed, outcome, out_prefix);
    return outcome;
}

} // namespace zbwg
