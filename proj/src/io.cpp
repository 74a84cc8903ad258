#include "qtraj/io.hpp"

#include <cstdio>
#include <fstream>
#include <type_traits>

namespace qtraj {

using nlohmann::json;

nlohmann::json matrix_to_json(const Matrix& m) {
    json j;
    j["rows"] = m.rows();
    j["cols"] = m.cols();
    std::vector<Real> re, im;
    re.reserve(m.size());
    im.reserve(m.size());
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            re.push_back(m(i, c).real());
            im.push_back(m(i, c).imag());
        }
    j["re"] = re;
    j["im"] = im;
    return j;
}

Matrix matrix_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("rows") || !j.contains("cols") ||
        !j.contains("re") || !j.contains("im"))
        throw ConfigError("matrix JSON needs rows/cols/re/im");
    const auto rows = j.at("rows").get<Eigen::Index>();
    const auto cols = j.at("cols").get<Eigen::Index>();
    const auto re = j.at("re").get<std::vector<Real>>();
    const auto im = j.at("im").get<std::vector<Real>>();
    if (rows < 0 || cols < 0 ||
        re.size() != static_cast<std::size_t>(rows * cols) ||
        im.size() != re.size())
        throw ConfigError("matrix JSON entry counts disagree with rows*cols");
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index c = 0; c < cols; ++c) {
            const auto k = static_cast<std::size_t>(i * cols + c);
            m(i, c) = Complex(re[k], im[k]);
        }
    return m;
}

SpectralObservable ExperimentConfig::observable() const {
    try {
        return SpectralObservable(eigenvalues, projectors, tol);
    } catch (const DimensionError& e) {
        throw ConfigError(e.what());
    }
}

UnitaryFamily ExperimentConfig::family() const {
    if (model_type == "hamiltonian") return family_from_hamiltonian(*hamiltonian, tol);
    return build_from_coefficients(coefficients(), tol);
}

LimitCoefficients ExperimentConfig::coefficients() const {
    if (model_type == "coefficients") return LimitCoefficients(l00, lk0, tol);
    return extract_limit_coefficients(family_from_hamiltonian(*hamiltonian, tol),
                                      {500000, 1000000}, tol);
}

LimitMaps ExperimentConfig::maps() const {
    return LimitMaps(coefficients(), observable(), run.k_trunc, tol);
}

namespace {

Matrix required_matrix(const json& j, const char* key) {
    if (!j.contains(key)) throw ConfigError(std::string("missing ") + key);
    return matrix_from_json(j.at(key));
}

void apply_tolerance_overrides(const json& j, ToleranceProfile& tol) {
    auto get = [&](const char* key, Real& field) {
        if (j.contains(key)) field = j.at(key).get<Real>();
    };
    get("hermiticity", tol.hermiticity);
    get("trace_one", tol.trace_one);
    get("min_eigenvalue", tol.min_eigenvalue);
    get("unitarity", tol.unitarity);
    get("projector", tol.projector);
    get("zero_p00", tol.zero_p00);
    get("probability_floor", tol.probability_floor);
    get("denominator_floor", tol.denominator_floor);
    get("dual_path", tol.dual_path);
    get("probability_sum", tol.probability_sum);
    get("structure", tol.structure);
    get("asymptotic_residual", tol.asymptotic_residual);
}

}  // namespace

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed JSON: ") + e.what());
    }

    try {
        ExperimentConfig cfg;
        if (j.contains("tolerances"))
            apply_tolerance_overrides(j.at("tolerances"), cfg.tol);

        const json& model = j.at("model");
        cfg.model_type = model.at("type").get<std::string>();
        cfg.dim_system = model.at("dim_system").get<int>();
        cfg.dim_field = model.at("dim_field").get<int>();
        if (cfg.dim_system < 1 || cfg.dim_field < 1)
            throw ConfigError("model dimensions must be positive");
        if (cfg.model_type == "hamiltonian") {
            HamiltonianModel hm;
            hm.h0 = required_matrix(model, "h0");
            hm.h_field = required_matrix(model, "h_field");
            if (model.contains("interaction"))
                for (const auto& pair : model.at("interaction"))
                    hm.interaction_ops.emplace_back(
                        required_matrix(pair, "v"), required_matrix(pair, "w"));
            if (model.contains("scaling_exponent"))
                hm.interaction_scaling_exponent =
                    model.at("scaling_exponent").get<Real>();
            if (hm.system_dim() != cfg.dim_system ||
                hm.field_dim() != cfg.dim_field)
                throw ConfigError("model matrices disagree with declared dimensions");
            cfg.hamiltonian = std::move(hm);
        } else if (cfg.model_type == "coefficients") {
            cfg.l00 = required_matrix(model, "l00");
            if (model.contains("lk0"))
                for (const auto& mj : model.at("lk0"))
                    cfg.lk0.push_back(matrix_from_json(mj));
            if (cfg.l00.rows() != cfg.dim_system ||
                static_cast<int>(cfg.lk0.size()) + 1 != cfg.dim_field)
                throw ConfigError("coefficient blocks disagree with declared dimensions");
        } else {
            throw ConfigError("model type must be hamiltonian or coefficients");
        }

        const json& obs = j.at("observable");
        cfg.eigenvalues = obs.at("eigenvalues").get<std::vector<Real>>();
        for (const auto& pj : obs.at("projectors"))
            cfg.projectors.push_back(matrix_from_json(pj));
        if (cfg.eigenvalues.size() != cfg.projectors.size())
            throw ConfigError("observable needs one eigenvalue per projector");
        for (const auto& p : cfg.projectors)
            if (p.rows() != cfg.dim_field)
                throw ConfigError("projector dimension disagrees with the field");

        cfg.initial_state = required_matrix(j, "initial_state");
        if (cfg.initial_state.rows() != cfg.dim_system)
            throw ConfigError("initial state dimension disagrees with the system");

        const json& run = j.at("run");
        if (!run.contains("seed"))
            throw ConfigError("run.seed is mandatory (no wall-clock default)");
        cfg.run.seed = run.at("seed").get<std::uint64_t>();
        auto opt = [&](const char* key, auto& field) {
            if (run.contains(key))
                field = run.at(key)
                            .get<std::remove_reference_t<decltype(field)>>();
        };
        opt("horizon", cfg.run.horizon);
        opt("paths", cfg.run.paths);
        opt("n_values", cfg.run.n_values);
        opt("steps_per_unit", cfg.run.steps_per_unit);
        opt("k_trunc", cfg.run.k_trunc);
        opt("times", cfg.run.times);
        opt("record_stride", cfg.run.record_stride);
        opt("threads", cfg.run.threads);
        opt("bias_budget", cfg.run.bias_budget);
        opt("state_sample", cfg.run.state_sample);
        if (cfg.run.horizon <= 0 || cfg.run.paths < 1 ||
            cfg.run.n_values.empty() || cfg.run.steps_per_unit < 1 ||
            cfg.run.k_trunc <= 1.0)
            throw ConfigError("run parameters out of range");

        if (j.contains("output"))
            cfg.out_dir = j.at("output").get<std::string>();
        return cfg;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config structure: ") + e.what());
    }
}

std::string format_real(Real x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace {

void append_state_columns(std::string& row, const Matrix& m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            row += ',';
            row += format_real(m(i, c).real());
            row += ',';
            row += format_real(m(i, c).imag());
        }
}

std::string state_header(const char* prefix, Eigen::Index d) {
    std::string h;
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index c = 0; c < d; ++c) {
            h += ',';
            h += prefix;
            h += "re_" + std::to_string(i) + "_" + std::to_string(c);
            h += ',';
            h += prefix;
            h += "im_" + std::to_string(i) + "_" + std::to_string(c);
        }
    return h;
}

}  // namespace

void write_path_csv(const std::filesystem::path& file,
                    const RecordedPath& path,
                    const std::vector<Real>& time_grid) {
    if (path.states.size() != time_grid.size())
        throw DimensionError("path states do not align with the time grid");
    std::ofstream out(file);
    if (!out) throw ConfigError("cannot open " + file.string());
    const Eigen::Index d = path.states.front().rows();
    out << "time,outcome" << state_header("", d) << "\n";
    for (std::size_t i = 0; i < path.states.size(); ++i) {
        std::string row = format_real(time_grid[i]);
        row += ',';
        // Outcome column: the outcome producing this instant's state; -1 for
        // the initial instant, SDE paths, and strided discrete recordings
        // (where the per-instant outcome is not defined).
        if (i > 0 && path.states.size() == path.outcomes.size() + 1)
            row += std::to_string(static_cast<int>(path.outcomes[i - 1]));
        else
            row += "-1";
        append_state_columns(row, path.states[i]);
        out << row << "\n";
    }
}

void write_jump_log_csv(const std::filesystem::path& file,
                        const RecordedPath& path) {
    std::ofstream out(file);
    if (!out) throw ConfigError("cannot open " + file.string());
    const Eigen::Index d =
        path.jumps.empty() ? 0 : path.jumps.front().pre_state.rows();
    out << "time,channel,acceptance_uniform,accepted"
        << state_header("pre_", d) << state_header("post_", d) << "\n";
    for (const auto& e : path.jumps) {
        std::string row = format_real(e.time);
        row += ',' + std::to_string(e.channel);
        row += ',' + format_real(e.acceptance_uniform);
        row += ',' + std::to_string(e.accepted ? 1 : 0);
        append_state_columns(row, e.pre_state);
        append_state_columns(row, e.post_state);
        out << row << "\n";
    }
}

nlohmann::json ensemble_summary(const TrajectoryEnsemble& ensemble,
                                const std::vector<Real>& times) {
    json j;
    j["kind"] = ensemble.kind == TrajectoryKind::discrete ? "discrete"
                                                          : "continuous";
    j["paths"] = ensemble.paths.size();
    if (ensemble.kind == TrajectoryKind::discrete) j["n"] = ensemble.n;
    json per_time = json::array();
    for (Real t : times) {
        const MomentSummary m = ensemble_moments(ensemble, t);
        json entry;
        entry["time"] = t;
        entry["mean"] = matrix_to_json(m.mean);
        entry["std_error_re"] =
            matrix_to_json(m.std_error_re.cast<Complex>());
        entry["std_error_im"] =
            matrix_to_json(m.std_error_im.cast<Complex>());
        per_time.push_back(std::move(entry));
    }
    j["moments"] = std::move(per_time);

    if (ensemble.kind == TrajectoryKind::discrete) {
        std::vector<std::int64_t> outcome_counts;
        for (const auto& path : ensemble.paths)
            for (const std::size_t o : path.outcomes) {
                if (outcome_counts.size() <= o) outcome_counts.resize(o + 1, 0);
                ++outcome_counts[o];
            }
        j["outcome_counts"] = outcome_counts;
    } else {
        std::vector<std::int64_t> jump_counts;
        std::vector<Real> intensity;
        for (const auto& path : ensemble.paths) {
            if (jump_counts.size() < path.jump_counts.size()) {
                jump_counts.resize(path.jump_counts.size(), 0);
                intensity.resize(path.integrated_intensity.size(), 0.0);
            }
            for (std::size_t c = 0; c < path.jump_counts.size(); ++c) {
                jump_counts[c] += path.jump_counts[c];
                intensity[c] += path.integrated_intensity[c];
            }
        }
        j["jump_counts"] = jump_counts;
        j["integrated_intensity"] = intensity;
    }
    return j;
}

nlohmann::json generator_report_json(const GeneratorReport& report) {
    json j;
    j["n_values"] = report.n_values;
    j["sup_gaps"] = report.sup_gaps;
    j["slope"] = report.slope;
    j["threshold"] = report.threshold;
    j["pass"] = report.pass;
    return j;
}

nlohmann::json convergence_report_json(const ConvergenceReport& report) {
    json j;
    j["pass"] = report.pass;
    json checks = json::array();
    for (const auto& c : report.checks) {
        json e;
        e["statistic"] = c.statistic;
        e["time"] = c.time;
        e["gaps"] = c.gaps;
        e["std_errors"] = c.std_errors;
        e["sde_std_error"] = c.sde_std_error;
        e["monotone"] = c.monotone;
        e["measured_mean_bias"] = c.measured_mean_bias;
        e["measured_dist_bias"] = c.measured_dist_bias;
        e["budget"] = c.budget;
        e["within_budget"] = c.within_budget;
        e["distance"] = c.dist;
        e["distance_threshold"] = c.dist_threshold;
        e["distance_pass"] = c.dist_pass;
        e["pass"] = c.pass;
        checks.push_back(std::move(e));
    }
    j["checks"] = std::move(checks);
    return j;
}

std::string render_convergence_report(const ConvergenceReport& report) {
    std::string out;
    for (const auto& c : report.checks) {
        out += (c.pass ? "PASS " : "FAIL ") + c.statistic + " @ t=" +
               format_real(c.time) + ": gaps";
        for (Real g : c.gaps) out += ' ' + format_real(g);
        out += " budget " + format_real(c.budget);
        out += c.monotone ? " monotone" : " NOT-monotone";
        out += " dist " + format_real(c.dist) + "/" +
               format_real(c.dist_threshold);
        out += '\n';
    }
    out += report.pass ? "ALL CHECKS PASS\n" : "CHECK FAILURES PRESENT\n";
    return out;
}

void write_json(const std::filesystem::path& file, const nlohmann::json& j) {
    std::ofstream out(file);
    if (!out) throw ConfigError("cannot open " + file.string());
    out << j.dump(2) << "\n";
}

}  // namespace qtraj
