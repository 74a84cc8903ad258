#pragma once

// Persistence: JSON configs and reports, CSV trajectory data.
//
// Complex matrices serialize as {"rows": n, "cols": m, "re": [...],
// "im": [...]} with entries in row-major order.  Path CSVs carry one row
// per recorded instant: time, outcome, then Re/Im of the state entries in
// row-major order.  The jump log carries one row per thinning candidate:
// time, channel, acceptance uniform, accepted flag, then pre/post state
// entries.  All floating-point fields print with %.17g so re-runs are
// byte-identical.

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "qtraj/discrete.hpp"
#include "qtraj/sde.hpp"
#include "qtraj/verify.hpp"

namespace qtraj {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

nlohmann::json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const nlohmann::json& j);

struct RunParams {
    std::uint64_t seed = 0;          // mandatory in config files
    Real horizon = 1.0;
    int paths = 100;
    std::vector<std::int64_t> n_values = {1000};
    std::int64_t steps_per_unit = 1000;  // SDE Euler grid
    Real k_trunc = 2.0;
    std::vector<Real> times = {1.0};
    std::int64_t record_stride = 1;
    int threads = 0;
    Real bias_budget = 0;            // scheme-bias allowance for converge
    int state_sample = 50;           // gencheck states per n
};

struct ExperimentConfig {
    // Model: either Hamiltonian data or direct limit coefficients.
    std::string model_type;  // "hamiltonian" | "coefficients"
    std::optional<HamiltonianModel> hamiltonian;
    Matrix l00;                  // coefficients form
    std::vector<Matrix> lk0;
    int dim_system = 0;
    int dim_field = 0;

    std::vector<Real> eigenvalues;
    std::vector<Matrix> projectors;
    Matrix initial_state;
    RunParams run;
    std::filesystem::path out_dir = "out";
    ToleranceProfile tol = default_tolerances();

    SpectralObservable observable() const;
    UnitaryFamily family() const;
    /// Direct for "coefficients"; extracted from the family at large n for
    /// "hamiltonian".
    LimitCoefficients coefficients() const;
    LimitMaps maps() const;
};

/// Parse and structurally validate a config file; throws ConfigError on
/// malformed input (missing seed, inconsistent dimensions, bad JSON).
ExperimentConfig load_config(const std::filesystem::path& path);

/// Deterministic %.17g rendering shared by every writer.
std::string format_real(Real x);

void write_path_csv(const std::filesystem::path& file,
                    const RecordedPath& path,
                    const std::vector<Real>& time_grid);
void write_jump_log_csv(const std::filesystem::path& file,
                        const RecordedPath& path);
/// Per-time mean matrix, entrywise standard errors, and jump/outcome counts.
nlohmann::json ensemble_summary(const TrajectoryEnsemble& ensemble,
                                const std::vector<Real>& times);
nlohmann::json generator_report_json(const GeneratorReport& report);
nlohmann::json convergence_report_json(const ConvergenceReport& report);
std::string render_convergence_report(const ConvergenceReport& report);

void write_json(const std::filesystem::path& file, const nlohmann::json& j);

}  // namespace qtraj
