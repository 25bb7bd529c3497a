#pragma once

#include <string>
#include <utility>
#include <vector>

#include "proxplast/driver.hpp"

namespace proxplast {

/// Model file parsed and assembled: the model (with `load` holding the
/// reference pattern), the load program, solver settings with file overrides
/// applied, and the monitored dofs for the path output.
struct ParsedModel {
    std::string name;
    Model model;
    LoadPath path;
    SolverConfig solver;
    std::vector<std::pair<int, int>> monitor; ///< (node, direction) pairs
};

/// Parse a model document. The schema is strict: unknown keys, missing
/// required fields, and nonpositive physical constants are rejected with a
/// named InputError.
ParsedModel parse_model_json(const std::string& text);

/// parse_model_json on the contents of a file.
ParsedModel load_model_file(const std::string& filename);

/// Per-step field dump, self-sufficient for verification: the increment, the
/// accumulated fields, and the stresses at the start and end of the step.
struct StateDump {
    std::string model_name;
    int step = 0; ///< 1-based
    double lambda = 0.0;
    int num_dofs = 0;
    int num_points = 0;
    std::vector<double> du;
    std::vector<double> total_u;
    std::vector<SymTensor3> eps_p;
    std::vector<SymTensor3> total_eps_p;
    std::vector<SymTensor3> sigma0;
    std::vector<SymTensor3> sigma;
};

std::string state_dump_json(const ParsedModel& pm, int step_index, const StepRecord& step);
StateDump parse_state_dump(const std::string& text);
StateDump load_state_dump(const std::string& filename);

/// Check a dumped state against the model it came from: rebuilds the loaded
/// configuration (lambda * q_ref, sigma0 from the dump) and runs kkt_check.
/// Throws InputError on dimension mismatch.
KktReport verify_state_dump(const ParsedModel& pm, const StateDump& dump, double tol);

/// Path summary, one row per step: step, lambda, monitored displacements,
/// iteration count, max KKT residual, converged flag. Floats carry 17
/// significant digits so round trips are exact.
std::string path_csv(const ParsedModel& pm, const PathRecord& record);

/// Full diagnostics document: per-step convergence reports with the
/// iteration history (iter, objective, residual norm, step norms, restarted)
/// and the final KKT residuals.
std::string diagnostics_json(const ParsedModel& pm, const PathRecord& record);

std::string kkt_report_json(const KktReport& report);

void write_text_file(const std::string& filename, const std::string& text);
std::string read_text_file(const std::string& filename);

} // namespace proxplast
