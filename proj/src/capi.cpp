#include "proxplast/proxplast.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "proxplast/model_io.hpp"
#include "proxplast/version.hpp"

using namespace proxplast;

struct pxp_model_s {
    ParsedModel pm;
};

struct pxp_result_s {
    ParsedModel pm; // snapshot the run was made against
    PathRecord record;
};

namespace {

thread_local std::string t_last_error;

pxp_status set_error(pxp_status status, const std::string& message) {
    t_last_error = message;
    return status;
}

pxp_status classify(const std::exception& e) {
    const std::string what = e.what();
    if (dynamic_cast<const InputError*>(&e) != nullptr) {
        if (what.find("cannot open") != std::string::npos ||
            what.find("failed writing") != std::string::npos)
            return set_error(PXP_ERR_IO, what);
        if (what.find("malformed JSON") != std::string::npos ||
            what.find("unknown key") != std::string::npos ||
            what.find("missing required") != std::string::npos)
            return set_error(PXP_ERR_PARSE, what);
        if (what.find("dimensions do not match") != std::string::npos)
            return set_error(PXP_ERR_DIMENSION, what);
        return set_error(PXP_ERR_MODEL, what);
    }
    return set_error(PXP_ERR_INTERNAL, what);
}

template <typename Fn>
pxp_status guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const std::exception& e) {
        return classify(e);
    } catch (...) {
        return set_error(PXP_ERR_INTERNAL, "unknown error");
    }
}

bool valid_step(const pxp_result* result, int step) {
    return result != nullptr && step >= 0 &&
           step < static_cast<int>(result->record.steps.size());
}

} // namespace

extern "C" {

const char* pxp_version(void) { return version_string; }

const char* pxp_status_name(pxp_status status) {
    switch (status) {
        case PXP_OK: return "ok";
        case PXP_ERR_ARGUMENT: return "invalid argument";
        case PXP_ERR_IO: return "io error";
        case PXP_ERR_PARSE: return "parse error";
        case PXP_ERR_MODEL: return "model error";
        case PXP_ERR_DIMENSION: return "dimension mismatch";
        case PXP_ERR_INTERNAL: return "internal error";
    }
    return "unknown";
}

const char* pxp_last_error(void) { return t_last_error.c_str(); }

pxp_status pxp_model_load_file(const char* path, pxp_model** out) {
    if (path == nullptr || out == nullptr) return set_error(PXP_ERR_ARGUMENT, "null argument");
    *out = nullptr;
    return guarded([&]() {
        auto model = new pxp_model_s{load_model_file(path)};
        *out = model;
        return PXP_OK;
    });
}

pxp_status pxp_model_parse_json(const char* text, pxp_model** out) {
    if (text == nullptr || out == nullptr) return set_error(PXP_ERR_ARGUMENT, "null argument");
    *out = nullptr;
    return guarded([&]() {
        auto model = new pxp_model_s{parse_model_json(text)};
        *out = model;
        return PXP_OK;
    });
}

void pxp_model_free(pxp_model* model) { delete model; }

int pxp_model_num_dofs(const pxp_model* model) {
    return model != nullptr ? model->pm.model.num_dofs : 0;
}

int pxp_model_num_points(const pxp_model* model) {
    return model != nullptr ? model->pm.model.num_points() : 0;
}

int pxp_model_num_steps(const pxp_model* model) {
    return model != nullptr ? static_cast<int>(model->pm.path.steps.size()) : 0;
}

const char* pxp_model_name(const pxp_model* model) {
    return model != nullptr ? model->pm.name.c_str() : "";
}

void pxp_options_init(pxp_options* options) {
    if (options == nullptr) return;
    options->mode = PXP_MODE_ACCEL_RESTART;
    options->tol = 0.0;
    options->max_iters = 0;
    options->alpha_scale = 0.0;
    options->threads = -1;
}

pxp_status pxp_solve_path(const pxp_model* model, const pxp_options* options, pxp_result** out) {
    if (model == nullptr || out == nullptr) return set_error(PXP_ERR_ARGUMENT, "null argument");
    *out = nullptr;
    return guarded([&]() -> pxp_status {
        SolverConfig cfg = model->pm.solver;
        if (options != nullptr) {
            switch (options->mode) {
                case PXP_MODE_PLAIN: cfg.mode = SolveMode::plain; break;
                case PXP_MODE_ACCEL: cfg.mode = SolveMode::accelerated; break;
                case PXP_MODE_ACCEL_RESTART: cfg.mode = SolveMode::accelerated_restart; break;
                default: return set_error(PXP_ERR_ARGUMENT, "unknown solve mode");
            }
            if (options->tol > 0.0) cfg.tol = options->tol;
            if (options->max_iters > 0) cfg.max_iters = options->max_iters;
            if (options->alpha_scale > 0.0) {
                if (options->alpha_scale > 1.0)
                    return set_error(PXP_ERR_ARGUMENT, "alpha_scale must lie in (0, 1]");
                cfg.alpha_scale = options->alpha_scale;
            }
            if (options->threads >= 0) cfg.threads = options->threads;
        }
        auto result = new pxp_result_s{model->pm, PathRecord{}};
        result->pm.solver = cfg;
        result->record = run_path(result->pm.model, result->pm.path, cfg);
        *out = result;
        return PXP_OK;
    });
}

void pxp_result_free(pxp_result* result) { delete result; }

int pxp_result_num_steps(const pxp_result* result) {
    return result != nullptr ? static_cast<int>(result->record.steps.size()) : 0;
}

int pxp_result_truncated(const pxp_result* result) {
    return result != nullptr && result->record.truncated ? 1 : 0;
}

double pxp_result_failed_lambda(const pxp_result* result) {
    return result != nullptr ? result->record.failed_lambda : 0.0;
}

const char* pxp_result_failure(const pxp_result* result) {
    return result != nullptr ? result->record.failure.c_str() : "";
}

double pxp_result_step_lambda(const pxp_result* result, int step) {
    return valid_step(result, step) ? result->record.steps[static_cast<std::size_t>(step)].lambda : 0.0;
}

long long pxp_result_step_iterations(const pxp_result* result, int step) {
    return valid_step(result, step) ? result->record.steps[static_cast<std::size_t>(step)].iterations : 0;
}

int pxp_result_step_converged(const pxp_result* result, int step) {
    return valid_step(result, step) && result->record.steps[static_cast<std::size_t>(step)].converged ? 1 : 0;
}

pxp_status pxp_result_total_displacement(const pxp_result* result, int step, double* buf, size_t len) {
    if (!valid_step(result, step) || buf == nullptr)
        return set_error(PXP_ERR_ARGUMENT, "bad result handle, step index, or buffer");
    const auto& u = result->record.steps[static_cast<std::size_t>(step)].total_u;
    if (len < u.size()) return set_error(PXP_ERR_ARGUMENT, "buffer too small");
    std::memcpy(buf, u.data(), u.size() * sizeof(double));
    return PXP_OK;
}

pxp_status pxp_result_write_path_csv(const pxp_result* result, const char* path) {
    if (result == nullptr || path == nullptr) return set_error(PXP_ERR_ARGUMENT, "null argument");
    return guarded([&]() {
        write_text_file(path, path_csv(result->pm, result->record));
        return PXP_OK;
    });
}

pxp_status pxp_result_write_diagnostics(const pxp_result* result, const char* path) {
    if (result == nullptr || path == nullptr) return set_error(PXP_ERR_ARGUMENT, "null argument");
    return guarded([&]() {
        write_text_file(path, diagnostics_json(result->pm, result->record));
        return PXP_OK;
    });
}

pxp_status pxp_result_write_state_dump(const pxp_result* result, int step, const char* path) {
    if (!valid_step(result, step) || path == nullptr)
        return set_error(PXP_ERR_ARGUMENT, "bad result handle, step index, or path");
    return guarded([&]() {
        write_text_file(path, state_dump_json(result->pm, step,
                                              result->record.steps[static_cast<std::size_t>(step)]));
        return PXP_OK;
    });
}

pxp_status pxp_verify_state_file(const pxp_model* model, const char* state_path, double tol,
                                 int* pass, char** report_json) {
    if (model == nullptr || state_path == nullptr || pass == nullptr)
        return set_error(PXP_ERR_ARGUMENT, "null argument");
    *pass = 0;
    if (report_json != nullptr) *report_json = nullptr;
    return guarded([&]() {
        const StateDump dump = load_state_dump(state_path);
        const KktReport report = verify_state_dump(model->pm, dump, tol);
        *pass = report.pass ? 1 : 0;
        if (report_json != nullptr) {
            const std::string text = kkt_report_json(report);
            char* buf = static_cast<char*>(std::malloc(text.size() + 1));
            if (buf == nullptr) return set_error(PXP_ERR_INTERNAL, "out of memory");
            std::memcpy(buf, text.c_str(), text.size() + 1);
            *report_json = buf;
        }
        return PXP_OK;
    });
}

void pxp_string_free(char* text) { std::free(text); }

} // extern "C"
