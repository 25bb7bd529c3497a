// Command-line front end for the proxplast shared library. Talks to the
// solver exclusively through the C API in proxplast/proxplast.h.

#include <cstdio>
#include <filesystem>
#include <memory>
#include <string>

#include <CLI11.hpp>

#include "proxplast/proxplast.h"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_input_error = 1;
constexpr int exit_truncated = 2;
constexpr int exit_verify_failed = 3;

struct ModelDeleter {
    void operator()(pxp_model* m) const { pxp_model_free(m); }
};
struct ResultDeleter {
    void operator()(pxp_result* r) const { pxp_result_free(r); }
};

int parse_threads(const std::string& text, int& threads) {
    if (text == "auto") {
        threads = 0;
        return 0;
    }
    try {
        threads = std::stoi(text);
    } catch (const std::exception&) {
        return -1;
    }
    return threads >= 1 ? 0 : -1;
}

int run_solve(const std::string& model_path, const std::string& mode, double tol,
              long long max_iters, double alpha_scale, const std::string& out_dir,
              const std::string& threads_text, bool dump_fields) {
    pxp_options options;
    pxp_options_init(&options);
    if (mode == "plain")
        options.mode = PXP_MODE_PLAIN;
    else if (mode == "accel")
        options.mode = PXP_MODE_ACCEL;
    else
        options.mode = PXP_MODE_ACCEL_RESTART;
    options.tol = tol;
    options.max_iters = max_iters;
    options.alpha_scale = alpha_scale;
    if (parse_threads(threads_text, options.threads) != 0) {
        std::fprintf(stderr, "error: --threads expects a positive integer or 'auto'\n");
        return exit_input_error;
    }

    pxp_model* raw_model = nullptr;
    if (pxp_model_load_file(model_path.c_str(), &raw_model) != PXP_OK) {
        std::fprintf(stderr, "error: %s\n", pxp_last_error());
        return exit_input_error;
    }
    std::unique_ptr<pxp_model, ModelDeleter> model(raw_model);

    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) {
        std::fprintf(stderr, "error: cannot create output directory '%s'\n", out_dir.c_str());
        return exit_input_error;
    }

    pxp_result* raw_result = nullptr;
    if (pxp_solve_path(model.get(), &options, &raw_result) != PXP_OK) {
        std::fprintf(stderr, "error: %s\n", pxp_last_error());
        return exit_input_error;
    }
    std::unique_ptr<pxp_result, ResultDeleter> result(raw_result);

    const std::string csv_path = out_dir + "/path.csv";
    const std::string diag_path = out_dir + "/diagnostics.json";
    if (pxp_result_write_path_csv(result.get(), csv_path.c_str()) != PXP_OK ||
        pxp_result_write_diagnostics(result.get(), diag_path.c_str()) != PXP_OK) {
        std::fprintf(stderr, "error: %s\n", pxp_last_error());
        return exit_input_error;
    }

    const int steps = pxp_result_num_steps(result.get());
    for (int i = 0; i < steps; ++i) {
        if (dump_fields) {
            char name[64];
            std::snprintf(name, sizeof name, "/step_%03d.json", i + 1);
            const std::string dump_path = out_dir + name;
            if (pxp_result_write_state_dump(result.get(), i, dump_path.c_str()) != PXP_OK) {
                std::fprintf(stderr, "error: %s\n", pxp_last_error());
                return exit_input_error;
            }
        }
        std::printf("step %d: lambda %- 10g %s in %lld iterations\n", i + 1,
                    pxp_result_step_lambda(result.get(), i),
                    pxp_result_step_converged(result.get(), i) ? "converged" : "FAILED",
                    pxp_result_step_iterations(result.get(), i));
    }
    std::printf("wrote %s and %s\n", csv_path.c_str(), diag_path.c_str());

    if (pxp_result_truncated(result.get())) {
        std::fprintf(stderr, "path truncated at lambda %g: %s\n",
                     pxp_result_failed_lambda(result.get()), pxp_result_failure(result.get()));
        return exit_truncated;
    }
    return exit_ok;
}

int run_verify(const std::string& model_path, const std::string& state_path, double tol) {
    pxp_model* raw_model = nullptr;
    if (pxp_model_load_file(model_path.c_str(), &raw_model) != PXP_OK) {
        std::fprintf(stderr, "error: %s\n", pxp_last_error());
        return exit_input_error;
    }
    std::unique_ptr<pxp_model, ModelDeleter> model(raw_model);

    int pass = 0;
    char* report = nullptr;
    if (pxp_verify_state_file(model.get(), state_path.c_str(), tol, &pass, &report) != PXP_OK) {
        std::fprintf(stderr, "error: %s\n", pxp_last_error());
        return exit_input_error;
    }
    if (report != nullptr) {
        std::fputs(report, stdout);
        pxp_string_free(report);
    }
    return pass != 0 ? exit_ok : exit_verify_failed;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quasi-static elastoplastic analysis by accelerated proximal gradients"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(pxp_version()));

    std::string model_path, state_path;
    std::string mode = "accel-restart";
    std::string out_dir = "out";
    std::string threads_text = "1";
    double tol = 0.0;
    long long max_iters = 0;
    double alpha_scale = 0.0;
    bool dump_fields = false;
    double verify_tol = 1e-6;

    CLI::App* solve = app.add_subcommand("solve", "Run the load program of a model file");
    solve->add_option("model", model_path, "model JSON file")->required();
    solve->add_option("--mode", mode, "iteration mode")
        ->check(CLI::IsMember({"plain", "accel", "accel-restart"}))
        ->capture_default_str();
    solve->add_option("--tol", tol, "relative convergence tolerance");
    solve->add_option("--max-iters", max_iters, "iteration cap per load step");
    solve->add_option("--alpha-scale", alpha_scale, "step length as a fraction of 1/L, in (0,1]");
    solve->add_option("--out", out_dir, "output directory")->capture_default_str();
    solve->add_option("--threads", threads_text, "worker threads (integer or 'auto')")
        ->capture_default_str();
    solve->add_flag("--dump-fields", dump_fields, "write a per-step field dump (step_###.json)");

    CLI::App* verify = app.add_subcommand("verify", "Check a dumped state against its model");
    verify->add_option("model", model_path, "model JSON file")->required();
    verify->add_option("state", state_path, "state dump JSON file")->required();
    verify->add_option("--tol", verify_tol, "residual tolerance")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? exit_ok : exit_input_error;
    }

    if (solve->parsed())
        return run_solve(model_path, mode, tol, max_iters, alpha_scale, out_dir, threads_text,
                         dump_fields);
    return run_verify(model_path, state_path, verify_tol);
}
