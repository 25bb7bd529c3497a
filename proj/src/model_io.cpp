#include "proxplast/model_io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "proxplast/assemble.hpp"

namespace proxplast {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw InputError(where + ": " + what);
}

void require_keys(const json& obj, const std::string& where,
                  std::initializer_list<const char*> required,
                  std::initializer_list<const char*> optional) {
    if (!obj.is_object()) fail(where, "expected an object");
    for (const char* key : required)
        if (!obj.contains(key)) fail(where, std::string("missing required key '") + key + "'");
    for (const auto& item : obj.items()) {
        bool known = false;
        for (const char* key : required)
            if (item.key() == key) known = true;
        for (const char* key : optional)
            if (item.key() == key) known = true;
        if (!known) fail(where, "unknown key '" + item.key() + "'");
    }
}

double get_number(const json& obj, const std::string& where, const char* key) {
    const json& v = obj.at(key);
    if (!v.is_number()) fail(where, std::string("'") + key + "' must be a number");
    return v.get<double>();
}

double get_positive(const json& obj, const std::string& where, const char* key) {
    const double x = get_number(obj, where, key);
    if (!(x > 0.0)) fail(where, std::string("'") + key + "' must be > 0");
    return x;
}

int get_index(const json& obj, const std::string& where, const char* key) {
    const json& v = obj.at(key);
    if (!v.is_number_integer()) fail(where, std::string("'") + key + "' must be an integer");
    return v.get<int>();
}

YieldCriterion parse_criterion(const json& obj, const std::string& where) {
    if (!obj.is_object() || !obj.contains("type")) fail(where, "criterion must be an object with a 'type'");
    const std::string type = obj.at("type").get<std::string>();
    if (type == "elastic") {
        require_keys(obj, where, {"type"}, {});
        return YieldCriterion::elastic();
    }
    if (type == "truss_box") {
        require_keys(obj, where, {"type", "R"}, {});
        return YieldCriterion::truss_box(get_positive(obj, where, "R"));
    }
    if (type == "von_mises") {
        require_keys(obj, where, {"type", "kappa"}, {});
        return YieldCriterion::von_mises(get_positive(obj, where, "kappa"));
    }
    fail(where, "unknown criterion type '" + type + "'");
}

SolveMode parse_mode(const std::string& mode, const std::string& where) {
    if (mode == "plain") return SolveMode::plain;
    if (mode == "accel") return SolveMode::accelerated;
    if (mode == "accel_restart" || mode == "accel-restart") return SolveMode::accelerated_restart;
    fail(where, "unknown mode '" + mode + "' (expected plain, accel, or accel_restart)");
}

// %.17g round-trips doubles exactly.
std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

json tensor_to_json(const SymTensor3& t) {
    return json::array({t[0], t[1], t[2], t[3], t[4], t[5]});
}

SymTensor3 tensor_from_json(const json& arr, const std::string& where) {
    if (!arr.is_array() || arr.size() != 6) fail(where, "expected a 6-component tensor array");
    SymTensor3 t;
    for (int i = 0; i < 6; ++i) t[i] = arr.at(static_cast<std::size_t>(i)).get<double>();
    return t;
}

std::vector<SymTensor3> tensors_from_json(const json& arr, const std::string& where) {
    if (!arr.is_array()) fail(where, "expected an array of tensors");
    std::vector<SymTensor3> out;
    out.reserve(arr.size());
    for (const json& item : arr) out.push_back(tensor_from_json(item, where));
    return out;
}

} // namespace

ParsedModel parse_model_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        fail("model", std::string("malformed JSON: ") + e.what());
    }

    require_keys(doc, "model", {"element_type", "nodes", "elements", "supports", "loads"},
                 {"name", "load_path", "load_sequence", "allow_nonmonotone", "solver", "monitor",
                  "thickness", "plane_strain"});

    ParsedModel pm;
    if (doc.contains("name")) pm.name = doc.at("name").get<std::string>();

    std::vector<std::array<double, 2>> nodes;
    for (const json& n : doc.at("nodes")) {
        if (!n.is_array() || n.size() != 2) fail("model.nodes", "each node is a [x, y] pair");
        nodes.push_back({n.at(0).get<double>(), n.at(1).get<double>()});
    }

    std::vector<Support> supports;
    for (const json& s : doc.at("supports")) {
        require_keys(s, "model.supports", {"node", "dof"}, {});
        supports.push_back({get_index(s, "model.supports", "node"), get_index(s, "model.supports", "dof")});
    }

    std::vector<NodalLoad> loads;
    for (const json& f : doc.at("loads")) {
        require_keys(f, "model.loads", {"node", "dof", "value"}, {});
        loads.push_back({get_index(f, "model.loads", "node"), get_index(f, "model.loads", "dof"),
                         get_number(f, "model.loads", "value")});
    }

    const std::string family = doc.at("element_type").get<std::string>();
    if (family == "truss") {
        if (doc.contains("thickness") || doc.contains("plane_strain"))
            fail("model", "'thickness'/'plane_strain' apply to cst2d models only");
        std::vector<Bar> bars;
        for (std::size_t e = 0; e < doc.at("elements").size(); ++e) {
            const json& el = doc.at("elements").at(e);
            const std::string where = "model.elements[" + std::to_string(e) + "]";
            require_keys(el, where, {"nodes", "E", "A"}, {"criterion", "R"});
            if (!el.at("nodes").is_array() || el.at("nodes").size() != 2)
                fail(where, "a bar connects exactly 2 nodes");
            Bar bar;
            bar.node_i = el.at("nodes").at(0).get<int>();
            bar.node_j = el.at("nodes").at(1).get<int>();
            bar.youngs = get_positive(el, where, "E");
            bar.area = get_positive(el, where, "A");
            if (el.contains("criterion") == el.contains("R"))
                fail(where, "give exactly one of 'criterion' or the shorthand 'R'");
            bar.criterion = el.contains("R")
                                ? YieldCriterion::truss_box(get_positive(el, where, "R"))
                                : parse_criterion(el.at("criterion"), where + ".criterion");
            bars.push_back(bar);
        }
        pm.model = assemble_truss(nodes, bars, supports, loads);
    } else if (family == "cst2d") {
        const double thickness = doc.contains("thickness") ? get_positive(doc, "model", "thickness") : 1.0;
        const bool plane_strain = doc.contains("plane_strain") ? doc.at("plane_strain").get<bool>() : true;
        std::vector<Triangle> triangles;
        for (std::size_t e = 0; e < doc.at("elements").size(); ++e) {
            const json& el = doc.at("elements").at(e);
            const std::string where = "model.elements[" + std::to_string(e) + "]";
            require_keys(el, where, {"nodes", "E", "nu"}, {"criterion", "kappa"});
            if (!el.at("nodes").is_array() || el.at("nodes").size() != 3)
                fail(where, "a triangle connects exactly 3 nodes");
            Triangle tri;
            tri.node_i = el.at("nodes").at(0).get<int>();
            tri.node_j = el.at("nodes").at(1).get<int>();
            tri.node_k = el.at("nodes").at(2).get<int>();
            tri.youngs = get_positive(el, where, "E");
            tri.poisson = get_number(el, where, "nu");
            if (el.contains("criterion") == el.contains("kappa"))
                fail(where, "give exactly one of 'criterion' or the shorthand 'kappa'");
            tri.criterion = el.contains("kappa")
                                ? YieldCriterion::von_mises(get_positive(el, where, "kappa"))
                                : parse_criterion(el.at("criterion"), where + ".criterion");
            triangles.push_back(tri);
        }
        pm.model = assemble_cst2d(nodes, triangles, thickness, supports, loads, plane_strain);
    } else {
        fail("model", "unknown element_type '" + family + "' (expected truss or cst2d)");
    }

    // Load program: proportional factors or explicit per-step load patterns.
    if (doc.contains("load_path") == doc.contains("load_sequence"))
        fail("model", "give exactly one of 'load_path' or 'load_sequence'");
    if (doc.contains("allow_nonmonotone"))
        pm.path.allow_nonmonotone = doc.at("allow_nonmonotone").get<bool>();
    if (doc.contains("load_path")) {
        for (std::size_t i = 0; i < doc.at("load_path").size(); ++i) {
            const json& entry = doc.at("load_path").at(i);
            LoadStep step;
            if (entry.is_number()) {
                step.lambda = entry.get<double>();
            } else {
                const std::string where = "model.load_path[" + std::to_string(i) + "]";
                require_keys(entry, where, {"lambda"}, {"tol", "max_iters"});
                step.lambda = get_number(entry, where, "lambda");
                if (entry.contains("tol")) step.tol = get_positive(entry, where, "tol");
                if (entry.contains("max_iters")) step.max_iters = get_index(entry, where, "max_iters");
            }
            pm.path.steps.push_back(std::move(step));
        }
    } else {
        for (std::size_t i = 0; i < doc.at("load_sequence").size(); ++i) {
            const json& pattern = doc.at("load_sequence").at(i);
            const std::string where = "model.load_sequence[" + std::to_string(i) + "]";
            LoadStep step;
            step.lambda = static_cast<double>(i + 1);
            step.explicit_load.assign(static_cast<std::size_t>(pm.model.num_dofs), 0.0);
            if (!pattern.is_array()) fail(where, "expected an array of load entries");
            for (const json& f : pattern) {
                require_keys(f, where, {"node", "dof", "value"}, {});
                const int node = get_index(f, where, "node");
                const int dir = get_index(f, where, "dof");
                if (node < 0 || static_cast<std::size_t>(node) >= pm.model.nodes.size())
                    fail(where, "load node out of range");
                if (dir < 0 || dir > 1) fail(where, "load dof must be 0 or 1");
                const int dof = pm.model.node_dofs[static_cast<std::size_t>(node)][static_cast<std::size_t>(dir)];
                if (dof < 0) fail(where, "load applied to a supported dof");
                step.explicit_load[static_cast<std::size_t>(dof)] += get_number(f, where, "value");
            }
            pm.path.steps.push_back(std::move(step));
        }
        pm.path.allow_nonmonotone = true;
    }
    if (pm.path.steps.empty()) fail("model", "the load program must contain at least one step");
    if (!pm.path.allow_nonmonotone) {
        for (std::size_t i = 1; i < pm.path.steps.size(); ++i)
            if (!(pm.path.steps[i].lambda > pm.path.steps[i - 1].lambda))
                fail("model.load_path", "factors must increase strictly "
                                        "(set allow_nonmonotone to permit unloading)");
    }

    if (doc.contains("solver")) {
        const json& sv = doc.at("solver");
        require_keys(sv, "model.solver", {}, {"mode", "tol", "max_iters", "alpha_scale", "threads"});
        if (sv.contains("mode")) pm.solver.mode = parse_mode(sv.at("mode").get<std::string>(), "model.solver");
        if (sv.contains("tol")) pm.solver.tol = get_positive(sv, "model.solver", "tol");
        if (sv.contains("max_iters")) {
            pm.solver.max_iters = sv.at("max_iters").get<long long>();
            if (pm.solver.max_iters <= 0) fail("model.solver", "'max_iters' must be > 0");
        }
        if (sv.contains("alpha_scale")) {
            pm.solver.alpha_scale = get_positive(sv, "model.solver", "alpha_scale");
            if (pm.solver.alpha_scale > 1.0) fail("model.solver", "'alpha_scale' must lie in (0, 1]");
        }
        if (sv.contains("threads")) pm.solver.threads = get_index(sv, "model.solver", "threads");
    }

    if (doc.contains("monitor")) {
        for (const json& mon : doc.at("monitor")) {
            require_keys(mon, "model.monitor", {"node", "dof"}, {});
            const int node = get_index(mon, "model.monitor", "node");
            const int dir = get_index(mon, "model.monitor", "dof");
            if (node < 0 || static_cast<std::size_t>(node) >= pm.model.nodes.size())
                fail("model.monitor", "node out of range");
            if (dir < 0 || dir > 1) fail("model.monitor", "dof must be 0 or 1");
            if (pm.model.node_dofs[static_cast<std::size_t>(node)][static_cast<std::size_t>(dir)] < 0)
                fail("model.monitor", "monitored dof is supported");
            pm.monitor.emplace_back(node, dir);
        }
    } else {
        // Default: monitor the loaded dofs.
        for (const json& f : doc.at("loads")) {
            const int node = f.at("node").get<int>();
            const int dir = f.at("dof").get<int>();
            const std::pair<int, int> key{node, dir};
            if (std::find(pm.monitor.begin(), pm.monitor.end(), key) == pm.monitor.end())
                pm.monitor.push_back(key);
        }
    }
    return pm;
}

ParsedModel load_model_file(const std::string& filename) {
    return parse_model_json(read_text_file(filename));
}

std::string state_dump_json(const ParsedModel& pm, int step_index, const StepRecord& step) {
    json doc;
    doc["model_name"] = pm.name;
    doc["step"] = step_index + 1;
    doc["lambda"] = step.lambda;
    doc["num_dofs"] = pm.model.num_dofs;
    doc["num_points"] = pm.model.num_points();
    doc["du"] = step.du;
    doc["total_u"] = step.total_u;
    json eps_p = json::array(), total_eps_p = json::array(), sigma0 = json::array(), sigma = json::array();
    for (const SymTensor3& t : step.eps_p) eps_p.push_back(tensor_to_json(t));
    for (const SymTensor3& t : step.total_eps_p) total_eps_p.push_back(tensor_to_json(t));
    for (const SymTensor3& t : step.sigma0) sigma0.push_back(tensor_to_json(t));
    for (const SymTensor3& t : step.sigma) sigma.push_back(tensor_to_json(t));
    doc["eps_p"] = std::move(eps_p);
    doc["total_eps_p"] = std::move(total_eps_p);
    doc["sigma0"] = std::move(sigma0);
    doc["sigma"] = std::move(sigma);
    return doc.dump(2) + "\n";
}

StateDump parse_state_dump(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        fail("state", std::string("malformed JSON: ") + e.what());
    }
    require_keys(doc, "state",
                 {"step", "lambda", "num_dofs", "num_points", "du", "eps_p", "sigma0"},
                 {"model_name", "total_u", "total_eps_p", "sigma"});
    StateDump dump;
    if (doc.contains("model_name")) dump.model_name = doc.at("model_name").get<std::string>();
    dump.step = doc.at("step").get<int>();
    dump.lambda = doc.at("lambda").get<double>();
    dump.num_dofs = doc.at("num_dofs").get<int>();
    dump.num_points = doc.at("num_points").get<int>();
    dump.du = doc.at("du").get<std::vector<double>>();
    if (doc.contains("total_u")) dump.total_u = doc.at("total_u").get<std::vector<double>>();
    dump.eps_p = tensors_from_json(doc.at("eps_p"), "state.eps_p");
    if (doc.contains("total_eps_p"))
        dump.total_eps_p = tensors_from_json(doc.at("total_eps_p"), "state.total_eps_p");
    dump.sigma0 = tensors_from_json(doc.at("sigma0"), "state.sigma0");
    if (doc.contains("sigma")) dump.sigma = tensors_from_json(doc.at("sigma"), "state.sigma");
    return dump;
}

StateDump load_state_dump(const std::string& filename) {
    return parse_state_dump(read_text_file(filename));
}

KktReport verify_state_dump(const ParsedModel& pm, const StateDump& dump, double tol) {
    if (dump.num_dofs != pm.model.num_dofs || dump.num_points != pm.model.num_points() ||
        static_cast<int>(dump.du.size()) != pm.model.num_dofs ||
        static_cast<int>(dump.eps_p.size()) != pm.model.num_points() ||
        static_cast<int>(dump.sigma0.size()) != pm.model.num_points())
        throw InputError("verify: state dimensions do not match the model");

    Model working = pm.model;
    for (std::size_t j = 0; j < working.load.size(); ++j) working.load[j] *= dump.lambda;
    for (std::size_t l = 0; l < working.points.size(); ++l) working.points[l].sigma0 = dump.sigma0[l];

    IterateState state = zero_state(working);
    state.du = dump.du;
    state.eps_p = dump.eps_p;
    return kkt_check(working, state, tol);
}

std::string path_csv(const ParsedModel& pm, const PathRecord& record) {
    std::ostringstream out;
    out << "step,lambda";
    for (const auto& [node, dir] : pm.monitor) out << ",u_n" << node << "_d" << dir;
    out << ",iterations,max_kkt_residual,converged\n";
    for (std::size_t i = 0; i < record.steps.size(); ++i) {
        const StepRecord& step = record.steps[i];
        out << (i + 1) << "," << fmt(step.lambda);
        for (const auto& [node, dir] : pm.monitor) {
            const int dof = pm.model.node_dofs[static_cast<std::size_t>(node)][static_cast<std::size_t>(dir)];
            out << "," << fmt(step.total_u.empty() ? 0.0 : step.total_u[static_cast<std::size_t>(dof)]);
        }
        const double max_kkt = std::max(step.kkt.force_residual_norm,
                                        std::max(step.kkt.max_feasibility, step.kkt.max_gap));
        out << "," << step.iterations << "," << fmt(max_kkt) << "," << (step.converged ? 1 : 0) << "\n";
    }
    return out.str();
}

std::string kkt_report_json(const KktReport& report) {
    json doc;
    doc["force_residual_norm"] = report.force_residual_norm;
    doc["max_feasibility"] = report.max_feasibility;
    doc["max_gap"] = report.max_gap;
    doc["flow_feasibility"] = report.flow_feasibility;
    doc["complementarity_gap"] = report.complementarity_gap;
    doc["tol"] = report.tol;
    doc["pass"] = report.pass;
    return doc.dump(2) + "\n";
}

std::string diagnostics_json(const ParsedModel& pm, const PathRecord& record) {
    json doc;
    doc["model"] = pm.name;
    doc["truncated"] = record.truncated;
    doc["failure"] = record.failure;
    if (record.truncated) {
        doc["failed_step"] = record.failed_step + 1;
        doc["failed_lambda"] = record.failed_lambda;
    }
    json steps = json::array();
    for (std::size_t i = 0; i < record.steps.size(); ++i) {
        const StepRecord& step = record.steps[i];
        json s;
        s["step"] = i + 1;
        s["lambda"] = step.lambda;
        s["converged"] = step.converged;
        s["collapsed"] = step.collapsed;
        s["termination"] = step.report.termination;
        s["iterations"] = step.iterations;
        s["restarts"] = step.restarts;
        s["warm_start_scale"] = step.warm_start_scale;
        s["alpha"] = step.report.alpha;
        s["lipschitz"] = step.report.lipschitz;
        s["kkt"] = json::parse(kkt_report_json(step.kkt));
        json history = json::array();
        for (const IterationRecord& it : step.report.history) {
            history.push_back(json{{"iter", it.iter},
                                   {"objective", it.objective},
                                   {"residual_norm", it.residual_norm},
                                   {"step_du", it.step_du},
                                   {"step_eps", it.step_eps},
                                   {"restarted", it.restarted}});
        }
        s["history"] = std::move(history);
        steps.push_back(std::move(s));
    }
    doc["steps"] = std::move(steps);
    return doc.dump(2) + "\n";
}

void write_text_file(const std::string& filename, const std::string& text) {
    std::ofstream out(filename, std::ios::binary);
    if (!out) throw InputError("cannot open '" + filename + "' for writing");
    out << text;
    if (!out) throw InputError("failed writing '" + filename + "'");
}

std::string read_text_file(const std::string& filename) {
    std::ifstream in(filename, std::ios::binary);
    if (!in) throw InputError("cannot open '" + filename + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

} // namespace proxplast
