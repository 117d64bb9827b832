#include "modcalc/cli.hpp"

#include "modcalc/errors.hpp"
#include "modcalc/io.hpp"
#include "modcalc/lipschitz.hpp"
#include "modcalc/modulus.hpp"
#include "modcalc/plans.hpp"
#include "modcalc/sobolev.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

namespace modcalc::cli {

using io::Json;

namespace {

Json config_json(const RunConfig& c) {
    Json j = {{"command", c.command}, {"p", c.p},         {"q", c.q},       {"lambda", c.lambda},
              {"tol", c.tol},         {"max_hops", c.max_hops}, {"seed", c.seed}, {"truncated", c.truncated},
              {"steps", c.steps}};
    for (const auto& [key, path] : {std::pair{"space", &c.space}, std::pair{"family", &c.family},
                                    std::pair{"plan", &c.plan}, std::pair{"f", &c.f}, std::pair{"g", &c.g}})
        if (!path->empty()) j[key] = *path;
    if (!c.set.empty()) j["E"] = c.set;
    if (c.mesh) j["delta"] = *c.mesh;
    if (c.cap) j["cap"] = *c.cap;
    return j;
}

void require(const std::string& value, const char* flag) {
    if (value.empty()) throw ValidationError(flag, std::string("--") + flag + " is required");
}

void check_common(const RunConfig& c) {
    if (!(c.p >= 1.0) || !std::isfinite(c.p)) throw ValidationError("p", "p must lie in [1, inf)");
    if (c.lambda != 0 && c.lambda != 1) throw ValidationError("lambda", "lambda must be 0 or 1");
    if (!(c.tol > 0.0)) throw ValidationError("tol", "tol must be positive");
}

SolverOptions solver(const RunConfig& c) {
    SolverOptions s;
    s.tol = c.tol;
    return s;
}

VertexSet vertex_set(const MetricMeasureSpace& space, const std::vector<std::string>& ids, const char* field) {
    std::vector<Vertex> out;
    for (const auto& id : ids) {
        if (!space.has_vertex(id)) throw ValidationError(field, "unknown vertex id '" + id + "'");
        out.push_back(space.index_of(id));
    }
    return VertexSet(std::move(out));
}

VertexFunction load_function(const MetricMeasureSpace& space, const std::string& path, const char* field) {
    return io::parse_function(space, io::load_json(path, field), field);
}

CurveFamily load_family(const MetricMeasureSpace& space, const RunConfig& c) {
    if (c.family.empty()) return all_walks(space, c.max_hops, true);
    return io::parse_family(space, io::load_json(c.family, "family"));
}

void write_csv(const RunConfig& c, const std::string& table) {
    if (c.csv.empty()) return;
    std::ofstream out(c.csv);
    if (!out) throw ValidationError("csv", "cannot write " + c.csv);
    out << table;
}

std::string vertex_csv(const MetricMeasureSpace& space, const char* header,
                       std::initializer_list<std::span<const double>> columns) {
    std::ostringstream s;
    s.precision(17);
    s << "vertex," << header << '\n';
    for (Vertex v = 0; v < space.size(); ++v) {
        s << space.id(v);
        for (auto column : columns) s << ',' << column[v];
        s << '\n';
    }
    return s.str();
}

struct Outcome {
    Json body;
    bool converged = true;
};

Outcome space_validate(const RunConfig& c) {
    require(c.space, "space");
    auto space = io::load_space(c.space);
    return {{{"vertices", space.size()},
             {"edges", space.edge_count()},
             {"total_mass", space.measure(space.all())},
             {"diameter", io::number(space.diameter())},
             {"neighbor_mesh", space.neighbor_mesh()},
             {"valid", true}}};
}

Outcome modulus_command(const RunConfig& c) {
    require(c.space, "space");
    require(c.family, "family");
    auto space = io::load_space(c.space);
    auto family = load_family(space, c);
    auto result = modulus(space, family, c.p, c.lambda ? Lambda::One : Lambda::Zero, solver(c));
    Json duals = Json::array();
    for (std::size_t k = 0; k < family.size(); ++k)
        duals.push_back({{"curve", io::curve_json(space, family[k])}, {"w", result.dual_weights[k]}});
    Json body = {{"value", io::number(result.value)},
                 {"lower_bound", io::number(result.lower_bound)},
                 {"gap", result.gap},
                 {"iterations", result.iterations},
                 {"converged", result.converged},
                 {"curves", family.size()},
                 {"dual_weights", duals}};
    body["rho"] = result.infinite() ? Json(nullptr) : io::by_id(space, result.rho.values());
    if (!result.infinite()) write_csv(c, vertex_csv(space, "rho", {result.rho.values()}));
    return {body, result.converged};
}

Outcome plan_command(const RunConfig& c) {
    require(c.space, "space");
    require(c.plan, "plan");
    auto space = io::load_space(c.space);
    auto plan = io::parse_plan(space, io::load_json(c.plan, "plan"));
    plan.validate(space);
    const Lambda lambda = c.lambda ? Lambda::One : Lambda::Zero;
    auto report = is_test_plan(space, plan, c.q);
    auto bar = barycenter(space, plan, lambda);
    Json body = {{"mass", report.mass},
                 {"is_probability", plan.is_probability()},
                 {"compression", report.compression},
                 {"energy", io::number(report.energy)},
                 {"is_test_plan", report.is_test_plan},
                 {"barycenter", io::by_id(space, bar.density.values())},
                 {"barycenter_norm", io::number(bar.norm(space, c.q))}};
    if (!c.f.empty()) {
        auto f = load_function(space, c.f, "f");
        auto derivation = plan_derivation(space, plan, f);
        auto bound = derivation_norm_bound(space, plan, f);
        body["derivation"] = {{"b", io::by_id(space, derivation.b)},
                              {"divergence", io::by_id(space, derivation.divergence)},
                              {"norm_bound_holds", bound.holds},
                              {"max_ratio", bound.max_ratio}};
    }
    write_csv(c, vertex_csv(space, "barycenter", {bar.density.values()}));
    return {body};
}

Outcome gradient_command(const RunConfig& c) {
    require(c.space, "space");
    require(c.f, "f");
    auto space = io::load_space(c.space);
    auto f = load_function(space, c.f, "f");
    auto family = load_family(space, c);
    auto result = n_gradient(space, f, family, c.p, solver(c));
    write_csv(c, vertex_csv(space, "rho", {result.rho.values()}));
    return {{{"rho", io::by_id(space, result.rho.values())},
             {"p_norm", result.p_norm},
             {"energy", std::pow(result.p_norm, c.p)},
             {"family", result.family_label},
             {"curves", family.size()},
             {"gap", result.gap},
             {"iterations", result.iterations},
             {"converged", result.converged}},
            result.converged};
}

Outcome capacity_command(const RunConfig& c) {
    require(c.space, "space");
    if (c.set.empty()) throw ValidationError("E", "--E needs at least one vertex id");
    auto space = io::load_space(c.space);
    auto set = vertex_set(space, c.set, "E");
    auto family = load_family(space, c);
    auto result = capacity(space, set, family, c.p, c.truncated, solver(c));
    write_csv(c, vertex_csv(space, "f,rho", {result.f, result.rho.values()}));
    return {{{"value", result.value},
             {"f", io::by_id(space, result.f)},
             {"rho", io::by_id(space, result.rho.values())},
             {"gap", result.gap},
             {"curves", family.size()},
             {"iterations", result.iterations},
             {"converged", result.converged}},
            result.converged};
}

Outcome relax_command(const RunConfig& c) {
    require(c.space, "space");
    require(c.f, "f");
    require(c.g, "g");
    auto space = io::load_space(c.space);
    auto f = load_function(space, c.f, "f");
    auto g = load_function(space, c.g, "g");
    RelaxParams params;
    params.sources = c.set.empty() ? space.all() : vertex_set(space, c.set, "E");
    params.mesh = c.mesh.value_or(space.neighbor_mesh());
    params.cap = c.cap.value_or(*std::max_element(f.begin(), f.end()));
    auto relaxed = path_relax(space, f, g, params);
    write_csv(c, vertex_csv(space, "f,f_relaxed", {f, relaxed}));
    return {{{"f_relaxed", io::by_id(space, relaxed)},
             {"delta", params.mesh},
             {"cap", params.cap},
             {"lipschitz", lipschitz_constant(space, relaxed, space.all())}}};
}

Outcome equivalence_command(const RunConfig& c) {
    require(c.space, "space");
    require(c.f, "f");
    auto space = io::load_space(c.space);
    auto f = load_function(space, c.f, "f");
    EquivalenceOptions options;
    options.max_hops = c.max_hops;
    options.solver = solver(c);
    options.h.steps = c.steps;
    options.h.mesh = c.mesh;
    options.threads = thread_cap();
    auto report = equivalence_report(space, f, c.p, options);

    Json steps = Json::array();
    std::ostringstream csv;
    csv.precision(17);
    csv << "sigma,distance,slope_error,equals_f,slope_bound\n";
    for (const auto& step : report.h_steps) {
        steps.push_back({{"sigma", step.sigma},
                         {"distance", step.distance},
                         {"slope_error", step.slope_error},
                         {"equals_f", step.equals_f},
                         {"slope_bound", step.slope_bound}});
        csv << step.sigma << ',' << step.distance << ',' << step.slope_error << ',' << step.equals_f << ','
            << step.slope_bound << '\n';
    }
    write_csv(c, csv.str());
    const bool converged = report.n.converged && report.max_plan_gap <= c.tol;
    Json table = Json::array({
        {{"estimator", "N"}, {"norm", report.n.p_norm}, {"energy", std::pow(report.n.p_norm, c.p)}},
        {{"estimator", "H"}, {"norm", report.h_slope_norm}, {"energy", std::pow(report.h_slope_norm, c.p)}},
        {{"estimator", "W-certificate"}, {"max_violation", io::number(report.w.max_violation)}, {"plans", report.plans}},
    });
    return {{{"table", table},
             {"rho_N", io::by_id(space, report.n.rho.values())},
             {"curves", report.curves},
             {"gap", report.n.gap},
             {"max_plan_gap", report.max_plan_gap},
             {"h_steps", steps},
             {"h_equals_f", report.h_equals_f},
             {"h_slope_bound", report.h_slope_bound},
             {"h_distance", report.h_distance},
             {"h_slope_error", report.h_slope_error}},
            converged};
}

Outcome selftest_command(const RunConfig& c) {
    Json checks = Json::array();
    bool all = true;
    auto check = [&](const char* name, double value, double expected, double tolerance) {
        bool pass = std::abs(value - expected) <= tolerance;
        all = all && pass;
        checks.push_back({{"name", name}, {"value", value}, {"expected", expected}, {"pass", pass}});
    };
    SolverOptions options = solver(c);
    auto edge = MetricMeasureSpace::build(path_spec(2));
    CurveFamily single({DiscreteCurve::through(edge, {0, 1})});
    check("single_edge_modulus", modulus(edge, single, 2.0, Lambda::Zero, options).value, 2.0, 1e-6);

    auto path = MetricMeasureSpace::build(path_spec(3));
    VertexFunction f{0.0, 1.0, 2.0};
    auto gradient = n_gradient(path, f, all_walks(path, 2, true), 2.0, options);
    check("path_gradient_energy", gradient.p_norm * gradient.p_norm, 8.0 / 3.0, 1e-6);
    return {{{"checks", checks}, {"pass", all}}, all};
}

}  // namespace

unsigned thread_cap() {
    unsigned cap = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("MODCALC_THREADS")) {
        char* end = nullptr;
        long value = std::strtol(env, &end, 10);
        if (end != env && value >= 1) cap = std::min<unsigned>(cap, static_cast<unsigned>(value));
    }
    return cap;
}

std::optional<int> parse(int argc, const char* const* argv, RunConfig& c, std::ostream& out, std::ostream& err) {
    CLI::App app{"Discrete p-modulus and Sobolev calculus on weighted graphs", "modcalc"};
    app.require_subcommand(1);

    auto add_space = [&](CLI::App* sub) { sub->add_option("--space", c.space, "space JSON"); };
    auto add_solver = [&](CLI::App* sub) {
        sub->add_option("--p", c.p, "exponent p in [1, inf)");
        sub->add_option("--tol", c.tol, "relative gap tolerance");
        sub->add_option("--seed", c.seed, "seed");
        sub->add_option("--out", c.output, "output JSON path (default stdout)");
        sub->add_option("--csv", c.csv, "optional CSV table");
    };
    auto add_family = [&](CLI::App* sub) {
        sub->add_option("--family", c.family, "family JSON");
        sub->add_option("--max-hops", c.max_hops, "hop bound for enumerated families");
    };

    auto* validate = app.add_subcommand("space-validate", "check a space JSON");
    add_space(validate);
    validate->add_option("--out", c.output, "output JSON path");

    auto* mod = app.add_subcommand("modulus", "p-modulus of a curve family");
    add_space(mod);
    add_family(mod);
    add_solver(mod);
    mod->add_option("--lambda", c.lambda, "endpoint weight, 0 or 1");

    auto* plan = app.add_subcommand("plan", "barycenter, compression and energy of a plan");
    add_space(plan);
    add_solver(plan);
    plan->add_option("--plan", c.plan, "plan JSON");
    plan->add_option("--q", c.q, "energy exponent q in (1, inf)");
    plan->add_option("--lambda", c.lambda, "endpoint weight, 0 or 1");
    plan->add_option("--f", c.f, "function JSON for the induced derivation");

    auto* gradient = app.add_subcommand("gradient", "least p-energy upper gradient on a family");
    add_space(gradient);
    add_family(gradient);
    add_solver(gradient);
    gradient->add_option("--f", c.f, "function JSON");

    auto* cap = app.add_subcommand("capacity", "Sobolev capacity of a vertex set");
    add_space(cap);
    add_family(cap);
    add_solver(cap);
    cap->add_option("--E", c.set, "vertex ids")->delimiter(',');
    cap->add_flag("--truncated", c.truncated, "impose 0 <= f <= 1");

    auto* relax = app.add_subcommand("relax", "discrete-path Lipschitz relaxation");
    add_space(relax);
    add_solver(relax);
    relax->add_option("--f", c.f, "function JSON");
    relax->add_option("--g", c.g, "density JSON");
    relax->add_option("--sources", c.set, "source ids (default all)")->delimiter(',');
    relax->add_option("--delta", c.mesh, "mesh bound");
    relax->add_option("--cap", c.cap, "cap M (default max f)");

    auto* equivalence = app.add_subcommand("equivalence", "compare the N, H and W estimators");
    add_space(equivalence);
    add_solver(equivalence);
    equivalence->add_option("--f", c.f, "function JSON");
    equivalence->add_option("--max-hops", c.max_hops, "hop bound of the curve family");
    equivalence->add_option("--steps", c.steps, "length of the H sequence");
    equivalence->add_option("--delta", c.mesh, "mesh bound for the H sequence");

    auto* selftest = app.add_subcommand("selftest", "closed-form checks");
    add_solver(selftest);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << Json{{"error", "usage"}, {"message", e.what()}}.dump() << '\n';
        return kValidation;
    }
    c.command = app.get_subcommands().front()->get_name();
    return std::nullopt;
}

int run(const RunConfig& c, std::ostream& out, std::ostream& err) {
    Outcome outcome;
    try {
        check_common(c);
        if (c.command == "space-validate") outcome = space_validate(c);
        else if (c.command == "modulus") outcome = modulus_command(c);
        else if (c.command == "plan") outcome = plan_command(c);
        else if (c.command == "gradient") outcome = gradient_command(c);
        else if (c.command == "capacity") outcome = capacity_command(c);
        else if (c.command == "relax") outcome = relax_command(c);
        else if (c.command == "equivalence") outcome = equivalence_command(c);
        else if (c.command == "selftest") outcome = selftest_command(c);
        else throw ValidationError("command", "unknown command '" + c.command + "'");
    } catch (const ValidationError& e) {
        err << Json{{"error", "validation"}, {"field", e.field()}, {"message", e.what()}}.dump() << '\n';
        return kValidation;
    } catch (const std::exception& e) {
        err << Json{{"error", "internal"}, {"message", e.what()}}.dump() << '\n';
        return kFailure;
    }

    Json document = outcome.body;
    document["config"] = config_json(c);
    const std::string text = document.dump(2) + "\n";
    if (c.output.empty()) {
        out << text;
    } else {
        std::ofstream file(c.output);
        if (!file) {
            err << Json{{"error", "validation"}, {"field", "out"}, {"message", "cannot write " + c.output}}.dump()
                << '\n';
            return kValidation;
        }
        file << text;
    }
    if (!outcome.converged) {
        if (c.command == "selftest") return kFailure;
        err << Json{{"error", "not_converged"}, {"message", "solver stopped above the gap tolerance"}}.dump() << '\n';
        return kNotConverged;
    }
    return kOk;
}

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    RunConfig config;
    if (auto code = parse(argc, argv, config, out, err)) return *code;
    return run(config, out, err);
}

}  // namespace modcalc::cli
