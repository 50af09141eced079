#include "riskcal/cli.hpp"

#include <cmath>
#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>

#include "riskcal/conditional.hpp"
#include "riskcal/io.hpp"
#include "riskcal/lift.hpp"
#include "riskcal/space.hpp"
#include "riskcal/utility.hpp"

#ifndef RISKCAL_DATA_DIR
#define RISKCAL_DATA_DIR "data"
#endif

namespace riskcal::cli {

namespace {

using io::Json;

std::string num(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

Json header(const RunConfig& c) {
    Json h;
    h["tool"] = "riskcal";
    h["command"] = c.command;
    if (!c.demo.empty()) h["demo"] = c.demo;
    h["seed"] = c.seed;
    h["tolerance"] = c.tolerance;
    return h;
}

std::string csv_header(const RunConfig& c) {
    return "# riskcal " + c.command + (c.demo.empty() ? "" : " " + c.demo) +
           " seed=" + std::to_string(c.seed) + " tolerance=" + num(c.tolerance) + "\n";
}

Json blocks_json(const Partition& p) {
    Json arr = Json::array();
    for (const auto& b : p.blocks()) arr.push_back(b);
    return arr;
}

Json event_json(const EventSet& e) { return e.indices(); }

struct Inputs {
    io::SpaceFile space;
    std::optional<CoherentUtility> utility;
};

Inputs load_inputs(const RunConfig& c, bool need_utility) {
    if (c.space_path.empty()) throw io::SchemaError("--space is required");
    Inputs in{io::load_space(c.space_path), std::nullopt};
    const auto rep = validate(in.space.space, in.space.filtration);
    if (!rep.ok) {
        std::string msg = c.space_path + ": invalid space";
        for (const auto& v : rep.violations) msg += "; " + v;
        throw io::SchemaError(msg);
    }
    if (need_utility) {
        if (c.utility_path.empty()) throw io::SchemaError("--utility is required");
        in.utility = io::load_utility(c.utility_path);
        if (const auto* s = in.utility->scenarios()) {
            try {
                s->validate(in.space.space.size());
            } catch (const std::invalid_argument& e) {
                throw io::SchemaError(c.utility_path + ": " + e.what());
            }
        }
    }
    return in;
}

RandomVariable vector_arg(const std::string& text, const io::SpaceFile& s, const std::string& name) {
    return io::parse_vector(text, s.filtration.f1, s.space.size(), name);
}

// ---------------------------------------------------------------------------

RunOutcome cmd_validate(const RunConfig& c) {
    if (c.space_path.empty()) throw io::SchemaError("--space is required");
    const auto s = io::load_space(c.space_path);
    const auto rep = validate(s.space, s.filtration);
    RunOutcome out;
    out.exit_code = rep.ok ? kOk : kInputError;
    if (!rep.ok) {
        out.error = c.space_path + ": ";
        for (std::size_t i = 0; i < rep.violations.size(); ++i)
            out.error += (i ? "; " : "") + rep.violations[i];
    }
    if (c.format == "csv") {
        std::string csv = csv_header(c) + "index,violation\n";
        for (std::size_t i = 0; i < rep.violations.size(); ++i)
            csv += std::to_string(i) + ",\"" + rep.violations[i] + "\"\n";
        out.report = csv;
        return out;
    }
    Json j = header(c);
    j["valid"] = rep.ok;
    j["outcomes"] = s.space.size();
    j["mass_sum"] = to_string(rep.mass_sum);
    j["common_denominator"] = rep.common_denominator.str();
    j["f1_blocks"] = blocks_json(s.filtration.f1);
    j["violations"] = rep.violations;
    if (rep.ok) j["conditional_resolution"] = conditional_resolution(s.space, s.filtration);
    out.report = j.dump(2) + "\n";
    return out;
}

RunOutcome cmd_eval(const RunConfig& c) {
    const auto in = load_inputs(c, true);
    const auto& space = in.space.space;
    const auto& u = *in.utility;
    std::vector<RandomVariable> xs;
    if (!c.x.empty()) {
        xs.push_back(vector_arg(c.x, in.space, "--x"));
    } else {
        // The product example is only defined for nonnegative payoffs.
        const double lo = u.product() ? 0.0 : -1.0;
        xs = random_probes(space.size(), c.probes, c.seed, lo, 1.0);
    }
    std::vector<double> values;
    for (const auto& x : xs) values.push_back(evaluate(u, x, space));

    RunOutcome out;
    if (c.format == "csv") {
        std::string csv = csv_header(c) + "id,variant,value\n";
        for (std::size_t i = 0; i < values.size(); ++i)
            csv += std::to_string(i) + "," + u.name() + "," + num(values[i]) + "\n";
        out.report = csv;
        return out;
    }
    Json j = header(c);
    j["variant"] = u.name();
    j["relevant"] = relevance_check(u, space, c.seed);
    Json rows = Json::array();
    for (std::size_t i = 0; i < values.size(); ++i) {
        Json r;
        r["id"] = i;
        r["value"] = values[i];
        if (!c.x.empty()) r["x"] = xs[i].values();
        rows.push_back(std::move(r));
    }
    j["rows"] = std::move(rows);
    out.report = j.dump(2) + "\n";
    return out;
}

RunOutcome cmd_lift(const RunConfig& c) {
    const auto in = load_inputs(c, true);
    if (c.f.empty() || c.g.empty()) throw io::SchemaError("lift needs --f and --g");
    const ConditionalUtility cu(*in.utility, in.space.space, in.space.filtration);
    const std::size_t n = c.grid_n ? *c.grid_n : conditional_resolution(cu.space(), cu.filtration());
    if (n == 0) throw ResolutionUnavailable(0, 2);
    const auto grid = build_uniform_grid(cu.space(), cu.filtration(), n);
    const auto f = vector_arg(c.f, in.space, "--f");
    const auto g = vector_arg(c.g, in.space, "--g");
    const auto res = lift_pair(cu, grid, f, g);
    const auto& p = res.pair;

    RunOutcome out;
    if (c.format == "csv") {
        std::string csv = csv_header(c) + "block,X_x,X_y,Y_x,Y_y,d,lambda_target,lambda_achieved,level\n";
        for (std::size_t b = 0; b < res.geometry.size(); ++b) {
            const auto& geo = res.geometry[b];
            const std::size_t i = cu.filtration().f1.block(b).front();
            csv += std::to_string(b) + "," + num(geo.lower.x) + "," + num(geo.lower.y) + "," +
                   num(geo.upper.x) + "," + num(geo.upper.y) + "," + num(geo.d) + "," +
                   num(p.lambda_target[i]) + "," + num(p.lambda_achieved[i]) + "," +
                   std::to_string(res.level[b]) + "\n";
        }
        out.report = csv;
        return out;
    }
    Json j = header(c);
    j["variant"] = cu.base().name();
    j["grid_n"] = n;
    j["m"] = p.m;
    j["xi"] = p.xi.values();
    j["eta"] = p.eta.values();
    j["b"] = event_json(p.b);
    j["lambda_target"] = p.lambda_target.values();
    j["lambda_achieved"] = p.lambda_achieved.values();
    j["commonotone"] = is_commonotone_pair(p.xi, p.eta, cu.space()).commonotone;
    bool in_v = true;
    for (std::size_t i = 0; i < p.xi.size(); ++i)
        in_v = in_v && (p.m == 0.0 || in_commonotone_corner({p.xi[i], p.eta[i]}, p.m));
    j["values_in_V"] = in_v;
    Json d;
    d["err_f"] = res.diagnostics.err_f;
    d["err_g"] = res.diagnostics.err_g;
    d["err_sum"] = res.diagnostics.err_sum;
    d["snap_error"] = res.diagnostics.snap_error;
    d["resolution_used"] = res.diagnostics.resolution_used;
    j["diagnostics"] = std::move(d);
    out.report = j.dump(2) + "\n";
    return out;
}

TimeConsistencyReport audit(const ConditionalUtility& cu, const std::vector<RandomVariable>& probes,
                            bool with_cones, double tol) {
    auto rep = tc_gap(cu, probes);
    if (!with_cones || cu.space().size() > kCoreEnumerationCap) return rep;
    const auto vertices = dual_vertices(cu);
    for (std::size_t id = 0; id < probes.size(); ++id) {
        const RandomVariable centered = probes[id] - unconditional_eval(cu, probes[id]);
        rep.cone_verdicts.push_back({id, cone_decompose(cu, centered, vertices, tol).feasible});
    }
    return rep;
}

Json report_json(const TimeConsistencyReport& rep) {
    Json j;
    j["max_gap"] = rep.max_gap;
    j["witness_id"] = rep.witness_id;
    j["witness"] = rep.witness.values();
    Json rows = Json::array();
    for (const auto& r : rep.rows) {
        Json row;
        row["id"] = r.id;
        row["u02"] = r.u02;
        row["recomposed"] = r.recomposed;
        row["gap"] = r.gap;
        rows.push_back(std::move(row));
    }
    j["rows"] = std::move(rows);
    Json cones = Json::array();
    for (const auto& v : rep.cone_verdicts) cones.push_back({{"id", v.id}, {"feasible", v.feasible}});
    j["cone_verdicts"] = std::move(cones);
    return j;
}

RunOutcome cmd_tc_check(const RunConfig& c) {
    const auto in = load_inputs(c, true);
    const ConditionalUtility cu(*in.utility, in.space.space, in.space.filtration);
    std::vector<RandomVariable> probes;
    if (!c.x.empty()) probes.push_back(vector_arg(c.x, in.space, "--x"));
    for (auto& p : default_probes(cu.space(), cu.filtration(), c.probes, c.seed)) probes.push_back(std::move(p));
    const auto rep = audit(cu, probes, true, c.tolerance);

    RunOutcome out;
    out.exit_code = rep.max_gap > c.tolerance ? kGapFound : kOk;
    if (c.format == "csv") {
        std::string csv = csv_header(c) + "id,variant,u02,recomposed,gap\n";
        for (const auto& r : rep.rows)
            csv += std::to_string(r.id) + "," + cu.base().name() + "," + num(r.u02) + "," +
                   num(r.recomposed) + "," + num(r.gap) + "\n";
        out.report = csv;
        return out;
    }
    Json j = header(c);
    j["variant"] = cu.base().name();
    j["probes"] = probes.size();
    j["consistent"] = out.exit_code == kOk;
    j["report"] = report_json(rep);
    out.report = j.dump(2) + "\n";
    return out;
}

RunOutcome cmd_cone_check(const RunConfig& c) {
    const auto in = load_inputs(c, true);
    if (c.x.empty()) throw io::SchemaError("cone-check needs --x");
    const ConditionalUtility cu(*in.utility, in.space.space, in.space.filtration);
    RandomVariable x = vector_arg(c.x, in.space, "--x");
    if (c.center) x = x - unconditional_eval(cu, x);
    const auto dec = cone_decompose(cu, x, c.tolerance);

    RunOutcome out;
    out.exit_code = dec.feasible ? kOk : kGapFound;
    Json j = header(c);
    j["variant"] = cu.base().name();
    j["x"] = x.values();
    j["u02"] = unconditional_eval(cu, x);
    j["feasible"] = dec.feasible;
    j["dual_vertices"] = dec.dual_vertices;
    if (dec.feasible) {
        j["eta"] = dec.eta->values();
        j["zeta"] = dec.zeta->values();
        j["u01_eta"] = dec.u01_eta;
        j["min_block_u02_zeta"] = dec.min_block_u02_zeta;
    } else {
        j["certificate_value"] = dec.certificate_value;
    }
    if (c.format == "csv") {
        out.report = csv_header(c) + "variant,feasible,u02\n" + cu.base().name() + "," +
                     (dec.feasible ? "true" : "false") + "," + num(j["u02"].get<double>()) + "\n";
        return out;
    }
    out.report = j.dump(2) + "\n";
    return out;
}

// ---------------------------------------------------------------------------
// Demos

std::string data_file(const RunConfig& c, const char* name) {
    const std::string dir = c.data_dir.empty() ? default_data_dir() : c.data_dir;
    return dir + "/" + name;
}

RunOutcome demo_incompatibility(const RunConfig& c) {
    Json j = header(c);
    const auto es_half = DistortionFunction::es(Rational(1, 2));

    // (a) recomposition gap of es(1/2) on the 4-outcome space.
    {
        const auto s4 = io::load_space(data_file(c, "space4.json"));
        const ConditionalUtility cu(es_half, s4.space, s4.filtration);
        const RandomVariable worked{0.0, 1.0, 2.0, 4.0};
        // Payoffs in [0, 1] keep every random gap below the worked probe's.
        std::vector<RandomVariable> probes{worked};
        for (auto& p : random_probes(4, c.probes, c.seed, 0.0, 1.0)) probes.push_back(std::move(p));
        for (auto& p : crafted_probes(cu.space(), cu.filtration())) probes.push_back(std::move(p));
        const auto rep = tc_gap(cu, probes);
        const RandomVariable centered = worked - unconditional_eval(cu, worked);
        const auto cone = cone_decompose(cu, centered, c.tolerance);
        Json a;
        a["space"] = "space4.json";
        a["variant"] = es_half.name();
        a["probes"] = probes.size();
        a["max_gap"] = rep.max_gap;
        a["witness"] = rep.witness.values();
        a["worked_probe"] = {{"x", worked.values()},
                             {"u02", rep.rows[0].u02},
                             {"recomposed", rep.rows[0].recomposed},
                             {"gap", rep.rows[0].gap}};
        a["centered_cone_feasible"] = cone.feasible;
        a["centered_cone_certificate"] = cone.certificate_value;
        j["tc_gap"] = std::move(a);
    }

    // (b) commonotone lift whose recomposition is not additive.
    {
        const auto s12 = io::load_space(data_file(c, "space12.json"));
        Json b;
        b["space"] = "space12.json";
        for (const auto& [label, psi] : {std::pair{"es", es_half},
                                          std::pair{"expectation", DistortionFunction::expectation()}}) {
            const ConditionalUtility cu(psi, s12.space, s12.filtration);
            const std::size_t n = conditional_resolution(cu.space(), cu.filtration());
            const auto grid = build_uniform_grid(cu.space(), cu.filtration(), n);
            const auto f = io::parse_vector("1,0", cu.filtration().f1, cu.space().size(), "f");
            const auto g = io::parse_vector("0,1", cu.filtration().f1, cu.space().size(), "g");
            const auto probe = additivity_probe(cu, grid, f, g);
            Json e;
            e["variant"] = psi.name();
            e["grid_n"] = n;
            e["f"] = {1, 0};
            e["g"] = {0, 1};
            e["commonotone"] = probe.commonotone;
            e["u01_f"] = probe.u01_f;
            e["u01_g"] = probe.u01_g;
            e["u01_f_plus_g"] = probe.u01_fg;
            e["A"] = probe.a_lift;
            e["A_direct"] = probe.a_direct;
            e["snap_error"] = probe.lift.diagnostics.snap_error;
            b[label] = std::move(e);
        }
        j["additivity_probe"] = std::move(b);
    }

    // (c) product example: linear on F1, not on F2.
    {
        const auto sp = io::load_space(data_file(c, "product64.json"));
        const std::size_t rows = sp.filtration.f1.block_count();
        const std::size_t cols = sp.space.size() / rows;
        const ProductExample ex{rows, cols};
        const double tol = 2.0 / static_cast<double>(rows);
        std::mt19937_64 rng(c.seed);
        double worst = 0.0;
        for (int t = 0; t < 20; ++t) {
            std::vector<double> x(sp.space.size());
            for (std::size_t r = 0; r < rows; ++r) {
                const double v = 10.0 * unit_uniform(rng);
                for (std::size_t k = 0; k < cols; ++k) x[r * cols + k] = v;
            }
            const RandomVariable rv(std::move(x));
            worst = std::max(worst, std::abs(product_example_eval(rv, ex) - sp.space.expectation(rv)));
        }
        std::vector<double> ramp(sp.space.size());
        for (std::size_t r = 0; r < rows; ++r)
            for (std::size_t k = 0; k < cols; ++k)
                ramp[r * cols + k] = 10.0 * (static_cast<double>(k) + 0.5) / static_cast<double>(cols);
        const RandomVariable ramp_rv(std::move(ramp));
        const double u = product_example_eval(ramp_rv, ex);
        const double e = sp.space.expectation(ramp_rv);
        Json p;
        p["space"] = "product64.json";
        p["rows"] = rows;
        p["cols"] = cols;
        p["tolerance"] = tol;
        p["f1_max_deviation"] = worst;
        p["f1_linear"] = worst <= tol;
        p["ramp_u"] = u;
        p["ramp_mean"] = e;
        p["ramp_deviation"] = std::abs(u - e);
        p["f2_nonlinear"] = std::abs(u - e) > 10.0 * tol;
        j["product_example"] = std::move(p);
    }

    RunOutcome out;
    if (c.format == "csv") {
        out.report = csv_header(c) + "exhibit,value\n" +
                     "tc_gap.max_gap," + num(j["tc_gap"]["max_gap"].get<double>()) + "\n" +
                     "tc_gap.worked_probe_gap," + num(j["tc_gap"]["worked_probe"]["gap"].get<double>()) + "\n" +
                     "additivity_probe.es.A," + num(j["additivity_probe"]["es"]["A"].get<double>()) + "\n" +
                     "additivity_probe.expectation.A," +
                     num(j["additivity_probe"]["expectation"]["A"].get<double>()) + "\n" +
                     "product_example.f1_max_deviation," +
                     num(j["product_example"]["f1_max_deviation"].get<double>()) + "\n" +
                     "product_example.ramp_deviation," +
                     num(j["product_example"]["ramp_deviation"].get<double>()) + "\n";
        return out;
    }
    out.report = j.dump(2) + "\n";
    return out;
}

RunOutcome demo_multiperiod(const RunConfig& c) {
    // Binary tree with three innovation dates over 8 equally likely leaves.
    const std::size_t n = 8;
    const OutcomeSpace space = OutcomeSpace::uniform(n);
    const std::vector<Partition> levels = {
        Partition::trivial(n),
        Partition({{0, 1, 2, 3}, {4, 5, 6, 7}}),
        Partition({{0, 1}, {2, 3}, {4, 5}, {6, 7}}),
        Partition::singletons(n),
    };
    const auto probes = random_probes(n, c.probes, c.seed);

    Json j = header(c);
    j["levels"] = levels.size();
    Json variants = Json::array();
    for (const auto& psi : {DistortionFunction::es(Rational(1, 2)), DistortionFunction::expectation()}) {
        const CoherentUtility u(psi);
        std::vector<double> step_gap(levels.size() - 1, 0.0);
        for (const auto& x : probes) {
            RandomVariable nested = x;
            for (std::size_t t = levels.size() - 1; t-- > 0;) {
                nested = evaluate_given(u, nested, levels[t], space);
                const RandomVariable direct = evaluate_given(u, x, levels[t], space);
                for (std::size_t i = 0; i < n; ++i)
                    step_gap[t] = std::max(step_gap[t], std::abs(direct[i] - nested[i]));
            }
        }
        Json v;
        v["variant"] = psi.name();
        Json steps = Json::array();
        for (std::size_t t = 0; t < step_gap.size(); ++t)
            steps.push_back({{"t", t}, {"max_gap", step_gap[t]}});
        v["steps"] = std::move(steps);
        variants.push_back(std::move(v));
    }
    j["variants"] = variants;

    RunOutcome out;
    if (c.format == "csv") {
        std::string csv = csv_header(c) + "variant,t,max_gap\n";
        for (const auto& v : variants)
            for (const auto& s : v["steps"])
                csv += v["variant"].get<std::string>() + "," + std::to_string(s["t"].get<std::size_t>()) +
                       "," + num(s["max_gap"].get<double>()) + "\n";
        out.report = csv;
        return out;
    }
    out.report = j.dump(2) + "\n";
    return out;
}

RunOutcome dispatch(const RunConfig& c) {
    if (c.format != "text" && c.format != "csv")
        throw io::SchemaError("--format must be text or csv");
    if (c.command == "validate") return cmd_validate(c);
    if (c.command == "eval") return cmd_eval(c);
    if (c.command == "lift") return cmd_lift(c);
    if (c.command == "tc-check") return cmd_tc_check(c);
    if (c.command == "cone-check") return cmd_cone_check(c);
    if (c.command == "demo") {
        if (c.demo == "incompatibility") return demo_incompatibility(c);
        if (c.demo == "multiperiod") return demo_multiperiod(c);
        throw io::SchemaError("unknown demo \"" + c.demo + "\" (incompatibility | multiperiod)");
    }
    throw io::SchemaError("unknown command \"" + c.command + "\"");
}

}  // namespace

std::string default_data_dir() { return RISKCAL_DATA_DIR; }

RunOutcome run(const RunConfig& config) {
    RunOutcome out;
    try {
        out = dispatch(config);
    } catch (const std::exception& e) {
        out.exit_code = kInputError;
        out.report.clear();
        out.error = e.what();
        return out;
    }
    if (!config.out_path.empty()) {
        std::ofstream f(config.out_path, std::ios::binary);
        if (!f) {
            out.exit_code = kInputError;
            out.error = config.out_path + ": cannot write report";
            return out;
        }
        f << out.report;
    }
    return out;
}

}  // namespace riskcal::cli
