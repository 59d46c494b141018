#pragma once

// Problem documents: one JSON object naming an operation, a space, the
// set(s) it acts on and the operation's arguments. Results come back as a
// single-record Report whose `values` hold the operation's output.

#include <lpgeom/cones.hpp>
#include <lpgeom/faces.hpp>
#include <lpgeom/json_io.hpp>
#include <lpgeom/project.hpp>
#include <lpgeom/verification.hpp>

#include <optional>
#include <string>

namespace lpgeom::cli {

using io::json;
using io::SchemaError;
using verify::CheckRecord;
using verify::Report;
using verify::Status;

/// Command-line values that take precedence over the document.
struct Overrides {
    std::optional<double> tol;
    std::optional<std::uint64_t> seed;
    std::optional<int> trials;
    std::optional<std::string> kind;
    std::optional<std::string> check;
};

struct Context {
    LpSpace space;
    json args;
    std::optional<double> tol;
    std::uint64_t seed = 0;
    std::optional<int> trials;
};

namespace detail {

inline json point_list(const std::vector<PrimalVec> &pts) { return io::write_point_list(pts); }

inline json projection_json(const ProjectionResult &r) {
    return {{"point", io::write_vector(r.point)},
            {"objective", r.objective},
            {"vi_residual", r.vi_residual},
            {"iterations", r.iterations},
            {"converged", r.converged},
            {"method", method_name(r.method)},
            {"coefficients", io::write_vector(r.coefficients)}};
}

inline SolverOptions solver_options(const Context &ctx) {
    SolverOptions o;
    if (ctx.tol)
        o.vi_tol = *ctx.tol;
    return o;
}

inline double exact_tol(const Context &ctx) { return ctx.tol.value_or(kExactTol); }

inline std::string read_string(const json &j, const char *key, const std::string &where) {
    const auto &v = io::require(j, key, where);
    if (!v.is_string())
        throw SchemaError(where + "." + key + ": expected a string");
    return v.get<std::string>();
}

inline int read_positive_int(const json &j, const std::string &where) {
    if (!j.is_number_integer() || j.get<long long>() < 1)
        throw SchemaError(where + ": expected a positive integer");
    return j.get<int>();
}

inline ConeWithVertex read_cone(const json &j, const LpSpace &X, const std::string &where) {
    const ConvexSet C = io::read_set(j, X);
    try {
        return ConeWithVertex::from_set(C);
    } catch (const std::invalid_argument &) {
        throw SchemaError(where + ": dual cone operations need a ray or a cone");
    }
}

inline CheckRecord record(const std::string &id, const std::string &reference) {
    CheckRecord r;
    r.id        = id;
    r.reference = reference;
    r.status    = Status::pass;
    return r;
}

inline CheckRecord run_project(const Context &ctx, const ConvexSet &C) {
    io::expect_only(ctx.args, {"x"}, "args");
    const auto x = io::read_point(io::require(ctx.args, "x", "args"), ctx.space.dimension(), "args.x");
    const auto opts = solver_options(ctx);
    const auto r    = metric_project(ctx.space, C, x, opts);
    auto rec        = record("project", "metric projection P_C(x)");
    rec.values      = projection_json(r);
    rec.status      = r.converged && r.vi_residual <= opts.vi_tol ? Status::pass : Status::fail;
    return rec;
}

inline CheckRecord run_gproject(const Context &ctx, const ConvexSet &C) {
    io::expect_only(ctx.args, {"psi"}, "args");
    const auto psi  = io::read_functional(io::require(ctx.args, "psi", "args"), ctx.space.dimension(), "args.psi");
    const auto opts = solver_options(ctx);
    const auto r    = generalized_project(ctx.space, C, psi, opts);
    auto rec        = record("gproject", "generalized projection pi_C(psi)");
    rec.values      = projection_json(r);
    rec.status      = r.converged && r.vi_residual <= opts.vi_tol ? Status::pass : Status::fail;
    return rec;
}

inline CheckRecord run_face(const Context &ctx, const ConvexSet &C) {
    io::expect_only(ctx.args, {"psi"}, "args");
    const auto psi = io::read_functional(io::require(ctx.args, "psi", "args"), ctx.space.dimension(), "args.psi");
    const auto f   = face(ctx.space, C, psi, exact_tol(ctx));
    auto rec       = record("face", "face F_C(psi)");
    rec.values     = {{"level", io::write_number(f.level)},
                      {"kind", face_kind_name(f.kind)},
                      {"cause", empty_cause_name(f.cause)},
                      {"representatives", point_list(f.representatives)},
                      {"gaps", f.gaps}};
    return rec;
}

inline CheckRecord run_vision(const Context &ctx, const ConvexSet &C) {
    io::expect_only(ctx.args, {"y", "psi", "u"}, "args");
    const auto n = ctx.space.dimension();
    const auto y = io::read_point(io::require(ctx.args, "y", "args"), n, "args.y");
    if (!ctx.args.contains("psi") && !ctx.args.contains("u"))
        throw SchemaError("args: vision needs 'psi', 'u' or both");
    auto rec = record("vision", "vision membership at y");
    rec.values["y"] = io::write_vector(y);
    if (ctx.args.contains("psi")) {
        const auto psi            = io::read_functional(ctx.args.at("psi"), n, "args.psi");
        rec.values["psi"]         = io::write_vector(psi);
        rec.values["dual_member"] = vision_dual_member(ctx.space, C, y, psi, exact_tol(ctx));
    }
    if (ctx.args.contains("u")) {
        const auto u                = io::read_point(ctx.args.at("u"), n, "args.u");
        rec.values["u"]             = io::write_vector(u);
        rec.values["Ju"]            = io::write_vector(ctx.space.duality_map(u));
        rec.values["primal_member"] = vision_primal_member(ctx.space, C, y, u, exact_tol(ctx));
    }
    return rec;
}

inline CheckRecord run_classify(const Context &ctx, const ConvexSet &C) {
    io::expect_only(ctx.args, {"y"}, "args");
    const auto y = io::read_point(io::require(ctx.args, "y", "args"), ctx.space.dimension(), "args.y");
    ClassifyOptions opts;
    opts.seed = ctx.seed;
    if (ctx.tol)
        opts.tol = *ctx.tol;
    const auto c = classify_point(ctx.space, C, y, opts);
    auto rec     = record("classify", "internal or cuticle point");
    rec.values   = {{"y", io::write_vector(y)},
                    {"verdict", verdict_name(c.verdict)},
                    {"method", classify_method_name(c.method)},
                    {"score", c.score},
                    {"heuristic", c.heuristic()},
                    {"witness", c.witness ? io::write_vector(*c.witness) : json(nullptr)}};
    if (c.heuristic()) {
        rec.status = Status::inconclusive;
        rec.note   = "no supporting functional found by the search";
    }
    return rec;
}

inline CheckRecord run_dualcone(const Context &ctx, const json &doc, const Overrides &ov) {
    io::expect_only(ctx.args, {"kind", "check", "point", "trials"}, "args");
    const std::string kind  = ov.kind ? *ov.kind : read_string(ctx.args, "kind", "args");
    const std::string check = ov.check ? *ov.check : read_string(ctx.args, "check", "args");
    if (kind != "metric" && kind != "generalized")
        throw SchemaError("dualcone: kind must be 'metric' or 'generalized'");
    int trials = 200;
    if (ctx.args.contains("trials"))
        trials = read_positive_int(ctx.args.at("trials"), "args.trials");
    if (ctx.trials)
        trials = *ctx.trials;
    const LpSpace &X = ctx.space;
    const auto n     = X.dimension();
    const double tol = exact_tol(ctx);

    auto rec = record("dualcone", kind + " dual cone: " + check);
    rec.values["kind"]  = kind;
    rec.values["check"] = check;

    if (check == "intersection") {
        if (kind != "generalized")
            throw SchemaError("dualcone: the intersection check applies to generalized dual cones");
        if (doc.contains("set"))
            throw SchemaError("dualcone intersection: give the cones in 'sets', not 'set'");
        const auto &sets = io::require(doc, "sets", "problem");
        if (!sets.is_array() || sets.size() < 2)
            throw SchemaError("sets: expected an array of at least two cones");
        std::vector<ConeWithVertex> family;
        for (std::size_t i = 0; i < sets.size(); ++i)
            family.push_back(read_cone(sets[i], X, "sets[" + std::to_string(i) + "]"));
        const auto r = intersection_dual_check(X, family, trials, ctx.seed, ctx.tol.value_or(1e-8));
        rec.values["intersection_generators"] = point_list(r.intersection_generators);
        rec.values["forward_checked"]         = r.forward_checked;
        rec.values["forward_failures"]        = r.forward_failures;
        rec.values["backward_checked"]        = r.backward_checked;
        rec.values["backward_failures"]       = r.backward_failures;
        rec.values["max_forward_violation"]   = r.max_forward_violation;
        rec.values["max_backward_residual"]   = r.max_backward_residual;
        rec.status = r.passed() ? Status::pass : Status::fail;
        return rec;
    }

    if (doc.contains("sets"))
        throw SchemaError("dualcone: 'sets' is only used by the intersection check");
    const auto K = read_cone(io::require(doc, "set", "problem"), X, "set");
    auto point   = [&](const char *what) -> const json & {
        if (!ctx.args.contains("point"))
            throw SchemaError(std::string("args: check '") + check + "' needs 'point' (" + what + ")");
        return ctx.args.at("point");
    };

    if (check == "member") {
        if (kind == "metric") {
            const auto x          = io::read_point(point("x"), n, "args.point");
            rec.values["member"]  = member_metric_dual(X, K, x, tol);
            rec.values["margin"]  = metric_dual_margin(X, K, x);
        } else {
            const auto psi        = io::read_functional(point("psi"), n, "args.point");
            rec.values["member"]  = member_generalized_dual(X, K, psi, tol);
            rec.values["margin"]  = generalized_dual_margin(X, K, psi);
        }
        return rec;
    }

    if (check == "convexity") {
        if (kind == "metric") {
            const auto w = probe_nonconvexity_metric_dual(X, K, trials, ctx.seed, tol);
            rec.values["witness_found"] = w.has_value();
            if (w) {
                rec.witnesses.push_back(verify::witness_json(*w));
                if (!verify_witness(X, K, *w, tol))
                    rec.status = Status::fail;
            }
            return rec;
        }
        // The generalized dual cone is Jv plus a polar cone, hence convex;
        // sample pairs and confirm the midpoints stay inside.
        const auto s = sample_generalized_dual(X, K, 2 * trials, ctx.seed);
        int failures = 0;
        for (int i = 0; i + 1 < static_cast<int>(s.size()); i += 2)
            if (!member_generalized_dual(X, K, DualVec(0.5 * (s[i].coords() + s[i + 1].coords())), tol))
                ++failures;
        rec.values["witness_found"] = failures > 0;
        rec.values["pairs_checked"] = static_cast<int>(s.size()) / 2;
        rec.values["failures"]      = failures;
        rec.status                  = failures == 0 ? Status::pass : Status::fail;
        return rec;
    }

    if (check == "double-dual") {
        if (kind == "metric") {
            const auto w = metric_double_dual_violation(X, K, trials, ctx.seed, tol);
            rec.values["witness_found"] = w.has_value();
            if (w) {
                rec.witnesses.push_back(verify::witness_json(*w));
                if (!verify_witness(X, K, *w, tol))
                    rec.status = Status::fail;
            }
            return rec;
        }
        const auto z = io::read_point(point("z"), n, "args.point");
        const auto v = generalized_double_dual_member(X, K, z, tol, 64, ctx.seed);
        rec.values["primal_member"]      = v.primal_member;
        rec.values["certificate_member"] = v.certificate_member;
        rec.values["certificate"]  = v.certificate ? io::write_vector(*v.certificate) : json(nullptr);
        rec.values["certificate_value"] = v.certificate_value;
        rec.status = v.agree() ? Status::pass : Status::fail;
        return rec;
    }

    if (check == "identity") {
        if (kind != "metric")
            throw SchemaError("dualcone: the identity check applies to the metric projection");
        const auto w = io::read_point(point("w"), n, "args.point");
        const auto d = identity_defect(X, K, w, solver_options(ctx));
        rec.values["projection"] = projection_json(d.projection);
        rec.values["delta"]      = d.delta;
        if (const auto wit = hilbert_identity_violation(X, K, w, solver_options(ctx), tol))
            rec.witnesses.push_back(verify::witness_json(*wit));
        rec.values["witness_found"] = !rec.witnesses.empty();
        if (!d.projection.converged)
            rec.status = Status::fail;
        return rec;
    }

    throw SchemaError("dualcone: unknown check '" + check + "'");
}

} // namespace detail

/// Parses and runs one problem document. Throws SchemaError for malformed
/// documents; operation preconditions surface as std::invalid_argument or
/// std::domain_error. A nonempty `operation` (the CLI subcommand) fills in
/// a missing "operation" field and must match a present one.
inline Report run_single(const json &doc, const Overrides &ov = {}, const std::string &operation = "") {
    io::expect_only(doc, {"operation", "space", "set", "sets", "args", "tol", "seed"}, "problem");
    std::string op = operation;
    if (doc.contains("operation") || op.empty()) {
        const std::string named = detail::read_string(doc, "operation", "problem");
        if (!op.empty() && named != op)
            throw SchemaError("problem: operation '" + named + "' does not match subcommand '" + op + "'");
        op = named;
    }

    Context ctx{io::read_space(io::require(doc, "space", "problem")), json::object(), {}, 0, ov.trials};
    if (doc.contains("args"))
        ctx.args = doc.at("args");
    if (!ctx.args.is_object())
        throw SchemaError("args: expected an object");
    if (doc.contains("tol")) {
        ctx.tol = io::read_number(doc.at("tol"), "problem.tol");
        if (!(*ctx.tol > 0))
            throw SchemaError("problem.tol: must be positive");
    }
    if (doc.contains("seed")) {
        if (!doc.at("seed").is_number_unsigned())
            throw SchemaError("problem.seed: expected a nonnegative integer");
        ctx.seed = doc.at("seed").get<std::uint64_t>();
    }
    if (ov.tol)
        ctx.tol = *ov.tol;
    if (ov.seed)
        ctx.seed = *ov.seed;

    CheckRecord rec;
    if (op == "dualcone") {
        rec = detail::run_dualcone(ctx, doc, ov);
    } else {
        if (doc.contains("sets"))
            throw SchemaError("problem: 'sets' is only used by dualcone intersection checks");
        const ConvexSet C = io::read_set(io::require(doc, "set", "problem"), ctx.space);
        if (op == "project")
            rec = detail::run_project(ctx, C);
        else if (op == "gproject")
            rec = detail::run_gproject(ctx, C);
        else if (op == "face")
            rec = detail::run_face(ctx, C);
        else if (op == "vision")
            rec = detail::run_vision(ctx, C);
        else if (op == "classify")
            rec = detail::run_classify(ctx, C);
        else
            throw SchemaError("problem: unknown operation '" + op + "'");
    }
    rec.values["space"] = io::write_space(ctx.space);

    Report rep;
    rep.kind = "single";
    rep.seed = ctx.seed;
    rep.records.push_back(std::move(rec));
    return rep;
}

} // namespace lpgeom::cli
