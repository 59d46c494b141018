#pragma once

// Randomized property runs. Each trial draws its instance from its own
// seed, derive_seed(base, trial), so any reported trial can be replayed.

#include <lpgeom/cones.hpp>
#include <lpgeom/faces.hpp>
#include <lpgeom/paper_suite.hpp>
#include <lpgeom/project.hpp>
#include <lpgeom/verification.hpp>

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace lpgeom::verify {

enum class Outcome { ok, failure, witness, skipped };

struct TrialResult {
    Outcome outcome = Outcome::ok;
    json detail     = json::object();
};

/// Properties fall in two classes: claimed-true ones, where any
/// counterexample is a failure, and claimed-false ones (non-Hilbert
/// phenomena), where a witness is the expected result except at p = 2.
struct FuzzTarget {
    std::string id;
    std::string description;
    bool claimed_false = false;
    double default_p   = 0.0; // 0: drawn per trial from {1.5, 2, 3, 4}
    std::function<TrialResult(std::uint64_t seed, double p)> run;
};

namespace detail {

inline double trial_exponent(Rng &rng, double p) {
    static const double ps[] = {1.5, 2.0, 3.0, 4.0};
    return p > 0 ? p : ps[rng.integer(0, 3)];
}

inline TrialResult ok() { return {}; }
inline TrialResult fail(json detail) { return {Outcome::failure, std::move(detail)}; }
inline TrialResult skip() { return {Outcome::skipped, json::object()}; }

inline TrialResult duality_identities(std::uint64_t seed, double p0) {
    Rng rng(seed);
    const double p   = trial_exponent(rng, p0);
    const auto n     = static_cast<Eigen::Index>(rng.integer(1, 8));
    const LpSpace X  = random_space(rng, n, p);
    const PrimalVec x(rng.gaussian(n) * rng.log_uniform(1e-2, 10.0));
    const DualVec jx = X.duality_map(x);
    const double nx  = X.norm(x);
    const double e1  = std::abs(X.pair(jx, x) - nx * nx) / (1.0 + nx * nx);
    const double e2  = std::abs(X.dual_norm(jx) - nx) / (1.0 + nx);
    const double e3  = X.norm(X.inverse_duality_map(jx) - x) / (1.0 + nx);
    const double e4  = X.lyapunov(jx, x);
    if (e1 <= 1e-10 && e2 <= 1e-10 && e3 <= 1e-8 && e4 <= 1e-10)
        return ok();
    return fail({{"p", p}, {"x", vec_json(x)}, {"errors", {e1, e2, e3, e4}}});
}

inline TrialResult metric_dual_cone_property(std::uint64_t seed, double p0) {
    Rng rng(seed);
    const double p  = trial_exponent(rng, p0);
    const LpSpace X = random_space(rng, 3, p);
    const auto K    = random_cone(rng, 3, rng.integer(1, 4), rng.coin());
    const PrimalVec x = sample_metric_dual(X, K, 1, seed).front();
    const double t    = rng.log_uniform(0.1, 10.0);
    const PrimalVec s = K.vertex() + t * (x - K.vertex());
    if (member_metric_dual(X, K, s))
        return ok();
    return fail({{"p", p}, {"x", vec_json(x)}, {"t", t}});
}

/// K_P^perp = P_K^{-1}(v): members project to v, clear non-members do not.
inline TrialResult metric_dual_equivalence(std::uint64_t seed, double p0) {
    Rng rng(seed);
    const double p  = trial_exponent(rng, p0);
    const LpSpace X = random_space(rng, 3, p);
    const auto K    = random_pointed_cone(rng, 3, rng.integer(1, 3), true);
    const bool take_member = rng.coin();
    PrimalVec x            = take_member ? sample_metric_dual(X, K, 1, seed).front()
                                         : K.vertex() + PrimalVec(rng.gaussian(3) * 2.0);
    const double scale = 1.0 + X.norm(x - K.vertex());
    const bool member  = member_metric_dual(X, K, x);
    if (!member && metric_dual_margin(X, K, x) > -1e-3 * scale)
        return skip(); // too close to the boundary for a solver comparison
    const auto res    = metric_project(X, K.as_set(), x);
    const double dist = X.norm(res.point - K.vertex());
    const bool at_v   = dist <= 1e-6 * scale;
    if (!res.converged)
        return skip();
    if (at_v == member)
        return ok();
    return fail({{"p", p}, {"x", vec_json(x)}, {"member", member}, {"distance_to_vertex", dist}});
}

inline TrialResult metric_dual_convexity(std::uint64_t seed, double p0, bool known_instance) {
    Rng rng(seed);
    const double p  = p0 > 0 ? p0 : 3.0;
    const LpSpace X(3, p);
    const auto K    = known_instance ? instances::ray_cone() : random_cone(rng, 3, rng.integer(1, 3), rng.coin());
    const auto wit  = probe_nonconvexity_metric_dual(X, K, 4, seed);
    if (!wit)
        return ok();
    if (!verify_witness(X, K, *wit))
        return fail({{"p", p}, {"unverified_witness", witness_json(*wit)}});
    return {Outcome::witness, {{"p", p}, {"witness", witness_json(*wit)}}};
}

inline TrialResult metric_double_dual(std::uint64_t seed, double p0, bool known_instance) {
    Rng rng(seed);
    const double p  = p0 > 0 ? p0 : 3.0;
    const LpSpace X(3, p);
    const auto K    = known_instance ? instances::ray_cone() : random_cone(rng, 3, rng.integer(1, 3), true);
    const auto wit  = metric_double_dual_violation(X, K, 4, seed);
    if (!wit)
        return ok();
    if (!verify_witness(X, K, *wit))
        return fail({{"p", p}, {"unverified_witness", witness_json(*wit)}});
    return {Outcome::witness, {{"p", p}, {"witness", witness_json(*wit)}}};
}

/// K_pi^perp = pi_K^{-1}(v).
inline TrialResult generalized_dual_equivalence(std::uint64_t seed, double p0) {
    Rng rng(seed);
    const double p  = trial_exponent(rng, p0);
    const LpSpace X = random_space(rng, 3, p);
    const auto K    = random_pointed_cone(rng, 3, rng.integer(1, 3), true);
    const DualVec jv = X.duality_map(K.vertex());
    const bool take_member = rng.coin();
    const DualVec psi = take_member ? sample_generalized_dual(X, K, 1, seed).front() : jv + DualVec(rng.gaussian(3));
    const double scale = 1.0 + X.dual_norm(psi - jv);
    const bool member  = member_generalized_dual(X, K, psi);
    if (!member && generalized_dual_margin(X, K, psi) > -1e-3 * scale)
        return skip();
    const auto res = generalized_project(X, K.as_set(), psi);
    if (!res.converged)
        return skip();
    const double dist = X.norm(res.point - K.vertex());
    if ((dist <= 1e-6 * (1.0 + X.norm(K.vertex()))) == member)
        return ok();
    return fail({{"p", p}, {"psi", vec_json(psi)}, {"member", member}, {"distance_to_vertex", dist}});
}

inline TrialResult generalized_double_dual(std::uint64_t seed, double p0) {
    Rng rng(seed);
    const double p  = trial_exponent(rng, p0);
    const LpSpace X = random_space(rng, 3, p);
    const auto K    = random_pointed_cone(rng, 3, rng.integer(1, 4), true);
    const bool inside = rng.coin();
    const PrimalVec z = inside ? sample(X, K.as_set(), seed, 1).front() : K.vertex() + PrimalVec(rng.gaussian(3) * 2.0);
    if (!inside && coefficient_residual(X, K.as_set(), z) < 1e-3)
        return skip();
    const auto v = generalized_double_dual_member(X, K, z, kExactTol, 32, seed);
    if (v.agree() && v.primal_member == inside)
        return ok();
    return fail({{"p", p},
                 {"z", vec_json(z)},
                 {"constructed_inside", inside},
                 {"primal_member", v.primal_member},
                 {"certificate_member", v.certificate_member}});
}

inline TrialResult projection_homogeneity(std::uint64_t seed, double p0) {
    Rng rng(seed);
    const double p  = trial_exponent(rng, p0);
    const LpSpace X = random_space(rng, 3, p);
    const auto K    = random_pointed_cone(rng, 3, rng.integer(1, 4));
    const PrimalVec x(rng.gaussian(3) * 3.0);
    const double t    = rng.log_uniform(0.1, 10.0);
    const PrimalVec a = metric_project(X, K.as_set(), t * x).point;
    const PrimalVec b = t * metric_project(X, K.as_set(), x).point;
    const double den  = std::max(X.norm(a), X.norm(b));
    const double rel  = den == 0.0 ? 0.0 : X.norm(a - b) / den;
    if (rel <= 1e-6)
        return ok();
    return fail({{"p", p}, {"x", vec_json(x)}, {"t", t}, {"relative_error", rel}});
}

/// <J w, P_K w> = ||P_K w||^2 holds at p = 2 and generally fails otherwise.
inline TrialResult hilbert_identity(std::uint64_t seed, double p0) {
    Rng rng(seed);
    const double p  = p0 > 0 ? p0 : 3.0;
    const LpSpace X(3, p);
    const auto K    = random_pointed_cone(rng, 3, rng.integer(1, 3));
    const PrimalVec w(rng.gaussian(3) * 3.0);
    const auto d    = identity_defect(X, K, w);
    if (p == 2.0)
        return std::abs(d.delta) <= 1e-8 ? ok() : fail({{"p", p}, {"w", vec_json(w)}, {"delta", d.delta}});
    if (std::abs(d.delta) > 1e-6)
        return {Outcome::witness, {{"p", p}, {"w", vec_json(w)}, {"delta", d.delta}}};
    return ok();
}

inline TrialResult ball_partition(std::uint64_t seed, double p0) {
    Rng rng(seed);
    const double p   = trial_exponent(rng, p0);
    const auto n     = static_cast<Eigen::Index>(rng.integer(1, 5));
    const LpSpace X  = random_space(rng, n, p);
    const double r   = rng.uniform(0.5, 3.0);
    const PrimalVec d(rng.nonzero_gaussian(n));
    const bool sphere = rng.coin(0.4);
    const PrimalVec y = ((sphere ? r : r * rng.uniform(0.0, 1.0 - 1e-6)) / X.norm(d)) * d;
    const auto c      = classify_point(X, Ball{r}, y);
    const bool good   = (c.verdict == Verdict::cuticle) == sphere && c.witness.has_value() == sphere &&
                      (!c.witness || face_membership(X, Ball{r}, *c.witness, y));
    if (good)
        return ok();
    return fail({{"p", p}, {"y", vec_json(y)}, {"radius", r}, {"verdict", verdict_name(c.verdict)}});
}

inline TrialResult vision_conjugation(std::uint64_t seed, double p0) {
    Rng rng(seed);
    const double p  = trial_exponent(rng, p0);
    const LpSpace X = random_space(rng, 3, p);
    const int kind  = rng.integer(0, 3);
    const ConvexSet C = kind == 0   ? random_ray(rng, 3)
                        : kind == 1 ? random_segment(rng, 3)
                        : kind == 2 ? random_polytope(rng, 3, rng.integer(3, 6))
                                    : ConvexSet(Ball{rng.uniform(0.5, 2.0)});
    const auto f = face(X, C, DualVec(rng.nonzero_gaussian(3)));
    if (f.representatives.empty())
        return skip();
    const auto rep = vision_conjugation_check(X, C, f.representatives.front(), 16, seed);
    if (rep.passed())
        return ok();
    return fail({{"p", p}, {"set", io::write_set(C)}, {"discrepancies", rep.discrepancies}});
}

inline TrialResult dual_cone_vision_bridge_trial(std::uint64_t seed, double p0) {
    Rng rng(seed);
    const double p  = trial_exponent(rng, p0);
    const LpSpace X = random_space(rng, 3, p);
    const auto K    = random_cone(rng, 3, rng.integer(1, 4), rng.coin());
    const auto rep  = dual_cone_vision_bridge(X, K, 16, seed);
    if (rep.passed())
        return ok();
    return fail({{"p", p}, {"set", io::write_set(K.as_set())}, {"disagreements", rep.disagreements}});
}

inline TrialResult fixed_point(std::uint64_t seed, double p0) {
    Rng rng(seed);
    const double p   = trial_exponent(rng, p0);
    const LpSpace X  = random_space(rng, 3, p);
    const auto inst  = fixed_point_instance(X, rng, rng.integer(0, 2), rng.coin());
    const auto rep   = fixed_point_check(X, inst.set, inst.u, inst.y, 1e-6);
    if (rep.inconclusive)
        return skip();
    if (rep.agree())
        return ok();
    return fail({{"p", p},
                 {"set", io::write_set(inst.set)},
                 {"u", vec_json(inst.u)},
                 {"y", vec_json(inst.y)},
                 {"face_member", rep.face_member},
                 {"metric_fixed", rep.metric_fixed},
                 {"generalized_fixed", rep.generalized_fixed}});
}

inline TrialResult intersection_dual(std::uint64_t seed, double p0) {
    Rng rng(seed);
    const double p  = trial_exponent(rng, p0);
    const LpSpace X = random_space(rng, 3, p);
    // Perturbed orthants keep the intersection pointed and full-dimensional.
    auto orthant = [&] {
        std::vector<PrimalVec> gens;
        for (Eigen::Index k = 0; k < 3; ++k) {
            Eigen::VectorXd g = Eigen::VectorXd::Unit(3, k) + 0.25 * rng.gaussian(3);
            g(k)              = std::abs(g(k)) + 0.5;
            gens.emplace_back(g);
        }
        return gens;
    };
    const PrimalVec v(rng.gaussian(3));
    const std::vector<ConeWithVertex> fam{ConeWithVertex(v, orthant()), ConeWithVertex(v, orthant())};
    try {
        const auto rep = intersection_dual_check(X, fam, 20, seed, 1e-8);
        if (rep.passed())
            return ok();
        return fail({{"p", p}, {"forward_failures", rep.forward_failures}, {"backward_failures", rep.backward_failures}});
    } catch (const std::invalid_argument &) {
        return skip(); // intersection not pointed
    }
}

} // namespace detail

inline const std::vector<FuzzTarget> &fuzz_targets() {
    using namespace detail;
    static const std::vector<FuzzTarget> targets = {
        {"duality-identities", "<Jx,x> = ||x||^2 = ||Jx||^2, J*J = id, V(Jx,x) = 0", false, 0.0, duality_identities},
        {"metric-dual-cone-property", "metric dual cone is a cone with vertex v", false, 0.0, metric_dual_cone_property},
        {"metric-dual-equivalence", "metric dual cone equals the preimage of v under P_K", false, 0.0,
         metric_dual_equivalence},
        {"metric-dual-convexity", "metric dual cone is convex (false unless p = 2)", true, 3.0,
         [](std::uint64_t s, double p) { return metric_dual_convexity(s, p, false); }},
        {"metric-double-dual", "a cone lies in its metric double dual (false unless p = 2)", true, 3.0,
         [](std::uint64_t s, double p) { return metric_double_dual(s, p, false); }},
        {"generalized-dual-equivalence", "generalized dual cone equals the preimage of v under pi_K", false, 0.0,
         generalized_dual_equivalence},
        {"generalized-double-dual", "generalized double dual of a cone is the cone", false, 0.0,
         generalized_double_dual},
        {"projection-homogeneity", "P_K(t x) = t P_K(x) for pointed cones", false, 0.0, projection_homogeneity},
        {"hilbert-identity", "<Jw, P_K w> = ||P_K w||^2 (false unless p = 2)", true, 3.0, hilbert_identity},
        {"ball-partition", "ball points are internal iff ||y|| < r", false, 0.0, ball_partition},
        {"vision-conjugation", "F^{-2}(y) = J*(F^{-1}(y))", false, 0.0, vision_conjugation},
        {"dual-cone-vision-bridge", "generalized dual cone = J v + F_K^{-1}(v)", false, 0.0,
         dual_cone_vision_bridge_trial},
        {"fixed-point", "face membership iff both projection fixed-point equations", false, 0.0, fixed_point},
        {"intersection-dual", "generalized dual of an intersection of cones", false, 0.0, intersection_dual},
    };
    return targets;
}

inline const FuzzTarget *find_target(const std::string &id) {
    for (const auto &t : fuzz_targets())
        if (t.id == id)
            return &t;
    return nullptr;
}

/// Runs `trials` seeded trials of one target and summarizes them in a
/// single record. Claimed-true targets pass with zero failures. Claimed-
/// false targets pass when a witness appears (p != 2) or when none does
/// (p = 2); finding nothing at p != 2 is inconclusive. The first trial of
/// a claimed-false target uses the known l_3 instance when p = 3.
inline Report run_fuzz(const std::string &target, int trials, std::uint64_t seed, std::optional<double> p = {}) {
    const FuzzTarget *t = find_target(target);
    if (!t)
        throw std::invalid_argument("run_fuzz: unknown target '" + target + "'");
    if (trials < 1)
        throw std::invalid_argument("run_fuzz: trials must be positive");
    if (p && !(*p > 1.0 && std::isfinite(*p)))
        throw std::domain_error("run_fuzz: exponent must lie in (1, inf)");
    const double p0 = p.value_or(t->default_p);

    std::vector<TrialResult> results(static_cast<std::size_t>(trials));
    parallel_for(results.size(), [&](std::size_t i) {
        const std::uint64_t s = derive_seed(seed, i);
        if (i == 0 && t->claimed_false && target != "hilbert-identity") {
            results[i] = target == "metric-dual-convexity" ? detail::metric_dual_convexity(s, p0, true)
                                                           : detail::metric_double_dual(s, p0, true);
        } else {
            results[i] = t->run(s, p0);
        }
    });

    int failures = 0, witnesses = 0, skipped = 0;
    CheckRecord rec;
    rec.id        = t->id;
    rec.reference = t->description;
    for (std::size_t i = 0; i < results.size(); ++i) {
        const auto &r = results[i];
        if (r.outcome == Outcome::skipped)
            ++skipped;
        const bool hilbert_witness = r.outcome == Outcome::witness && p0 == 2.0;
        if (r.outcome == Outcome::failure || hilbert_witness) {
            ++failures;
            if (rec.witnesses.size() < 20)
                rec.witnesses.push_back({{"trial", i}, {"trial_seed", derive_seed(seed, i)}, {"kind", "failure"},
                                         {"detail", r.detail}});
        } else if (r.outcome == Outcome::witness) {
            ++witnesses;
            if (rec.witnesses.size() < 20)
                rec.witnesses.push_back({{"trial", i}, {"trial_seed", derive_seed(seed, i)}, {"kind", "witness"},
                                         {"detail", r.detail}});
        }
    }
    rec.values = {{"trials", trials},
                  {"p", p0 > 0 ? json(p0) : json("mixed")},
                  {"failures", failures},
                  {"witnesses", witnesses},
                  {"skipped", skipped},
                  {"claimed_false", t->claimed_false}};
    if (failures > 0)
        rec.status = Status::fail;
    else if (t->claimed_false && p0 != 2.0 && witnesses == 0)
        rec.status = Status::inconclusive;
    else
        rec.status = Status::pass;
    if (t->claimed_false && p0 == 2.0 && failures == 0)
        rec.note = "no witness (expected at p=2)";

    Report rep;
    rep.kind = "fuzz";
    rep.seed = seed;
    rep.records.push_back(std::move(rec));
    return rep;
}

} // namespace lpgeom::verify
