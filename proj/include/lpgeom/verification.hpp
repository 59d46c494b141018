#pragma once

#include <lpgeom/cones.hpp>
#include <lpgeom/json_io.hpp>
#include <lpgeom/sets.hpp>
#include <lpgeom/space.hpp>

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <random>
#include <string>
#include <thread>
#include <vector>

namespace lpgeom::verify {

using io::json;

inline constexpr const char *kVersion = "1.0.0";

enum class Status { pass, fail, inconclusive };

inline const char *status_name(Status s) {
    switch (s) {
    case Status::pass:
        return "pass";
    case Status::fail:
        return "fail";
    case Status::inconclusive:
        return "inconclusive";
    }
    return "unknown";
}

struct CheckRecord {
    std::string id;
    /// Short description of the property or instance being reproduced.
    std::string reference;
    Status status = Status::fail;
    json values    = json::object();
    json witnesses = json::array();
    std::string note;

    json to_json() const {
        json out;
        out["id"]        = id;
        out["reference"] = reference;
        out["status"]    = status_name(status);
        out["values"]    = values;
        out["witnesses"] = witnesses;
        out["note"]      = note;
        return out;
    }
};

struct Report {
    std::string kind;
    std::uint64_t seed = 0;
    std::vector<CheckRecord> records;

    int count(Status s) const {
        return static_cast<int>(std::count_if(records.begin(), records.end(),
                                              [&](const CheckRecord &r) { return r.status == s; }));
    }
    bool all_passed() const { return count(Status::pass) == static_cast<int>(records.size()); }
    bool any_failed() const { return count(Status::fail) > 0; }

    void sort() {
        std::sort(records.begin(), records.end(), [](const auto &a, const auto &b) { return a.id < b.id; });
    }

    json to_json() const {
        json out;
        out["kind"]    = kind;
        out["version"] = kVersion;
        out["seed"]    = seed;
        out["summary"] = {{"total", records.size()},
                          {"pass", count(Status::pass)},
                          {"fail", count(Status::fail)},
                          {"inconclusive", count(Status::inconclusive)}};
        json recs = json::array();
        for (const auto &r : records)
            recs.push_back(r.to_json());
        out["records"] = recs;
        return out;
    }
};

/// Runs fn(i) for i in [0, count) on a few threads. Callers write results
/// into slot i, so the outcome does not depend on scheduling.
template <class Fn>
void parallel_for(std::size_t count, Fn &&fn, unsigned threads = 0) {
    if (threads == 0)
        threads = std::max(1u, std::min(8u, std::thread::hardware_concurrency()));
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex mtx;
    auto work = [&] {
        for (;;) {
            const std::size_t i = next++;
            if (i >= count)
                return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(mtx);
                if (!error)
                    error = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t)
        pool.emplace_back(work);
    work();
    for (auto &t : pool)
        t.join();
    if (error)
        std::rethrow_exception(error);
}

/// Seeded generator for random instances.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(eng_); }
    double gauss() { return normal_(eng_); }
    int integer(int a, int b) { return std::uniform_int_distribution<int>(a, b)(eng_); }
    bool coin(double prob = 0.5) { return std::bernoulli_distribution(prob)(eng_); }
    double log_uniform(double a, double b) { return std::exp(uniform(std::log(a), std::log(b))); }

    Eigen::VectorXd gaussian(Eigen::Index n) {
        Eigen::VectorXd v(n);
        for (Eigen::Index i = 0; i < n; ++i)
            v(i) = gauss();
        return v;
    }
    Eigen::VectorXd nonzero_gaussian(Eigen::Index n) {
        for (;;) {
            Eigen::VectorXd v = gaussian(n);
            if (v.norm() > 1e-3)
                return v;
        }
    }
    Eigen::VectorXd weights(Eigen::Index n, double lo = 0.5, double hi = 2.0) {
        Eigen::VectorXd w(n);
        for (Eigen::Index i = 0; i < n; ++i)
            w(i) = uniform(lo, hi);
        return w;
    }
    std::mt19937_64 &engine() { return eng_; }

  private:
    std::mt19937_64 eng_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

inline LpSpace random_space(Rng &rng, Eigen::Index n, double p, bool weighted = true) {
    return weighted ? LpSpace(p, rng.weights(n)) : LpSpace(n, p);
}

/// Cone with m Gaussian generators; vertex at the origin or Gaussian.
inline ConeWithVertex random_cone(Rng &rng, Eigen::Index n, int m, bool origin_vertex) {
    std::vector<PrimalVec> gens;
    for (int j = 0; j < m; ++j)
        gens.emplace_back(rng.nonzero_gaussian(n));
    PrimalVec v = origin_vertex ? PrimalVec::zero(n) : PrimalVec(rng.gaussian(n));
    return ConeWithVertex(v, gens);
}

/// Pointed cone: generators drawn in the half-space {x_0 > 0}, vertex at
/// the origin unless `shifted`.
inline ConeWithVertex random_pointed_cone(Rng &rng, Eigen::Index n, int m, bool shifted = false) {
    std::vector<PrimalVec> gens;
    for (int j = 0; j < m; ++j) {
        Eigen::VectorXd g = rng.nonzero_gaussian(n);
        g(0)              = std::abs(g(0)) + 0.2;
        gens.emplace_back(g);
    }
    return ConeWithVertex(shifted ? PrimalVec(rng.gaussian(n)) : PrimalVec::zero(n), gens);
}

inline ConvexSet random_segment(Rng &rng, Eigen::Index n) {
    return Segment{PrimalVec(rng.gaussian(n)), PrimalVec(rng.gaussian(n) * 2.0)};
}
inline ConvexSet random_ray(Rng &rng, Eigen::Index n) {
    return Ray{PrimalVec(rng.gaussian(n)), PrimalVec(rng.nonzero_gaussian(n))};
}
inline ConvexSet random_polytope(Rng &rng, Eigen::Index n, int m) {
    std::vector<PrimalVec> verts;
    for (int j = 0; j < m; ++j)
        verts.emplace_back(rng.gaussian(n) * 2.0);
    return Polytope{verts};
}

inline json vec_json(const Eigen::VectorXd &v) { return io::write_vector(v); }
template <class Tag>
json vec_json(const Coords<Tag> &c) {
    return io::write_vector(c);
}

inline json witness_json(const Witness &w) {
    json pts = json::array();
    for (const auto &p : w.points)
        pts.push_back(vec_json(p));
    return {{"kind", witness_kind_name(w.kind)}, {"points", pts}, {"scalars", w.scalars}, {"value", w.value}};
}

} // namespace lpgeom::verify
