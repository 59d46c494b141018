#pragma once

#include <lpgeom/sets.hpp>
#include <lpgeom/space.hpp>

#include <nlohmann/json.hpp>

#include <cmath>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace lpgeom::io {

using json = nlohmann::ordered_json;

/// Malformed or schema-violating input document.
class SchemaError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Rejects any key of `obj` not in `allowed`.
inline void expect_only(const json &obj, std::initializer_list<const char *> allowed, const std::string &where) {
    if (!obj.is_object())
        throw SchemaError(where + ": expected an object");
    for (const auto &item : obj.items()) {
        bool ok = false;
        for (const char *k : allowed)
            ok = ok || item.key() == k;
        if (!ok)
            throw SchemaError(where + ": unknown field '" + item.key() + "'");
    }
}

inline const json &require(const json &obj, const char *key, const std::string &where) {
    if (!obj.contains(key))
        throw SchemaError(where + ": missing field '" + key + "'");
    return obj.at(key);
}

/// Numbers are JSON numbers; infinities are the strings "+inf" / "-inf".
inline double read_number(const json &j, const std::string &where) {
    if (j.is_number())
        return j.get<double>();
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "+inf" || s == "inf")
            return kInf;
        if (s == "-inf")
            return -kInf;
    }
    throw SchemaError(where + ": expected a number");
}

inline json write_number(double v) {
    if (std::isinf(v))
        return v > 0 ? json("+inf") : json("-inf");
    if (std::isnan(v))
        return json("nan");
    return json(v == 0.0 ? 0.0 : v); // no negative zero
}

inline Eigen::VectorXd read_vector(const json &j, const std::string &where) {
    if (!j.is_array() || j.empty())
        throw SchemaError(where + ": expected a nonempty array of numbers");
    Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number())
            throw SchemaError(where + ": expected a nonempty array of numbers");
        v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
    }
    return v;
}

template <class Tag>
Coords<Tag> read_coords(const json &j, Eigen::Index n, const std::string &where) {
    Coords<Tag> c(read_vector(j, where));
    if (c.size() != n)
        throw SchemaError(where + ": expected " + std::to_string(n) + " coordinates, got " +
                          std::to_string(c.size()));
    return c;
}

inline PrimalVec read_point(const json &j, Eigen::Index n, const std::string &where) {
    return read_coords<PrimalTag>(j, n, where);
}
inline DualVec read_functional(const json &j, Eigen::Index n, const std::string &where) {
    return read_coords<DualTag>(j, n, where);
}

inline json write_vector(const Eigen::VectorXd &v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i)
        out.push_back(write_number(v(i)));
    return out;
}

template <class Tag>
json write_vector(const Coords<Tag> &c) {
    return write_vector(c.coords());
}

/// {"n": 3, "p": 3} or {"p": 1.5, "weights": [...]}; p may be "+inf".
inline LpSpace read_space(const json &j) {
    expect_only(j, {"n", "p", "weights"}, "space");
    const double p = read_number(require(j, "p", "space"), "space.p");
    try {
        if (j.contains("weights")) {
            const Eigen::VectorXd w = read_vector(j.at("weights"), "space.weights");
            if (j.contains("n") && j.at("n").get<long>() != w.size())
                throw SchemaError("space: n does not match the number of weights");
            return LpSpace(p, w);
        }
        const auto &n = require(j, "n", "space");
        if (!n.is_number_integer() || n.get<long>() < 1)
            throw SchemaError("space.n: expected a positive integer");
        return LpSpace(n.get<Eigen::Index>(), p);
    } catch (const std::invalid_argument &e) {
        throw SchemaError(e.what());
    }
}

inline json write_space(const LpSpace &X) {
    json out;
    out["n"] = X.dimension();
    out["p"] = write_number(X.exponent());
    if (!X.unit_weights())
        out["weights"] = write_vector(X.weights());
    return out;
}

inline std::vector<PrimalVec> read_point_list(const json &j, Eigen::Index n, const std::string &where) {
    if (!j.is_array() || j.empty())
        throw SchemaError(where + ": expected a nonempty array of points");
    std::vector<PrimalVec> out;
    for (std::size_t i = 0; i < j.size(); ++i)
        out.push_back(read_point(j[i], n, where + "[" + std::to_string(i) + "]"));
    return out;
}

inline ConvexSet read_set(const json &j, const LpSpace &X) {
    if (!j.is_object())
        throw SchemaError("set: expected an object");
    const auto type = require(j, "type", "set").get<std::string>();
    const auto n    = X.dimension();
    ConvexSet C;
    if (type == "segment") {
        expect_only(j, {"type", "a", "b"}, "set(segment)");
        C = Segment{read_point(require(j, "a", "set"), n, "set.a"), read_point(require(j, "b", "set"), n, "set.b")};
    } else if (type == "ray") {
        expect_only(j, {"type", "vertex", "direction"}, "set(ray)");
        C = Ray{read_point(require(j, "vertex", "set"), n, "set.vertex"),
                read_point(require(j, "direction", "set"), n, "set.direction")};
    } else if (type == "line") {
        expect_only(j, {"type", "point", "direction"}, "set(line)");
        C = Line{read_point(require(j, "point", "set"), n, "set.point"),
                 read_point(require(j, "direction", "set"), n, "set.direction")};
    } else if (type == "cone") {
        expect_only(j, {"type", "vertex", "generators"}, "set(cone)");
        C = FinitelyGeneratedCone{read_point(require(j, "vertex", "set"), n, "set.vertex"),
                                  read_point_list(require(j, "generators", "set"), n, "set.generators")};
    } else if (type == "polytope") {
        expect_only(j, {"type", "vertices"}, "set(polytope)");
        C = Polytope{read_point_list(require(j, "vertices", "set"), n, "set.vertices")};
    } else if (type == "ball") {
        // "radius" is accepted as a spelled-out alias of "r".
        expect_only(j, {"type", "r", "radius"}, "set(ball)");
        if (j.contains("r") == j.contains("radius"))
            throw SchemaError("set(ball): give exactly one of 'r' and 'radius'");
        const char *key = j.contains("r") ? "r" : "radius";
        C = Ball{read_number(j.at(key), std::string("set.") + key)};
    } else if (type == "subspace") {
        expect_only(j, {"type", "basis"}, "set(subspace)");
        C = Subspace{read_point_list(require(j, "basis", "set"), n, "set.basis")};
    } else {
        throw SchemaError("set: unknown type '" + type + "'");
    }
    try {
        validate(X, C);
    } catch (const std::invalid_argument &e) {
        throw SchemaError(e.what());
    }
    return C;
}

inline json write_point_list(const std::vector<PrimalVec> &pts) {
    json out = json::array();
    for (const auto &p : pts)
        out.push_back(write_vector(p));
    return out;
}

inline json write_set(const ConvexSet &C) {
    return std::visit(overloaded{
                          [](const Segment &s) {
                              return json{{"type", "segment"}, {"a", write_vector(s.a)}, {"b", write_vector(s.b)}};
                          },
                          [](const Ray &r) {
                              return json{{"type", "ray"},
                                          {"vertex", write_vector(r.vertex)},
                                          {"direction", write_vector(r.direction)}};
                          },
                          [](const Line &l) {
                              return json{{"type", "line"},
                                          {"point", write_vector(l.point)},
                                          {"direction", write_vector(l.direction)}};
                          },
                          [](const FinitelyGeneratedCone &k) {
                              return json{{"type", "cone"},
                                          {"vertex", write_vector(k.vertex)},
                                          {"generators", write_point_list(k.generators)}};
                          },
                          [](const Polytope &p) {
                              return json{{"type", "polytope"}, {"vertices", write_point_list(p.vertices)}};
                          },
                          [](const Ball &b) { return json{{"type", "ball"}, {"r", write_number(b.radius)}}; },
                          [](const Subspace &s) {
                              return json{{"type", "subspace"}, {"basis", write_point_list(s.basis)}};
                          },
                      },
                      C);
}

} // namespace lpgeom::io
