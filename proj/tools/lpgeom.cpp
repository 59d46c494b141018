// lpgeom command-line front end.
//
// Exit codes: 0 all checks pass, 1 a check failed, 2 usage or input error.

#include <lpgeom/cli.hpp>
#include <lpgeom/fuzz.hpp>
#include <lpgeom/paper_suite.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using lpgeom::io::json;
using lpgeom::verify::Report;
using lpgeom::verify::Status;

constexpr int kPass      = 0;
constexpr int kCheckFail = 1;
constexpr int kUsage     = 2;

json load_document(const std::string &path) {
    std::stringstream buf;
    if (path == "-") {
        buf << std::cin.rdbuf();
    } else {
        std::ifstream in(path);
        if (!in)
            throw lpgeom::io::SchemaError("cannot open '" + path + "'");
        buf << in.rdbuf();
    }
    try {
        return json::parse(buf.str());
    } catch (const json::parse_error &e) {
        throw lpgeom::io::SchemaError(std::string("invalid JSON: ") + e.what());
    }
}

const char *tag(Status s) {
    switch (s) {
    case Status::pass:
        return "PASS";
    case Status::fail:
        return "FAIL";
    case Status::inconclusive:
        return "INCONCLUSIVE";
    }
    return "?";
}

void print_report(const Report &rep, bool as_json, bool show_values) {
    if (as_json) {
        std::cout << rep.to_json().dump(2) << '\n';
        return;
    }
    for (const auto &r : rep.records) {
        std::cout << tag(r.status) << "  " << r.id << "  (" << r.reference << ")";
        if (!r.note.empty())
            std::cout << "  -- " << r.note;
        std::cout << '\n';
        if (show_values) {
            std::cout << r.values.dump(2) << '\n';
            if (!r.witnesses.empty())
                std::cout << "witnesses: " << r.witnesses.dump(2) << '\n';
        }
    }
    std::cout << rep.count(Status::pass) << " pass, " << rep.count(Status::fail) << " fail, "
              << rep.count(Status::inconclusive) << " inconclusive\n";
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Projections, dual cones and faces in weighted l_p spaces"};
    app.require_subcommand(1);
    app.set_version_flag("--version", lpgeom::verify::kVersion);

    bool as_json = false;
    std::string input;
    std::optional<std::uint64_t> seed;
    std::optional<double> tol;
    std::optional<int> trials;
    std::optional<double> p;
    std::optional<std::string> kind, check;
    std::string target;

    auto add_common = [&](CLI::App *sub) {
        sub->add_flag("--json", as_json, "Emit the report as JSON");
        sub->add_option("--seed", seed, "Base seed");
    };
    auto add_problem = [&](CLI::App *sub) {
        add_common(sub);
        sub->add_option("--input", input, "Problem document ('-' for stdin)")->required();
        sub->add_option("--tol", tol, "Tolerance")->check(CLI::PositiveNumber);
    };

    const std::vector<std::pair<std::string, std::string>> single_ops = {
        {"project", "Metric projection of a point onto a set"},
        {"gproject", "Generalized projection of a functional onto a set"},
        {"face", "Face of a set exposed by a functional"},
        {"vision", "Vision membership at a point of a set"},
        {"classify", "Classify a point of a set as internal or cuticle"},
    };
    std::vector<CLI::App *> singles;
    for (const auto &[name, desc] : single_ops) {
        auto *sub = app.add_subcommand(name, desc);
        add_problem(sub);
        singles.push_back(sub);
    }

    auto *dual = app.add_subcommand("dualcone", "Metric or generalized dual cone checks");
    add_problem(dual);
    dual->add_option("--kind", kind, "metric | generalized")->check(CLI::IsMember({"metric", "generalized"}));
    dual->add_option("--check", check, "member | convexity | double-dual | identity | intersection")
        ->check(CLI::IsMember({"member", "convexity", "double-dual", "identity", "intersection"}));
    dual->add_option("--trials", trials, "Random trials for probes")->check(CLI::PositiveNumber);
    singles.push_back(dual);

    auto *suite = app.add_subcommand("paper-suite", "Run every acceptance check");
    add_common(suite);
    suite->add_option("--p", p, "Exponent for the non-Hilbert checks");

    auto *fuzz = app.add_subcommand("fuzz", "Randomized property run");
    add_common(fuzz);
    std::vector<std::string> target_ids;
    for (const auto &t : lpgeom::verify::fuzz_targets())
        target_ids.push_back(t.id);
    fuzz->add_option("--target", target, "Property id")->required()->check(CLI::IsMember(target_ids));
    fuzz->add_option("--trials", trials, "Number of trials (default 1000)")->check(CLI::PositiveNumber);
    fuzz->add_option("--p", p, "Exponent (default depends on the target)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (suite->parsed()) {
            lpgeom::verify::SuiteOptions opts;
            if (seed)
                opts.seed = *seed;
            opts.forced_p = p;
            const auto rep = lpgeom::verify::run_paper_suite(opts);
            print_report(rep, as_json, false);
            return rep.all_passed() ? kPass : kCheckFail;
        }
        if (fuzz->parsed()) {
            const auto rep = lpgeom::verify::run_fuzz(target, trials.value_or(1000), seed.value_or(0), p);
            print_report(rep, as_json, true);
            return rep.any_failed() ? kCheckFail : kPass;
        }
        for (auto *sub : singles) {
            if (!sub->parsed())
                continue;
            lpgeom::cli::Overrides ov{tol, seed, trials, kind, check};
            const auto rep = lpgeom::cli::run_single(load_document(input), ov, sub->get_name());
            print_report(rep, as_json, true);
            return rep.any_failed() ? kCheckFail : kPass;
        }
    } catch (const lpgeom::io::SchemaError &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::invalid_argument &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::domain_error &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    }
    return kUsage;
}
