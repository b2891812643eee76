// freeconvex CLI: parsing, evaluation, free calculus, middle matrix, SOS
// testing, classification, certificate verification and boundary diagnostics
// for symmetric free polynomials, with reproducible JSON output.
//
// Exit codes: 0 success, 1 verification failure (verify), 2 usage error.

#include <CLI11.hpp>
#include <chrono>
#include <ctime>
#include <fstream>
#include <iostream>

#include "freeconvex/json_io.hpp"

using namespace freeconvex;

namespace {

struct Options {
    std::size_t g = 1;
    std::uint64_t seed = 0;
    double tol = 1e-9;
    std::size_t n_max = 8;
    std::int64_t budget_ms = 10000;
    std::size_t samples = 10000;
    std::string output;
};

std::string iso_timestamp() {
    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof buf, "%FT%TZ", std::gmtime(&t));
    return buf;
}

void emit(const Options& opt, Json body) {
    body["config"] = Json{{"g", opt.g},         {"seed", opt.seed},
                          {"tol", opt.tol},     {"n_max", opt.n_max},
                          {"budget_ms", opt.budget_ms}, {"samples", opt.samples}};
    body["timestamp"] = iso_timestamp();
    std::string text = body.dump(2) + "\n";
    if (opt.output.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(opt.output);
        if (!out) throw std::runtime_error("cannot open output file: " + opt.output);
        out << text;
    }
}

ClassifyOptions classify_options(const Options& opt) {
    ClassifyOptions c;
    c.tol = opt.tol;
    c.seed = opt.seed;
    c.n_max = opt.n_max;
    c.budget_ms = opt.budget_ms;
    c.witness_samples = opt.samples;
    return c;
}

Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    return Json::parse(in);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"certify quasi-convexity and matrix convexity of symmetric free polynomials"};
    app.require_subcommand(1);
    app.fallthrough();

    Options opt;
    app.add_option("-g,--vars", opt.g, "number of free variables")->check(CLI::PositiveNumber);
    app.add_option("--seed", opt.seed, "RNG seed (64-bit)");
    app.add_option("--tol", opt.tol, "numeric tolerance (default 1e-9)");
    app.add_option("--n-max", opt.n_max, "matrix size cap for searches (default 8)");
    app.add_option("--budget-ms", opt.budget_ms, "witness search budget in ms (default 10000)");
    app.add_option("--samples", opt.samples, "witness search sample cap (default 10000)");
    app.add_option("-o,--output", opt.output, "write JSON here instead of stdout");

    std::string expr, matrices_path, cert_path;

    auto* cmd_parse = app.add_subcommand("parse", "parse and canonicalize a polynomial");
    cmd_parse->add_option("expr", expr, "polynomial expression")->required();

    auto* cmd_eval = app.add_subcommand("eval", "evaluate p on a tuple of symmetric matrices");
    cmd_eval->add_option("expr", expr)->required();
    cmd_eval->add_option("--matrices", matrices_path, "JSON file: array of g matrices")->required();

    auto* cmd_derive = app.add_subcommand("derive", "directional derivative p'(x)[h]");
    cmd_derive->add_option("expr", expr)->required();

    auto* cmd_hessian = app.add_subcommand("hessian", "hessian p''(x)[h]");
    cmd_hessian->add_option("expr", expr)->required();

    auto* cmd_middle = app.add_subcommand("middle", "border basis and middle matrix");
    cmd_middle->add_option("expr", expr)->required();

    auto* cmd_sos = app.add_subcommand("sos", "hermitian sum-of-squares feasibility");
    cmd_sos->add_option("expr", expr)->required();

    auto* cmd_classify = app.add_subcommand("classify", "decide quasi-convexity with certificate");
    cmd_classify->add_option("expr", expr)->required();

    auto* cmd_verify = app.add_subcommand("verify", "re-verify a certificate file exactly");
    cmd_verify->add_option("cert", cert_path, "certificate JSON from classify")->required();

    auto* cmd_boundary = app.add_subcommand("boundary", "boundary triple and tangent index report");
    cmd_boundary->add_option("expr", expr)->required();

    auto* cmd_witness = app.add_subcommand("witness", "search for a level-set midpoint violation");
    cmd_witness->add_option("expr", expr)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp" ||
            e.get_name() == "CallForVersion")
            return app.exit(e);
        std::string msg = e.what();
        if (msg.find("expr") != std::string::npos)
            msg += " (expressions starting with '-' go after a '--' separator: "
                   "classify -g 1 -- \"-x1^2\")";
        std::cerr << Json{{"error", msg}}.dump(2) << "\n";
        return 2;
    }

    try {
        if (cmd_parse->parsed()) {
            FreePoly p = parse_poly(expr, opt.g);
            Json j{{"input", expr},
                   {"g", opt.g},
                   {"poly", print_poly(p)},
                   {"degree", p.degree() ? Json(*p.degree()) : Json(nullptr)},
                   {"symmetric", p.is_symmetric()},
                   {"terms", p.terms().size()}};
            emit(opt, j);
        } else if (cmd_eval->parsed()) {
            FreePoly p = parse_poly(expr, opt.g);
            Json mats = load_json_file(matrices_path);
            bool rational = false;
            for (const auto& m : mats)
                for (const auto& row : m)
                    for (const auto& e : row)
                        if (e.is_string()) rational = true;
            Json j{{"input", expr}, {"g", opt.g}, {"backing", rational ? "rational" : "float"}};
            if (rational) {
                j["result"] = to_json(eval(p, tuple_rat_from_json(mats)));
            } else {
                j["result"] = to_json(eval(p, tuple_double_from_json(mats)));
            }
            emit(opt, j);
        } else if (cmd_derive->parsed() || cmd_hessian->parsed()) {
            FreePoly p = parse_poly(expr, opt.g);
            BiFreePoly out = cmd_derive->parsed() ? derivative(p) : hessian(p);
            emit(opt, Json{{"input", expr},
                           {"g", opt.g},
                           {"result", print_poly_xh(out.poly, opt.g)}});
        } else if (cmd_middle->parsed()) {
            FreePoly p = parse_poly(expr, opt.g);
            Json j = to_json(build_middle_matrix(p));
            j["input"] = expr;
            j["g"] = opt.g;
            emit(opt, j);
        } else if (cmd_sos->parsed()) {
            FreePoly p = parse_poly(expr, opt.g);
            SosOptions sopt;
            sopt.seed = opt.seed;
            Json j = to_json(sos_feasibility(p, sopt));
            j["input"] = expr;
            j["g"] = opt.g;
            emit(opt, j);
        } else if (cmd_classify->parsed()) {
            FreePoly p = parse_poly(expr, opt.g);
            ClassifyResult res = classify(p, classify_options(opt));
            emit(opt, classify_result_to_json(res));
        } else if (cmd_verify->parsed()) {
            Json j = load_json_file(cert_path);
            std::size_t g = j.at("g").get<std::size_t>();
            FreePoly p = parse_poly(j.at("input").get<std::string>(), g);
            Certificate cert = certificate_from_json(j.at("certificate"), g);
            if (cert.verdict != Certificate::Verdict::Undecided &&
                verdict_name(cert.verdict) != j.at("verdict").get<std::string>())
                throw std::runtime_error("verdict field does not match certificate kind");
            bool ok = verify_certificate(p, cert);
            emit(opt, Json{{"input", j.at("input")}, {"g", g}, {"verified", ok}});
            return ok ? 0 : 1;
        } else if (cmd_boundary->parsed()) {
            FreePoly p = parse_poly(expr, opt.g);
            FreePoly q = p - FreePoly::constant(p.g(), p.constant_term());
            auto w = find_positive_eig_witness(q, opt.n_max, 32, opt.seed, opt.tol);
            Json j{{"input", expr}, {"g", opt.g}};
            if (!w) {
                j["found"] = false;
            } else {
                BoundaryTriple triple = construct_boundary_A(q, w->X, w->v, w->lambda, opt.tol);
                IndexReport rep = negative_index_on_tangent(q, triple.X, triple.v, opt.tol);
                j["found"] = true;
                j["triple"] = to_json(triple);
                j["membership"] = membership_name(level_set_membership(q, triple.A, triple.X, opt.tol));
                j["index_report"] = to_json(rep);
            }
            emit(opt, j);
        } else if (cmd_witness->parsed()) {
            FreePoly p = parse_poly(expr, opt.g);
            FreePoly q = p - FreePoly::constant(p.g(), p.constant_term());
            auto w = find_nonconvexity_witness(q, classify_options(opt));
            Json j{{"input", expr}, {"g", opt.g}, {"found", w.has_value()}};
            if (w) j["witness"] = to_json(*w);
            emit(opt, j);
        }
    } catch (const ParseError& e) {
        std::cerr << Json{{"error", e.what()}, {"position", e.pos}}.dump(2) << "\n";
        return 2;
    } catch (const Json::exception& e) {
        std::cerr << Json{{"error", e.what()}}.dump(2) << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << Json{{"error", e.what()}}.dump(2) << "\n";
        return 2;
    }
    return 0;
}
