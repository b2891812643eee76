#pragma once

// JSON wire formats. Rationals travel as "p/q" strings, doubles as plain
// JSON numbers (nlohmann prints shortest round-trip decimals), matrices as
// arrays of rows, tuples as arrays of matrices, polynomials as expression
// strings in the CLI grammar. Certificates parse back for re-verification.

#include <json.hpp>

#include "freeconvex/classify.hpp"
#include "freeconvex/middle.hpp"
#include "freeconvex/parse.hpp"
#include "freeconvex/sos.hpp"

namespace freeconvex {

using Json = nlohmann::json;

inline Json to_json(const Rat& r) { return rat_to_string(r); }

inline Json to_json(const Mat<Rat>& m) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(rat_to_string(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline Json to_json(const Mat<double>& m) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

template <typename T>
Json to_json(const SymTuple<T>& t) {
    Json mats = Json::array();
    for (const auto& m : t.mats) mats.push_back(to_json(m));
    return mats;
}

inline Mat<Rat> mat_rat_from_json(const Json& j) {
    std::size_t rows = j.size(), cols = rows ? j.at(0).size() : 0;
    Mat<Rat> m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t c = 0; c < cols; ++c) {
            const Json& e = j.at(i).at(c);
            m(i, c) = e.is_string() ? parse_rational(e.get<std::string>())
                                    : rat_from_double(e.get<double>(), Int(1) << 30);
        }
    return m;
}

inline Mat<double> mat_double_from_json(const Json& j) {
    std::size_t rows = j.size(), cols = rows ? j.at(0).size() : 0;
    Mat<double> m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t c = 0; c < cols; ++c) {
            const Json& e = j.at(i).at(c);
            m(i, c) = e.is_string() ? rat_to_double(parse_rational(e.get<std::string>()))
                                    : e.get<double>();
        }
    return m;
}

inline SymTuple<Rat> tuple_rat_from_json(const Json& j) {
    std::vector<Mat<Rat>> mats;
    for (const auto& mj : j) mats.push_back(mat_rat_from_json(mj));
    return SymTuple<Rat>::from_mats(std::move(mats));
}

inline SymTuple<double> tuple_double_from_json(const Json& j) {
    std::vector<Mat<double>> mats;
    for (const auto& mj : j) mats.push_back(mat_double_from_json(mj));
    return SymTuple<double>::from_mats(std::move(mats));
}

inline Json to_json(const std::vector<WeightedSquare>& squares) {
    Json arr = Json::array();
    for (const auto& s : squares)
        arr.push_back({{"weight", rat_to_string(s.weight)}, {"poly", print_poly(s.poly)}});
    return arr;
}

inline std::vector<WeightedSquare> squares_from_json(const Json& j, std::size_t g) {
    std::vector<WeightedSquare> out;
    for (const auto& e : j)
        out.push_back({parse_rational(e.at("weight").get<std::string>()),
                       parse_poly(e.at("poly").get<std::string>(), g)});
    return out;
}

inline Json to_json(const NonConvexWitness& w) {
    return Json{{"n", w.n}, {"A", to_json(w.A)}, {"X", to_json(w.X)}, {"Y", to_json(w.Y)}};
}

inline NonConvexWitness witness_from_json(const Json& j) {
    NonConvexWitness w;
    w.n = j.at("n").get<std::size_t>();
    w.A = mat_rat_from_json(j.at("A"));
    w.X = tuple_rat_from_json(j.at("X"));
    w.Y = tuple_rat_from_json(j.at("Y"));
    return w;
}

inline Json certificate_to_json(const Certificate& cert) {
    Json j;
    j["kind"] = verdict_name(cert.verdict);
    switch (cert.verdict) {
        case Certificate::Verdict::ConvexForm: {
            const auto& c = std::get<ConvexForm>(cert.payload);
            j["ell"] = print_poly(c.ell);
            j["squares"] = to_json(c.squares);
            break;
        }
        case Certificate::Verdict::NegSos: {
            j["squares"] = to_json(std::get<NegSos>(cert.payload).squares);
            break;
        }
        case Certificate::Verdict::NotQuasiConvex: {
            const auto& c = std::get<NotQuasiConvex>(cert.payload);
            j["middle_matrix_psd"] = false;
            j["odd_degree"] = c.odd_degree;
            j["sos_refutation_point"] =
                c.sos_refutation_point ? to_json(*c.sos_refutation_point) : Json(nullptr);
            j["witness"] = c.witness ? to_json(*c.witness) : Json(nullptr);
            break;
        }
        case Certificate::Verdict::Undecided: {
            const auto& c = std::get<Undecided>(cert.payload);
            j["middle_matrix_psd"] = c.middle_psd;
            j["sos_outcome"] = c.sos_outcome;
            j["sos_residual"] = c.sos_residual;
            j["sos_iterations"] = c.sos_iterations;
            j["notes"] = c.notes;
            break;
        }
    }
    return j;
}

inline Certificate certificate_from_json(const Json& j, std::size_t g) {
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "convex-form") {
        ConvexForm c{parse_poly(j.at("ell").get<std::string>(), g),
                     squares_from_json(j.at("squares"), g)};
        return Certificate::convex_form(std::move(c));
    }
    if (kind == "neg-sos") {
        return Certificate::neg_sos(NegSos{squares_from_json(j.at("squares"), g)});
    }
    if (kind == "not-quasiconvex") {
        NotQuasiConvex c;
        c.odd_degree = j.at("odd_degree").get<bool>();
        if (!j.at("sos_refutation_point").is_null())
            c.sos_refutation_point = tuple_rat_from_json(j.at("sos_refutation_point"));
        if (!j.at("witness").is_null()) c.witness = witness_from_json(j.at("witness"));
        return Certificate::not_quasi_convex(std::move(c));
    }
    Undecided u;
    u.middle_psd = j.value("middle_matrix_psd", false);
    u.sos_outcome = j.value("sos_outcome", "unknown");
    u.notes = j.value("notes", "");
    return Certificate::undecided(std::move(u));
}

// Border row "h<l>" or "h<l>*<word>".
inline std::string border_row_name(const BorderBasis& basis, std::size_t i) {
    const auto& [l, w] = basis.rows[i];
    std::string name = "h" + std::to_string(l);
    if (!w.is_empty()) name += "*" + print_word(w);
    return name;
}

inline Json to_json(const MiddleMatrixRep& rep) {
    Json j;
    Json basis = Json::array();
    Json rows = Json::array();
    for (std::size_t i = 0; i < rep.basis.size(); ++i) {
        basis.push_back(border_row_name(rep.basis, i));
        rows.push_back(Json::array({rep.basis.rows[i].first, print_word(rep.basis.rows[i].second)}));
    }
    j["basis"] = std::move(basis);
    j["basis_rows"] = std::move(rows);  // (letter, word) pairs
    Json zx = Json::array();
    for (std::size_t a = 0; a < rep.basis.size(); ++a) {
        Json row = Json::array();
        for (std::size_t b = 0; b < rep.basis.size(); ++b) row.push_back(print_poly(rep.zx_at(a, b)));
        zx.push_back(std::move(row));
    }
    j["Zx"] = std::move(zx);
    j["Z0"] = to_json(rep.z0);
    j["psd"] = psd_check_exact(rep.z0);
    return j;
}

inline Json to_json(const SpectralReport& rep) {
    return Json{{"min_eig", rep.min_eig},
                {"max_eig", rep.max_eig},
                {"kernel_dim", rep.kernel_dim},
                {"tol", rep.tol}};
}

inline Json to_json(const BoundaryTriple& t) {
    Json v = Json::array();
    for (Eigen::Index i = 0; i < t.v.size(); ++i) v.push_back(t.v(i));
    return Json{{"A", to_json(t.A)},
                {"X", to_json(t.X)},
                {"v", std::move(v)},
                {"kernel_dim", t.kernel_dim},
                {"tol", t.tol}};
}

inline Json to_json(const IndexReport& rep) {
    Json eigs = Json::array();
    for (Eigen::Index i = 0; i < rep.eigenvalues.size(); ++i) eigs.push_back(rep.eigenvalues(i));
    return Json{{"index", rep.index},
                {"form_eigenvalues", std::move(eigs)},
                {"tangent_dim", rep.tangent.basis.size()},
                {"ambient_dim", rep.tangent.ambient_dim},
                {"constraint_rank", rep.tangent.rank},
                {"threshold", rep.threshold},
                {"tol", rep.tol}};
}

inline Json to_json(const SosOutcome& out) {
    if (const auto* c = std::get_if<SosCertified>(&out))
        return Json{{"outcome", "certified"}, {"squares", to_json(c->squares)}};
    if (const auto* r = std::get_if<SosRefuted>(&out))
        return Json{{"outcome", "refuted"}, {"X", to_json(r->X)}, {"min_eig", r->min_eig}};
    const auto& u = std::get<SosUnknown>(out);
    return Json{{"outcome", "unknown"},
                {"residual", u.residual},
                {"iterations", u.iterations},
                {"notes", u.note}};
}

// Full classify output, the certificate file schema.
inline Json classify_result_to_json(const ClassifyResult& res) {
    Json j;
    j["input"] = print_poly(res.input);
    j["g"] = res.input.g();
    j["normalized"] = res.was_normalized;
    j["normalized_input"] = print_poly(res.normalized);
    j["verdict"] = verdict_name(res.certificate.verdict);
    j["certificate"] = certificate_to_json(res.certificate);
    j["seed"] = res.options.seed;
    j["tolerances"] = Json{{"tol", res.options.tol}};
    j["diagnostics"] = Json{{"middle_matrix_psd", res.middle_psd},
                            {"sos", res.sos_summary},
                            {"sos_residual", res.sos_residual},
                            {"sos_iterations", res.sos_iterations}};
    j["paper"] = Json{{"theorem", "main"}};
    return j;
}

}  // namespace freeconvex
