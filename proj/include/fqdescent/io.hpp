#pragma once

#include <string>

#include <json.hpp>

#include "fqdescent/algebra.hpp"
#include "fqdescent/cocycle.hpp"
#include "fqdescent/dual.hpp"
#include "fqdescent/ideal.hpp"
#include "fqdescent/lang_report.hpp"
#include "fqdescent/module.hpp"
#include "fqdescent/moore.hpp"
#include "fqdescent/semilinear.hpp"

namespace fqdescent {

/// Stable-key JSON so that serialized documents are byte-reproducible.
using Json = nlohmann::ordered_json;

/// Malformed or non-canonical input documents. Distinct from DomainError:
/// the CLI maps this to exit code 2.
class ParseError : public std::runtime_error {
   public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

namespace io_detail {

inline void expect_type(const Json& j, const char* type) {
    if (!j.is_object() || !j.contains("type") || !j["type"].is_string() || j["type"] != type)
        throw ParseError(std::string("expected a document of type \"") + type + "\"");
}

inline std::uint64_t get_uint(const Json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_number_unsigned())
        throw ParseError(std::string("missing or non-integer field \"") + key + "\"");
    return j[key].get<std::uint64_t>();
}

inline std::int64_t get_int(const Json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_number_integer())
        throw ParseError(std::string("missing or non-integer field \"") + key + "\"");
    return j[key].get<std::int64_t>();
}

inline detail::Coords get_coords(const Json& j, std::size_t len, std::uint32_t p) {
    if (!j.is_array() || j.size() != len) throw ParseError("coordinate list has the wrong length");
    detail::Coords c(len);
    for (std::size_t i = 0; i < len; ++i) {
        if (!j[i].is_number_unsigned()) throw ParseError("coordinates must be nonnegative base-10 integers");
        std::uint64_t v = j[i].get<std::uint64_t>();
        if (v >= p) throw ParseError("coordinate out of range for the characteristic");
        c[i] = static_cast<std::uint32_t>(v);
    }
    return c;
}

inline Json coords_json(const detail::Coords& c) {
    Json a = Json::array();
    for (auto v : c) a.push_back(v);
    return a;
}

}  // namespace io_detail

// --- field -------------------------------------------------------------------

inline Json to_json(const Field& f) {
    Json j;
    j["type"] = "field";
    j["p"] = f.characteristic();
    j["q_exponent"] = f.q_exponent();
    j["m"] = f.extension_degree();
    Json mod = Json::array();
    for (auto c : f.modulus()) mod.push_back(c);
    j["modulus"] = mod;
    return j;
}

inline Field field_from_json(const Json& j, std::size_t degree_cap = kDefaultDegreeCap) {
    io_detail::expect_type(j, "field");
    std::uint64_t p = io_detail::get_uint(j, "p");
    std::uint64_t qe = io_detail::get_uint(j, "q_exponent");
    std::uint64_t m = io_detail::get_uint(j, "m");
    Field f;
    try {
        f = Field::get(static_cast<std::uint32_t>(p), static_cast<std::uint32_t>(qe), static_cast<std::uint32_t>(m),
                       degree_cap);
    } catch (const std::invalid_argument& e) {
        throw ParseError(std::string("invalid field parameters: ") + e.what());
    }
    if (j.contains("modulus")) {
        const Json& mod = j["modulus"];
        if (!mod.is_array() || mod.size() != f.modulus().size()) throw ParseError("modulus does not match the canonical one");
        for (std::size_t i = 0; i < mod.size(); ++i)
            if (!mod[i].is_number_unsigned() || mod[i].get<std::uint64_t>() != f.modulus()[i])
                throw ParseError("modulus does not match the canonical one");
    }
    return f;
}

// --- element -------------------------------------------------------------------

inline Json to_json(const FieldElement& x) {
    Json j;
    j["type"] = "element";
    j["field"] = to_json(x.field());
    j["coords"] = io_detail::coords_json(x.coords());
    return j;
}

inline FieldElement element_from_json(const Json& j, std::size_t degree_cap = kDefaultDegreeCap) {
    io_detail::expect_type(j, "element");
    if (!j.contains("field")) throw ParseError("element without a field");
    Field f = field_from_json(j["field"], degree_cap);
    if (!j.contains("coords")) throw ParseError("element without coordinates");
    return FieldElement(f, io_detail::get_coords(j["coords"], f.absolute_degree(), f.characteristic()));
}

// --- matrix -------------------------------------------------------------------

inline Json to_json(const MatrixF& m) {
    Json j;
    j["type"] = "matrix";
    j["field"] = to_json(m.field());
    j["rows"] = m.rows();
    j["cols"] = m.cols();
    Json entries = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t c = 0; c < m.cols(); ++c) entries.push_back(io_detail::coords_json(m.at(i, c).coords()));
    j["entries"] = entries;
    return j;
}

inline MatrixF matrix_from_json(const Json& j, std::size_t degree_cap = kDefaultDegreeCap) {
    io_detail::expect_type(j, "matrix");
    if (!j.contains("field")) throw ParseError("matrix without a field");
    Field f = field_from_json(j["field"], degree_cap);
    std::size_t rows = io_detail::get_uint(j, "rows");
    std::size_t cols = io_detail::get_uint(j, "cols");
    if (!j.contains("entries") || !j["entries"].is_array() || j["entries"].size() != rows * cols)
        throw ParseError("matrix entry list has the wrong length");
    MatrixF m(f, rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t c = 0; c < cols; ++c)
            m.at(i, c) = FieldElement(
                f, io_detail::get_coords(j["entries"][i * cols + c], f.absolute_degree(), f.characteristic()));
    return m;
}

// --- dual matrix ---------------------------------------------------------------

inline Json to_json(const DualMatrix& m) {
    Json j;
    j["type"] = "dual_matrix";
    j["field"] = to_json(m.field());
    j["n"] = m.dim();
    j["part0"] = to_json(m.part0())["entries"];
    j["part1"] = to_json(m.part1())["entries"];
    return j;
}

inline DualMatrix dual_matrix_from_json(const Json& j, std::size_t degree_cap = kDefaultDegreeCap) {
    io_detail::expect_type(j, "dual_matrix");
    if (!j.contains("field")) throw ParseError("dual_matrix without a field");
    Field f = field_from_json(j["field"], degree_cap);
    std::size_t n = io_detail::get_uint(j, "n");
    auto parse_part = [&](const char* key) {
        if (!j.contains(key) || !j[key].is_array() || j[key].size() != n * n)
            throw ParseError("dual_matrix part has the wrong length");
        MatrixF m(f, n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t c = 0; c < n; ++c)
                m.at(i, c) =
                    FieldElement(f, io_detail::get_coords(j[key][i * n + c], f.absolute_degree(), f.characteristic()));
        return m;
    };
    return DualMatrix(parse_part("part0"), parse_part("part1"));
}

// --- polynomial ----------------------------------------------------------------

inline Json to_json(const PolynomialF& p) {
    Json j;
    j["type"] = "polynomial";
    j["field"] = to_json(p.field());
    j["nvars"] = p.nvars();
    Json terms = Json::array();
    for (const auto& [e, c] : p.terms()) {
        Json t;
        Json ex = Json::array();
        for (auto v : e) ex.push_back(v);
        t["exponents"] = ex;
        t["coeff"] = io_detail::coords_json(c.coords());
        terms.push_back(t);
    }
    j["terms"] = terms;
    return j;
}

inline PolynomialF polynomial_from_json(const Json& j, std::size_t degree_cap = kDefaultDegreeCap) {
    io_detail::expect_type(j, "polynomial");
    if (!j.contains("field")) throw ParseError("polynomial without a field");
    Field f = field_from_json(j["field"], degree_cap);
    std::size_t nvars = io_detail::get_uint(j, "nvars");
    if (!j.contains("terms") || !j["terms"].is_array()) throw ParseError("polynomial without terms");
    PolynomialF p(f, nvars);
    for (const auto& t : j["terms"]) {
        if (!t.is_object() || !t.contains("exponents") || !t.contains("coeff"))
            throw ParseError("malformed polynomial term");
        const Json& ex = t["exponents"];
        if (!ex.is_array() || ex.size() != nvars) throw ParseError("term exponent vector has the wrong length");
        PolynomialF::Exponents e(nvars);
        for (std::size_t i = 0; i < nvars; ++i) {
            if (!ex[i].is_number_unsigned()) throw ParseError("exponents must be nonnegative integers");
            e[i] = static_cast<std::uint32_t>(ex[i].get<std::uint64_t>());
        }
        FieldElement c(f, io_detail::get_coords(t["coeff"], f.absolute_degree(), f.characteristic()));
        if (c.is_zero()) throw ParseError("polynomial documents must not store zero coefficients");
        p = p + PolynomialF::monomial(f, e, c);
    }
    return p;
}

// --- semilinear endomorphism -----------------------------------------------------

inline Json to_json(const SemilinearEndo& s) {
    Json j;
    j["type"] = "semilinear";
    j["field"] = to_json(s.field());
    j["matrix"] = to_json(s.matrix());
    j["twist"] = s.twist();
    return j;
}

inline SemilinearEndo semilinear_from_json(const Json& j, std::size_t degree_cap = kDefaultDegreeCap) {
    io_detail::expect_type(j, "semilinear");
    if (!j.contains("matrix")) throw ParseError("semilinear document without a matrix");
    MatrixF m = matrix_from_json(j["matrix"], degree_cap);
    std::uint64_t twist = j.contains("twist") ? io_detail::get_uint(j, "twist") : 1;
    try {
        return SemilinearEndo(std::move(m), static_cast<std::uint32_t>(twist));
    } catch (const std::invalid_argument& e) {
        throw ParseError(std::string("invalid semilinear document: ") + e.what());
    }
}

// --- algebra -------------------------------------------------------------------

inline Json to_json(const FinAlgebra& a) {
    Json j;
    j["type"] = "algebra";
    j["field"] = to_json(a.fq());
    j["dim"] = a.dim();
    Json unit = Json::array();
    for (const auto& u : a.unit()) unit.push_back(io_detail::coords_json(u.coords()));
    j["unit"] = unit;
    Json st = Json::array();
    for (const auto& c : a.structure()) st.push_back(io_detail::coords_json(c.coords()));
    j["structure"] = st;
    return j;
}

inline FinAlgebra algebra_from_json(const Json& j, std::size_t degree_cap = kDefaultDegreeCap) {
    io_detail::expect_type(j, "algebra");
    if (!j.contains("field")) throw ParseError("algebra without a field");
    Field fq = field_from_json(j["field"], degree_cap);
    std::size_t dim = io_detail::get_uint(j, "dim");
    if (!j.contains("unit") || !j["unit"].is_array() || j["unit"].size() != dim)
        throw ParseError("algebra unit has the wrong length");
    if (!j.contains("structure") || !j["structure"].is_array() || j["structure"].size() != dim * dim * dim)
        throw ParseError("algebra structure constants have the wrong length");
    std::vector<FieldElement> unit, st;
    for (const auto& u : j["unit"])
        unit.push_back(FieldElement(fq, io_detail::get_coords(u, fq.absolute_degree(), fq.characteristic())));
    for (const auto& c : j["structure"])
        st.push_back(FieldElement(fq, io_detail::get_coords(c, fq.absolute_degree(), fq.characteristic())));
    try {
        return FinAlgebra(fq, dim, std::move(st), std::move(unit));
    } catch (const std::invalid_argument& e) {
        throw ParseError(std::string("invalid algebra document: ") + e.what());
    }
}

// --- module --------------------------------------------------------------------

inline Json to_json(const EquivariantModule& m) {
    Json j;
    j["type"] = "module";
    j["algebra"] = to_json(m.algebra);
    j["field"] = to_json(m.field);
    j["dim"] = m.dim();
    Json act = Json::array();
    for (const auto& a : m.action) act.push_back(to_json(a));
    j["action"] = act;
    j["sigma"] = to_json(m.sigma);
    return j;
}

inline EquivariantModule module_from_json(const Json& j, std::size_t degree_cap = kDefaultDegreeCap) {
    io_detail::expect_type(j, "module");
    if (!j.contains("algebra") || !j.contains("field") || !j.contains("action") || !j.contains("sigma"))
        throw ParseError("module document is missing a component");
    FinAlgebra alg = algebra_from_json(j["algebra"], degree_cap);
    Field f = field_from_json(j["field"], degree_cap);
    if (!j["action"].is_array()) throw ParseError("module action must be a list of matrices");
    std::vector<MatrixF> action;
    for (const auto& a : j["action"]) action.push_back(matrix_from_json(a, degree_cap));
    MatrixF sigma = matrix_from_json(j["sigma"], degree_cap);
    try {
        return EquivariantModule(std::move(alg), std::move(f), std::move(action), std::move(sigma));
    } catch (const std::invalid_argument& e) {
        throw ParseError(std::string("invalid module document: ") + e.what());
    }
}

// --- graded ideal -----------------------------------------------------------------

inline Json to_json(const GradedIdealTrunc& ideal) {
    Json j;
    j["type"] = "graded_ideal";
    j["field"] = to_json(ideal.field());
    j["nvars"] = ideal.nvars();
    j["degree_bound"] = ideal.degree_bound();
    Json comps = Json::array();
    for (std::uint32_t d = 0; d <= ideal.degree_bound(); ++d) {
        if (ideal.component(d).empty()) continue;
        Json c;
        c["degree"] = d;
        Json basis = Json::array();
        for (const auto& p : ideal.component(d)) basis.push_back(to_json(p)["terms"]);
        c["basis"] = basis;
        comps.push_back(c);
    }
    j["components"] = comps;
    return j;
}

inline GradedIdealTrunc ideal_from_json(const Json& j, std::size_t degree_cap = kDefaultDegreeCap) {
    io_detail::expect_type(j, "graded_ideal");
    if (!j.contains("field")) throw ParseError("graded_ideal without a field");
    Field f = field_from_json(j["field"], degree_cap);
    std::size_t nvars = io_detail::get_uint(j, "nvars");
    std::uint32_t bound = static_cast<std::uint32_t>(io_detail::get_uint(j, "degree_bound"));
    std::vector<std::vector<PolynomialF>> comps(bound + 1);
    if (!j.contains("components") || !j["components"].is_array()) throw ParseError("graded_ideal without components");
    for (const auto& c : j["components"]) {
        std::uint32_t d = static_cast<std::uint32_t>(io_detail::get_uint(c, "degree"));
        if (d > bound) throw ParseError("component degree above the truncation bound");
        if (!c.contains("basis") || !c["basis"].is_array()) throw ParseError("component without a basis");
        for (const auto& terms : c["basis"]) {
            Json pj;
            pj["type"] = "polynomial";
            pj["field"] = j["field"];
            pj["nvars"] = nvars;
            pj["terms"] = terms;
            comps[d].push_back(polynomial_from_json(pj, degree_cap));
        }
    }
    try {
        return GradedIdealTrunc(f, nvars, bound, std::move(comps));
    } catch (const std::invalid_argument& e) {
        throw ParseError(std::string("invalid graded_ideal document: ") + e.what());
    }
}

// --- Laurent unit -----------------------------------------------------------------

inline Json to_json(const Field& f, const LaurentUnit& u) {
    Json j;
    j["type"] = "laurent_unit";
    j["field"] = to_json(f);
    j["lambda"] = io_detail::coords_json(u.lambda.coords());
    j["t"] = u.t;
    return j;
}

struct ParsedUnit {
    Field field;
    LaurentUnit unit;
};

inline ParsedUnit unit_from_json(const Json& j, std::size_t degree_cap = kDefaultDegreeCap) {
    io_detail::expect_type(j, "laurent_unit");
    if (!j.contains("field")) throw ParseError("laurent_unit without a field");
    Field f = field_from_json(j["field"], degree_cap);
    if (!j.contains("lambda")) throw ParseError("laurent_unit without a scalar part");
    FieldElement lam(f, io_detail::get_coords(j["lambda"], f.absolute_degree(), f.characteristic()));
    if (lam.is_zero()) throw ParseError("laurent_unit scalar part must be nonzero");
    std::int64_t t = io_detail::get_int(j, "t");
    return ParsedUnit{f, LaurentUnit{lam, t}};
}

// --- result documents ---------------------------------------------------------------

inline Json to_json(const FixedSpace& fs) {
    Json j;
    j["type"] = "fixed_space";
    j["field"] = to_json(fs.parent.field());
    j["dimension"] = fs.dim();
    Json basis = Json::array();
    for (const auto& v : fs.basis) {
        Json vec = Json::array();
        for (const auto& x : v) vec.push_back(io_detail::coords_json(x.coords()));
        basis.push_back(vec);
    }
    j["basis"] = basis;
    return j;
}

inline Json to_json(const VectorSpaceDescent& d) {
    Json j;
    j["type"] = "vector_space_descent";
    j["extension_degree"] = d.extension_degree;
    j["extended_field"] = to_json(d.extended_field);
    j["fq_dimension"] = d.fq_dimension;
    j["certificate"] = to_json(d.certificate);
    return j;
}

inline Json to_json(const LangSolution& s) {
    Json j;
    j["type"] = "lang_solution";
    j["extension_degree"] = s.extension_degree;
    j["extended_field"] = to_json(s.extended_field);
    j["g"] = to_json(s.g);
    return j;
}

inline Json to_json(const DualLangSolution& s) {
    Json j;
    j["type"] = "dual_lang_solution";
    j["extension_degree"] = s.extension_degree;
    j["extended_field"] = to_json(s.extended_field);
    j["g"] = to_json(s.g);
    return j;
}

inline Json to_json(const BetaReport& r) {
    Json j;
    j["type"] = "beta_report";
    j["ring"] = r.ring == BetaRing::field        ? "field"
                : r.ring == BetaRing::dual_numbers ? "dual_numbers"
                                                   : "mu_counterexample";
    j["field"] = to_json(r.base);
    j["n"] = r.n;
    if (r.ring == BetaRing::mu_counterexample) {
        j["mu_order"] = r.mu.mu_order;
        Json im = Json::array();
        for (const auto& x : r.mu.image) im.push_back(io_detail::coords_json(x.coords()));
        j["image"] = im;
        j["surjective"] = r.mu.surjective;
        return j;
    }
    j["total_targets"] = r.total_targets;
    j["failed_targets"] = r.failed_targets;
    j["all_hit"] = r.all_hit;
    Json hist = Json::array();
    for (const auto& [e, c] : r.e_histogram) {
        Json h;
        h["extension_degree"] = e;
        h["targets"] = c;
        hist.push_back(h);
    }
    j["e_histogram"] = hist;
    return j;
}

inline Json to_json(const CheckReport& r) {
    Json j;
    j["type"] = "check_report";
    j["ok"] = r.ok;
    if (!r.ok) j["violation"] = r.violation;
    return j;
}

inline Json to_json(const DescendedModule& d) {
    Json j;
    j["type"] = "descended_module";
    j["algebra"] = to_json(d.algebra);
    j["dim"] = d.n;
    Json act = Json::array();
    for (const auto& a : d.action) act.push_back(to_json(a));
    j["action"] = act;
    j["extension_degree"] = d.extension_degree;
    j["extended_field"] = to_json(d.extended_field);
    j["certificate"] = to_json(d.certificate);
    return j;
}

inline Json to_json(const PicardReport& r, const Field& f) {
    Json j;
    j["type"] = "picard_report";
    j["field"] = to_json(f);
    j["torsion_order"] = r.torsion_order;
    j["free_rank"] = r.free_rank;
    j["scalar_image_size"] = r.scalar_image_size;
    Json reps = Json::array();
    for (const auto& u : r.torsion_representatives) reps.push_back(to_json(f, u));
    j["torsion_representatives"] = reps;
    j["free_generator"] = to_json(f, r.free_generator);
    j["degree_obstruction"] = r.degree_obstruction;
    return j;
}

inline Json to_json(const MuPowerReport& r, const Field& f) {
    Json j;
    j["type"] = "mu_power_report";
    j["field"] = to_json(f);
    j["mu_order"] = r.mu_order;
    Json im = Json::array();
    for (const auto& x : r.image) im.push_back(io_detail::coords_json(x.coords()));
    j["image"] = im;
    j["surjective"] = r.surjective;
    return j;
}

/// Serializes a domain error with its payload; the CLI prints this and exits 1.
inline Json error_to_json(const DomainError& e) {
    Json j;
    Json err;
    err["kind"] = e.kind();
    err["message"] = e.what();
    if (auto* c = dynamic_cast<const CapacityError*>(&e)) {
        err["requested"] = c->requested();
        err["bound"] = c->bound();
    } else if (auto* s = dynamic_cast<const SingularError*>(&e)) {
        err["rank"] = s->rank();
    } else if (auto* ns = dynamic_cast<const NotStableError*>(&e)) {
        err["degree"] = ns->degree();
        err["witness"] = to_json(ns->witness());
    } else if (auto* ne = dynamic_cast<const NotEquivariantError*>(&e)) {
        err["relation"] = ne->relation();
    }
    j["error"] = err;
    return j;
}

}  // namespace fqdescent
