// Command-line front end: every library operation behind a subcommand, JSON
// documents on stdin/stdout, deterministic output for fixed inputs and flags.
//
// Exit codes: 0 success, 1 domain error (serialized payload on stdout),
// 2 malformed input or usage error.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "fqdescent/io.hpp"
#include "fqdescent/selftest.hpp"

namespace {

using namespace fqdescent;

struct GlobalFlags {
    std::size_t degree_cap = kDefaultDegreeCap;
    std::uint32_t trunc = 4;
    std::uint64_t seed = 0;
    std::string input_path;  // empty = stdin
};

Json read_input(const GlobalFlags& g) {
    std::string text;
    if (g.input_path.empty()) {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        text = ss.str();
    } else {
        std::ifstream in(g.input_path);
        if (!in) throw ParseError("cannot open input file: " + g.input_path);
        std::ostringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    }
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
}

void emit(const Json& j) { std::cout << j.dump() << "\n"; }

std::string require_string(const Json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_string()) throw ParseError(std::string("missing field \"") + key + "\"");
    return j[key].get<std::string>();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact Frobenius-descent computations over finite fields"};
    app.require_subcommand(1);
    GlobalFlags g;
    app.add_option("--degree-cap", g.degree_cap, "absolute-degree bound for constructed fields")
        ->envname("FQDESCENT_DEGREE_CAP")
        ->capture_default_str();
    app.add_option("--trunc", g.trunc, "graded truncation bound")->capture_default_str();
    app.add_option("--seed", g.seed, "seed for randomized checks")->capture_default_str();
    app.add_option("--in", g.input_path, "read the input document from a file instead of stdin");

    // field
    auto* field_cmd = app.add_subcommand("field", "construct fields, extensions and embeddings");
    field_cmd->require_subcommand(1);
    std::uint32_t fp = 2, fqe = 1, fm = 1, fe = 1, target_m = 1;
    auto* field_construct = field_cmd->add_subcommand("construct", "canonical field from (p, q_exponent, m)");
    field_construct->add_option("--p", fp, "characteristic")->required();
    field_construct->add_option("--q-exponent", fqe, "q = p^q_exponent")->required();
    field_construct->add_option("--m", fm, "extension degree over F_q")->required();
    auto* field_extend = field_cmd->add_subcommand("extend", "extend the input field by degree e");
    field_extend->add_option("--e", fe, "extension degree")->required();
    auto* field_embed = field_cmd->add_subcommand("embed", "embed the input element into F_{q^target_m}");
    field_embed->add_option("--target-m", target_m, "extension degree of the target field")->required();

    // moore
    auto* moore_cmd = app.add_subcommand("moore", "Moore matrices and the determinant identity");
    moore_cmd->require_subcommand(1);
    auto* moore_matrix_cmd = moore_cmd->add_subcommand("matrix", "Moore matrix of the input elements");
    auto* moore_indep = moore_cmd->add_subcommand("independent", "F_q-linear independence of the input elements");
    std::uint64_t mi_q = 2;
    std::uint32_t mi_r = 1;
    bool mi_sampled = false;
    auto* moore_ident = moore_cmd->add_subcommand("det-identity", "determinant = omega * product of linear forms");
    moore_ident->add_option("--q", mi_q, "base field order")->required();
    moore_ident->add_option("--r", mi_r, "projective dimension")->required();
    moore_ident->add_flag("--sampled", mi_sampled, "use randomized evaluation instead of symbolic expansion");

    // fixed
    auto* fixed_cmd = app.add_subcommand("fixed", "fixed spaces of semilinear automorphisms");
    fixed_cmd->require_subcommand(1);
    auto* fixed_space_cmd = fixed_cmd->add_subcommand("fixed-space", "F_q-basis of the fixed space");
    auto* fixed_split = fixed_cmd->add_subcommand("splitting-degree", "least extension with a full fixed space");
    auto* fixed_descend = fixed_cmd->add_subcommand("descend", "full descent with certificate");

    // lang
    auto* lang_cmd = app.add_subcommand("lang", "the Lang equation g^{-1} phi(g) = a");
    lang_cmd->require_subcommand(1);
    auto* lang_solve_cmd = lang_cmd->add_subcommand("solve", "solve for the input matrix (field or dual numbers)");
    std::uint64_t lr_q = 2;
    std::uint32_t lr_m = 1, lr_n = 1;
    std::string lr_ring = "field";
    auto* lang_report_cmd = lang_cmd->add_subcommand("report", "enumerate all targets and their minimal degrees");
    lang_report_cmd->add_option("--q", lr_q, "base field order")->required();
    lang_report_cmd->add_option("--m", lr_m, "extension degree")->required();
    lang_report_cmd->add_option("--n", lr_n, "matrix size");
    lang_report_cmd->add_option("--ring", lr_ring, "field | dual | mu")->capture_default_str();

    // module
    auto* module_cmd = app.add_subcommand("module", "equivariant modules over finite algebras");
    module_cmd->require_subcommand(1);
    auto* module_check = module_cmd->add_subcommand("check", "validate the equivariance relations");
    auto* module_descend = module_cmd->add_subcommand("descend", "descend to an F_q-module with certificate");
    std::string hom_mode = "equivariant";
    auto* module_hom = module_cmd->add_subcommand("hom", "basis of homomorphisms between two modules");
    module_hom->add_option("--mode", hom_mode, "linear | equivariant")->capture_default_str();

    // ideal
    auto* ideal_cmd = app.add_subcommand("ideal", "descent of elements and graded ideals");
    ideal_cmd->require_subcommand(1);
    auto* ideal_elem = ideal_cmd->add_subcommand("descend-element", "F_q-components of a polynomial");
    auto* ideal_graded = ideal_cmd->add_subcommand("descend-graded", "descend a phi-stable truncated ideal");

    // picard
    auto* picard_cmd = app.add_subcommand("picard", "unit coboundaries on the Laurent ring");
    picard_cmd->require_subcommand(1);
    std::uint64_t pc_q = 2;
    std::uint32_t pc_m = 2;
    auto* picard_coker = picard_cmd->add_subcommand("cokernel", "cokernel of the unit coboundary");
    picard_coker->add_option("--q", pc_q, "base field order")->required();
    picard_coker->add_option("--m", pc_m, "extension degree")->required();
    auto* picard_class = picard_cmd->add_subcommand("class", "canonical coset representative of a unit");
    auto* picard_mu = picard_cmd->add_subcommand("mu-demo", "(q-1)-power map restricted to mu_{q-1}");
    picard_mu->add_option("--q", pc_q, "base field order")->required();
    picard_mu->add_option("--m", pc_m, "extension degree")->required();

    auto* selftest_cmd = app.add_subcommand("selftest", "run the full acceptance suite");

    // let --degree-cap, --seed, --trunc, --in appear after the subcommand
    auto enable_fallthrough = [](CLI::App* a, auto&& self) -> void {
        for (CLI::App* sub : a->get_subcommands({})) {
            sub->fallthrough();
            self(sub, self);
        }
    };
    enable_fallthrough(&app, enable_fallthrough);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        std::cerr << e.what() << "\n";
        return 2;
    }

    try {
        if (*field_construct) {
            emit(to_json(Field::get(fp, fqe, fm, g.degree_cap)));
        } else if (*field_extend) {
            Field base = field_from_json(read_input(g), g.degree_cap);
            FieldExtension ext = extend_field(base, fe, g.degree_cap);
            Json j;
            j["type"] = "field_extension";
            j["field"] = to_json(ext.field);
            j["image_of_generator"] = io_detail::coords_json(ext.embedding.image_of_generator().coords());
            emit(j);
        } else if (*field_embed) {
            FieldElement x = element_from_json(read_input(g), g.degree_cap);
            Field target = Field::get(x.field().characteristic(), x.field().q_exponent(), target_m, g.degree_cap);
            EmbeddingMap emb = embedding_between(x.field(), target);
            emit(to_json(emb.apply(x)));
        } else if (*moore_matrix_cmd || *moore_indep) {
            Json j = read_input(g);
            io_detail::expect_type(j, "moore_input");
            Field f = field_from_json(j.at("field"), g.degree_cap);
            if (!j.contains("elements") || !j["elements"].is_array() || j["elements"].empty())
                throw ParseError("moore_input requires a nonempty element list");
            std::vector<FieldElement> elems;
            for (const auto& c : j["elements"])
                elems.push_back(FieldElement(f, io_detail::get_coords(c, f.absolute_degree(), f.characteristic())));
            MooreInput in(f, std::move(elems));
            if (*moore_matrix_cmd) {
                emit(to_json(moore_matrix(in)));
            } else {
                Json out;
                out["type"] = "independence";
                out["independent"] = is_fq_independent(in);
                emit(out);
            }
        } else if (*moore_ident) {
            FieldElement omega = [&] {
                if (mi_sampled) {
                    Rng rng(g.seed);
                    return moore_identity_check_randomized(mi_q, mi_r, 200, rng);
                }
                return moore_identity_check(mi_q, mi_r);
            }();
            Json out;
            out["type"] = "moore_identity";
            out["q"] = mi_q;
            out["r"] = mi_r;
            out["sampled"] = mi_sampled;
            out["omega"] = io_detail::coords_json(omega.coords());
            emit(out);
        } else if (*fixed_space_cmd) {
            SemilinearEndo s = semilinear_from_json(read_input(g), g.degree_cap);
            emit(to_json(fixed_space(s)));
        } else if (*fixed_split) {
            SemilinearEndo s = semilinear_from_json(read_input(g), g.degree_cap);
            Json out;
            out["type"] = "splitting_degree";
            out["e"] = splitting_degree(s, g.degree_cap);
            emit(out);
        } else if (*fixed_descend) {
            SemilinearEndo s = semilinear_from_json(read_input(g), g.degree_cap);
            emit(to_json(descend_vector_space(s, g.degree_cap)));
        } else if (*lang_solve_cmd) {
            Json j = read_input(g);
            std::string type = require_string(j, "type");
            if (type == "dual_matrix") {
                emit(to_json(lang_solve_dual(dual_matrix_from_json(j, g.degree_cap), g.degree_cap)));
            } else {
                emit(to_json(lang_solve(matrix_from_json(j, g.degree_cap), g.degree_cap)));
            }
        } else if (*lang_report_cmd) {
            auto [p, f] = prime_power_split(lr_q);
            Field base = Field::get(p, f, lr_m, g.degree_cap);
            BetaRing ring;
            if (lr_ring == "field")
                ring = BetaRing::field;
            else if (lr_ring == "dual")
                ring = BetaRing::dual_numbers;
            else if (lr_ring == "mu")
                ring = BetaRing::mu_counterexample;
            else
                throw ParseError("--ring must be field, dual, or mu");
            emit(to_json(beta_surjectivity_report(base, lr_n, ring, g.degree_cap)));
        } else if (*module_check) {
            EquivariantModule m = module_from_json(read_input(g), g.degree_cap);
            emit(to_json(check_equivariant(m)));
        } else if (*module_descend) {
            EquivariantModule m = module_from_json(read_input(g), g.degree_cap);
            emit(to_json(descend_module(m, g.degree_cap)));
        } else if (*module_hom) {
            Json j = read_input(g);
            io_detail::expect_type(j, "module_pair");
            if (!j.contains("first") || !j.contains("second")) throw ParseError("module_pair requires two modules");
            EquivariantModule m = module_from_json(j["first"], g.degree_cap);
            EquivariantModule n = module_from_json(j["second"], g.degree_cap);
            HomMode mode;
            if (hom_mode == "linear")
                mode = HomMode::linear;
            else if (hom_mode == "equivariant")
                mode = HomMode::equivariant;
            else
                throw ParseError("--mode must be linear or equivariant");
            HomSpace homs = hom_space(m, n, mode, g.degree_cap);
            Json out;
            out["type"] = "hom_space";
            out["mode"] = hom_mode;
            out["field"] = to_json(homs.field);
            out["dimension"] = homs.dim();
            Json basis = Json::array();
            for (const auto& h : homs.basis) basis.push_back(to_json(h));
            out["basis"] = basis;
            emit(out);
        } else if (*ideal_elem) {
            PolynomialF f = polynomial_from_json(read_input(g), g.degree_cap);
            auto parts = element_descent(f);
            Json out;
            out["type"] = "element_descent";
            Json comps = Json::array();
            for (const auto& a : parts) comps.push_back(to_json(a));
            out["components"] = comps;
            emit(out);
        } else if (*ideal_graded) {
            GradedIdealTrunc ideal = ideal_from_json(read_input(g), g.degree_cap);
            emit(to_json(graded_ideal_descent(ideal)));
        } else if (*picard_coker) {
            auto [p, f] = prime_power_split(pc_q);
            Field L = Field::get(p, f, pc_m, g.degree_cap);
            emit(to_json(picard_cokernel(L), L));
        } else if (*picard_class) {
            ParsedUnit u = unit_from_json(read_input(g), g.degree_cap);
            emit(to_json(u.field, unit_class(u.field, u.unit)));
        } else if (*picard_mu) {
            auto [p, f] = prime_power_split(pc_q);
            Field L = Field::get(p, f, pc_m, g.degree_cap);
            emit(to_json(mu_power_demo(L), L));
        } else if (*selftest_cmd) {
            SelfTestOptions opt;
            opt.seed = g.seed;
            opt.trunc = g.trunc;
            auto cases = run_selftest(opt);
            std::cout << format_selftest_report(cases);
            for (const auto& c : cases)
                if (!c.pass) return 1;
            return 0;
        }
        return 0;
    } catch (const ParseError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const DomainError& e) {
        emit(error_to_json(e));
        return 1;
    }
}
