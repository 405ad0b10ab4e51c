#include "genusavg/classnum.hpp"
#include "genusavg/config.hpp"
#include "genusavg/errors.hpp"
#include "genusavg/genusformula.hpp"
#include "genusavg/json_io.hpp"
#include "genusavg/lattice.hpp"
#include "genusavg/localdensity.hpp"
#include "genusavg/oracle.hpp"
#include "genusavg/watson.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace {

using namespace genusavg;

struct LatticeArgs {
    std::string diag;
    std::string gram;
    std::string file;
};

void add_lattice_options(CLI::App* cmd, LatticeArgs& args) {
    auto* d = cmd->add_option("--diag", args.diag,
                              "diagonal form a,b,c (Gram diag(a,b,c))");
    auto* g = cmd->add_option(
        "--gram", args.gram,
        "full Gram matrix \"a11,a12,a13;a12,a22,a23;a13,a23,a33\"");
    auto* f = cmd->add_option("--file", args.file,
                              "JSON file with {\"gram\": ...} or {\"diag\": ...}");
    d->excludes(g)->excludes(f);
    g->excludes(f);
}

GramMatrix lattice_from_args(const LatticeArgs& args) {
    if (!args.diag.empty()) return parse_diag_arg(args.diag);
    if (!args.gram.empty()) return parse_gram_arg(args.gram);
    if (!args.file.empty()) {
        std::ifstream in(args.file);
        if (!in) throw InvalidArgument("cannot open file " + args.file);
        Json j = Json::parse(in);
        return gram_from_json(j);
    }
    throw CLI::RequiredError("one of --diag / --gram / --file");
}

struct Output {
    bool json = false;
    bool approx = false;

    void emit(const Json& j, const std::string& text) const {
        if (json)
            std::cout << j.dump(2) << "\n";
        else
            std::cout << text << "\n";
    }
    std::string rat_line(const Rat& x) const {
        std::string s = rat_str(x);
        if (approx && x.get_den() != 1) {
            char buf[64];
            std::snprintf(buf, sizeof(buf), "%.6f", x.get_d());
            s += "  (~" + std::string(buf) + ", non-authoritative)";
        }
        return s;
    }
};

std::string formula_text(const HFormula& f) {
    if (f.prefactor == 0 || f.terms.empty()) return "0";
    std::string out;
    if (f.prefactor != 1) out += "(" + rat_str(f.prefactor) + ") * (";
    bool first = true;
    for (const auto& t : f.terms) {
        Rat c = t.coeff;
        if (!first) out += (c >= 0) ? " + " : " - ";
        else if (c < 0)
            out += "-";
        Rat ca = abs(c);
        if (ca != 1) out += rat_str(ca) + "*";
        std::string arg = (t.scale == 1) ? "n" : rat_str(t.scale) + "*n";
        out += "H(" + arg + ")";
        first = false;
    }
    if (f.prefactor != 1) out += ")";
    return out;
}

int run(int argc, char** argv) {
    CLI::App app{"Exact genus averages of positive-definite ternary "
                 "quadratic forms via Hurwitz class numbers"};
    app.require_subcommand(1);

    Output out;
    app.add_flag("--json", out.json, "emit JSON instead of text");
    app.add_flag("--approx", out.approx,
                 "append a non-authoritative decimal rendering");
    std::optional<std::uint64_t> depth_cap, enum_budget;
    std::optional<std::size_t> memo_cap;
    app.add_option("--depth-cap", depth_cap,
                   "max p^r for the local-density counting oracle");
    app.add_option("--enum-budget", enum_budget,
                   "max cells for direct representation counting");
    app.add_option("--memo-cap", memo_cap, "class-number cache entries");

    // hurwitz
    std::string hur_arg;
    auto* c_hurwitz =
        app.add_subcommand("hurwitz", "Hurwitz class number H(N)");
    c_hurwitz->add_option("N", hur_arg, "argument (rational allowed)")
        ->required();

    // classnum
    std::string cls_arg;
    auto* c_classnum =
        app.add_subcommand("classnum", "primitive class number h(d)");
    c_classnum->add_option("d", cls_arg, "negative discriminant")->required();

    // jordan
    LatticeArgs jordan_lat;
    std::string jordan_p;
    auto* c_jordan =
        app.add_subcommand("jordan", "p-adic Jordan decomposition");
    add_lattice_options(c_jordan, jordan_lat);
    c_jordan->add_option("-p,--prime", jordan_p, "prime p")->required();

    // hasse
    LatticeArgs hasse_lat;
    std::string hasse_p;
    auto* c_hasse = app.add_subcommand("hasse", "Hasse symbols S_p, S_p*");
    add_lattice_options(c_hasse, hasse_lat);
    c_hasse->add_option("-p,--prime", hasse_p, "prime p")->required();

    // local-density
    LatticeArgs ld_lat;
    std::string ld_p, ld_n;
    bool ld_oracle = false;
    auto* c_ld =
        app.add_subcommand("local-density", "local density alpha_p(n, L)");
    add_lattice_options(c_ld, ld_lat);
    c_ld->add_option("-p,--prime", ld_p, "prime p")->required();
    c_ld->add_option("-n", ld_n, "represented value n")->required();
    c_ld->add_flag("--oracle", ld_oracle,
                   "force the counting oracle (skip closed forms)");

    // watson
    LatticeArgs wat_lat;
    std::string wat_m;
    bool wat_stable = false;
    auto* c_watson =
        app.add_subcommand("watson", "Watson transformation lambda_m");
    add_lattice_options(c_watson, wat_lat);
    auto* wm = c_watson->add_option("-m,--modulus", wat_m, "prime or 4");
    auto* ws = c_watson->add_flag("--to-stable", wat_stable,
                                  "full reduction chain to a stable lattice");
    wm->excludes(ws);

    // genus-avg
    LatticeArgs ga_lat;
    std::string ga_n;
    bool ga_prov = false;
    auto* c_ga = app.add_subcommand("genus-avg", "r(n, gen(L)) exactly");
    add_lattice_options(c_ga, ga_lat);
    c_ga->add_option("-n", ga_n, "represented value n")->required();
    c_ga->add_flag("--provenance", ga_prov,
                   "report whether the value is fully closed-form");

    // formula
    LatticeArgs fo_lat;
    std::string fo_cap;
    long fo_samples = 30;
    auto* c_formula = app.add_subcommand(
        "formula", "piecewise Hurwitz class number formula for r(n, gen(L))");
    add_lattice_options(c_formula, fo_lat);
    c_formula->add_option("--modulus-cap", fo_cap,
                          "fail if the verified modulus exceeds this bound");
    c_formula->add_option("--samples", fo_samples,
                          "verification samples per piece");

    // verify
    std::string ver_corpus;
    std::string ver_nmax = "200";
    auto* c_verify =
        app.add_subcommand("verify", "run the cross-verification battery");
    c_verify->add_option("--corpus", ver_corpus,
                         "JSON file with an array of lattice objects");
    c_verify->add_option("--nmax", ver_nmax, "grid bound (default 200)");

    for (auto* sub : app.get_subcommands(
             [](const CLI::App*) { return true; }))
        sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    apply_env(config());
    if (depth_cap) config().depth_cap = *depth_cap;
    if (enum_budget) config().enum_budget = *enum_budget;
    if (memo_cap) config().memo_cap = *memo_cap;

    try {
        if (*c_hurwitz) {
            Rat v = hurwitz(parse_rat(hur_arg));
            out.emit(Json{{"H", rat_str(v)}}, out.rat_line(v));
        } else if (*c_classnum) {
            Rat d = parse_rat(cls_arg);
            if (d.get_den() != 1)
                throw InvalidArgument("classnum: d must be an integer");
            Int h = h_primitive(d.get_num());
            out.emit(Json{{"h", h.get_str()}}, h.get_str());
        } else if (*c_jordan) {
            GramMatrix g = lattice_from_args(jordan_lat);
            Rat p = parse_rat(jordan_p);
            JordanSplitting js = jordan_decompose(g, p.get_num());
            Json j = jordan_to_json(js);
            std::string text;
            for (const auto& b : js.blocks) {
                if (!text.empty()) text += " + ";
                text += "p^" + std::to_string(b.scale_exp) + " * ";
                text += (b.rank == 1)
                            ? "<" + rat_str(b.unit) + ">"
                            : std::string(1, b.sym) + "-type binary";
            }
            out.emit(j, text);
        } else if (*c_hasse) {
            GramMatrix g = lattice_from_args(hasse_lat);
            Int p = parse_rat(hasse_p).get_num();
            int s = hasse_symbol(g, p);
            int ss = hasse_symbol_star(g, p);
            out.emit(Json{{"S_p", s}, {"S_p_star", ss}},
                     "S_p = " + std::to_string(s) +
                         ", S_p* = " + std::to_string(ss) +
                         (ss == 1 ? "  (isotropic)" : "  (anisotropic)"));
        } else if (*c_ld) {
            GramMatrix g = lattice_from_args(ld_lat);
            Int p = parse_rat(ld_p).get_num();
            Int n = parse_rat(ld_n).get_num();
            DensityValue v;
            if (ld_oracle)
                v = {alpha_count(rescale_to_primitive(g).first, p, n),
                     "counting_oracle"};
            else
                v = alpha_best(profile(g), p, n);
            out.emit(Json{{"alpha", rat_str(v.value)},
                          {"provenance", v.provenance}},
                     out.rat_line(v.value) + "  [" + v.provenance + "]");
        } else if (*c_watson) {
            GramMatrix g = lattice_from_args(wat_lat);
            if (wat_stable) {
                auto chain = reduce_to_stable(rescale_to_primitive(g).first);
                Json j = chain_to_json(chain);
                std::string text;
                GramMatrix cur = rescale_to_primitive(g).first;
                text = "start " + cur.str();
                for (const auto& s : chain)
                    text += "\n  --lambda_" + s.m.get_str() + "--> " +
                            s.after.str();
                out.emit(j, text);
            } else if (!wat_m.empty()) {
                Int m = parse_rat(wat_m).get_num();
                GramMatrix lam = small_lambda(g, m);
                out.emit(gram_to_json(lam), lam.str());
            } else {
                throw CLI::RequiredError("one of -m / --to-stable");
            }
        } else if (*c_ga) {
            GramMatrix g = lattice_from_args(ga_lat);
            Int n = parse_rat(ga_n).get_num();
            EvalTrace trace;
            Rat v = evaluate_genus_avg(profile(g), n, &trace);
            Json j{{"n", n.get_str()}, {"value", rat_str(v)}};
            std::string text = out.rat_line(v);
            if (ga_prov) {
                j["provenance"] = trace.provenance();
                text += "  [" + trace.provenance() + "]";
            }
            out.emit(j, text);
        } else if (*c_formula) {
            GramMatrix g = lattice_from_args(fo_lat);
            PiecewiseFormula pf =
                synthesize_formula(profile(g), fo_samples);
            if (!fo_cap.empty() && pf.modulus > parse_rat(fo_cap).get_num())
                throw VerificationFailed(
                    "formula: verified modulus " + pf.modulus.get_str() +
                    " exceeds --modulus-cap " + fo_cap);
            std::string text = "modulus " + pf.modulus.get_str();
            for (const auto& piece : pf.pieces) {
                text += "\n  n mod " + pf.modulus.get_str() + " in {";
                for (std::size_t i = 0; i < piece.residues.size(); ++i)
                    text += (i ? "," : "") + piece.residues[i].get_str();
                text += "}: " + formula_text(piece.formula);
            }
            out.emit(piecewise_to_json(pf), text);
        } else if (*c_verify) {
            std::vector<GramMatrix> corpus;
            if (!ver_corpus.empty()) {
                std::ifstream in(ver_corpus);
                if (!in)
                    throw InvalidArgument("cannot open file " + ver_corpus);
                Json j = Json::parse(in);
                if (!j.is_array())
                    throw InvalidArgument(
                        "corpus file must hold a JSON array");
                for (const auto& e : j) corpus.push_back(gram_from_json(e));
            } else {
                corpus = default_corpus();
            }
            Int nmax = parse_rat(ver_nmax).get_num();
            VerificationReport report = verify_all(corpus, nmax);
            std::string text;
            for (const auto& c : report.checks)
                text += (c.passed ? "PASS " : "FAIL ") + c.name + " [" +
                        c.grid + "]" +
                        (c.passed ? "" : "  " + c.witness) + "\n";
            text += report.all_pass() ? "all checks passed"
                                      : "FAILURES PRESENT";
            out.emit(report_to_json(report), text);
            return report.all_pass() ? 0 : 1;
        }
    } catch (const CLI::RequiredError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        Json err{{"error",
                  {{"code", e.code()}, {"message", e.what()}}}};
        std::cout << err.dump(2) << "\n";
        return 1;
    } catch (const std::exception& e) {
        Json err{{"error",
                  {{"code", "internal_error"}, {"message", e.what()}}}};
        std::cout << err.dump(2) << "\n";
        return 1;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) { return run(argc, argv); }
