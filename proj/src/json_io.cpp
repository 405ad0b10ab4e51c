#include "genusavg/json_io.hpp"

#include "genusavg/errors.hpp"

#include <sstream>

namespace genusavg {

std::string rat_str(const Rat& x) { return x.get_str(); }

Rat parse_rat(const std::string& s) {
    Rat r;
    if (s.empty() || r.set_str(s, 10) != 0 || r.get_den() == 0)
        throw InvalidArgument("parse_rat: malformed rational '" + s + "'");
    r.canonicalize();
    return r;
}

namespace {

Int parse_int(const std::string& s) {
    Rat r = parse_rat(s);
    if (r.get_den() != 1)
        throw InvalidArgument("parse_int: '" + s + "' is not an integer");
    return r.get_num();
}

Int json_int(const Json& j) {
    if (j.is_number_integer()) return Int(static_cast<long>(j.get<long long>()));
    if (j.is_string()) return parse_int(j.get<std::string>());
    throw InvalidArgument("lattice JSON: expected an integer entry");
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string piece;
    while (std::getline(in, piece, sep)) out.push_back(piece);
    return out;
}

} // namespace

Json gram_to_json(const GramMatrix& g) {
    Json rows = Json::array();
    for (int i = 0; i < 3; ++i) {
        Json row = Json::array();
        for (int j = 0; j < 3; ++j) row.push_back(g.at(i, j).get_str());
        rows.push_back(row);
    }
    return Json{{"gram", rows}};
}

GramMatrix gram_from_json(const Json& j) {
    if (!j.is_object())
        throw InvalidArgument("lattice JSON: expected an object");
    if (j.contains("diag")) {
        const Json& d = j["diag"];
        if (!d.is_array() || d.size() != 3)
            throw InvalidArgument("lattice JSON: \"diag\" needs 3 entries");
        return GramMatrix::diag(json_int(d[0]), json_int(d[1]),
                                json_int(d[2]));
    }
    if (j.contains("gram")) {
        const Json& rows = j["gram"];
        if (!rows.is_array() || rows.size() != 3)
            throw InvalidArgument("lattice JSON: \"gram\" needs 3 rows");
        GramMatrix g;
        for (int i = 0; i < 3; ++i) {
            if (!rows[i].is_array() || rows[i].size() != 3)
                throw InvalidArgument("lattice JSON: rows need 3 entries");
            for (int k = 0; k < 3; ++k) g.at(i, k) = json_int(rows[i][k]);
        }
        validate(g);
        return g;
    }
    throw InvalidArgument("lattice JSON: need \"gram\" or \"diag\"");
}

GramMatrix parse_diag_arg(const std::string& csv) {
    auto parts = split(csv, ',');
    if (parts.size() != 3)
        throw InvalidArgument("--diag expects three comma-separated integers");
    return GramMatrix::diag(parse_int(parts[0]), parse_int(parts[1]),
                            parse_int(parts[2]));
}

GramMatrix parse_gram_arg(const std::string& rows) {
    auto row_strs = split(rows, ';');
    if (row_strs.size() != 3)
        throw InvalidArgument("--gram expects three semicolon-separated rows");
    GramMatrix g;
    for (int i = 0; i < 3; ++i) {
        auto parts = split(row_strs[i], ',');
        if (parts.size() != 3)
            throw InvalidArgument("--gram rows need three entries each");
        for (int j = 0; j < 3; ++j) g.at(i, j) = parse_int(parts[j]);
    }
    validate(g);
    return g;
}

Json profile_to_json(const LatticeProfile& p) {
    Json j;
    j["gram"] = gram_to_json(p.gram)["gram"];
    j["scale_gen"] = p.scale_gen.get_str();
    j["is_primitive"] = p.is_primitive;
    j["d_L"] = p.d_L.get_str();
    j["norm_gen"] = p.norm_gen;
    j["even"] = p.even;
    j["s_L"] = p.s_L.get_str();
    j["s"] = p.s4.get_str();
    j["t"] = p.t4.get_str();
    Json P = Json::array();
    for (const auto& q : p.P) P.push_back(q.get_str());
    j["stable_primes"] = P;
    j["frakP"] = p.frakP.get_str();
    Json Pp = Json::array();
    for (const auto& q : p.Pprime) Pp.push_back(q.get_str());
    j["reduction_primes"] = Pp;
    j["frakD"] = p.frakD.get_str();
    j["k_L"] = p.k_L;
    j["stable"] = p.stable;
    Json hs = Json::object();
    for (const auto& [q, s] : p.hasse_star) hs[q.get_str()] = s;
    j["hasse_star"] = hs;
    return j;
}

Json jordan_to_json(const JordanSplitting& js) {
    Json j;
    j["p"] = js.p.get_str();
    Json blocks = Json::array();
    for (const auto& b : js.blocks) {
        Json bj;
        bj["scale_exp"] = b.scale_exp;
        bj["rank"] = b.rank;
        if (b.rank == 1) {
            bj["unit"] = rat_str(b.unit);
        } else {
            bj["sym"] = std::string(1, b.sym);
            bj["binary"] = {rat_str(b.b11), rat_str(b.b12), rat_str(b.b22)};
        }
        blocks.push_back(bj);
    }
    j["blocks"] = blocks;
    return j;
}

Json formula_to_json(const HFormula& f) {
    Json j;
    j["prefactor"] = rat_str(f.prefactor);
    Json terms = Json::array();
    for (const auto& t : f.terms)
        terms.push_back(Json{{"coeff", rat_str(t.coeff)},
                             {"scale", rat_str(t.scale)}});
    j["terms"] = terms;
    return j;
}

Json piecewise_to_json(const PiecewiseFormula& pf) {
    Json j;
    j["modulus"] = pf.modulus.get_str();
    Json pieces = Json::array();
    for (const auto& p : pf.pieces) {
        Json pj;
        Json res = Json::array();
        for (const auto& r : p.residues) res.push_back(r.get_str());
        pj["residues"] = res;
        pj["guards"] = p.guards;
        pj["formula"] = formula_to_json(p.formula);
        pieces.push_back(pj);
    }
    j["pieces"] = pieces;
    return j;
}

Json chain_to_json(const std::vector<ReductionStep>& chain) {
    Json j = Json::array();
    for (const auto& s : chain) {
        Json sj;
        sj["m"] = s.m.get_str();
        sj["gram_before"] = gram_to_json(s.before)["gram"];
        sj["gram_after"] = gram_to_json(s.after)["gram"];
        sj["rescale"] = rat_str(s.rescale);
        j.push_back(sj);
    }
    return j;
}

Json report_to_json(const VerificationReport& r) {
    Json j;
    j["all_pass"] = r.all_pass();
    Json checks = Json::array();
    for (const auto& c : r.checks) {
        Json cj;
        cj["name"] = c.name;
        cj["grid"] = c.grid;
        cj["passed"] = c.passed;
        if (!c.passed) cj["witness"] = c.witness;
        checks.push_back(cj);
    }
    j["checks"] = checks;
    return j;
}

} // namespace genusavg
