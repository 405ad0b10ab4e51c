#ifndef GENUSAVG_JSON_IO_HPP
#define GENUSAVG_JSON_IO_HPP

#include "genusavg/genusformula.hpp"
#include "genusavg/lattice.hpp"
#include "genusavg/oracle.hpp"
#include "genusavg/watson.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace genusavg {

using Json = nlohmann::json;

// Exact rationals travel as strings: "a/b", or "a" when integral.
std::string rat_str(const Rat& x);
Rat parse_rat(const std::string& s);

Json gram_to_json(const GramMatrix& g);
// Accepts {"gram": [[...],[...],[...]]} or {"diag": [a, b, c]}.
GramMatrix gram_from_json(const Json& j);

// CLI shorthand parsers: "a,b,c" and "a11,a12,a13;a12,a22,a23;a13,a23,a33"
// (symmetry of the semicolon form is validated, not assumed).
GramMatrix parse_diag_arg(const std::string& csv);
GramMatrix parse_gram_arg(const std::string& rows);

Json profile_to_json(const LatticeProfile& p);
Json jordan_to_json(const JordanSplitting& js);
Json formula_to_json(const HFormula& f);
Json piecewise_to_json(const PiecewiseFormula& pf);
Json chain_to_json(const std::vector<ReductionStep>& chain);
Json report_to_json(const VerificationReport& r);

} // namespace genusavg

#endif // GENUSAVG_JSON_IO_HPP
