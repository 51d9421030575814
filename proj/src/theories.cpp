#include "smtitp/theories.hpp"

#include "smtitp/dl.hpp"
#include "smtitp/euf.hpp"
#include "smtitp/utvpi.hpp"

namespace smtitp {

bool lemma_valid(const Context& ctx, const std::string& theory, const Clause& c) {
  std::vector<Lit> eta;
  for (Lit l : c) eta.push_back(~l);
  if (theory == "LA" || theory == "DL" || theory == "UTVPI") return la_unsat(ctx, eta);
  if (theory == "DL-Z" || theory == "UTVPI-Z") return utvpi_unsat(ctx, eta, true);
  if (theory == "EUF") return euf_unsat(ctx, eta);
  throw Error("no checker for theory " + theory);
}

LemmaChecker lemma_checker(const Context& ctx) {
  return [&ctx](const std::string& theory, const Clause& c) { return lemma_valid(ctx, theory, c); };
}

LemmaItp lemma_interpolator(Context& ctx, const LaItpOptions& opt) {
  return [&ctx, opt](const std::string& theory, const std::vector<Lit>& eta, const std::vector<Side>& sides) {
    if (theory == "LA") return la_interpolate(ctx, eta, sides, opt);
    if (theory == "DL" || theory == "DL-Z") return dl_interpolate(ctx, eta, sides, theory == "DL-Z");
    if (theory == "UTVPI" || theory == "UTVPI-Z") return utvpi_interpolate(ctx, eta, sides, theory == "UTVPI-Z");
    if (theory == "EUF") return euf_interpolate(ctx, eta, sides);
    throw Error("no interpolation procedure for theory " + theory);
  };
}

}  // namespace smtitp
