#pragma once

#include <string>

#include "smtitp/la.hpp"
#include "smtitp/proof.hpp"

namespace smtitp {

// Refutes the negated clause in the theory named by the lemma tag.
bool lemma_valid(const Context& ctx, const std::string& theory, const Clause& c);
LemmaChecker lemma_checker(const Context& ctx);

// Lemma interpolation by tag: LA, DL, DL-Z, UTVPI, UTVPI-Z, EUF.
LemmaItp lemma_interpolator(Context& ctx, const LaItpOptions& opt = {});

}  // namespace smtitp
