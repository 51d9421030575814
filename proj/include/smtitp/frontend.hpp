#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "smtitp/proof.hpp"
#include "smtitp/sat.hpp"

namespace smtitp {

enum class Logic { Auto, LRA, RDL, IDL, UTVPI_Q, UTVPI_Z, EUF, EUF_LRA };

// accepts the file tags (LRA, UTVPI-Z, EUF+LRA, ...) and the lower-case CLI spellings
std::optional<Logic> parse_logic(const std::string& tag);
const char* logic_name(Logic l);

struct Problem {
  std::shared_ptr<Context> ctx = std::make_shared<Context>();
  Logic logic = Logic::Auto;
  std::vector<Formula> parts;  // A then B, or phi_1..phi_n
  bool interpolation = true;   // false for plain (assert ...) files
};

Problem parse_problem(const std::string& text);
Problem parse_problem_file(const std::string& path);

// smallest fragment containing every atom: DL inside UTVPI inside LRA
Logic detect_logic(const Context& ctx, const std::vector<Formula>& parts);

struct Options {
  Logic theory = Logic::Auto;
  bool stronger = false;
  bool validate = false;
  std::string dump_proof;
  uint64_t seed = 0;
  uint64_t budget = 0;
};

struct Validation {
  bool entailed = false;  // A |= I
  bool refutes = false;   // I & B unsat
  bool symbols = false;   // I over common symbols
  std::string reason;
  bool ok() const { return entailed && refutes && symbols; }
};

struct Verdict {
  SatStatus status = SatStatus::Sat;
  Logic logic = Logic::Auto;
  std::vector<Formula> interpolants;
  std::vector<std::pair<std::string, Rational>> model;
  Proof proof;
  ProofCheck proof_check;
  std::vector<Validation> validations;
  bool chain_ok = true;  // I_k & phi_k+1 |= I_k+1 when validated
};

Verdict run(Problem& p, const Options& opt = {});

// Satisfiability of one formula in a logic through a fresh solver instance.
bool unsat_in_logic(Context& ctx, const Formula& f, Logic logic, uint64_t budget = 0);

// Craig conditions in a copy of the context; DL logics go through the LA or UTVPI backend.
Validation validate(const Context& ctx, const Formula& a, const Formula& b, const Formula& itp, Logic logic);

// "unsat" then one (interpolant k I) line per cut, or "sat" with the model
std::string format_verdict(const Context& ctx, const Verdict& v);

}  // namespace smtitp
