#include <iostream>

#include "CLI11.hpp"
#include "smtitp/frontend.hpp"

using namespace smtitp;

namespace {

constexpr int kSat = 0;
constexpr int kUnsat = 10;
constexpr int kError = 20;
constexpr int kBudget = 30;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Interpolating SMT solver for LA(Q), DL, UTVPI, EUF and EUF+LA(Q)"};
  std::string file, theory = "auto";
  Options opt;
  app.add_option("file", file, "problem file")->required();
  app.add_option("--theory", theory, "auto|lra|rdl|idl|utvpi-q|utvpi-z|euf|euf+lra");
  app.add_flag("--stronger", opt.stronger, "strengthen LA interpolants");
  app.add_flag("--validate", opt.validate, "check every interpolant in fresh solver instances");
  app.add_option("--dump-proof", opt.dump_proof, "write the refutation to this path");
  app.add_option("--seed", opt.seed, "randomize branching activity");
  app.add_option("--budget", opt.budget, "limit on decisions plus conflicts");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kError;
  }

  try {
    auto lg = parse_logic(theory);
    if (!lg) throw Error("unknown theory '" + theory + "'");
    opt.theory = *lg;
    Problem p = parse_problem_file(file);
    Verdict v = run(p, opt);
    std::cout << format_verdict(*p.ctx, v);
    if (v.status == SatStatus::Budget) return kBudget;
    if (v.status == SatStatus::Sat) return kSat;
    if (!v.proof_check.ok) {
      std::cerr << "proof check failed at node " << v.proof_check.node << ": " << v.proof_check.message << "\n";
      return kError;
    }
    if (opt.validate) {
      bool ok = v.chain_ok;
      for (size_t k = 0; k < v.validations.size(); ++k) {
        const Validation& r = v.validations[k];
        std::cout << "(validation " << k + 1 << " " << (r.ok() ? "pass" : "fail") << ")\n";
        if (!r.ok()) {
          std::cerr << "interpolant " << k + 1 << ": " << r.reason << "\n";
          ok = false;
        }
      }
      if (!v.chain_ok) std::cerr << "sequence chain condition fails\n";
      if (!ok) return kError;
    }
    return kUnsat;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  }
}
