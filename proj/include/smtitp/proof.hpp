#pragma once

#include <functional>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "smtitp/partition.hpp"

namespace smtitp {

enum class NodeKind : uint8_t { Input, Lemma, Res };

// For Res nodes the left premise holds the negative pivot literal, the right one the positive.
struct ProofNode {
  NodeKind kind;
  Clause clause;
  int part = 0;
  std::string theory;
  AtomId pivot = 0;
  int left = -1, right = -1;
};

class Proof {
 public:
  int add_input(Clause c, int part);
  // memoized on the clause: the same lemma is one leaf
  int add_lemma(Clause c, const std::string& theory);
  // resolves two nodes on the atom they clash on
  int add_res(int a, int b, AtomId pivot);
  // appends a node as given, no memo and no role detection
  int push_node(ProofNode n);

  const ProofNode& node(int i) const { return nodes_[i]; }
  ProofNode& mutable_node(int i) { return nodes_[i]; }
  size_t size() const { return nodes_.size(); }
  int root() const { return root_; }
  void set_root(int r) { root_ = r; }

  // roots of interface-equality subproofs (clauses obtained by resolving interface equalities away)
  const std::vector<int>& ie_roots() const { return ie_roots_; }
  void add_ie_root(int r) { ie_roots_.push_back(r); }
  void clear_ie_roots() { ie_roots_.clear(); }

  std::vector<int> reachable(int from) const;
  size_t reachable_size() const { return root_ < 0 ? 0 : reachable(root_).size(); }

 private:
  std::vector<ProofNode> nodes_;
  std::map<std::pair<Clause, std::string>, int> lemma_memo_;
  std::map<std::tuple<AtomId, int, int>, int> res_memo_;
  std::vector<int> ie_roots_;
  int root_ = -1;
};

Clause resolve(const Clause& neg_side, const Clause& pos_side, AtomId pivot);

struct ProofCheck {
  bool ok = true;
  int node = -1;
  std::string message;
};

// returns true when the lemma clause is valid in its theory
using LemmaChecker = std::function<bool(const std::string& theory, const Clause& c)>;

ProofCheck check_proof(const Proof& p, const LemmaChecker& lemma_ok = nullptr, bool need_empty_root = true);

std::string dump_proof(const Context& ctx, const Proof& p, int nparts);
// reads declarations and the atom table into ctx
Proof load_proof(Context& ctx, const std::string& text, int* nparts = nullptr);
std::string proof_dot(const Context& ctx, const Proof& p);

// Interpolation over a proof: theory lemmas delegate to the callback with eta = negated clause.
using LemmaItp =
    std::function<Formula(const std::string& theory, const std::vector<Lit>& eta, const std::vector<Side>& sides)>;

class ProofInterpolator {
 public:
  ProofInterpolator(Context& ctx, const Proof& proof, const Partition& part, LemmaItp lemma_itp)
      : ctx_(ctx), proof_(proof), part_(part), lemma_itp_(std::move(lemma_itp)) {}

  Formula interpolant(int k);
  std::vector<Formula> sequence();

 private:
  Formula leaf(int node, int k);

  Context& ctx_;
  const Proof& proof_;
  const Partition& part_;
  LemmaItp lemma_itp_;
  std::map<std::pair<int, int>, Formula> memo_;
};

Formula interpolate(Context& ctx, const Proof& proof, const Partition& part, const LemmaItp& lemma_itp, int k = 1);
std::vector<Formula> sequence_interpolants(Context& ctx, const Proof& proof, const Partition& part,
                                           const LemmaItp& lemma_itp);

}  // namespace smtitp
