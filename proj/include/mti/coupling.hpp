#pragma once

#include <string>
#include <utility>
#include <vector>

#include "mti/merge_tree.hpp"

namespace mti {

using Pair = std::pair<Vertex, Vertex>;
using PairSet = std::vector<Pair>;

struct CouplingViolation {
  std::string condition;  // "C1".."C4"
  std::string message;
  std::vector<std::string> witnesses;
};

class CouplingError : public ValidationError {
 public:
  CouplingError(const std::string& what, std::vector<CouplingViolation> violations);
  const std::vector<CouplingViolation>& violations() const { return violations_; }

 private:
  std::vector<CouplingViolation> violations_;
};

/// A validated set of vertex pairs between two merge trees. The trees must
/// outlive the coupling.
class Coupling {
 public:
  const MergeTree& t() const { return *t_; }
  const MergeTree& g() const { return *g_; }
  /// Sorted by (T index, G index).
  const PairSet& pairs() const { return pairs_; }
  Vertex partner_of_t(Vertex x) const { return partner_t_[x]; }
  Vertex partner_of_g(Vertex y) const { return partner_g_[y]; }
  const std::vector<Vertex>& partners_t() const { return partner_t_; }
  const std::vector<Vertex>& partners_g() const { return partner_g_; }
  /// The unique maximal pair.
  Pair max_pair() const { return max_pair_; }
  Coupling transposed() const;

  friend Coupling validate_coupling(const MergeTree&, const MergeTree&, PairSet);
  friend Coupling make_coupling_unchecked(const MergeTree&, const MergeTree&, PairSet);

 private:
  const MergeTree* t_ = nullptr;
  const MergeTree* g_ = nullptr;
  PairSet pairs_;
  std::vector<Vertex> partner_t_, partner_g_;
  Pair max_pair_{kNoVertex, kNoVertex};
};

/// Every violated condition among (C1)-(C4), with witnesses.
std::vector<CouplingViolation> check_coupling(const MergeTree& t, const MergeTree& g, const PairSet& pairs);
/// Throws CouplingError listing all violations.
Coupling validate_coupling(const MergeTree& t, const MergeTree& g, PairSet pairs);
Coupling validate_coupling_ids(const MergeTree& t, const MergeTree& g,
                               const std::vector<std::pair<std::string, std::string>>& pairs);
/// For pair sets known to be couplings (e.g. produced by enumeration).
Coupling make_coupling_unchecked(const MergeTree& t, const MergeTree& g, PairSet pairs);

enum class VertexClass { kCoupled, kUnused, kDeleted };
enum class CostCase { kCouple, kDeleteHalving, kDeleteEta, kDeleteMulti, kUnused };
const char* to_string(VertexClass c);
const char* to_string(CostCase c);

/// Per-vertex data of one tree of a coupling; "opposite" vertices live in
/// the other tree.
struct SideContext {
  std::vector<VertexClass> cls;
  std::vector<std::vector<Vertex>> lambda;  // maximal coupled vertices strictly below
  std::vector<Vertex> phi;                  // lowest strict ancestor that is coupled or has nonempty lambda
  std::vector<Vertex> delta;                // lowest coupled ancestor-or-self, or kNoVertex
  std::vector<Vertex> chi;                  // opposite LCA of partners of lambda, or kNoVertex
  std::vector<Vertex> gamma;                // lowest opposite partner strictly below, or kNoVertex
  std::vector<Vertex> eta;                  // lowest opposite partner in the closed subtree of phi
  std::vector<double> cost;
  std::vector<CostCase> cost_case;
};

struct CouplingContext {
  Coupling coupling;
  SideContext t, g;
  double norm = 0.0;
};

CouplingContext coupling_context(const Coupling& c);

struct CostReport {
  std::vector<double> t_cost, g_cost;
  std::vector<CostCase> t_case, g_case;
  double norm_inf = 0.0;
};

std::pair<double, CostCase> vertex_cost(const CouplingContext& ctx, bool in_t, Vertex v);
CostReport coupling_norm(const CouplingContext& ctx);
bool is_special(const CouplingContext& ctx);

/// Allocation-light cost evaluation for enumeration loops. `partner_t` and
/// `partner_g` map vertices to partners or kNoVertex.
class NormEvaluator {
 public:
  NormEvaluator(const MergeTree& t, const MergeTree& g);
  double norm(const std::vector<Vertex>& partner_t, const std::vector<Vertex>& partner_g);
  /// Max cost over vertices that are coupled or have a nonempty lambda.
  double restricted_norm(const std::vector<Vertex>& partner_t, const std::vector<Vertex>& partner_g);

 private:
  double side(const MergeTree& x, const MergeTree& y, const std::vector<Vertex>& px,
              const std::vector<Vertex>& py, bool restricted);
  const MergeTree& t_;
  const MergeTree& g_;
  std::vector<std::size_t> count_;
  std::vector<Vertex> lam_lca_, low_partner_, phi_;
};

}  // namespace mti
