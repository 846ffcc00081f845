#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "mti/coupling.hpp"

namespace mti {

enum class Direction { kUp, kDown };
enum class Penalty { kRoot, kFather };

/// Dense |V_T| x |V_G| table of subtree-pair costs; NaN marks a missing entry.
class CostTable {
 public:
  CostTable() = default;
  CostTable(std::size_t nt, std::size_t ng);
  double at(Vertex x, Vertex y) const { return v_[x * ng_ + y]; }
  void set(Vertex x, Vertex y, double c) { v_[x * ng_ + y] = c; }
  bool has(Vertex x, Vertex y) const;
  std::size_t rows() const { return nt_; }
  std::size_t cols() const { return ng_; }

 private:
  std::size_t nt_ = 0, ng_ = 0;
  std::vector<double> v_;
};

/// The binary min-max program for the subtree pair (T_{x0}, G_{y0}) in
/// compact form. Local index i stands for the T vertex tv[i] (x0 excluded),
/// local index j for the G vertex gv[j].
struct MinMaxProgram {
  Direction direction = Direction::kUp;
  Penalty penalty = Penalty::kRoot;
  const MergeTree* t = nullptr;
  const MergeTree* g = nullptr;
  Vertex x0 = kNoVertex, y0 = kNoVertex;
  std::vector<Vertex> tv, gv;
  std::vector<int> tpar, gpar;            // local father, -1 for x0 / y0
  std::vector<double> tf, gf;             // heights
  std::vector<double> tsub, gsub;         // f_x, g_y: lowest height below
  std::vector<double> ta, ga;             // A coefficients 0.5 (f(x_f) - f_x)
  std::vector<double> tpen, gpen;         // u-penalty coefficients
  std::vector<double> cost;               // |tv| x |gv|, F^1 coefficients
  std::vector<int> tpath, gpath;          // locals on the path from the lowest vertex
  double root_term = 0.0;                 // |f(x0) - g(y0)|
  double m_t = 0.0, q_t = 0.0, m_g = 0.0, q_g = 0.0, big_k = 0.0;
  bool linearized = false;

  std::size_t nt() const { return tv.size(); }
  std::size_t ng() const { return gv.size(); }
  double w(std::size_t i, std::size_t j) const { return cost[i * gv.size() + j]; }
  bool t_leq(std::size_t i, std::size_t k) const { return t->leq(tv[i], tv[k]); }
  bool g_leq(std::size_t j, std::size_t k) const { return g->leq(gv[j], gv[k]); }
};

/// Builds the program; throws std::invalid_argument for missing table entries
/// or when either subtree is a single vertex.
MinMaxProgram build_program(const MergeTree& t, const MergeTree& g, Vertex x0, Vertex y0, const CostTable& table,
                            Direction direction, Penalty penalty = Penalty::kRoot);
/// Adds z and the epigraph rows, including the B rows going up.
MinMaxProgram linearize(MinMaxProgram p);

// Explicit rows, for dumps and independent checking.
enum class VarKind { kA, kU, kZ };
struct Variable {
  VarKind kind;
  std::string name;
  Vertex x = kNoVertex, y = kNoVertex;  // a: both; u: one of them
};
struct LinTerm {
  std::size_t var;
  double coef;
};
struct Row {
  std::string tag;  // path, u_upper, u_lower, anchor, epigraph, epigraph_b
  std::vector<LinTerm> terms;
  bool geq = false;  // terms >= rhs when true, terms <= rhs otherwise
  double rhs = 0.0;
};
struct Component {
  std::string label;
  std::vector<LinTerm> terms;
  double constant = 0.0;
};
struct ExplicitProgram {
  std::vector<Variable> vars;
  std::vector<Row> rows;
  std::vector<Component> components;  // F and B components; max is the objective
};
ExplicitProgram explicit_program(const MinMaxProgram& p);

struct SolveResult {
  double value = 0.0;
  PairSet selected;                 // C(V) as (T vertex, G vertex)
  std::vector<double> assignment;   // values of explicit_program(p).vars
  std::size_t nodes = 0;
  std::size_t decisions = 0;
};

/// Exact optimum by binary search over candidate objective values, each
/// decided by a complete depth-first search. Requires a linearized program.
SolveResult solve_exact(const MinMaxProgram& p);

/// Objective of an antichain selection (local indices), or +inf when it
/// breaks a constraint.
double evaluate_selection(const MinMaxProgram& p, const std::vector<std::pair<int, int>>& sel);

}  // namespace mti
