#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "rothaff/approx.hpp"
#include "rothaff/disc_example.hpp"

namespace rothaff {

/// Finite measure space with a partition into cells C_0..C_{L-1}. Places are
/// addressed by index; ids are the external labels.
struct DiscretizedS {
  std::vector<long> ids;
  std::vector<double> weights;  // > 0
  std::vector<int> cell_of;     // in [0, num_cells)
  int num_cells = 0;

  std::size_t size() const { return weights.size(); }
  double measure() const;
  double cell_measure(int l) const;
  std::vector<std::vector<int>> cell_members() const;
  int index_of(long id) const;  // throws for unknown ids
  void validate() const;
};

/// lambda(xi, j, place) >= 0 and heights h(xi) >= h0 > 0.
struct LambdaTable {
  std::vector<long> xi_ids;
  int q = 0;
  std::vector<double> heights;
  // values[(xi * q + j) * places + v]
  std::vector<double> values;
  std::size_t places = 0;

  std::size_t num_xi() const { return heights.size(); }
  double at(std::size_t xi, int j, std::size_t v) const { return values[(xi * q + j) * places + v]; }
  double& at(std::size_t xi, int j, std::size_t v) { return values[(xi * q + j) * places + v]; }
  void validate() const;
};

// Places file: lines "place_id weight cell"; '#' comments.
DiscretizedS parse_discretized(const std::string& text);
std::string serialize_discretized(const DiscretizedS& s);
// Values file: lines "xi_id j place_id value" with j in 1..q; heights file:
// lines "xi_id height". Missing values are 0.
LambdaTable parse_lambda_table(const std::string& values, const std::string& heights, const DiscretizedS& s);
std::string serialize_lambda_values(const LambdaTable& t, const DiscretizedS& s);
std::string serialize_heights(const LambdaTable& t);

// inf{t : mu({v in C_l : lambda >= t h}) <= mu(C_l)/2}. Throws for an empty cell.
double cell_median(const LambdaTable& t, const DiscretizedS& s, std::size_t xi, int j, int l);

// Exact measures of {lambda <= m h} and {lambda >= m h} inside C_l, and mu(C_l).
struct MedianSets {
  BigRat below, above, cell;
};
MedianSets median_set_measures(const LambdaTable& t, const DiscretizedS& s, std::size_t xi,
                                              int j, int l, double m);

// Place-index sets per xi.
using ExcludedSets = std::vector<std::vector<int>>;

struct ReduceParams {
  double eps10 = 0.1;
  double eps11 = 0.1;
  double c9 = 0;
};

struct ReduceResult {
  std::vector<std::size_t> kept;         // Xi', ascending xi index
  ExcludedSets excluded;                 // T_xi for every xi (empty outside Xi')
  std::vector<std::vector<long>> bucket; // bucket vector per xi over (cell, j)
  std::vector<long> chosen_bucket;
  std::vector<std::vector<double>> medians;  // m'_{xi,(l,j)}
};

// Checks the integral bound int lambda <= h + c9, mu(T0) <= eps11/2 and the
// per-cell oscillation bound eps10 (h + c9) off T0; throws on failure.
void check_reduce_hypotheses(const LambdaTable& t, const DiscretizedS& s, const ExcludedSets& t0,
                             const ReduceParams& p);

ReduceResult pigeonhole_reduce(const LambdaTable& t, const DiscretizedS& s, const ExcludedSets& t0,
                               const ReduceParams& p);

struct PairCheck {
  bool holds = true;
  double worst_margin = 0;  // max of lhs - rhs over all checks
  std::int64_t checks = 0;
};

// Exhaustive pairwise check of the approximation inequality on Xi'.
PairCheck check_pigeonhole(const LambdaTable& t, const DiscretizedS& s, const ReduceResult& r,
                           const ReduceParams& p);

struct SelectParams {
  int n = 1;
  double r_min = 2;
  double eps_pp = 1;  // epsilon''
  double c_pp = 0;    // c''
  double eps5 = 1;    // measure budget for T
};

struct SelectResult {
  std::vector<std::size_t> chain;  // xi_1..xi_n as table indices
  std::vector<int> excluded;       // T as place indices, ascending
  std::vector<int> J;              // 0-based j per place, -1 on T
  std::vector<double> lhs;         // left side of the selection inequality per i
  double measure_T = 0;
  bool holds = false;
};

// Longest chain with ratio r_min among Xi' built greedily from the top.
std::vector<std::size_t> best_chain(const LambdaTable& t, const std::vector<std::size_t>& pool, double r_min);

SelectResult simultaneous_select(const LambdaTable& t, const DiscretizedS& s, const ReduceResult& r,
                                 const SelectParams& p);

// Recomputes the selection inequalities and the ratio chain from scratch.
bool check_selection(const LambdaTable& t, const DiscretizedS& s, const SelectResult& sel,
                     const SelectParams& p, double slack = 1e-9);

// Upper bound q e8 (1 + c9/h1) + (4 + 2 c9/h1) e10 mu(S) + c''/h1 with e8
// realized as the largest int_T lambda/(h + c9) along the chain.
double selection_bound(const LambdaTable& t, const DiscretizedS& s, const SelectResult& sel,
                       const ReduceParams& rp, const SelectParams& sp);

std::string reduce_to_json(const LambdaTable& t, const DiscretizedS& s, const ReduceResult& r,
                           const SelectResult* sel);

/// Random instance satisfying the reduction hypotheses with its own T0.
struct SyntheticInstance {
  DiscretizedS space;
  LambdaTable table;
  ExcludedSets t0;
  ReduceParams params;
};

SyntheticInstance make_synthetic_instance(std::uint64_t seed, int places = 200, int cells = 20, int xis = 40,
                                          int q = 2);

/// Evaluation of sum_j int_{T_j} min_i lambda_ij / h_i d mu against
/// 2 + eps' + c'/h_1, plus the ratio chain h_i / h_{i-1} >= r_min.
struct PartsCheck {
  bool holds_ratio = false;
  bool holds_integral = false;
  double lhs = 0;
  double rhs = 0;
  double error_bound = 0;
};

// lambda(i, j, place, cell index within T_j or -1 for finite places).
using PartsIntegrand = std::function<double(int, int, const Place&, int)>;

PartsCheck check_parts(const std::vector<double>& heights, const std::vector<SetS>& parts,
                            const PartsIntegrand& lambda, double eps_prime, double c_prime, double r_min,
                            Polarization pol, const QuadOptions& opts = {});

// lambda_ij = -log^- ||xi_i - alpha_j||_v.
PartsCheck check_parts(const std::vector<RatFunc>& xis, const std::vector<SetS>& parts,
                            const DivisorSpec& d, double eps_prime, double c_prime, double r_min,
                            Polarization pol, const QuadOptions& opts = {});

// Single-approximant instance built from one disc S_N (N >= 2): n = q = 1,
// T_1 = S_N, lambda = -log^-|N - v + beta_v|, h_1 = log N, eps' = 1, c' = 0.
PartsCheck check_parts_disc(const DiscPart& part, const QuadOptions& opts = {});

}  // namespace rothaff
