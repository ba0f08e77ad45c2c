#pragma once

#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "eds/exterior.hpp"
#include "eds/linalg.hpp"

namespace eds {

struct NotLinear : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RetryExhausted : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr std::uint64_t kDefaultSeed = 0xC0FFEE;

// Exact rational with numerator in [-999,999]\{0} and denominator in [1,50].
Q random_rational(std::mt19937_64& rng);
std::map<int, Q> random_point(const std::set<int>& syms, std::mt19937_64& rng);
std::set<int> symbols_of(const Form& f);

struct LinearPfaffianSystem {
  CoframedSpace space;
  std::vector<Form> gens;    // theta^a
  std::vector<Form> indep;   // omega^i
  std::vector<Form> compl_;  // pi^eps
  std::vector<std::string> gen_names, indep_names, compl_names;

  int s0() const { return static_cast<int>(gens.size()); }
  int k() const { return static_cast<int>(indep.size()); }
  int npi() const { return static_cast<int>(compl_.size()); }
};

using Tensor3 = std::vector<std::vector<std::vector<RatExpr>>>;

struct Decomposition {
  // d theta^a = A[a][eps][i] pi^eps ^ omega^i + sum_{i<j} T[a][i][j] omega^i ^ omega^j  mod gens
  Tensor3 A;
  Tensor3 T;  // antisymmetric in (i, j)
  Mat inverse;  // coframe element j = sum_k inverse[j][k] * (gens, indep, compl)[k]
  bool torsion_free() const;
};

// Full rank of {gens, indep, compl} at three random points; throws otherwise.
void check_adapted(const LinearPfaffianSystem& sys, std::uint64_t seed = kDefaultSeed);
Decomposition decompose(const LinearPfaffianSystem& sys);
// Re-expansion: d theta^a - (A pi^omega + T omega^omega) wedged with all gens vanishes.
// Exact symbolic check for dim <= 12, exact check at `points` random points otherwise.
bool verify_decomposition(const LinearPfaffianSystem& sys, const Decomposition& dec,
                          std::uint64_t seed = kDefaultSeed, int points = 2);

struct AbsorbResult {
  bool absorbed = false;
  LinearPfaffianSystem system;                  // complement replaced by pi - x omega
  std::vector<std::vector<RatExpr>> shift;      // x[eps][j]
  int witness_a = -1, witness_i = -1, witness_j = -1;
  RatExpr witness;                              // an unabsorbable torsion coefficient
};
AbsorbResult absorb(const LinearPfaffianSystem& sys, const Decomposition& dec);

struct CharacterResult {
  std::vector<int> s;
  std::vector<std::vector<int>> trial_s;
  std::vector<std::uint64_t> seeds;
  bool unstable = false;
};
// Reduced characters from rank profiles under random flags and random specializations.
CharacterResult characters(const Tensor3& A, int trials = 5, std::uint64_t seed = kDefaultSeed,
                           bool symbolic = false);

// Rank increments along the given independence basis itself (no flag search).
std::vector<int> unflagged_characters(const Tensor3& A, std::uint64_t seed = kDefaultSeed);

struct IntegralElements {
  int dim = 0;
  int unknowns = 0;
  std::vector<int> ranks;  // rank at each random point
  bool nongeneric = false;
  bool symbolic = false;
  std::vector<int> unknown_syms;  // p^eps_i, index eps*k + i
  std::vector<std::pair<int, RatExpr>> relations;
  std::vector<int> free_syms;
};
IntegralElements integral_elements(const LinearPfaffianSystem& sys, const Decomposition& dec,
                                   std::uint64_t seed = kDefaultSeed, bool symbolic = false,
                                   const std::string& prefix = "p");

struct InvolutivityReport {
  int s0 = 0;
  std::vector<int> characters;
  int integral_dim = 0;
  int cartan_sum = 0;
  bool cartan_ok = false;
  bool torsion_absorbed = false;
  bool torsion_was_zero = false;
  std::vector<std::vector<RatExpr>> shift;
  std::string torsion_witness;
  std::pair<int, int> generality{0, 0};
  std::vector<std::vector<int>> trials;
  std::vector<std::uint64_t> seeds;
  bool unstable = false;
  bool nongeneric = false;
  Decomposition decomposition;
  IntegralElements integral;
  LinearPfaffianSystem absorbed;
};

InvolutivityReport cartan_test(const LinearPfaffianSystem& sys, int trials = 5,
                               std::uint64_t seed = kDefaultSeed, bool symbolic = false);

// Adjoins the free integral-element unknowns as coordinates and adds pi - p omega.
LinearPfaffianSystem prolong_step(const LinearPfaffianSystem& sys, const IntegralElements& ie);

std::string unknown_name(const std::string& prefix, int eps, int i);

}  // namespace eds
