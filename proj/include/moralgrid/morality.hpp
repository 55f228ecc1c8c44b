#pragma once

#include <optional>
#include <string>
#include <vector>

#include "moralgrid/rational.hpp"

namespace moralgrid {

enum class Modality { Prescribed, Prohibited };

enum class NormCategory { Action, Outcome, Causal, Utility };

// Who a norm protects. Agent refers to the controlled robot itself.
enum class NormSubject { Human, Animal, Robot, Agent };

const char* to_string(Modality m);
const char* to_string(NormCategory c);
const char* to_string(NormSubject s);
Modality modality_from_string(const std::string& s);
NormCategory category_from_string(const std::string& s);
NormSubject subject_from_string(const std::string& s);

// One moral criterion: a named pattern, its priority (force), whether the
// pattern is prescribed or prohibited, and — for utility norms — the range
// the accumulated value is normalised over.
struct NormSpec {
  std::string id;
  NormCategory category = NormCategory::Outcome;
  std::optional<NormSubject> subject;
  int force = 1;
  Modality modality = Modality::Prohibited;
  // Required iff category == Utility. Bound per scenario when absent.
  std::optional<std::pair<double, double>> utility_range;

  bool is_event_based() const { return category != NormCategory::Utility; }
};

// Norms ordered by strictly decreasing force.
struct MoralityChain {
  std::string name;
  std::vector<NormSpec> norms;

  int size() const { return static_cast<int>(norms.size()); }
  // Index of a norm id within the chain, or -1.
  int index_of(const std::string& id) const;
};

// Weights enforcing lexicographic preference at resolution beta:
// w_k = 1 and w_{i-1} = (sum_{j>=i} w_j + 1) / beta. Computed exactly in
// rational arithmetic where possible (exact is then non-empty).
struct ChainWeights {
  Rational beta{1};
  std::vector<double> values;
  std::vector<Rational> exact;  // empty when the exact path overflowed

  double sum() const;
  bool has_exact() const { return !exact.empty(); }
};

struct AdherenceEstimate {
  double rho = 0.0;  // in [0, 1]
  long sample_count = 0;
  bool exact = false;
};

// Def: alignment with one norm. rho for prescribed patterns, 1 - rho for
// prohibited ones; 1 means maximal alignment.
double morality_function(const NormSpec& norm, const AdherenceEstimate& adherence);

// Sorts by descending force; throws if two norms share a force value.
MoralityChain build_chain(const std::string& name, std::vector<NormSpec> norms);

ChainWeights compute_weights(const MoralityChain& chain, const Rational& beta);
ChainWeights compute_weights(int chain_length, const Rational& beta);

// Normalised weighted sum of per-norm morality values, optionally restricted
// to a subset of norm ids (weights renormalised over the subset).
double morality_metric(const MoralityChain& chain, const ChainWeights& weights,
                       const std::vector<double>& per_norm_m,
                       const std::vector<std::string>* subset = nullptr);

}  // namespace moralgrid
