#include "moralgrid/morality.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "moralgrid/errors.hpp"

namespace moralgrid {

// --- Rational ---

namespace {

Rational::Int int_gcd(Rational::Int a, Rational::Int b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    Rational::Int t = a % b;
    a = b;
    b = t;
  }
  return a;
}

}  // namespace

Rational::Rational(Int n, Int d) : num_(n), den_(d) {
  if (den_ == 0) throw std::domain_error("rational with zero denominator");
  normalize();
}

void Rational::normalize() {
  if (den_ < 0) {
    num_ = -num_;
    den_ = -den_;
  }
  Int g = int_gcd(num_, den_);
  if (g > 1) {
    num_ /= g;
    den_ /= g;
  }
}

Rational::Int Rational::checked_mul(Int a, Int b) {
  Int out;
  if (__builtin_mul_overflow(a, b, &out)) throw Overflow();
  return out;
}

Rational::Int Rational::checked_add(Int a, Int b) {
  Int out;
  if (__builtin_add_overflow(a, b, &out)) throw Overflow();
  return out;
}

Rational Rational::operator+(const Rational& o) const {
  return Rational(checked_add(checked_mul(num_, o.den_), checked_mul(o.num_, den_)),
                  checked_mul(den_, o.den_));
}

Rational Rational::operator-(const Rational& o) const {
  return Rational(checked_add(checked_mul(num_, o.den_), -checked_mul(o.num_, den_)),
                  checked_mul(den_, o.den_));
}

Rational Rational::operator*(const Rational& o) const {
  return Rational(checked_mul(num_, o.num_), checked_mul(den_, o.den_));
}

Rational Rational::operator/(const Rational& o) const {
  if (o.num_ == 0) throw std::domain_error("rational division by zero");
  return Rational(checked_mul(num_, o.den_), checked_mul(den_, o.num_));
}

bool Rational::operator<(const Rational& o) const {
  return checked_mul(num_, o.den_) < checked_mul(o.num_, den_);
}

double Rational::to_double() const {
  return static_cast<double>(num_) / static_cast<double>(den_);
}

std::string Rational::to_string() const {
  auto int_str = [](Int v) {
    if (v == 0) return std::string("0");
    bool neg = v < 0;
    if (neg) v = -v;
    std::string s;
    while (v > 0) {
      s.insert(s.begin(), static_cast<char>('0' + static_cast<int>(v % 10)));
      v /= 10;
    }
    return neg ? "-" + s : s;
  };
  if (den_ == 1) return int_str(num_);
  return int_str(num_) + "/" + int_str(den_);
}

Rational Rational::from_decimal(const std::string& text) {
  std::string s = text;
  bool neg = false;
  size_t i = 0;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
    neg = s[i] == '-';
    ++i;
  }
  Int num = 0;
  Int den = 1;
  bool seen_digit = false, seen_dot = false;
  for (; i < s.size(); ++i) {
    char c = s[i];
    if (c == '.') {
      if (seen_dot) throw std::domain_error("bad decimal '" + text + "'");
      seen_dot = true;
    } else if (c >= '0' && c <= '9') {
      num = checked_mul(num, 10);
      num = checked_add(num, c - '0');
      if (seen_dot) den = checked_mul(den, 10);
      seen_digit = true;
    } else {
      throw std::domain_error("bad decimal '" + text + "'");
    }
  }
  if (!seen_digit) throw std::domain_error("bad decimal '" + text + "'");
  return Rational(neg ? -num : num, den);
}

// --- Enum names ---

const char* to_string(Modality m) {
  return m == Modality::Prescribed ? "prescribed" : "prohibited";
}

const char* to_string(NormCategory c) {
  switch (c) {
    case NormCategory::Action: return "action";
    case NormCategory::Outcome: return "outcome";
    case NormCategory::Causal: return "causal";
    case NormCategory::Utility: return "utility";
  }
  return "?";
}

const char* to_string(NormSubject s) {
  switch (s) {
    case NormSubject::Human: return "human";
    case NormSubject::Animal: return "animal";
    case NormSubject::Robot: return "robot";
    case NormSubject::Agent: return "agent";
  }
  return "?";
}

Modality modality_from_string(const std::string& s) {
  if (s == "prescribed") return Modality::Prescribed;
  if (s == "prohibited") return Modality::Prohibited;
  throw ConfigError("unknown modality '" + s + "'");
}

NormCategory category_from_string(const std::string& s) {
  if (s == "action") return NormCategory::Action;
  if (s == "outcome") return NormCategory::Outcome;
  if (s == "causal") return NormCategory::Causal;
  if (s == "utility") return NormCategory::Utility;
  throw ConfigError("unknown norm category '" + s + "'");
}

NormSubject subject_from_string(const std::string& s) {
  if (s == "human") return NormSubject::Human;
  if (s == "animal") return NormSubject::Animal;
  if (s == "robot") return NormSubject::Robot;
  if (s == "agent") return NormSubject::Agent;
  throw ConfigError("unknown norm subject '" + s + "'");
}

// --- Chain construction and the metric ---

int MoralityChain::index_of(const std::string& id) const {
  for (int i = 0; i < size(); ++i) {
    if (norms[i].id == id) return i;
  }
  return -1;
}

double morality_function(const NormSpec& norm, const AdherenceEstimate& adherence) {
  if (!(adherence.rho >= 0.0 && adherence.rho <= 1.0)) {
    throw std::domain_error("adherence for norm '" + norm.id + "' outside [0,1]");
  }
  return norm.modality == Modality::Prescribed ? adherence.rho : 1.0 - adherence.rho;
}

MoralityChain build_chain(const std::string& name, std::vector<NormSpec> norms) {
  if (norms.empty()) throw ConfigError("chain '" + name + "' has no norms");
  std::stable_sort(norms.begin(), norms.end(),
                   [](const NormSpec& a, const NormSpec& b) { return a.force > b.force; });
  for (size_t i = 1; i < norms.size(); ++i) {
    if (norms[i].force == norms[i - 1].force) {
      throw ConfigError("chain '" + name + "': norms '" + norms[i - 1].id + "' and '" +
                        norms[i].id + "' share force " + std::to_string(norms[i].force));
    }
  }
  for (const NormSpec& n : norms) {
    if (n.category == NormCategory::Utility) {
      if (n.utility_range && !(n.utility_range->first < n.utility_range->second)) {
        throw ConfigError("norm '" + n.id + "': utility range must satisfy min < max");
      }
    } else if (n.utility_range) {
      throw ConfigError("norm '" + n.id + "': only utility norms carry a range");
    }
  }
  return MoralityChain{name, std::move(norms)};
}

double ChainWeights::sum() const {
  double s = 0.0;
  for (double w : values) s += w;
  return s;
}

ChainWeights compute_weights(int chain_length, const Rational& beta) {
  if (chain_length < 1) throw std::domain_error("chain length must be >= 1");
  if (!(Rational(0) < beta && beta <= Rational(1))) {
    throw std::domain_error("beta must lie in (0, 1]");
  }
  ChainWeights out;
  out.beta = beta;
  try {
    std::vector<Rational> w(chain_length, Rational(1));
    Rational tail_sum(1);  // sum of w_j for j >= i, with w_k = 1
    for (int i = chain_length - 1; i >= 1; --i) {
      w[i - 1] = (tail_sum + Rational(1)) / beta;
      tail_sum = tail_sum + w[i - 1];
    }
    out.exact = w;
    out.values.reserve(w.size());
    for (const Rational& r : w) out.values.push_back(r.to_double());
  } catch (const Rational::Overflow&) {
    // Long-double fallback for degenerate beta / very long chains.
    std::vector<long double> w(chain_length, 1.0L);
    long double b = static_cast<long double>(beta.to_double());
    long double tail_sum = 1.0L;
    for (int i = chain_length - 1; i >= 1; --i) {
      w[i - 1] = (tail_sum + 1.0L) / b;
      tail_sum += w[i - 1];
    }
    out.values.assign(w.begin(), w.end());
  }
  return out;
}

ChainWeights compute_weights(const MoralityChain& chain, const Rational& beta) {
  return compute_weights(chain.size(), beta);
}

double morality_metric(const MoralityChain& chain, const ChainWeights& weights,
                       const std::vector<double>& per_norm_m,
                       const std::vector<std::string>* subset) {
  const int k = chain.size();
  if (static_cast<int>(per_norm_m.size()) != k) {
    throw std::domain_error("expected " + std::to_string(k) + " morality values, got " +
                            std::to_string(per_norm_m.size()));
  }
  if (static_cast<int>(weights.values.size()) != k) {
    throw std::domain_error("weight vector does not match chain length");
  }
  for (double m : per_norm_m) {
    if (!(m >= 0.0 && m <= 1.0)) throw std::domain_error("morality value outside [0,1]");
  }
  std::vector<bool> selected(k, true);
  if (subset) {
    selected.assign(k, false);
    for (const std::string& id : *subset) {
      int idx = chain.index_of(id);
      if (idx < 0) throw std::domain_error("subset norm '" + id + "' not in chain");
      selected[idx] = true;
    }
  }
  double num = 0.0, den = 0.0;
  for (int i = 0; i < k; ++i) {
    if (!selected[i]) continue;
    num += weights.values[i] * per_norm_m[i];
    den += weights.values[i];
  }
  if (den == 0.0) throw std::domain_error("empty norm subset");
  return num / den;
}

}  // namespace moralgrid
