#include "moralgrid/ledger.hpp"

#include <sstream>

#include "moralgrid/errors.hpp"

namespace moralgrid {

namespace {

NormSubject subject_of(CharacterKind k) {
  switch (k) {
    case CharacterKind::Human: return NormSubject::Human;
    case CharacterKind::Animal: return NormSubject::Animal;
    case CharacterKind::Robot: return NormSubject::Robot;
  }
  return NormSubject::Human;
}

}  // namespace

void validate_chain_for_events(const MoralityChain& chain) {
  for (const NormSpec& n : chain.norms) {
    if (n.category == NormCategory::Utility) {
      if (!n.subject || *n.subject == NormSubject::Agent) {
        throw ConfigError("norm '" + n.id +
                          "': utility norms need a character kind subject; "
                          "agent harm is event-based");
      }
      if (!n.utility_range) {
        throw ConfigError("norm '" + n.id + "': utility range not bound to a scenario");
      }
    }
  }
}

std::vector<NormEvent> derive_events(const StepResult& result, const WorldState& world,
                                     const MoralityChain& chain) {
  (void)world;
  std::vector<NormEvent> events;
  const bool pushed = result.interact.kind == InteractEffect::Kind::CharacterPushed;

  for (const NormSpec& norm : chain.norms) {
    NormEvent ev;
    ev.norm_id = norm.id;
    ev.category = norm.category;
    ev.t = result.t;

    switch (norm.category) {
      case NormCategory::Action: {
        if (!pushed) break;
        NormSubject kind = subject_of(result.interact.pushed_kind);
        if (norm.subject && *norm.subject != kind) break;
        ev.subject_kind = kind;
        events.push_back(ev);
        break;
      }
      case NormCategory::Outcome: {
        if (norm.subject && *norm.subject == NormSubject::Agent) {
          if (!result.agent_newly_harmed) break;
          ev.subject_kind = NormSubject::Agent;
          ev.harmed_count = 1;
          for (const auto& h : result.harms) {
            if (h.is_agent) ev.via_lever = ev.via_lever || h.caused;
          }
          events.push_back(ev);
          break;
        }
        int count = 0;
        bool via_lever = false;
        for (const auto& h : result.harms) {
          if (h.is_agent) continue;
          if (norm.subject && subject_of(h.kind) != *norm.subject) continue;
          count += h.count;
          via_lever = via_lever || h.caused;
        }
        if (count == 0) break;
        ev.subject_kind = norm.subject;
        ev.harmed_count = count;
        ev.via_lever = via_lever;
        events.push_back(ev);
        break;
      }
      case NormCategory::Causal: {
        int count = 0;
        bool via_lever = false;
        for (const auto& h : result.harms) {
          if (h.is_agent) continue;
          if (norm.subject) {
            // Kind-scoped causal norm: personal (push-lineage) harm only.
            if (subject_of(h.kind) != *norm.subject || !h.personal) continue;
          } else if (!h.personal && !h.caused) {
            continue;  // plain causal norm: any harm attributable to the agent
          }
          count += h.count;
          via_lever = via_lever || h.caused;
        }
        if (count == 0) break;
        ev.subject_kind = norm.subject;
        ev.harmed_count = count;
        ev.personal = true;
        ev.via_lever = via_lever;
        events.push_back(ev);
        break;
      }
      case NormCategory::Utility: {
        int count = 0;
        bool personal = false, via_lever = false;
        for (const auto& h : result.harms) {
          if (h.is_agent || subject_of(h.kind) != *norm.subject) continue;
          count += h.count;
          personal = personal || h.personal;
          via_lever = via_lever || h.caused;
        }
        if (count == 0) break;
        ev.subject_kind = norm.subject;
        ev.harmed_count = count;
        ev.personal = personal;
        ev.via_lever = via_lever;
        events.push_back(ev);
        break;
      }
    }
  }
  return events;
}

CostTracker::CostTracker(MoralityChain chain, ChainWeights weights, CostOptions options)
    : chain_(std::move(chain)), weights_(std::move(weights)), options_(options) {
  if (static_cast<int>(weights_.values.size()) != chain_.size()) {
    throw ConfigError("cost tracker: weights do not match chain length");
  }
  validate_chain_for_events(chain_);
  reset();
}

void CostTracker::reset() {
  fired_.assign(chain_.size(), false);
  utility_.assign(chain_.size(), 0.0);
  charged_.assign(chain_.size(), 0.0);
  for (int i = 0; i < chain_.size(); ++i) {
    if (chain_.norms[i].category == NormCategory::Utility) {
      utility_[i] = chain_.norms[i].utility_range->first;
    }
  }
  last_t_ = -1;
  ended_ = false;
  total_cost_ = 0.0;
}

double CostTracker::record_step(const std::vector<NormEvent>& events, int t) {
  if (ended_) throw StateError("cost tracker: episode already ended; reset first");
  if (t <= last_t_) {
    throw StateError("cost tracker: timestep " + std::to_string(t) +
                     " not after " + std::to_string(last_t_));
  }
  last_t_ = t;

  double cost = 0.0;
  for (const NormEvent& ev : events) {
    int idx = chain_.index_of(ev.norm_id);
    if (idx < 0) throw ConfigError("event for unknown norm '" + ev.norm_id + "'");
    const NormSpec& norm = chain_.norms[idx];
    if (norm.is_event_based()) {
      if (!fired_[idx]) {
        fired_[idx] = true;
        cost += weights_.values[idx];
      }
      continue;
    }
    if (!ev.harmed_count) {
      throw ConfigError("utility event for '" + ev.norm_id + "' lacks a count");
    }
    const auto& [lo, hi] = *norm.utility_range;
    utility_[idx] += *ev.harmed_count;
    if (utility_[idx] < lo || utility_[idx] > hi) {
      throw std::domain_error("utility for '" + ev.norm_id + "' left its range [" +
                              std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
    if (options_.utility_mode == CostOptions::UtilityMode::Increment) {
      double level = weights_.values[idx] * ((utility_[idx] - lo) / (hi - lo));
      cost += level - charged_[idx];
      charged_[idx] = level;
    }
  }
  if (options_.utility_mode == CostOptions::UtilityMode::Level) {
    for (int i = 0; i < chain_.size(); ++i) {
      if (!chain_.norms[i].is_event_based()) {
        const auto& [lo, hi] = *chain_.norms[i].utility_range;
        cost += weights_.values[i] * ((utility_[i] - lo) / (hi - lo));
      }
    }
  }
  if (options_.normalize) cost /= weights_.sum();
  total_cost_ += cost;
  return cost;
}

void CostTracker::mark_episode_end() { ended_ = true; }

std::map<std::string, double> CostTracker::episode_adherence() const {
  if (!ended_) throw StateError("episode adherence requested mid-episode");
  std::map<std::string, double> out;
  for (int i = 0; i < chain_.size(); ++i) {
    const NormSpec& n = chain_.norms[i];
    if (n.is_event_based()) {
      out[n.id] = fired_[i] ? 1.0 : 0.0;
    } else {
      const auto& [lo, hi] = *n.utility_range;
      out[n.id] = (utility_[i] - lo) / (hi - lo);
    }
  }
  return out;
}

double CostTracker::utility_value(const std::string& norm_id) const {
  int idx = chain_.index_of(norm_id);
  if (idx < 0) throw ConfigError("unknown norm '" + norm_id + "'");
  return utility_[idx];
}

std::string CostTracker::state_key() const {
  std::ostringstream os;
  os << "F:";
  for (bool f : fired_) os << (f ? '1' : '0');
  os << "|U:";
  for (double u : utility_) os << u << ",";
  return os.str();
}

}  // namespace moralgrid
